//! Independent dense multiplier oracle, shared by the integration tests.
//!
//! The oracle shares nothing with the engine beyond permutation arithmetic:
//! it enumerates the group by breadth-first search, builds the full
//! multiplication table, writes down the coboundary and cocycle conditions
//! on all pairs and triples of group elements as dense matrices over Z/p^e
//! for each prime power dividing the order, and reads the quotient
//! structure off a dense Smith reduction — kernel of the cocycle map,
//! modulo coboundaries and modulo the carry cocycles of the lifted
//! homomorphisms (the part of H^2 with cyclic coefficients that dies in
//! H^2 with coefficients in the rationals mod one).

#![allow(dead_code)]

use bogomult::cohomology::schur_multiplier;
use bogomult::PermGroup;

// ---------------------------------------------------------------------------
// Dense Smith reduction over Z/p^e with domain-basis tracking.
// ---------------------------------------------------------------------------

fn val_p(p: u64, e: u32, x: u64) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    let mut x = x;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn pow_p(p: u64, k: u32) -> u64 {
    p.pow(k)
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // Extended Euclid; `a` must be a unit mod q.
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let div = r0 / r1;
        (r0, r1) = (r1, r0 - div * r1);
        (s0, s1) = (s1, s0 - div * s1);
    }
    assert_eq!(r0, 1, "not a unit");
    (s0.rem_euclid(q as i128)) as u64
}

/// Outcome of reducing a rows x cols matrix A over Z/p^e: diagonal entries
/// d_t = p^{w_t} (0 encodes p^e) with transforms such that the kernel and
/// coordinate maps below are exact.
struct PSmith {
    p: u64,
    e: u32,
    q: u64,
    cols: usize,
    /// p-valuation of the t-th diagonal entry; length = number of pivots.
    pivots: Vec<u32>,
    /// Domain change of basis: x = V z.
    v: Vec<Vec<u64>>,
    /// Its inverse: z-space coordinates of a vector are Vinv x.
    vinv: Vec<Vec<u64>>,
}

fn psmith(p: u64, e: u32, mut a: Vec<Vec<u64>>, cols: usize) -> PSmith {
    let q = pow_p(p, e);
    let rows = a.len();
    for row in &a {
        assert_eq!(row.len(), cols);
    }
    let mut v: Vec<Vec<u64>> = (0..cols)
        .map(|i| (0..cols).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut vinv = v.clone();
    let mut pivots = Vec::new();
    let steps = rows.min(cols);
    for t in 0..steps {
        // Entry of smallest p-valuation in the remaining submatrix; a unit
        // entry cannot be beaten, so stop scanning at valuation zero.
        let mut best = (e, t, t);
        'scan: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let w = val_p(p, e, x);
                if w < best.0 {
                    best = (w, i, j);
                    if w == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let (w, bi, bj) = best;
        if w == e {
            break;
        }
        a.swap(t, bi);
        if bj != t {
            for row in &mut a {
                row.swap(t, bj);
            }
            // V columns swap; Vinv rows swap.
            for row in &mut v {
                row.swap(t, bj);
            }
            vinv.swap(t, bj);
        }
        // Normalize the pivot to exactly p^w.
        let pw = pow_p(p, w);
        let unit = a[t][t] / pw;
        let uinv = inv_mod(unit % q, q);
        for x in &mut a[t] {
            *x = (*x as u128 * uinv as u128 % q as u128) as u64;
        }
        // Clear the pivot column in every other row.
        for i in 0..rows {
            if i == t || a[i][t] == 0 {
                continue;
            }
            let f = a[i][t] / pw;
            for j in 0..cols {
                let sub = (f as u128 * a[t][j] as u128 % q as u128) as u64;
                a[i][j] = (a[i][j] + q - sub) % q;
            }
        }
        // Clear the pivot row right of the pivot with column operations.
        for j in t + 1..cols {
            if a[t][j] == 0 {
                continue;
            }
            let f = a[t][j] / pw;
            for row in a.iter_mut() {
                let sub = (f as u128 * row[t] as u128 % q as u128) as u64;
                row[j] = (row[j] + q - sub) % q;
            }
            for row in v.iter_mut() {
                let sub = (f as u128 * row[t] as u128 % q as u128) as u64;
                row[j] = (row[j] + q - sub) % q;
            }
            let add: Vec<u64> = vinv[j]
                .iter()
                .map(|&x| (f as u128 * x as u128 % q as u128) as u64)
                .collect();
            for (x, y) in vinv[t].iter_mut().zip(add) {
                *x = (*x + y) % q;
            }
        }
        pivots.push(w);
    }
    PSmith {
        p,
        e,
        q,
        cols,
        pivots,
        v,
        vinv,
    }
}

impl PSmith {
    /// Generators of {x : Ax = 0 mod p^e} with their additive orders, as
    /// (vector, order-exponent) pairs; order = p^exponent.
    fn kernel(&self) -> Vec<(Vec<u64>, u32)> {
        let mut gens = Vec::new();
        for (t, &w) in self.pivots.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let scale = pow_p(self.p, self.e - w);
            let col: Vec<u64> = self
                .v
                .iter()
                .map(|row| (row[t] as u128 * scale as u128 % self.q as u128) as u64)
                .collect();
            gens.push((col, w));
        }
        for t in self.pivots.len()..self.cols {
            let col: Vec<u64> = self.v.iter().map(|row| row[t]).collect();
            gens.push((col, self.e));
        }
        gens
    }

    /// Coordinates of `x` in the kernel generator basis; panics when x is
    /// not in the kernel (the oracle only ever asks for kernel members).
    fn kernel_coords(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        let y: Vec<u64> = self
            .vinv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % self.q as u128)
                    as u64
            })
            .collect();
        let mut coords = Vec::new();
        for (t, &w) in self.pivots.iter().enumerate() {
            let need = pow_p(self.p, self.e - w);
            assert_eq!(y[t] % need, 0, "vector outside the kernel lattice");
            if w == 0 {
                continue;
            }
            coords.push(y[t] / need);
        }
        for t in self.pivots.len()..self.cols {
            coords.push(y[t]);
        }
        coords
    }
}

// ---------------------------------------------------------------------------
// The oracle proper.
// ---------------------------------------------------------------------------

/// Full multiplication table from scratch: breadth-first enumeration over
/// the generators, identity first.
fn dense_table(g: &PermGroup) -> Vec<Vec<usize>> {
    let mut elems = vec![g.identity()];
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for gen in g.generators() {
            let y = x.mul(gen);
            if !elems.contains(&y) {
                elems.push(y.clone());
                frontier.push(y);
            }
        }
    }
    let n = elems.len();
    let index = |p: &bogomult::Perm| elems.iter().position(|e| e == p).unwrap();
    let mut table = vec![vec![0usize; n]; n];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            table[i][j] = index(&a.mul(b));
        }
    }
    table
}

fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime-power decomposition of the multiplier of `g`, computed densely.
pub fn oracle_multiplier_primary(g: &PermGroup) -> Vec<u64> {
    let table = dense_table(g);
    let n = table.len();
    let pairs = n * n;
    let pair = |a: usize, b: usize| a * n + b;
    let mut primary = Vec::new();
    for (p, e) in trial_division(n as u64) {
        let q = pow_p(p, e);
        // Cocycle condition on every triple.
        let mut rows = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut row = vec![0u64; pairs];
                    let mut add = |idx: usize, sign: bool| {
                        row[idx] = (row[idx] + if sign { 1 } else { q - 1 }) % q;
                    };
                    add(pair(b, c), true);
                    add(pair(table[a][b], c), false);
                    add(pair(a, table[b][c]), true);
                    add(pair(a, b), false);
                    rows.push(row);
                }
            }
        }
        let smith = psmith(p, e, rows, pairs);
        let kernel = smith.kernel();

        // Coboundaries of the delta-function basis of 1-cochains (the
        // identity's delta-function included: the complex is unnormalized).
        let mut relations: Vec<Vec<u64>> = Vec::new();
        for x in 0..n {
            let mut db = vec![0u64; pairs];
            for a in 0..n {
                for b in 0..n {
                    let mut vbl = 0u64;
                    if b == x {
                        vbl += 1;
                    }
                    if a == x {
                        vbl += 1;
                    }
                    if table[a][b] == x {
                        vbl += q - 1;
                    }
                    db[pair(a, b)] = vbl % q;
                }
            }
            relations.push(db);
        }

        // Homomorphisms into Z/q: kernel of the pair condition on values.
        let mut hom_rows = Vec::with_capacity(pairs);
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![0u64; n];
                row[a] = (row[a] + 1) % q;
                row[b] = (row[b] + 1) % q;
                row[table[a][b]] = (row[table[a][b]] + q - 1) % q;
                hom_rows.push(row);
            }
        }
        let hom_smith = psmith(p, e, hom_rows, n);
        for (f, _) in hom_smith.kernel() {
            // Carry cocycle of the lift of f through Z/q^2: the sum
            // f(a) + f(b) - f(ab) over the integers is 0 or q.
            let mut carry = vec![0u64; pairs];
            for a in 0..n {
                for b in 0..n {
                    let s = f[a] + f[b];
                    let t = f[table[a][b]];
                    assert_eq!((s + q - t) % q, 0, "not a homomorphism");
                    carry[pair(a, b)] = if s >= t { (s - t) / q } else { q - (t - s) / q } % q;
                }
            }
            relations.push(carry);
        }

        // Structure of kernel / <relations>: generators with orders p^{w},
        // divided by the relation columns.
        let s = kernel.len();
        if s == 0 {
            continue;
        }
        let mut quot = vec![vec![0u64; s + relations.len()]; s];
        for (i, (_, w)) in kernel.iter().enumerate() {
            quot[i][i] = pow_p(p, *w);
        }
        for (k, rel) in relations.iter().enumerate() {
            let coords = smith.kernel_coords(rel);
            assert_eq!(coords.len(), s);
            for i in 0..s {
                quot[i][s + k] = coords[i];
            }
        }
        let cols = s + relations.len();
        let qsmith = psmith(p, e, quot, cols);
        for t in 0..s {
            let w = qsmith.pivots.get(t).copied().unwrap_or(e);
            if w >= 1 {
                primary.push(pow_p(p, w));
            }
        }
    }
    primary.sort_unstable();
    primary
}

/// Invariant factors (ascending divisibility chain) from prime powers.
pub fn invariant_factors_from_primary(primary: &[u64]) -> Vec<u64> {
    let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
    for &pk in primary {
        let p = trial_division(pk)[0].0;
        match by_prime.iter_mut().find(|(pp, _)| *pp == p) {
            Some((_, v)) => v.push(pk),
            None => by_prime.push((p, vec![pk])),
        }
    }
    let mut slots = 0;
    for (_, v) in &mut by_prime {
        v.sort_unstable_by(|a, b| b.cmp(a));
        slots = slots.max(v.len());
    }
    let mut factors = Vec::new();
    for i in 0..slots {
        let mut f = 1;
        for (_, v) in &by_prime {
            f *= v.get(i).copied().unwrap_or(1);
        }
        factors.push(f);
    }
    factors.reverse();
    factors
}

/// The oracle's answer as invariant factors.
pub fn oracle_invariant_factors(g: &PermGroup) -> Vec<u64> {
    invariant_factors_from_primary(&oracle_multiplier_primary(g))
}

pub fn engine_invariant_factors(g: &PermGroup) -> Vec<u64> {
    schur_multiplier(g)
        .expect("engine multiplier")
        .presentation()
        .invariant_factors()
        .to_vec()
}

/// Known multipliers for every suite entry, as invariant factors.
pub fn expected(name: &str) -> Vec<u64> {
    match name {
        // Cyclic groups have trivial multipliers.
        "C1" | "C2" | "C3" | "C4" | "C5" | "C6" | "C7" | "C8" | "C9" | "C12" | "C16" => vec![],
        "C2xC2" => vec![2],
        "E(2,3)" => vec![2, 2, 2],
        "E(2,4)" => vec![2, 2, 2, 2, 2, 2],
        "C4xC2" => vec![2],
        "C4xC4" => vec![4],
        "C8xC2" => vec![2],
        "C6xC2" => vec![2],
        "E(3,2)" => vec![3],
        "S3" => vec![],
        "D4" => vec![2],
        "D5" => vec![],
        "D6" => vec![2],
        "D7" => vec![],
        "D8" => vec![2],
        "Q8" => vec![],
        "A4" => vec![2],
        "D4xC2" => vec![2, 2, 2],
        "Q8xC2" => vec![2, 2],
        other => panic!("no frozen value for {other}"),
    }
}
