//! Exact linear algebra modulo a prime power, plus the streaming row-echelon
//! accumulator used by the cohomology solver.
//!
//! Residues modulo p^e form a local ring: every nonzero element is a unit
//! times a power of p. Elimination therefore pivots on entries of minimal
//! p-valuation and divides exactly by the pivot's p-power, which is sound in
//! the presence of zero divisors, unlike naive Gaussian elimination.

/// Prime factorization by trial division; moduli here stay below 2^31.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn pow_u64(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("prime power fits in u64")
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

/// Fast reduction of products modulo a fixed q < 2^31, avoiding the division
/// unit in the elimination hot loop: a bit mask when q is a power of two,
/// Barrett multiply-shift otherwise.
#[derive(Clone, Copy)]
pub enum Reducer {
    Mask(u64),
    Barrett { q: u64, r: u64 },
}

impl Reducer {
    pub fn new(q: u64) -> Self {
        debug_assert!((2..(1 << 31)).contains(&q));
        if q.is_power_of_two() {
            Reducer::Mask(q - 1)
        } else {
            Reducer::Barrett {
                q,
                r: ((1u128 << 62) / q as u128) as u64,
            }
        }
    }

    /// (a * b) mod q for a, b < q. The product stays under 2^62, so the
    /// Barrett quotient estimate is off by at most 2 and the tail loop runs
    /// at most twice.
    #[inline(always)]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        let t = a * b;
        match self {
            Reducer::Mask(m) => t & m,
            Reducer::Barrett { q, r } => {
                let quot = ((t as u128 * r as u128) >> 62) as u64;
                let mut x = t - quot * q;
                while x >= q {
                    x -= q;
                }
                x
            }
        }
    }
}

/// Inverse of a unit modulo m.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "inv_mod of a non-unit");
    (s0.rem_euclid(m as i128)) as u64
}

/// p-valuation of a nonzero residue; by convention `e` for zero (the residue
/// of 0 modulo p^e is divisible by the full power).
#[inline]
pub fn val_p(x: u64, p: u64, e: u32) -> u32 {
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

/// Diagonalization `u * a * v = d` over Z/p^e with invertible transforms,
/// where d has diagonal p^w0, p^w1, ... with nondecreasing valuations.
/// Tracks v inverse as well, so membership coordinates can be extracted.
pub struct ModSnf {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub rows: usize,
    pub cols: usize,
    /// Valuation of the k-th diagonal entry, length min(rows, cols); an
    /// entry of `e` means the diagonal is zero there.
    pub diag_vals: Vec<u32>,
    pub u: Vec<u64>,
    pub u_inv: Vec<u64>,
    pub v: Vec<u64>,
    pub v_inv: Vec<u64>,
}

fn mat_vec(m: &[u64], r: usize, c: usize, x: &[u64], q: u64) -> Vec<u64> {
    debug_assert_eq!(x.len(), c);
    let mut out = vec![0u64; r];
    for i in 0..r {
        let mut acc = 0u64;
        let row = &m[i * c..(i + 1) * c];
        for (a, b) in row.iter().zip(x) {
            if *a != 0 && *b != 0 {
                acc = add_mod(acc, mul_mod(*a, *b, q), q);
            }
        }
        out[i] = acc;
    }
    out
}

impl ModSnf {
    /// Valuation bound for column i of the diagonal (columns past the
    /// diagonal are unconstrained).
    pub fn col_val(&self, i: usize) -> u32 {
        if i < self.diag_vals.len() {
            self.diag_vals[i]
        } else {
            self.e
        }
    }

    /// Kernel generators of the original matrix as (vector, valuation)
    /// pairs; the generator has order p^valuation.
    pub fn kernel_gens(&self) -> Vec<(Vec<u64>, u32)> {
        let mut out = Vec::new();
        for i in 0..self.cols {
            let w = self.col_val(i);
            if w == 0 {
                continue;
            }
            let scale = pow_u64(self.p, self.e - w);
            let mut g = vec![0u64; self.cols];
            for r in 0..self.cols {
                g[r] = mul_mod(self.v[r * self.cols + i], scale % self.q, self.q);
            }
            out.push((g, w));
        }
        out
    }

    /// One solution of `a x = b` over Z/p^e, or None (certified by the
    /// normal form: some transformed coordinate fails its valuation bound).
    /// Free coordinates are set to zero, which makes the solution linear in
    /// `b` over the image.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        debug_assert_eq!(b.len(), self.rows);
        let c = mat_vec(&self.u, self.rows, self.rows, b, self.q);
        let mut y = vec![0u64; self.cols];
        for i in 0..self.rows {
            let ci = c[i];
            if i >= self.diag_vals.len() {
                if ci != 0 {
                    return None;
                }
                continue;
            }
            let w = self.diag_vals[i];
            if val_p(ci, self.p, self.e) < w {
                return None;
            }
            if w < self.e {
                y[i] = ci / pow_u64(self.p, w);
            } else if ci != 0 {
                return None;
            }
        }
        Some(mat_vec(&self.v, self.cols, self.cols, &y, self.q))
    }

    /// Coordinates of `z` in the diagonalized basis: y = v_inv * z.
    pub fn diag_coords(&self, z: &[u64]) -> Vec<u64> {
        mat_vec(&self.v_inv, self.cols, self.cols, z, self.q)
    }
}

/// Computes the valuation normal form of a dense row-major matrix modulo
/// p^e. Pivots are entries of minimal valuation, ties broken by smallest
/// (row, col), which makes the diagonal valuations nondecreasing.
pub fn mod_snf(a_in: &[u64], rows: usize, cols: usize, p: u64, e: u32) -> ModSnf {
    let q = pow_u64(p, e);
    let mut a: Vec<u64> = a_in.iter().map(|&x| x % q).collect();
    debug_assert_eq!(a.len(), rows * cols);
    let mut u = vec![0u64; rows * rows];
    let mut u_inv = vec![0u64; rows * rows];
    for i in 0..rows {
        u[i * rows + i] = 1;
        u_inv[i * rows + i] = 1;
    }
    let mut v = vec![0u64; cols * cols];
    let mut v_inv = vec![0u64; cols * cols];
    for i in 0..cols {
        v[i * cols + i] = 1;
        v_inv[i * cols + i] = 1;
    }
    let steps = rows.min(cols);
    let mut diag_vals = vec![e; steps];
    for k in 0..steps {
        // Minimal-valuation pivot in the active region.
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let x = a[i * cols + j];
                if x == 0 {
                    continue;
                }
                let w = val_p(x, p, e);
                if best.map_or(true, |(bw, _, _)| w < bw) {
                    best = Some((w, i, j));
                    if w == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((w, pi, pj)) = best else {
            break;
        };
        // Swap pivot into place.
        if pi != k {
            for j in 0..cols {
                a.swap(k * cols + j, pi * cols + j);
            }
            for j in 0..rows {
                u.swap(k * rows + j, pi * rows + j);
            }
            for i in 0..rows {
                u_inv.swap(i * rows + k, i * rows + pi);
            }
        }
        if pj != k {
            for i in 0..rows {
                a.swap(i * cols + k, i * cols + pj);
            }
            for i in 0..cols {
                v.swap(i * cols + k, i * cols + pj);
            }
            for j in 0..cols {
                v_inv.swap(k * cols + j, pj * cols + j);
            }
        }
        // Normalize the pivot to exactly p^w.
        let pw = pow_u64(p, w);
        let unit = a[k * cols + k] / pw;
        let unit_inv = inv_mod(unit, q);
        for j in 0..cols {
            a[k * cols + j] = mul_mod(a[k * cols + j], unit_inv, q);
        }
        for j in 0..rows {
            u[k * rows + j] = mul_mod(u[k * rows + j], unit_inv, q);
        }
        for i in 0..rows {
            u_inv[i * rows + k] = mul_mod(u_inv[i * rows + k], unit, q);
        }
        debug_assert_eq!(a[k * cols + k], pw % q);
        // Clear the column below with exact factors.
        for i in k + 1..rows {
            let x = a[i * cols + k];
            if x == 0 {
                continue;
            }
            debug_assert!(val_p(x, p, e) >= w);
            let f = x / pw;
            for j in 0..cols {
                let t = mul_mod(f, a[k * cols + j], q);
                a[i * cols + j] = sub_mod(a[i * cols + j], t, q);
            }
            for j in 0..rows {
                let t = mul_mod(f, u[k * rows + j], q);
                u[i * rows + j] = sub_mod(u[i * rows + j], t, q);
            }
            // u_inv <- u_inv * (I + f E[i][k]): col k += f * col i.
            for r2 in 0..rows {
                let t = mul_mod(f, u_inv[r2 * rows + i], q);
                u_inv[r2 * rows + k] = add_mod(u_inv[r2 * rows + k], t, q);
            }
        }
        // Clear the row to the right with exact factors (column ops).
        for j in k + 1..cols {
            let x = a[k * cols + j];
            if x == 0 {
                continue;
            }
            debug_assert!(val_p(x, p, e) >= w);
            let f = x / pw;
            for i in 0..rows {
                let t = mul_mod(f, a[i * cols + k], q);
                a[i * cols + j] = sub_mod(a[i * cols + j], t, q);
            }
            // v <- v * E(-f at [k][j]); v_inv <- E(+f) * v_inv.
            for i in 0..cols {
                let t = mul_mod(f, v[i * cols + k], q);
                v[i * cols + j] = sub_mod(v[i * cols + j], t, q);
            }
            for i in 0..cols {
                let t = mul_mod(f, v_inv[j * cols + i], q);
                v_inv[k * cols + i] = add_mod(v_inv[k * cols + i], t, q);
            }
        }
        diag_vals[k] = w;
    }
    ModSnf {
        q,
        p,
        e,
        rows,
        cols,
        diag_vals,
        u,
        u_inv,
        v,
        v_inv,
    }
}

/// Streaming row-echelon accumulator over Z/p^e. Rows are fed one at a time
/// and reduced against the stored pivot rows; at most one pivot row per
/// column is kept, its leading entry normalized to an exact power of p.
/// Feeding order does not affect the row space.
pub struct Echelon {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub cols: usize,
    red: Reducer,
    rows: Vec<Vec<u64>>,
    lead: Vec<usize>,
    lead_val: Vec<u32>,
    col_pivot: Vec<Option<u32>>,
}

impl Echelon {
    pub fn new(cols: usize, p: u64, e: u32) -> Self {
        let q = pow_u64(p, e);
        Echelon {
            q,
            p,
            e,
            cols,
            red: Reducer::new(q),
            rows: Vec::new(),
            lead: Vec::new(),
            lead_val: Vec::new(),
            col_pivot: vec![None; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn normalize(&self, row: &mut [u64], c: usize) -> u32 {
        let w = val_p(row[c], self.p, self.e);
        let unit = row[c] / pow_u64(self.p, w);
        if unit != 1 {
            let inv = inv_mod(unit, self.q);
            for x in row[c..].iter_mut() {
                *x = mul_mod(*x, inv, self.q);
            }
        }
        w
    }

    /// Feed one row (length `cols`); reduces it against the pivots, swapping
    /// it in wherever it has a strictly smaller leading valuation.
    pub fn add_row(&mut self, mut row: Vec<u64>) {
        debug_assert_eq!(row.len(), self.cols);
        for x in row.iter_mut() {
            *x %= self.q;
        }
        let mut c = 0;
        loop {
            while c < self.cols && row[c] == 0 {
                c += 1;
            }
            if c == self.cols {
                return;
            }
            match self.col_pivot[c] {
                None => {
                    let w = self.normalize(&mut row, c);
                    self.col_pivot[c] = Some(self.rows.len() as u32);
                    self.lead.push(c);
                    self.lead_val.push(w);
                    self.rows.push(row);
                    return;
                }
                Some(ri) => {
                    let ri = ri as usize;
                    let v = val_p(row[c], self.p, self.e);
                    if v < self.lead_val[ri] {
                        std::mem::swap(&mut row, &mut self.rows[ri]);
                        let pivot_row = &mut self.rows[ri];
                        let w = val_p(pivot_row[c], self.p, self.e);
                        debug_assert_eq!(w, v);
                        let unit = pivot_row[c] / pow_u64(self.p, w);
                        if unit != 1 {
                            let inv = inv_mod(unit, self.q);
                            for x in pivot_row[c..].iter_mut() {
                                *x = mul_mod(*x, inv, self.q);
                            }
                        }
                        self.lead_val[ri] = w;
                    }
                    let w = self.lead_val[ri];
                    let f = row[c] / pow_u64(self.p, w);
                    let q = self.q;
                    let red = self.red;
                    let pivot = &self.rows[ri];
                    for (rj, &pj) in row[c..].iter_mut().zip(&pivot[c..]) {
                        if pj != 0 {
                            let t = red.mul(f, pj);
                            *rj = sub_mod(*rj, t, q);
                        }
                    }
                    debug_assert_eq!(row[c], 0);
                }
            }
        }
    }

    /// The pivot rows as a dense row-major matrix (rank x cols).
    pub fn pivot_matrix(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rows.len() * self.cols);
        for r in &self.rows {
            out.extend_from_slice(r);
        }
        out
    }
}
