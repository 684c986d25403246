//! Exact sparse linear algebra over Z and Z/m: Smith normal forms, kernels,
//! solving, and invariant-factor presentations of finite abelian groups.
//!
//! Composite moduli are handled by splitting into prime powers, running the
//! valuation normal form of [`modm`] on each, and recombining with the
//! Chinese remainder theorem; no step performs naive elimination against a
//! zero divisor.

pub mod intsnf;
pub mod modm;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use intsnf::{determinant, smith_normal_form, SmithDecomposition};
use modm::{add_mod, factorize, inv_mod, mod_snf, mul_mod, pow_u64, sub_mod, ModSnf};

/// Guard for densifying a sparse matrix in the composite-modulus paths.
const DENSE_ENTRY_LIMIT: usize = 16_000_000;

/// Coordinate-list integer matrix: sorted entries, no zeros, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    /// Builds a matrix, summing duplicate coordinates and dropping zeros.
    pub fn new(rows: usize, cols: usize, entries: Vec<(usize, usize, BigInt)>) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut merged: Vec<(usize, usize, BigInt)> = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            if i >= rows || j >= cols {
                return Err(Error::InvalidGroup(format!(
                    "matrix entry ({i}, {j}) out of {rows}x{cols}"
                )));
            }
            match merged.last_mut() {
                Some((pi, pj, pv)) if *pi == i && *pj == j => *pv += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|(_, _, v)| !v.is_zero());
        Ok(SparseIntMatrix {
            rows,
            cols,
            entries: merged,
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseIntMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, BigInt::from(1))).collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, BigInt)] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match self
            .entries
            .binary_search_by(|(r, c, _)| (*r, *c).cmp(&(i, j)))
        {
            Ok(k) => self.entries[k].2.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut acc: std::collections::BTreeMap<(usize, usize), BigInt> =
            std::collections::BTreeMap::new();
        for (i, k, a) in &self.entries {
            for (k2, j, b) in &other.entries {
                if k == k2 {
                    *acc.entry((*i, *j)).or_insert_with(BigInt::zero) += a * b;
                }
            }
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), v)| (i, j, v))
            .collect();
        SparseIntMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    /// Dense residues modulo q, row-major. Guarded against blowup.
    fn to_dense_mod(&self, q: u64) -> Result<Vec<u64>> {
        let size = self
            .rows
            .checked_mul(self.cols)
            .filter(|&s| s <= DENSE_ENTRY_LIMIT)
            .ok_or_else(|| Error::Unsupported("matrix too large to densify".into()))?;
        let mut a = vec![0u64; size];
        let qb = BigInt::from(q);
        for (i, j, v) in &self.entries {
            let r = ((v % &qb) + &qb) % &qb;
            a[i * self.cols + j] = r.to_u64().expect("reduced residue fits");
        }
        Ok(a)
    }

    /// JSON form `{"rows": r, "cols": c, "entries": [[i, j, "v"], ...]}`
    /// with decimal-string values, exact at any size.
    pub fn to_json_string(&self) -> String {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(i, j, v)| serde_json::json!([i, j, v.to_string()]))
            .collect();
        serde_json::json!({"rows": self.rows, "cols": self.cols, "entries": entries}).to_string()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("matrix JSON must be an object".into()))?;
        for key in obj.keys() {
            if key != "rows" && key != "cols" && key != "entries" {
                return Err(Error::Json(format!("unknown matrix field {key}")));
            }
        }
        let rows = obj
            .get("rows")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Json("missing rows".into()))? as usize;
        let cols = obj
            .get("cols")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Json("missing cols".into()))? as usize;
        if rows > DENSE_ENTRY_LIMIT || cols > DENSE_ENTRY_LIMIT {
            return Err(Error::Json("matrix dimensions out of range".into()));
        }
        let raw = obj
            .get("entries")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Json("missing entries".into()))?;
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            let triple = e
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::Json("entry must be [row, col, value]".into()))?;
            let i = triple[0]
                .as_u64()
                .ok_or_else(|| Error::Json("bad row index".into()))? as usize;
            let j = triple[1]
                .as_u64()
                .ok_or_else(|| Error::Json("bad col index".into()))? as usize;
            let s = triple[2]
                .as_str()
                .ok_or_else(|| Error::Json("value must be a decimal string".into()))?;
            let val: BigInt = s
                .parse()
                .map_err(|_| Error::Json(format!("bad integer {s}")))?;
            entries.push((i, j, val));
        }
        SparseIntMatrix::new(rows, cols, entries)
    }
}

/// A finite abelian group in invariant-factor form: d1 | d2 | ... with every
/// factor at least 2; the trivial group is the empty chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            factors: Vec::new(),
        }
    }

    /// Builds from a chain, validating divisibility.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Unsupported(format!(
                    "invariant factors {factors:?} are not a divisibility chain"
                )));
            }
        }
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::Unsupported(
                "invariant factors must be at least 2".into(),
            ));
        }
        Ok(FinAbGroup { factors })
    }

    /// Canonicalizes an arbitrary multiset of cyclic orders into the
    /// invariant-factor chain (primary decomposition, then positionwise
    /// recombination from the largest down).
    pub fn from_multiset(orders: &[u64]) -> Self {
        let mut per_prime: std::collections::BTreeMap<u64, Vec<u32>> =
            std::collections::BTreeMap::new();
        for &d in orders {
            if d < 2 {
                continue;
            }
            for (p, e) in factorize(d) {
                per_prime.entry(p).or_default().push(e);
            }
        }
        Self::from_primary_parts(per_prime.into_iter().collect::<Vec<_>>().as_slice())
    }

    /// Builds from primary data: for each prime, the multiset of exponents
    /// of its cyclic summands.
    pub fn from_primary_parts(parts: &[(u64, Vec<u32>)]) -> Self {
        let mut lists: Vec<(u64, Vec<u32>)> = parts
            .iter()
            .map(|(p, exps)| {
                let mut e: Vec<u32> = exps.iter().copied().filter(|&x| x > 0).collect();
                e.sort_unstable_by(|a, b| b.cmp(a));
                (*p, e)
            })
            .filter(|(_, e)| !e.is_empty())
            .collect();
        lists.sort_by_key(|(p, _)| *p);
        let len = lists.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut desc = Vec::with_capacity(len);
        for i in 0..len {
            let mut d = 1u64;
            for (p, e) in &lists {
                if i < e.len() {
                    d *= pow_u64(*p, e[i]);
                }
            }
            desc.push(d);
        }
        desc.reverse();
        FinAbGroup { factors: desc }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigUint {
        let mut o = BigUint::from(1u32);
        for &d in &self.factors {
            o *= BigUint::from(d);
        }
        o
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// The largest invariant factor; 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// The p-primary component.
    pub fn primary_part(&self, p: u64) -> FinAbGroup {
        let exps: Vec<u32> = self
            .factors
            .iter()
            .map(|&d| {
                let mut e = 0;
                let mut d = d;
                while d % p == 0 {
                    d /= p;
                    e += 1;
                }
                e
            })
            .filter(|&e| e > 0)
            .collect();
        FinAbGroup::from_primary_parts(&[(p, exps)])
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut all = self.factors.clone();
        all.extend_from_slice(&other.factors);
        FinAbGroup::from_multiset(&all)
    }

    /// Reduces per-coordinate values into canonical range.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(&self.factors)
            .map(|(v, d)| v % d)
            .collect()
    }
}

impl std::fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A homomorphism between finite abelian groups in coordinates: column i is
/// the image of the i-th source generator.
#[derive(Debug, Clone)]
pub struct AbGroupMap {
    source: FinAbGroup,
    target: FinAbGroup,
    cols: Vec<Vec<u64>>,
}

impl AbGroupMap {
    pub fn new(source: FinAbGroup, target: FinAbGroup, cols: Vec<Vec<u64>>) -> Result<Self> {
        if cols.len() != source.rank() {
            return Err(Error::Unsupported(
                "one image column per source generator required".into(),
            ));
        }
        for (i, col) in cols.iter().enumerate() {
            if col.len() != target.rank() {
                return Err(Error::Unsupported("image column has wrong length".into()));
            }
            let d = source.invariant_factors()[i];
            for (j, &x) in col.iter().enumerate() {
                let t = target.invariant_factors()[j];
                if (x as u128 * d as u128) % t as u128 != 0 {
                    return Err(Error::Unsupported(format!(
                        "column {i} does not respect generator order {d}"
                    )));
                }
            }
        }
        Ok(AbGroupMap {
            source,
            target,
            cols,
        })
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn columns(&self) -> &[Vec<u64>] {
        &self.cols
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let tr = self.target.rank();
        let mut out = vec![0u64; tr];
        for (i, col) in self.cols.iter().enumerate() {
            for j in 0..tr {
                let t = self.target.invariant_factors()[j];
                out[j] = add_mod(out[j], mul_mod(x[i] % t, col[j] % t, t), t);
            }
        }
        out
    }

    /// Kernel as (structure, generators in source coordinates).
    pub fn kernel(&self) -> Result<(FinAbGroup, Vec<Vec<u64>>)> {
        let conditions: Vec<(Vec<u64>, u64)> = (0..self.target.rank())
            .map(|j| {
                (
                    self.cols.iter().map(|c| c[j]).collect(),
                    self.target.invariant_factors()[j],
                )
            })
            .collect();
        subgroup_killed_by(&self.source, &conditions)
    }
}

/// The subgroup of `source` cut out by congruences: x is kept when for each
/// condition (c, t) the sum of c_i x_i vanishes modulo t. Returns the
/// subgroup's structure and generators in source coordinates.
pub fn subgroup_killed_by(
    source: &FinAbGroup,
    conditions: &[(Vec<u64>, u64)],
) -> Result<(FinAbGroup, Vec<Vec<u64>>)> {
    let k = source.rank();
    if k == 0 {
        return Ok((FinAbGroup::trivial(), Vec::new()));
    }
    let s_exp = source.exponent();
    let mut big = s_exp;
    for (_, t) in conditions {
        big = num_integer::lcm(big, *t);
    }
    // Uniformize all conditions to modulus `big` by scaling.
    let mut entries = Vec::new();
    for (r, (c, t)) in conditions.iter().enumerate() {
        if c.len() != k {
            return Err(Error::Unsupported("condition has wrong length".into()));
        }
        let scale = big / t;
        for (i, &x) in c.iter().enumerate() {
            let v = mul_mod(x % big, scale % big, big);
            if v != 0 {
                entries.push((r, i, BigInt::from(v)));
            }
        }
    }
    let m = SparseIntMatrix::new(conditions.len().max(1), k, entries)?;
    let raw = kernel_mod(&m, big)?;
    // Reduce into source coordinates and keep nonzero generators.
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for g in raw {
        let red = source.reduce(&g);
        if red.iter().any(|&x| x != 0) && !gens.contains(&red) {
            gens.push(red);
        }
    }
    let structure = span_structure(source, &gens)?;
    Ok((structure, gens))
}

/// Whether `x` lies in the subgroup of `ambient` generated by `gens`.
/// Each coordinate Z/d_i embeds into Z/E by scaling with E/d_i (E the
/// exponent), turning membership into a linear solve mod E.
pub fn subgroup_contains(ambient: &FinAbGroup, gens: &[Vec<u64>], x: &[u64]) -> Result<bool> {
    if x.len() != ambient.rank() {
        return Err(Error::InvalidGroup(format!(
            "membership vector has {} coordinates, ambient rank is {}",
            x.len(),
            ambient.rank()
        )));
    }
    let red = ambient.reduce(x);
    if red.iter().all(|&v| v == 0) {
        return Ok(true);
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let e = ambient.exponent();
    let factors = ambient.invariant_factors();
    let mut entries = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        if g.len() != ambient.rank() {
            return Err(Error::InvalidGroup(
                "subgroup generator has wrong rank".into(),
            ));
        }
        for (i, &v) in g.iter().enumerate() {
            let scaled = mul_mod(v % e, e / factors[i], e);
            if scaled != 0 {
                entries.push((i, j, BigInt::from(scaled)));
            }
        }
    }
    let m = SparseIntMatrix::new(ambient.rank(), gens.len(), entries)?;
    let rhs: Vec<u64> = red
        .iter()
        .enumerate()
        .map(|(i, &v)| mul_mod(v % e, e / factors[i], e))
        .collect();
    Ok(solve_mod(&m, &rhs, e)?.is_some())
}

/// Structure of the subgroup generated by `vectors` inside `ambient`.
/// Each coordinate Z/d_i embeds into Z/E by scaling with E/d_i (E the
/// exponent), turning the span into a presented subgroup of (Z/E)^k.
pub fn span_structure(ambient: &FinAbGroup, vectors: &[Vec<u64>]) -> Result<FinAbGroup> {
    if ambient.is_trivial() || vectors.is_empty() {
        return Ok(FinAbGroup::trivial());
    }
    let e = ambient.exponent();
    for v in vectors {
        if v.len() != ambient.rank() {
            return Err(Error::InvalidGroup(format!(
                "span vector has {} coordinates, ambient rank is {}",
                v.len(),
                ambient.rank()
            )));
        }
    }
    let embedded: Vec<Vec<u64>> = vectors
        .iter()
        .map(|g| {
            g.iter()
                .enumerate()
                .map(|(i, &x)| mul_mod(x % e, e / ambient.invariant_factors()[i], e))
                .collect()
        })
        .collect();
    Ok(quotient_presentation(&embedded, &[], e)?.group().clone())
}

fn validate_modulus(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::Unsupported(format!("modulus {m} must be at least 2")));
    }
    if m >= 1 << 31 {
        return Err(Error::Unsupported(format!("modulus {m} too large")));
    }
    Ok(())
}

/// CRT idempotents: for each prime power q dividing m, a value that is 1 mod
/// q and 0 mod m/q.
fn idempotents(m: u64) -> Vec<(u64, u32, u64, u64)> {
    factorize(m)
        .into_iter()
        .map(|(p, e)| {
            let q = pow_u64(p, e);
            let c = m / q;
            let idem = if c == 1 {
                1
            } else {
                mul_mod(c % m, inv_mod(c % q, q), m)
            };
            (p, e, q, idem)
        })
        .collect()
}

/// Generating set of the kernel of M over Z/m. Composite moduli are split
/// into prime powers; each part is solved by the valuation normal form and
/// lifted back with CRT idempotents.
pub fn kernel_mod(m: &SparseIntMatrix, modulus: u64) -> Result<Vec<Vec<u64>>> {
    validate_modulus(modulus)?;
    let mut out = Vec::new();
    for (p, e, q, idem) in idempotents(modulus) {
        let dense = m.to_dense_mod(q)?;
        let snf = mod_snf(&dense, m.rows(), m.cols(), p, e);
        for (g, _) in snf.kernel_gens() {
            let lifted: Vec<u64> = g
                .iter()
                .map(|&x| mul_mod(x % modulus, idem, modulus))
                .collect();
            if lifted.iter().any(|&x| x != 0) {
                out.push(lifted);
            }
        }
    }
    Ok(out)
}

/// One solution of Mx = b over Z/m, or None; the absence is certified by a
/// valuation violation in some prime-power part.
pub fn solve_mod(m: &SparseIntMatrix, b: &[u64], modulus: u64) -> Result<Option<Vec<u64>>> {
    validate_modulus(modulus)?;
    if b.len() != m.rows() {
        return Err(Error::Unsupported("right-hand side has wrong length".into()));
    }
    let mut x = vec![0u64; m.cols()];
    for (p, e, q, idem) in idempotents(modulus) {
        let dense = m.to_dense_mod(q)?;
        let snf = mod_snf(&dense, m.rows(), m.cols(), p, e);
        let bq: Vec<u64> = b.iter().map(|&v| v % q).collect();
        match snf.solve(&bq) {
            None => return Ok(None),
            Some(part) => {
                for (xi, &pi) in x.iter_mut().zip(&part) {
                    *xi = add_mod(*xi, mul_mod(pi % modulus, idem, modulus), modulus);
                }
            }
        }
    }
    Ok(Some(x))
}

/// Per-prime data for a quotient presentation.
struct PrimeQuotient {
    q: u64,
    p: u64,
    gens_snf: ModSnf,
    /// Transform of the relation normal form, acting on generator coords.
    u: Vec<u64>,
    /// Valuation of the relation diagonal per transformed position.
    vals: Vec<u32>,
    /// Transformed positions sorted by valuation descending (nontrivial
    /// ones first), aligning positions across primes.
    pos_desc: Vec<usize>,
}

/// span(gens) / span(rels) inside (Z/m)^dim, with a homomorphic coordinate
/// map for arbitrary elements of span(gens).
pub struct QuotientPresentation {
    group: FinAbGroup,
    modulus: u64,
    dim: usize,
    primes: Vec<PrimeQuotient>,
    /// Chain length in the descending alignment (before dropping 1s).
    desc_len: usize,
}

impl QuotientPresentation {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Coordinates of `v` (an element of span(gens)) in the quotient,
    /// aligned with `group().invariant_factors()`. Linear and deterministic.
    pub fn coords(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.dim {
            return Err(Error::Unsupported("vector has wrong length".into()));
        }
        // Per prime, per descending position: residue mod p^val.
        let mut desc: Vec<(u64, u64)> = vec![(0, 1); self.desc_len]; // (residue, modulus)
        for pq in &self.primes {
            let vq: Vec<u64> = v.iter().map(|&x| x % pq.q).collect();
            let t = pq
                .gens_snf
                .solve(&vq)
                .ok_or(Error::NoSolution(0))?;
            let g = pq.gens_snf.cols;
            // y = u * t over Z/q.
            let mut y = vec![0u64; g];
            for i in 0..g {
                let mut acc = 0u64;
                for j in 0..g {
                    let a = pq.u[i * g + j];
                    if a != 0 && t[j] != 0 {
                        acc = add_mod(acc, mul_mod(a, t[j], pq.q), pq.q);
                    }
                }
                y[i] = acc;
            }
            for (slot, &pos) in pq.pos_desc.iter().enumerate() {
                let w = pq.vals[pos];
                if w == 0 {
                    continue;
                }
                let pw = pow_u64(pq.p, w);
                let (r, m0) = desc[slot];
                let r2 = y[pos] % pw;
                // CRT combine (moduli coprime across primes).
                let combined = crt_pair(r, m0, r2, pw);
                desc[slot] = (combined, m0 * pw);
            }
        }
        let coords: Vec<u64> = desc
            .iter()
            .filter(|(_, m0)| *m0 > 1)
            .map(|(r, _)| *r)
            .collect();
        // Descending alignment, then reversed to match the ascending chain.
        let mut coords = coords;
        coords.reverse();
        debug_assert_eq!(coords.len(), self.group.rank());
        Ok(coords)
    }
}

/// x = a mod m, b mod n for coprime m, n.
pub(crate) fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if m == 1 {
        return b % n;
    }
    if n == 1 {
        return a % m;
    }
    let mn = m * n;
    let diff = sub_mod(b % n, a % n, n);
    let k = mul_mod(diff, inv_mod(m % n, n), n);
    (a + m * k) % mn
}

/// Presents span(gens)/span(rels) over Z/m. Every relation must lie in the
/// span of the generators; the offending index is reported otherwise.
pub fn quotient_presentation(
    gens: &[Vec<u64>],
    rels: &[Vec<u64>],
    modulus: u64,
) -> Result<QuotientPresentation> {
    validate_modulus(modulus)?;
    let dim = gens.first().map(|g| g.len()).unwrap_or(0);
    for g in gens.iter().chain(rels) {
        if g.len() != dim {
            return Err(Error::Unsupported("mixed vector lengths".into()));
        }
    }
    if gens.is_empty() {
        for (j, r) in rels.iter().enumerate() {
            if r.iter().any(|&x| x % modulus != 0) {
                return Err(Error::InconsistentPresentation(j));
            }
        }
        return Ok(QuotientPresentation {
            group: FinAbGroup::trivial(),
            modulus,
            dim,
            primes: Vec::new(),
            desc_len: 0,
        });
    }
    let g = gens.len();
    let mut primes = Vec::new();
    let mut per_prime_vals: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e) in factorize(modulus) {
        let q = pow_u64(p, e);
        // Generator matrix: dim x g, columns are the generators.
        let mut gm = vec![0u64; dim * g];
        for (j, gen) in gens.iter().enumerate() {
            for i in 0..dim {
                gm[i * g + j] = gen[i] % q;
            }
        }
        let gens_snf = mod_snf(&gm, dim, g, p, e);
        // Relations on generator coordinates: syzygies of the generator
        // matrix plus the generator-coordinates of each given relation.
        let mut rel_rows: Vec<Vec<u64>> = gens_snf
            .kernel_gens()
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        for (j, r) in rels.iter().enumerate() {
            let rq: Vec<u64> = r.iter().map(|&x| x % q).collect();
            match gens_snf.solve(&rq) {
                Some(c) => rel_rows.push(c),
                None => return Err(Error::InconsistentPresentation(j)),
            }
        }
        // Quotient (Z/q)^g by the column span of rel_rows^T: SNF of the
        // g x K matrix whose columns are the relation vectors.
        let kk = rel_rows.len().max(1);
        let mut rt = vec![0u64; g * kk];
        for (col, r) in rel_rows.iter().enumerate() {
            for i in 0..g {
                rt[i * kk + col] = r[i];
            }
        }
        let rel_snf = mod_snf(&rt, g, kk, p, e);
        let vals: Vec<u32> = (0..g)
            .map(|i| {
                if i < rel_snf.diag_vals.len() {
                    rel_snf.diag_vals[i]
                } else {
                    e
                }
            })
            .collect();
        let mut pos_desc: Vec<usize> = (0..g).collect();
        pos_desc.sort_by(|&a, &b| vals[b].cmp(&vals[a]).then(a.cmp(&b)));
        pos_desc.retain(|&i| vals[i] > 0);
        per_prime_vals.push((
            p,
            pos_desc.iter().map(|&i| vals[i]).collect(),
        ));
        primes.push(PrimeQuotient {
            q,
            p,
            gens_snf,
            u: rel_snf.u,
            vals,
            pos_desc,
        });
    }
    let desc_len = per_prime_vals
        .iter()
        .map(|(_, v)| v.len())
        .max()
        .unwrap_or(0);
    for pq in &mut primes {
        pq.pos_desc.truncate(desc_len);
    }
    let group = FinAbGroup::from_primary_parts(&per_prime_vals);
    Ok(QuotientPresentation {
        group,
        modulus,
        dim,
        primes,
        desc_len,
    })
}

impl QuotientPresentation {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finab_canonicalization() {
        let g = FinAbGroup::from_multiset(&[2, 3]);
        assert_eq!(g.invariant_factors(), &[6]);
        let g = FinAbGroup::from_multiset(&[2, 2, 3]);
        assert_eq!(g.invariant_factors(), &[2, 6]);
        let g = FinAbGroup::from_multiset(&[4, 6]);
        assert_eq!(g.invariant_factors(), &[2, 12]);
        assert!(FinAbGroup::from_multiset(&[]).is_trivial());
        assert_eq!(FinAbGroup::from_multiset(&[1, 1]).rank(), 0);
        assert!(FinAbGroup::new(vec![2, 3]).is_err());
        assert_eq!(
            FinAbGroup::from_multiset(&[8, 9, 5, 2]).invariant_factors(),
            &[2, 360]
        );
    }

    #[test]
    fn kernel_mod_examples() {
        // [2] over Z/4: kernel generated by 2.
        let m = SparseIntMatrix::new(1, 1, vec![(0, 0, BigInt::from(2))]).unwrap();
        let k = kernel_mod(&m, 4).unwrap();
        assert_eq!(k, vec![vec![2]]);
        // Identity over Z/m: trivial kernel.
        let id = SparseIntMatrix::identity(3);
        assert!(kernel_mod(&id, 6).unwrap().is_empty());
    }

    fn brute_kernel_size(m: &SparseIntMatrix, modulus: u64) -> usize {
        let cols = m.cols();
        let total = (modulus as usize).pow(cols as u32);
        let mut count = 0;
        for mut code in 0..total {
            let mut x = vec![0u64; cols];
            for xi in x.iter_mut() {
                *xi = (code % modulus as usize) as u64;
                code /= modulus as usize;
            }
            let ok = (0..m.rows()).all(|i| {
                let mut acc: u128 = 0;
                for j in 0..cols {
                    let a = ((m.get(i, j) % BigInt::from(modulus)
                        + BigInt::from(modulus))
                        % BigInt::from(modulus))
                    .to_u64()
                    .unwrap();
                    acc += a as u128 * x[j] as u128;
                }
                acc % modulus as u128 == 0
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    fn span_size(gens: &[Vec<u64>], cols: usize, m: u64) -> usize {
        let mut seen = std::collections::HashSet::new();
        seen.insert(vec![0u64; cols]);
        let mut frontier = vec![vec![0u64; cols]];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn kernel_mod_composite_matches_brute_force() {
        let m = SparseIntMatrix::new(
            2,
            3,
            vec![
                (0, 0, BigInt::from(2)),
                (0, 1, BigInt::from(3)),
                (0, 2, BigInt::from(4)),
                (1, 1, BigInt::from(6)),
                (1, 2, BigInt::from(2)),
            ],
        )
        .unwrap();
        for modulus in [2u64, 3, 4, 6, 12] {
            let gens = kernel_mod(&m, modulus).unwrap();
            assert_eq!(
                span_size(&gens, 3, modulus),
                brute_kernel_size(&m, modulus),
                "modulus {modulus}"
            );
        }
    }

    #[test]
    fn solve_mod_examples() {
        let m = SparseIntMatrix::new(1, 1, vec![(0, 0, BigInt::from(2))]).unwrap();
        assert_eq!(solve_mod(&m, &[1], 4).unwrap(), None);
        let x = solve_mod(&m, &[2], 4).unwrap().unwrap();
        assert_eq!((2 * x[0]) % 4, 2);
        let id = SparseIntMatrix::identity(3);
        assert_eq!(
            solve_mod(&id, &[5, 0, 3], 6).unwrap().unwrap(),
            vec![5, 0, 3]
        );
    }

    #[test]
    fn solve_mod_composite_cross_check() {
        let m = SparseIntMatrix::new(
            2,
            2,
            vec![
                (0, 0, BigInt::from(2)),
                (0, 1, BigInt::from(4)),
                (1, 0, BigInt::from(4)),
                (1, 1, BigInt::from(2)),
            ],
        )
        .unwrap();
        let modulus = 12u64;
        for b0 in 0..modulus {
            for b1 in 0..modulus {
                let sol = solve_mod(&m, &[b0, b1], modulus).unwrap();
                let brute = (0..modulus).find_map(|x0| {
                    (0..modulus).find(|&x1| {
                        (2 * x0 + 4 * x1) % modulus == b0 && (4 * x0 + 2 * x1) % modulus == b1
                    })
                });
                match sol {
                    Some(x) => {
                        assert_eq!((2 * x[0] + 4 * x[1]) % modulus, b0);
                        assert_eq!((4 * x[0] + 2 * x[1]) % modulus, b1);
                    }
                    None => assert!(brute.is_none(), "missed ({b0},{b1})"),
                }
            }
        }
    }

    #[test]
    fn subgroup_contains_examples() {
        let ambient = FinAbGroup::new(vec![2, 4]).unwrap();
        let gens = vec![vec![1, 2]];
        // The span of (1, 2) in Z/2 + Z/4 is {(0,0), (1,2)}.
        assert!(subgroup_contains(&ambient, &gens, &[0, 0]).unwrap());
        assert!(subgroup_contains(&ambient, &gens, &[1, 2]).unwrap());
        assert!(!subgroup_contains(&ambient, &gens, &[1, 0]).unwrap());
        assert!(!subgroup_contains(&ambient, &gens, &[0, 2]).unwrap());
        assert!(!subgroup_contains(&ambient, &gens, &[0, 1]).unwrap());
        // No generators: only zero is inside.
        assert!(subgroup_contains(&ambient, &[], &[0, 0]).unwrap());
        assert!(!subgroup_contains(&ambient, &[], &[1, 0]).unwrap());
    }

    #[test]
    fn quotient_presentation_examples() {
        // gens {e1, e2} over Z/2, rels {e1} -> Z/2.
        let q = quotient_presentation(
            &[vec![1, 0], vec![0, 1]],
            &[vec![1, 0]],
            2,
        )
        .unwrap();
        assert_eq!(q.group().invariant_factors(), &[2]);
        let c = q.coords(&[0, 1]).unwrap();
        assert_eq!(c, vec![1]);
        let c = q.coords(&[1, 0]).unwrap();
        assert_eq!(c, vec![0]);

        // gens = rels -> trivial.
        let q = quotient_presentation(&[vec![1, 1]], &[vec![1, 1]], 6).unwrap();
        assert!(q.group().is_trivial());

        // Relation outside the span.
        let err = quotient_presentation(&[vec![2, 0]], &[vec![1, 0]], 4);
        assert!(matches!(err, Err(Error::InconsistentPresentation(0))));
    }

    #[test]
    fn quotient_order_multiplicativity() {
        // Order of span(gens) = order of quotient * order of span(rels).
        let modulus = 12u64;
        let gens = vec![vec![2, 0, 3], vec![0, 4, 0], vec![6, 6, 6]];
        let rels = vec![vec![6, 0, 9], vec![6, 6, 6]];
        let q = quotient_presentation(&gens, &rels, modulus).unwrap();
        let gsz = span_size(&gens, 3, modulus);
        let rsz = span_size(&rels, 3, modulus);
        assert_eq!(BigUint::from(gsz), q.group().order() * BigUint::from(rsz));
    }

    #[test]
    fn quotient_coords_are_homomorphic() {
        let modulus = 12u64;
        let gens = vec![vec![2, 0, 3], vec![0, 4, 0], vec![6, 6, 6]];
        let rels = vec![vec![6, 0, 9]];
        let q = quotient_presentation(&gens, &rels, modulus).unwrap();
        let factors = q.group().invariant_factors().to_vec();
        let sample = |a: u64, b: u64, c: u64| -> Vec<u64> {
            (0..3)
                .map(|i| (a * gens[0][i] + b * gens[1][i] + c * gens[2][i]) % modulus)
                .collect()
        };
        let v1 = sample(1, 2, 0);
        let v2 = sample(3, 1, 1);
        let sum: Vec<u64> = v1.iter().zip(&v2).map(|(a, b)| (a + b) % modulus).collect();
        let c1 = q.coords(&v1).unwrap();
        let c2 = q.coords(&v2).unwrap();
        let cs = q.coords(&sum).unwrap();
        for i in 0..factors.len() {
            assert_eq!((c1[i] + c2[i]) % factors[i], cs[i]);
        }
        // Vectors outside the span are rejected.
        assert!(q.coords(&[1, 1, 1]).is_err());
    }

    #[test]
    fn ab_group_map_kernel() {
        // Z/4 x Z/2 -> Z/4, (x, y) -> x + 2y: kernel is {(x,y): x + 2y = 0}
        // = {(0,0),(2,1),(2,0)... } check structure: solutions: x = -2y mod 4:
        // y=0: x in {0}? No: x+2y=0 mod 4 with x mod 4, y mod 2:
        // (0,0),(2,1) and doubling (2,1)->(0,0); also (2,0)? 2+0=2 no.
        // So kernel = {(0,0),(2,1)} = Z/2.
        let src = FinAbGroup::new(vec![2, 4]).unwrap(); // coords (y, x)
        let tgt = FinAbGroup::new(vec![4]).unwrap();
        let map = AbGroupMap::new(src, tgt, vec![vec![2], vec![1]]).unwrap();
        let (k, gens) = map.kernel().unwrap();
        assert_eq!(k.invariant_factors(), &[2]);
        for g in &gens {
            assert!(map.apply(g).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn sparse_matrix_json_round_trip() {
        let m = SparseIntMatrix::new(
            2,
            3,
            vec![(0, 0, BigInt::from(-7)), (1, 2, BigInt::from(123456789012345678i64))],
        )
        .unwrap();
        let s = m.to_json_string();
        let back = SparseIntMatrix::from_json_str(&s).unwrap();
        assert_eq!(m, back);
        assert!(SparseIntMatrix::from_json_str("{\"rows\":1}").is_err());
        assert!(SparseIntMatrix::from_json_str(
            "{\"rows\":1,\"cols\":1,\"entries\":[[0,0,bad]]}"
        )
        .is_err());
    }
}
