//! Smith normal form over the integers with explicit unimodular transforms.
//!
//! Arbitrary-precision arithmetic is used throughout: entry growth during
//! elimination is real even for small inputs, and the transforms must be
//! exact to be replayable.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::SparseIntMatrix;

/// `u * m * v = d` with `d` diagonal under a divisibility chain and `u`, `v`
/// unimodular.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: SparseIntMatrix,
    pub d: SparseIntMatrix,
    pub v: SparseIntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank)
            .map(|i| self.d.get(i, i))
            .collect()
    }
}

struct Dense {
    r: usize,
    c: usize,
    a: Vec<BigInt>,
}

impl Dense {
    fn zero(r: usize, c: usize) -> Self {
        Dense {
            r,
            c,
            a: vec![BigInt::zero(); r * c],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = Dense::zero(n, n);
        for i in 0..n {
            m.a[i * n + i] = BigInt::one();
        }
        m
    }

    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.c + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.a[i * self.c + j] = v;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.c {
            self.a.swap(i * self.c + k, j * self.c + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.r {
            self.a.swap(k * self.c + i, k * self.c + j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.c {
            let t = q * self.at(j, k);
            let v = self.at(i, k) - t;
            self.set(i, k, v);
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.r {
            let t = q * self.at(k, j);
            let v = self.at(k, i) - t;
            self.set(k, i, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.c {
            let v = -self.at(i, k);
            self.set(i, k, v);
        }
    }

    /// rows (i, j) <- (x*row_i + y*row_j, z*row_i + w*row_j)
    fn row_transform_2x2(
        &mut self,
        i: usize,
        j: usize,
        x: &BigInt,
        y: &BigInt,
        z: &BigInt,
        w: &BigInt,
    ) {
        for k in 0..self.c {
            let a = self.at(i, k).clone();
            let b = self.at(j, k).clone();
            self.set(i, k, x * &a + y * &b);
            self.set(j, k, z * &a + w * &b);
        }
    }

    fn to_sparse(&self) -> SparseIntMatrix {
        let mut entries = Vec::new();
        for i in 0..self.r {
            for j in 0..self.c {
                if !self.at(i, j).is_zero() {
                    entries.push((i, j, self.at(i, j).clone()));
                }
            }
        }
        SparseIntMatrix::new(self.r, self.c, entries).expect("valid coordinates")
    }
}

/// Quotient of `a / b` rounded to nearest, so the remainder has absolute
/// value at most |b| / 2. Ensures strict decrease during elimination.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let mut q = a / b;
    let r = a - &q * b;
    if &r.abs() * 2 > b.abs() {
        if r.sign() == b.sign() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Pivot choice: minimal absolute value, then fewest combined nonzeros in
/// its row and column, then smallest (row, col).
fn choose_pivot(m: &Dense, from: usize) -> Option<(usize, usize)> {
    let mut row_nnz = vec![0usize; m.r];
    let mut col_nnz = vec![0usize; m.c];
    for i in from..m.r {
        for j in from..m.c {
            if !m.at(i, j).is_zero() {
                row_nnz[i] += 1;
                col_nnz[j] += 1;
            }
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.r {
        for j in from..m.c {
            if m.at(i, j).is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => {
                    let cand = (m.at(i, j).abs(), row_nnz[i] + col_nnz[j], i, j);
                    let cur = (m.at(bi, bj).abs(), row_nnz[bi] + col_nnz[bj], bi, bj);
                    cand < cur
                }
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = Dense::zero(r, c);
    for (i, j, v) in m.entries() {
        a.set(*i, *j, v.clone());
    }
    let mut u = Dense::identity(r);
    let mut v = Dense::identity(c);
    let steps = r.min(c);
    let mut rank = 0;
    for k in 0..steps {
        let Some((pi, pj)) = choose_pivot(&a, k) else {
            break;
        };
        a.swap_rows(k, pi);
        u.swap_rows(k, pi);
        a.swap_cols(k, pj);
        v.swap_cols(k, pj);
        loop {
            // Clear below the pivot; rounded quotients shrink remainders, and
            // a surviving smaller remainder is swapped in as the new pivot.
            let mut dirty = false;
            for i in k + 1..r {
                if a.at(i, k).is_zero() {
                    continue;
                }
                let q = round_div(a.at(i, k), a.at(k, k));
                a.row_sub(i, k, &q);
                u.row_sub(i, k, &q);
                if !a.at(i, k).is_zero() {
                    a.swap_rows(k, i);
                    u.swap_rows(k, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in k + 1..c {
                if a.at(k, j).is_zero() {
                    continue;
                }
                let q = round_div(a.at(k, j), a.at(k, k));
                a.col_sub(j, k, &q);
                v.col_sub(j, k, &q);
                if !a.at(k, j).is_zero() {
                    a.swap_cols(k, j);
                    v.swap_cols(k, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        if a.at(k, k).is_negative() {
            a.negate_row(k);
            u.negate_row(k);
        }
        rank = k + 1;
    }
    // Repair the divisibility chain on the diagonal.
    loop {
        let mut changed = false;
        for i in 0..rank.saturating_sub(1) {
            let di = a.at(i, i).clone();
            let dj = a.at(i + 1, i + 1).clone();
            if (&dj % &di).is_zero() {
                continue;
            }
            changed = true;
            // Put dj into column i (col_i += col_{i+1}), then replace the
            // 2x2 block diag(di, dj) by diag(gcd, lcm) with unimodular
            // transforms built from the extended gcd.
            a.col_sub(i, i + 1, &BigInt::from(-1));
            v.col_sub(i, i + 1, &BigInt::from(-1));
            let e = num_integer::Integer::extended_gcd(&di, &dj);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let di_g = &di / &g;
            let dj_g = &dj / &g;
            // [[x, y], [-dj/g, di/g]] has determinant x*di/g + y*dj/g = 1.
            a.row_transform_2x2(i, i + 1, &x, &y, &(-&dj_g), &di_g);
            u.row_transform_2x2(i, i + 1, &x, &y, &(-&dj_g), &di_g);
            // Row i is now (g, y*dj); clear the off-diagonal entry.
            let q = a.at(i, i + 1) / &g;
            a.col_sub(i + 1, i, &q);
            v.col_sub(i + 1, i, &q);
            debug_assert!(a.at(i, i + 1).is_zero());
            debug_assert!(a.at(i + 1, i).is_zero());
            if a.at(i, i).is_negative() {
                a.negate_row(i);
                u.negate_row(i);
            }
            if a.at(i + 1, i + 1).is_negative() {
                a.negate_row(i + 1);
                u.negate_row(i + 1);
            }
        }
        if !changed {
            break;
        }
    }
    SmithDecomposition {
        u: u.to_sparse(),
        d: a.to_sparse(),
        v: v.to_sparse(),
        rank,
    }
}

/// Fraction-free determinant (Bareiss), used to check unimodularity of the
/// transforms and as a small utility.
pub fn determinant(m: &SparseIntMatrix) -> Option<BigInt> {
    if m.rows() != m.cols() {
        return None;
    }
    let n = m.rows();
    if n == 0 {
        return Some(BigInt::one());
    }
    let mut a = Dense::zero(n, n);
    for (i, j, v) in m.entries() {
        a.set(*i, *j, v.clone());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.at(k, k).is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a.at(i, k).is_zero()) else {
                return Some(BigInt::zero());
            };
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                a.set(i, j, &t / &prev);
            }
        }
        for i in k + 1..n {
            a.set(i, k, BigInt::zero());
        }
        prev = a.at(k, k).clone();
    }
    Some(sign * a.at(n - 1, n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(rows: usize, cols: usize, vals: &[(usize, usize, i64)]) -> SparseIntMatrix {
        SparseIntMatrix::new(
            rows,
            cols,
            vals.iter()
                .map(|&(i, j, v)| (i, j, BigInt::from(v)))
                .collect(),
        )
        .unwrap()
    }

    fn check(m: &SparseIntMatrix) {
        let s = smith_normal_form(m);
        // Reconstruction.
        let prod = s.u.mul(m).mul(&s.v);
        assert_eq!(prod, s.d, "u*m*v = d");
        // Diagonal with a chain.
        for (i, j, _) in s.d.entries() {
            assert_eq!(i, j);
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "chain {f:?}");
        }
        for d in &f {
            assert!(d > &BigInt::zero());
        }
        // Unimodular transforms.
        assert_eq!(determinant(&s.u).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(&s.v).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn diag_2_3_gives_1_6() {
        let m = sparse(2, 2, &[(0, 0, 2), (1, 1, 3)]);
        let s = smith_normal_form(&m);
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        check(&m);
    }

    #[test]
    fn zero_and_identity() {
        let z = sparse(3, 2, &[]);
        let s = smith_normal_form(&z);
        assert_eq!(s.rank, 0);
        assert!(s.invariant_factors().is_empty());
        check(&z);

        let id = SparseIntMatrix::identity(4);
        let s = smith_normal_form(&id);
        assert_eq!(s.rank, 4);
        assert!(s.invariant_factors().iter().all(|d| d == &BigInt::one()));
        check(&id);
    }

    #[test]
    fn mixed_rectangular() {
        let m = sparse(3, 4, &[(0, 0, 4), (0, 2, 6), (1, 1, 2), (2, 3, 9), (2, 0, 3)]);
        check(&m);
        let m = sparse(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 4), (1, 1, 2)]);
        check(&m);
        let s = smith_normal_form(&m);
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(6)]
        );
    }

    #[test]
    fn determinant_matches_cofactor_small() {
        let m = sparse(3, 3, &[(0, 0, 2), (0, 1, 1), (1, 1, 3), (1, 2, 5), (2, 0, 7), (2, 2, 1)]);
        // 2*(3*1-5*0) - 1*(0*1-5*7) + 0 = 6 + 35 = 41
        assert_eq!(determinant(&m).unwrap(), BigInt::from(41));
    }
}
