//! Permutations on `{0, ..., degree-1}`.
//!
//! Composition is left-to-right: `(a * b)(x) = b(a(x))`, matching the right
//! action `x^(ab) = (x^a)^b`. Points are `u16`; degree is capped at
//! [`MAX_DEGREE`] so untrusted inputs cannot force huge allocations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard upper bound on the degree of any permutation handled by this crate.
pub const MAX_DEGREE: usize = 8192;

/// A permutation stored as its image array: `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<u16>,
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.cycles())
    }
}

impl Perm {
    /// Identity on `degree` points.
    pub fn identity(degree: u16) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from an image array, validating bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidGroup("degree 0 permutation".into()));
        }
        if n > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "degree {n} exceeds the supported maximum {MAX_DEGREE}"
            )));
        }
        let mut seen = vec![false; n];
        for &img in &images {
            let img = img as usize;
            if img >= n || seen[img] {
                return Err(Error::InvalidGroup(
                    "image array is not a permutation of 0..degree".into(),
                ));
            }
            seen[img] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `degree` points from disjoint-cycle notation.
    /// Points missing from `cycles` are fixed.
    pub fn from_cycles(degree: u16, cycles: &[&[u16]]) -> Result<Self> {
        let mut images: Vec<u16> = (0..degree).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                if from >= degree || to >= degree {
                    return Err(Error::InvalidGroup("cycle point out of range".into()));
                }
                images[from as usize] = to;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> u16 {
        self.images.len() as u16
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u16) -> u16 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self * other`: apply `self` first, then `other`.
    pub fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.images.len(), other.images.len());
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u16;
        }
        Perm { images }
    }

    /// Conjugate `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for x in 0..self.images.len() {
            // (g^-1 s g)(g(x)) = g(s(x))
            images[g.images[x] as usize] = g.images[self.images[x] as usize];
        }
        Perm { images }
    }

    /// Commutator `self^-1 * other^-1 * self * other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .mul(&other.inverse())
            .mul(self)
            .mul(other)
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.images.len()];
        let mut ord: u64 = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// `self` raised to the `k`-th power (k may be negative).
    pub fn pow(&self, k: i64) -> Perm {
        let n = self.degree();
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Perm::identity(n);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            k >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length >= 2, each rotated to start at its minimum,
    /// sorted by first point.
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u16);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Smallest moved point, if any.
    pub fn first_moved_point(&self) -> Option<u16> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &v)| i != v as usize)
            .map(|(i, _)| i as u16)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_left_to_right() {
        // a = (0 1 2), b = (0 1): (a*b)(0) = b(a(0)) = b(1) = 0.
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab.apply(0), 0);
        assert_eq!(ab.apply(1), 2);
        assert_eq!(ab.apply(2), 1);
    }

    #[test]
    fn inverse_and_order() {
        let a = Perm::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(a.order(), 6);
        assert!(a.mul(&a.inverse()).is_identity());
        assert!(a.pow(6).is_identity());
        assert_eq!(a.pow(-1), a.inverse());
    }

    #[test]
    fn conjugation_convention() {
        let a = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let g = Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        // g^-1 (0 1) g = (0^g 1^g) = (2 3)
        let c = a.conjugate_by(&g);
        assert_eq!(c, Perm::from_cycles(4, &[&[2, 3]]).unwrap());
        assert_eq!(c, g.inverse().mul(&a).mul(&g));
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![2, 0]).is_err());
        assert!(Perm::from_images(vec![]).is_err());
    }

    #[test]
    fn identity_is_lex_minimum() {
        // any non-identity permutation is lexicographically above the identity
        let id = Perm::identity(5);
        let a = Perm::from_cycles(5, &[&[3, 4]]).unwrap();
        assert!(id < a);
    }
}
