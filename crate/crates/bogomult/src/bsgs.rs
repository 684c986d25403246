//! Stabilizer chains (base and strong generating set).
//!
//! Deterministic Schreier-Sims: generators are processed in input order,
//! orbits are extended (never rebuilt) so the chain is a pure function of the
//! input generator list. A work budget aborts construction on adversarial
//! inputs (huge symmetric groups from untrusted JSON) instead of hanging.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Elementary work units (point images computed) allowed during construction.
const BUILD_BUDGET: u64 = 4_000_000_000;

/// Transversal representatives are cached as full permutations while
/// `orbit_len * degree` stays below this; beyond it, paths are walked.
const REP_CACHE_LIMIT: usize = 4_000_000;

struct Level {
    base: u16,
    gens: Vec<Perm>,
    gen_invs: Vec<Perm>,
    /// Orbit of `base` under `gens`, in discovery order; `orbit[0] == base`.
    orbit: Vec<u16>,
    /// Schreier tree: `tree[p] = Some((parent, gen_idx))` for p in orbit, p != base.
    tree: Vec<Option<(u16, u32)>>,
    /// Cached transversal reps (`reps[p]` maps base -> p) when small enough.
    reps: Option<Vec<Option<Perm>>>,
    /// Watermark of processed Schreier generators: all pairs
    /// (orbit position < .0, gen index < .1) are done.
    processed: (usize, usize),
}

impl Level {
    fn new(base: u16, degree: u16) -> Self {
        let mut tree = vec![None; degree as usize];
        tree[base as usize] = Some((base, u32::MAX));
        let cache = (degree as usize) <= REP_CACHE_LIMIT;
        let mut reps = None;
        if cache {
            let mut r: Vec<Option<Perm>> = vec![None; degree as usize];
            r[base as usize] = Some(Perm::identity(degree));
            reps = Some(r);
        }
        Level {
            base,
            gens: Vec::new(),
            gen_invs: Vec::new(),
            orbit: vec![base],
            tree,
            reps,
            processed: (0, 0),
        }
    }

    fn in_orbit(&self, p: u16) -> bool {
        self.tree[p as usize].is_some()
    }

    /// Transversal representative mapping `base` to `p` (must be in orbit).
    fn rep(&self, p: u16, degree: u16) -> Perm {
        if let Some(reps) = &self.reps {
            return reps[p as usize].clone().expect("point in orbit");
        }
        // walk the Schreier tree
        let mut path = Vec::new();
        let mut x = p;
        while x != self.base {
            let (parent, gi) = self.tree[x as usize].expect("point in orbit");
            path.push(gi);
            x = parent;
        }
        let mut u = Perm::identity(degree);
        for &gi in path.iter().rev() {
            u = u.mul(&self.gens[gi as usize]);
        }
        u
    }

    /// Multiplies `g` by the inverse transversal rep of `p`: returns `g * u_p^-1`.
    fn mul_rep_inv(&self, g: Perm, p: u16) -> Perm {
        let mut g = g;
        let mut x = p;
        while x != self.base {
            let (parent, gi) = self.tree[x as usize].expect("point in orbit");
            g = g.mul(&self.gen_invs[gi as usize]);
            x = parent;
        }
        g
    }
}

pub struct Bsgs {
    degree: u16,
    levels: Vec<Level>,
    order: BigUint,
}

impl Bsgs {
    pub fn build(degree: u16, gens: &[Perm]) -> Result<Bsgs> {
        let mut chain = Bsgs {
            degree,
            levels: Vec::new(),
            order: BigUint::one(),
        };
        let mut budget: u64 = BUILD_BUDGET;
        for g in gens {
            if !g.is_identity() {
                chain.insert(g.clone(), 0, &mut budget)?;
            }
        }
        chain.order = chain
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product();
        Ok(chain)
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<u16> {
        self.levels.iter().map(|l| l.base).collect()
    }

    fn spend(budget: &mut u64, units: u64) -> Result<()> {
        if *budget < units {
            return Err(Error::Unsupported(
                "stabilizer chain construction exceeded its work budget".into(),
            ));
        }
        *budget -= units;
        Ok(())
    }

    /// Sifts `g` through levels `start..`; returns the residue and the level
    /// index it got stuck at (`levels.len()` means it passed every level).
    fn sift_from(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            if g.is_identity() {
                return (g, l);
            }
            let beta = g.apply(level.base);
            if !level.in_orbit(beta) {
                return (g, l);
            }
            g = level.mul_rep_inv(g, beta);
        }
        (g, self.levels.len())
    }

    pub fn is_member(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.sift_from(g.clone(), 0);
        residue.is_identity()
    }

    /// Inserts a non-identity element known to fix the base points of all
    /// levels before `at`, then restores the chain invariant.
    fn insert(&mut self, g: Perm, at: usize, budget: &mut u64) -> Result<()> {
        let (residue, mut stuck) = self.sift_from(g, at);
        Self::spend(budget, (self.levels.len() as u64 + 1) * self.degree as u64 * 4)?;
        if residue.is_identity() {
            return Ok(());
        }
        if stuck == self.levels.len() {
            let base = residue.first_moved_point().expect("non-identity");
            self.levels.push(Level::new(base, self.degree));
            stuck = self.levels.len() - 1;
        }
        // The residue fixes the base points of levels at..stuck, so it belongs
        // to the strong generating set of each of those stabilizers.
        let inv = residue.inverse();
        for l in at..=stuck {
            self.levels[l].gen_invs.push(inv.clone());
            self.levels[l].gens.push(residue.clone());
            self.extend_orbit(l, budget)?;
        }
        for l in (at..=stuck).rev() {
            self.close_level(l, budget)?;
        }
        Ok(())
    }

    /// Extends the orbit of `level` with the current generator list, keeping
    /// existing tree edges stable.
    fn extend_orbit(&mut self, li: usize, budget: &mut u64) -> Result<()> {
        let degree = self.degree;
        let level = &mut self.levels[li];
        let mut qi = 0;
        while qi < level.orbit.len() {
            let p = level.orbit[qi];
            for gi in 0..level.gens.len() {
                let q = level.gens[gi].apply(p);
                if !level.in_orbit(q) {
                    level.tree[q as usize] = Some((p, gi as u32));
                    level.orbit.push(q);
                    if let Some(reps) = &mut level.reps {
                        let up = reps[p as usize].as_ref().expect("parent in orbit");
                        reps[q as usize] = Some(up.mul(&level.gens[gi]));
                    }
                }
            }
            qi += 1;
        }
        if level
            .reps
            .as_ref()
            .map(|_| level.orbit.len() * degree as usize > REP_CACHE_LIMIT)
            .unwrap_or(false)
        {
            level.reps = None; // fall back to tree walks beyond the cache limit
        }
        Self::spend(
            budget,
            level.orbit.len() as u64 * level.gens.len() as u64 * degree as u64,
        )
    }

    /// Processes unprocessed Schreier generators at `level`, recursing deeper.
    /// Inserts recurse strictly below `li`, so one delta pass settles the level.
    fn close_level(&mut self, li: usize, budget: &mut u64) -> Result<()> {
        loop {
            let (po, pg) = self.levels[li].processed;
            let (o, g) = (self.levels[li].orbit.len(), self.levels[li].gens.len());
            if po == o && pg == g {
                return Ok(());
            }
            self.levels[li].processed = (o, g);
            let degree = self.degree;
            for bi in 0..o {
                for gi in 0..g {
                    if bi < po && gi < pg {
                        continue;
                    }
                    let schreier = {
                        let level = &self.levels[li];
                        let p = level.orbit[bi];
                        let x = &level.gens[gi];
                        let u_p = level.rep(p, degree);
                        let target = x.apply(p);
                        // u_p * x * u_target^-1 fixes the base point
                        level.mul_rep_inv(u_p.mul(x), target)
                    };
                    Self::spend(budget, 4 * degree as u64 * (1 + self.levels.len() as u64))?;
                    debug_assert_eq!(
                        schreier.apply(self.levels[li].base),
                        self.levels[li].base
                    );
                    if !schreier.is_identity() {
                        self.insert(schreier, li + 1, budget)?;
                    }
                }
            }
        }
    }

    /// All group elements, in an order determined by the chain. Callers sort.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Perm>> {
        let order = self.order();
        if order > &BigUint::from(cap) {
            let order_u64 = u64::try_from(order).unwrap_or(u64::MAX);
            return Err(Error::TooLarge {
                order: order_u64,
                cap,
            });
        }
        let mut elems = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.orbit.len());
            for h in &elems {
                for &beta in &level.orbit {
                    next.push(h.mul(&level.rep(beta, self.degree)));
                }
            }
            elems = next;
        }
        debug_assert_eq!(BigUint::from(elems.len()), *self.order());
        Ok(elems)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closure(degree: u16, gens: &[Perm]) -> Vec<Perm> {
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = vec![Perm::identity(degree)];
        seen.insert(Perm::identity(degree));
        while let Some(p) = queue.pop() {
            for g in gens {
                let q = p.mul(g);
                if seen.insert(q.clone()) {
                    queue.push(q);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn check_group(degree: u16, gens: Vec<Perm>) {
        let brute = closure(degree, &gens);
        let chain = Bsgs::build(degree, &gens).unwrap();
        assert_eq!(chain.order(), &BigUint::from(brute.len()));
        let mut enumerated = chain.enumerate(brute.len() as u64).unwrap();
        enumerated.sort();
        enumerated.dedup();
        assert_eq!(enumerated, brute);
        for p in &brute {
            assert!(chain.is_member(p));
        }
        // a permutation moving a point outside every orbit cannot be a member
        let outside = Perm::from_cycles(degree + 2, &[&[degree, degree + 1]]).unwrap();
        assert!(!chain.is_member(&outside));
    }

    #[test]
    fn chain_matches_brute_closure() {
        let s4 = vec![
            Perm::from_cycles(4, &[&[0, 1]]).unwrap(),
            Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
        ];
        check_group(4, s4);

        let d4 = vec![
            Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
            Perm::from_cycles(4, &[&[0, 2]]).unwrap(),
        ];
        check_group(4, d4);

        let a5 = vec![
            Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
            Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
        ];
        check_group(5, a5);

        // intransitive: C6 x C2 acting on 6 + 2 points
        let prod = vec![
            Perm::from_cycles(8, &[&[0, 1, 2, 3, 4, 5]]).unwrap(),
            Perm::from_cycles(8, &[&[6, 7]]).unwrap(),
        ];
        check_group(8, prod);
    }

    #[test]
    fn a9_order() {
        let gens = vec![
            Perm::from_cycles(9, &[&[0, 1, 2]]).unwrap(),
            Perm::from_cycles(9, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]).unwrap(),
        ];
        let chain = Bsgs::build(9, &gens).unwrap();
        assert_eq!(chain.order(), &BigUint::from(181_440u64));
    }

    #[test]
    fn trivial_group() {
        let chain = Bsgs::build(3, &[]).unwrap();
        assert_eq!(chain.order(), &BigUint::one());
        assert_eq!(chain.enumerate(10).unwrap(), vec![Perm::identity(3)]);
    }
}
