//! Materialized element tables: sorted element lists, multiplication and
//! inverse tables, conjugacy classes with conjugator witnesses.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Full n-by-n multiplication tables are only stored below this many
/// elements; larger tables fall back to composing permutations per call.
pub const MULT_TABLE_LIMIT: usize = 3000;

/// Conjugacy classes of a [`GroupTable`], with enough bookkeeping to produce
/// an explicit conjugator from any element back to its class representative.
pub struct Classes {
    /// Member indices per class, each sorted ascending; classes are ordered
    /// by smallest member, so the identity class comes first.
    classes: Vec<Vec<u32>>,
    /// Element index to class index.
    class_of: Vec<u32>,
    /// Conjugation BFS forest: `tree[i] = (parent, gen)` means
    /// `elems[i] = elems[parent]` conjugated by the `gen`-th group generator.
    /// Class roots (the BFS start points) hold `None`.
    tree: Vec<Option<(u32, u32)>>,
}

impl Classes {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class_of(&self, elem: u32) -> u32 {
        self.class_of[elem as usize]
    }

    pub fn members(&self, class: u32) -> &[u32] {
        &self.classes[class as usize]
    }

    /// The smallest member, which is also the BFS root of the class.
    pub fn rep(&self, class: u32) -> u32 {
        self.classes[class as usize][0]
    }
}

/// A fully enumerated group: elements in lexicographic order (identity at
/// index 0), inverse table, optional multiplication table, and cached
/// conjugacy classes.
pub struct GroupTable {
    degree: u16,
    elems: Vec<Perm>,
    inv: Vec<u32>,
    /// Indices of the group generators within `elems`.
    gens: Vec<u32>,
    /// Row-major `n * n` products, present iff `n <= MULT_TABLE_LIMIT`.
    mult: Option<Vec<u32>>,
    classes: OnceLock<Classes>,
}

impl GroupTable {
    pub fn build(group: &PermGroup, cap: u64) -> Result<GroupTable> {
        let elems = group.elements(cap)?;
        let n = elems.len();
        debug_assert!(elems[0].is_identity());
        let idx = |p: &Perm| -> u32 {
            elems
                .binary_search(p)
                .expect("product of group elements is in the group") as u32
        };
        let inv: Vec<u32> = elems.iter().map(|g| idx(&g.inverse())).collect();
        let gens: Vec<u32> = group.generators().iter().map(&idx).collect();
        let mult = if n <= MULT_TABLE_LIMIT {
            let mut t = Vec::with_capacity(n * n);
            for a in &elems {
                for b in &elems {
                    t.push(idx(&a.mul(b)));
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(GroupTable {
            degree: group.degree(),
            elems,
            inv,
            gens,
            mult,
            classes: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn degree(&self) -> u16 {
        self.degree
    }

    pub fn elems(&self) -> &[Perm] {
        &self.elems
    }

    pub fn elem(&self, i: u32) -> &Perm {
        &self.elems[i as usize]
    }

    pub fn generator_indices(&self) -> &[u32] {
        &self.gens
    }

    pub fn has_mult_table(&self) -> bool {
        self.mult.is_some()
    }

    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        self.elems.binary_search(p).ok().map(|i| i as u32)
    }

    pub fn required_index(&self, p: &Perm) -> Result<u32> {
        self.index_of(p).ok_or(Error::NotMember)
    }

    pub fn mul(&self, i: u32, j: u32) -> u32 {
        match &self.mult {
            Some(t) => t[i as usize * self.elems.len() + j as usize],
            None => self
                .index_of(&self.elems[i as usize].mul(&self.elems[j as usize]))
                .expect("closed under multiplication"),
        }
    }

    pub fn inv(&self, i: u32) -> u32 {
        self.inv[i as usize]
    }

    /// Index of `g^-1 * x * g`.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// Index of `x^-1 * y^-1 * x * y`.
    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(self.mul(self.inv(x), self.inv(y)), x), y)
    }

    pub fn order_of(&self, i: u32) -> u64 {
        self.elems[i as usize].order()
    }

    /// Indices of all elements commuting with `elems[i]`.
    pub fn centralizer_indices(&self, i: u32) -> Vec<u32> {
        let a = &self.elems[i as usize];
        self.elems
            .iter()
            .enumerate()
            .filter(|(_, b)| a.mul(b) == b.mul(a))
            .map(|(j, _)| j as u32)
            .collect()
    }

    /// Indices of elements commuting with every generator.
    pub fn center_indices(&self) -> Vec<u32> {
        self.elems
            .iter()
            .enumerate()
            .filter(|(_, b)| {
                self.gens
                    .iter()
                    .all(|&g| self.elems[g as usize].mul(b) == b.mul(&self.elems[g as usize]))
            })
            .map(|(j, _)| j as u32)
            .collect()
    }

    /// Conjugacy classes, computed once by conjugation orbits under the
    /// generators starting from the smallest unvisited element.
    pub fn conjugacy_classes(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let n = self.elems.len();
            let mut class_of = vec![u32::MAX; n];
            let mut tree: Vec<Option<(u32, u32)>> = vec![None; n];
            let mut classes: Vec<Vec<u32>> = Vec::new();
            for start in 0..n as u32 {
                if class_of[start as usize] != u32::MAX {
                    continue;
                }
                let cid = classes.len() as u32;
                class_of[start as usize] = cid;
                let mut members = vec![start];
                let mut frontier = vec![start];
                while let Some(x) = frontier.pop() {
                    for (gi, &g) in self.gens.iter().enumerate() {
                        let y = self
                            .index_of(
                                &self.elems[x as usize].conjugate_by(&self.elems[g as usize]),
                            )
                            .expect("conjugate stays in the group");
                        if class_of[y as usize] == u32::MAX {
                            class_of[y as usize] = cid;
                            tree[y as usize] = Some((x, gi as u32));
                            members.push(y);
                            frontier.push(y);
                        }
                    }
                }
                members.sort_unstable();
                classes.push(members);
            }
            Classes {
                classes,
                class_of,
                tree,
            }
        })
    }

    /// A permutation `u` with `rep.conjugate_by(u) == elems[i]`, where `rep`
    /// is the representative of `i`'s conjugacy class.
    pub fn conjugator_from_rep(&self, i: u32) -> Perm {
        let classes = self.conjugacy_classes();
        let mut path = Vec::new();
        let mut cur = i;
        while let Some((parent, gen)) = classes.tree[cur as usize] {
            path.push(gen);
            cur = parent;
        }
        debug_assert_eq!(cur, classes.rep(classes.class_of(i)));
        let mut u = Perm::identity(self.degree);
        for &gen in path.iter().rev() {
            u = u.mul(&self.elems[self.gens[gen as usize] as usize]);
        }
        u
    }
}
