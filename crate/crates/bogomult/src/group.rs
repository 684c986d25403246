//! Finite permutation groups given by generators, with cached stabilizer
//! chains and element tables.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bsgs::Bsgs;
use crate::error::{Error, Result};
use crate::perm::{Perm, MAX_DEGREE};
use crate::table::GroupTable;

/// Default bound on group order for operations that enumerate all elements.
pub const ENUM_CAP: u64 = 5000;

/// Hard bound on materialized element lists, used by the large verification
/// harnesses. Above this, only stabilizer-chain operations are available.
pub const TABLE_ELEMENT_LIMIT: u64 = 262_144;

/// A finite permutation group on points `0..degree`.
///
/// Generators are stored deduplicated and without the identity. The
/// stabilizer chain and the element table are built lazily and cached; both
/// constructions are deterministic functions of `(degree, generators)`.
pub struct PermGroup {
    degree: u16,
    gens: Vec<Perm>,
    bsgs: OnceLock<std::result::Result<Bsgs, Error>>,
    table: OnceLock<GroupTable>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    degree: u16,
    generators: Vec<Vec<u16>>,
}

impl PermGroup {
    pub fn new(degree: u16, gens: Vec<Perm>) -> Result<Self> {
        if degree == 0 || degree as usize > MAX_DEGREE {
            return Err(Error::InvalidGroup(format!(
                "degree {degree} out of range 1..={MAX_DEGREE}"
            )));
        }
        let mut kept: Vec<Perm> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.degree() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator degree {} does not match group degree {degree}",
                    g.degree()
                )));
            }
            if !g.is_identity() && !kept.contains(&g) {
                kept.push(g);
            }
        }
        Ok(PermGroup {
            degree,
            gens: kept,
            bsgs: OnceLock::new(),
            table: OnceLock::new(),
        })
    }

    /// The trivial group acting on `degree` points.
    pub fn trivial(degree: u16) -> Self {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    pub fn degree(&self) -> u16 {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                if a.mul(b) != b.mul(a) {
                    return false;
                }
            }
        }
        true
    }

    /// The cached stabilizer chain.
    pub fn bsgs(&self) -> Result<&Bsgs> {
        self.bsgs
            .get_or_init(|| Bsgs::build(self.degree, &self.gens))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<BigUint> {
        Ok(self.bsgs()?.order().clone())
    }

    pub fn order_u64(&self) -> Result<u64> {
        let n = self.order()?;
        n.to_u64().ok_or(Error::TooLarge {
            order: u64::MAX,
            cap: u64::MAX,
        })
    }

    pub fn is_member(&self, p: &Perm) -> Result<bool> {
        if p.degree() != self.degree {
            return Ok(false);
        }
        Ok(self.bsgs()?.is_member(p))
    }

    /// Whether every generator of `other` lies in this group.
    pub fn contains_group(&self, other: &PermGroup) -> Result<bool> {
        if other.degree != self.degree {
            return Ok(false);
        }
        for g in &other.gens {
            if !self.is_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the two groups have the same element set.
    pub fn equals(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.degree == other.degree
            && self.order()? == other.order()?
            && self.contains_group(other)?)
    }

    /// All elements in lexicographic order on images; the identity is first.
    /// Refuses groups larger than `cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<Perm>> {
        let mut elems = self.bsgs()?.enumerate(cap)?;
        elems.sort_unstable();
        Ok(elems)
    }

    /// The cached element table. Refuses groups larger than `cap`; a table
    /// built under any cap is shared by later calls.
    pub fn table(&self, cap: u64) -> Result<&GroupTable> {
        let cap = cap.min(TABLE_ELEMENT_LIMIT);
        if let Some(t) = self.table.get() {
            if t.n() as u64 > cap {
                return Err(Error::TooLarge {
                    order: t.n() as u64,
                    cap,
                });
            }
            return Ok(t);
        }
        let order = self.order_u64().map_err(|_| Error::TooLarge {
            order: u64::MAX,
            cap,
        })?;
        if order > cap {
            return Err(Error::TooLarge { order, cap });
        }
        let built = GroupTable::build(self, cap)?;
        Ok(self.table.get_or_init(|| built))
    }

    /// Parses `{"degree": d, "generators": [[images..], ..]}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: GroupJson = serde_json::from_str(s)?;
        Self::from_raw(raw)
    }

    pub fn from_json_slice(bytes: &[u8]) -> Result<Self> {
        let raw: GroupJson = serde_json::from_slice(bytes)?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: GroupJson) -> Result<Self> {
        let mut gens = Vec::with_capacity(raw.generators.len());
        for images in raw.generators {
            gens.push(Perm::from_images(images)?);
        }
        PermGroup::new(raw.degree, gens)
    }

    /// Canonical JSON form; the stored generator order is kept, so the bytes
    /// are a stable function of the constructed group.
    pub fn to_json_string(&self) -> String {
        let raw = GroupJson {
            degree: self.degree,
            generators: self.gens.iter().map(|g| g.images().to_vec()).collect(),
        };
        serde_json::to_string(&raw).expect("group serialization")
    }

    /// Hex SHA-256 of the canonical JSON form, used to key caches and to pin
    /// certificates to their group.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.to_json_string().as_bytes());
        let digest = h.finalize();
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            bsgs: OnceLock::new(),
            table: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.gens)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> PermGroup {
        let a = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        PermGroup::new(4, vec![a, b]).unwrap()
    }

    #[test]
    fn order_and_membership() {
        let g = s4();
        assert_eq!(g.order_u64().unwrap(), 24);
        let three_cycle = Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        assert!(g.is_member(&three_cycle).unwrap());
        assert!(!g.is_member(&Perm::identity(5)).unwrap());
    }

    #[test]
    fn elements_sorted_identity_first() {
        let g = s4();
        let elems = g.elements(ENUM_CAP).unwrap();
        assert_eq!(elems.len(), 24);
        assert!(elems[0].is_identity());
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_cap_enforced() {
        let g = s4();
        match g.elements(10) {
            Err(Error::TooLarge { order: 24, cap: 10 }) => {}
            other => panic!("expected TooLarge, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip_and_hash_stability() {
        let g = s4();
        let s = g.to_json_string();
        let h = PermGroup::from_json_str(&s).unwrap();
        assert!(g.equals(&h).unwrap());
        assert_eq!(g.hash(), h.hash());
        assert_eq!(g.hash().len(), 64);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PermGroup::from_json_str(r#"{"degree":3,"generators":[[0,0,1]]}"#).is_err());
        assert!(PermGroup::from_json_str(r#"{"degree":0,"generators":[]}"#).is_err());
        assert!(PermGroup::from_json_str(r#"{"degree":3,"generators":[[1,0]]}"#).is_err());
        assert!(PermGroup::from_json_str(r#"{"degree":3,"generators":[],"x":1}"#).is_err());
        assert!(PermGroup::from_json_str(r#"{"degree":9000,"generators":[]}"#).is_err());
    }

    #[test]
    fn identity_generators_dropped() {
        let id = Perm::identity(4);
        let g = PermGroup::new(4, vec![id.clone(), id]).unwrap();
        assert!(g.is_trivial());
        assert_eq!(g.order_u64().unwrap(), 1);
        assert_eq!(g.elements(ENUM_CAP).unwrap(), vec![Perm::identity(4)]);
    }
}
