//! Central extensions of a permutation group by a cyclic group, built from
//! a normalized 2-cocycle, with derived-subgroup and commutator search.

use crate::cohomology::cochain::Cochain2;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::table::GroupTable;

/// Largest number of extension elements the search routines accept.
pub const EXTENSION_ELEMENT_LIMIT: u64 = 1 << 21;

/// The group of pairs (g, s) with g in the base group and s in Z/m, under
/// (g, s)(h, t) = (gh, s + t + gamma(g, h)). The cocycle is normalized, so
/// (identity, 0) is the identity. Elements are packed as g * m + s; the
/// fiber {(identity, s)} is central, and the projection to the base drops
/// the fiber component.
pub struct CentralExtension {
    base: PermGroup,
    modulus: u64,
    cocycle: Cochain2,
    base_order: u64,
}

/// Builds the extension after verifying the cocycle identity on the base
/// group's multiplication table.
pub fn central_extension(
    base: &PermGroup,
    gamma: &Cochain2,
    cap: u64,
) -> Result<CentralExtension> {
    let base = base.clone();
    let table = base.table(cap)?;
    if gamma.group_order() != table.n() {
        return Err(Error::InvalidGroup(format!(
            "cocycle is over {} elements, group has {}",
            gamma.group_order(),
            table.n()
        )));
    }
    gamma.verify_cocycle(table)?;
    let base_order = table.n() as u64;
    let size = base_order
        .checked_mul(gamma.modulus())
        .ok_or_else(|| Error::TooLarge {
            order: u64::MAX,
            cap: EXTENSION_ELEMENT_LIMIT,
        })?;
    if size > EXTENSION_ELEMENT_LIMIT {
        return Err(Error::TooLarge {
            order: size,
            cap: EXTENSION_ELEMENT_LIMIT,
        });
    }
    Ok(CentralExtension {
        modulus: gamma.modulus(),
        cocycle: gamma.clone(),
        base_order,
        base,
    })
}

impl CentralExtension {
    pub fn base(&self) -> &PermGroup {
        &self.base
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base_order(&self) -> u64 {
        self.base_order
    }

    pub fn size(&self) -> u64 {
        self.base_order * self.modulus
    }

    fn table(&self) -> &GroupTable {
        self.base
            .table(u64::MAX)
            .expect("table cached at construction")
    }

    pub fn encode(&self, g: u32, s: u64) -> u64 {
        debug_assert!((g as u64) < self.base_order);
        g as u64 * self.modulus + s % self.modulus
    }

    pub fn decode(&self, id: u64) -> (u32, u64) {
        ((id / self.modulus) as u32, id % self.modulus)
    }

    pub fn identity(&self) -> u64 {
        0
    }

    /// Index of the base-group component.
    pub fn project(&self, id: u64) -> u32 {
        (id / self.modulus) as u32
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        let (g, s) = self.decode(x);
        let (h, t) = self.decode(y);
        let gh = self.table().mul(g, h);
        let fiber = (s + t + self.cocycle.value(g as usize, h as usize)) % self.modulus;
        self.encode(gh, fiber)
    }

    pub fn inv(&self, x: u64) -> u64 {
        let (g, s) = self.decode(x);
        let gi = self.table().inv(g);
        let carry = self.cocycle.value(g as usize, gi as usize) % self.modulus;
        let t = (2 * self.modulus - s - carry) % self.modulus;
        self.encode(gi, t)
    }

    pub fn conj(&self, x: u64, g: u64) -> u64 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// x^{-1} y^{-1} x y.
    pub fn commutator(&self, x: u64, y: u64) -> u64 {
        self.mul(self.mul(self.mul(self.inv(x), self.inv(y)), x), y)
    }

    /// The base generators lifted with zero fiber component; together with
    /// the central fiber they generate the extension.
    pub fn lifted_generators(&self) -> Vec<u64> {
        self.table()
            .generator_indices()
            .iter()
            .map(|&g| self.encode(g, 0))
            .collect()
    }

    /// Whether the element commutes with every lifted generator (the fiber
    /// is central by construction, so this settles centrality).
    pub fn is_central(&self, x: u64) -> bool {
        self.lifted_generators()
            .iter()
            .all(|&g| self.mul(x, g) == self.mul(g, x))
    }
}

/// The fiber values s with (identity, s) inside the derived subgroup of the
/// extension, sorted ascending. Central components cancel in commutators,
/// so every commutator of the extension is the commutator of two lifted
/// base elements; the derived subgroup is generated by those.
pub fn derived_central_fiber(e: &CentralExtension) -> Vec<u64> {
    let n = e.base_order() as u32;
    let size = e.size() as usize;
    let mut comms: Vec<u64> = Vec::new();
    for g in 0..n {
        for h in 0..n {
            comms.push(e.commutator(e.encode(g, 0), e.encode(h, 0)));
        }
    }
    comms.sort_unstable();
    comms.dedup();
    // Subgroup closure with greedy generator pruning: a commutator already
    // inside the running closure adds nothing.
    let mut in_sub = vec![false; size];
    in_sub[0] = true;
    let mut members: Vec<u64> = vec![0];
    let mut gens: Vec<u64> = Vec::new();
    for c in comms {
        if in_sub[c as usize] {
            continue;
        }
        gens.push(c);
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = e.mul(x, g);
                if !in_sub[y as usize] {
                    in_sub[y as usize] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    (0..e.modulus())
        .filter(|&s| in_sub[e.encode(0, s) as usize])
        .collect()
}

/// Searches for a pair whose commutator equals the central element z,
/// walking conjugacy classes: the class of r contains rz exactly when some
/// conjugate of r equals rz, and the conjugator u then satisfies
/// [r, u] = z. Returns packed element ids.
pub fn extension_commutator(e: &CentralExtension, z: u64) -> Result<Option<(u64, u64)>> {
    if z >= e.size() {
        return Err(Error::NotMember);
    }
    if !e.is_central(z) {
        return Err(Error::NotCentral);
    }
    let id = e.identity();
    if z == id {
        return Ok(Some((id, id)));
    }
    let size = e.size() as usize;
    let gens = e.lifted_generators();
    // Conjugation orbits under the lifted generators; central fiber
    // elements conjugate trivially, so these orbits are the full classes.
    let mut class_of = vec![u32::MAX; size];
    let mut tree: Vec<Option<(u64, u32)>> = vec![None; size];
    let mut reps: Vec<u64> = Vec::new();
    for start in 0..size as u64 {
        if class_of[start as usize] != u32::MAX {
            continue;
        }
        let cid = reps.len() as u32;
        reps.push(start);
        class_of[start as usize] = cid;
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for (gi, &g) in gens.iter().enumerate() {
                let y = e.conj(x, g);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = cid;
                    tree[y as usize] = Some((x, gi as u32));
                    frontier.push(y);
                }
            }
        }
    }
    for &r in &reps {
        let target = e.mul(r, z);
        if class_of[target as usize] != class_of[r as usize] {
            continue;
        }
        // Rebuild the conjugator from the orbit tree.
        let mut path = Vec::new();
        let mut cur = target;
        while let Some((parent, gen)) = tree[cur as usize] {
            path.push(gen);
            cur = parent;
        }
        debug_assert_eq!(cur, r);
        let mut u = id;
        for &gen in path.iter().rev() {
            u = e.mul(u, gens[gen as usize]);
        }
        if e.commutator(r, u) != z {
            return Err(Error::ReplayFailed(
                "conjugator reconstruction disagrees with the orbit".into(),
            ));
        }
        return Ok(Some((r, u)));
    }
    Ok(None)
}
