//! Second cohomology H^2(G, Z/m) with trivial action, for finite permutation
//! groups, together with the multiplier quotient and the maps between such
//! groups: restriction to subgroups, pullback along automorphisms, and the
//! product formula for semidirect products with a perfect normal factor.
//!
//! The cocycle lattice is solved in generator-slice coordinates (slice.rs):
//! for each prime power q dividing m, the anchored identities stream through
//! an echelon whose pivot matrix is then diagonalized, turning the lattice
//! into an explicit coordinate system. Two quotient views are kept per
//! engine: cocycles modulo coboundaries (the full H^2), and the same with
//! the lifted-homomorphism image also killed (the multiplier view, which
//! matches the quotient of H^2(G, Q/Z)-classes realizable at level m).

pub mod cochain;
pub(crate) mod slice;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::linalg::modm::{
    add_mod, factorize, inv_mod, mod_snf, mul_mod, pow_u64, Echelon, ModSnf,
};
use crate::linalg::{crt_pair, span_structure, subgroup_killed_by, AbGroupMap, FinAbGroup};
use crate::perm::Perm;
use crate::perm_ops::{abelianization, is_perfect};
use crate::table::GroupTable;
use cochain::Cochain2;
use slice::SliceTree;

/// Largest group order a direct cohomology run will accept by default.
/// Larger groups must be routed through subgroup or product strategies.
pub const DIRECT_ORDER_CAP: u64 = 400;

fn mat_vec_mod(m: &[u64], dim: usize, x: &[u64], q: u64) -> Vec<u64> {
    debug_assert_eq!(m.len(), dim * dim);
    debug_assert_eq!(x.len(), dim);
    let mut out = vec![0u64; dim];
    for (i, o) in out.iter_mut().enumerate() {
        let row = &m[i * dim..(i + 1) * dim];
        let mut acc = 0u64;
        for (&a, &b) in row.iter().zip(x) {
            if a != 0 && b != 0 {
                acc = add_mod(acc, mul_mod(a, b, q), q);
            }
        }
        *o = acc;
    }
    out
}

/// The cocycle-slice lattice at one prime power q = p^e dividing the modulus.
struct PrimeCohom {
    p: u64,
    e: u32,
    q: u64,
    /// Normal form of the anchored-identity pivot matrix; its kernel is the
    /// lattice of cocycle slices mod q.
    zsnf: ModSnf,
    /// Independent kernel generators (slices); the i-th has order p^zord[i].
    zgens: Vec<Vec<u64>>,
    zord: Vec<u32>,
}

/// Coordinates of a slice in the kernel-generator basis, or None when the
/// slice is not a cocycle slice mod q.
fn z_coords(pc: &PrimeCohom, slice_q: &[u64]) -> Option<Vec<u64>> {
    let y = pc.zsnf.diag_coords(slice_q);
    let mut out = Vec::with_capacity(pc.zgens.len());
    for (i, &yi) in y.iter().enumerate() {
        let w = pc.zsnf.col_val(i);
        if w == 0 {
            if yi != 0 {
                return None;
            }
        } else {
            let dv = pow_u64(pc.p, pc.e - w);
            if yi % dv != 0 {
                return None;
            }
            out.push((yi / dv) % pow_u64(pc.p, w));
        }
    }
    Some(out)
}

/// One prime's share of a quotient view: the cocycle coordinates modulo a
/// relation span (always the per-generator orders, plus coboundaries, plus
/// optionally the lifted-homomorphism image).
struct ViewPrime {
    /// Kernel-generator count at this prime.
    kk: usize,
    /// Working exponent: coordinates are transformed modulo qq = p^ee.
    qq: u64,
    /// Row transform of the relation normal form and its inverse, kk x kk.
    u2: Vec<u64>,
    u2_inv: Vec<u64>,
    /// Factor exponent at each transformed position (0 = killed).
    vals2: Vec<u32>,
    /// Surviving positions, largest factor first; slot t here aligns with
    /// slot t of every other prime in the combined invariant chain.
    pos_desc: Vec<usize>,
}

/// A quotient of the cocycle lattice with materialized generator cocycles:
/// generator j represents the j-th invariant factor of `structure`.
struct View {
    structure: FinAbGroup,
    primes: Vec<ViewPrime>,
    desc_len: usize,
    gens: Vec<Cochain2>,
}

/// Coordinates of a cocycle's class in a view. The caller guarantees the
/// table is a genuine cocycle mod the engine modulus; a slice outside the
/// lattice is reported as NoSolution.
fn view_coords(
    tree: &SliceTree,
    primes: &[PrimeCohom],
    view: &View,
    c: &Cochain2,
    n: usize,
) -> Result<Vec<u64>> {
    let mut slots: Vec<(u64, u64)> = vec![(0, 1); view.desc_len];
    for (pc, vp) in primes.iter().zip(&view.primes) {
        if vp.pos_desc.is_empty() {
            continue;
        }
        let slice_q = tree.slice_of(c.values(), n, pc.q);
        let a = z_coords(pc, &slice_q).ok_or(Error::NoSolution(pc.q as i64))?;
        let y2 = mat_vec_mod(&vp.u2, vp.kk, &a, vp.qq);
        for (t, &pos) in vp.pos_desc.iter().enumerate() {
            let pm = pow_u64(pc.p, vp.vals2[pos]);
            let (cur, m) = slots[t];
            slots[t] = (crt_pair(cur, m, y2[pos] % pm, pm), m * pm);
        }
    }
    for (t, &(_, m)) in slots.iter().enumerate() {
        debug_assert_eq!(
            m,
            view.structure.invariant_factors()[view.desc_len - 1 - t],
            "slot moduli must follow the invariant chain"
        );
    }
    let mut coords: Vec<u64> = slots.into_iter().map(|(v, _)| v).collect();
    coords.reverse();
    Ok(coords)
}

/// Builds a view: quotient of the slice lattice by the given per-prime
/// relation lists (coordinates in the kernel-generator basis), with one
/// generator cocycle materialized per invariant factor.
fn build_view(
    table: &GroupTable,
    tree: &SliceTree,
    primes: &[PrimeCohom],
    rels: &[Vec<Vec<u64>>],
    modulus: u64,
) -> Result<View> {
    let n = table.n();
    let mut vps = Vec::with_capacity(primes.len());
    let mut parts: Vec<(u64, Vec<u32>)> = Vec::with_capacity(primes.len());
    for (pc, rel_list) in primes.iter().zip(rels) {
        let kk = pc.zgens.len();
        if kk == 0 {
            vps.push(ViewPrime {
                kk: 0,
                qq: 1,
                u2: Vec::new(),
                u2_inv: Vec::new(),
                vals2: Vec::new(),
                pos_desc: Vec::new(),
            });
            parts.push((pc.p, Vec::new()));
            continue;
        }
        let ee = *pc.zord.iter().max().expect("kk > 0");
        let qq = pow_u64(pc.p, ee);
        // Relation matrix over (Z/qq)^kk: per-generator orders, then the
        // supplied relations.
        let ncols = kk + rel_list.len();
        let mut rt = vec![0u64; kk * ncols];
        for j in 0..kk {
            rt[j * ncols + j] = pow_u64(pc.p, pc.zord[j]) % qq;
        }
        for (c, r) in rel_list.iter().enumerate() {
            debug_assert_eq!(r.len(), kk);
            for i in 0..kk {
                rt[i * ncols + kk + c] = r[i] % qq;
            }
        }
        let snf2 = mod_snf(&rt, kk, ncols, pc.p, ee);
        let vals2: Vec<u32> = (0..kk).map(|i| snf2.diag_vals[i]).collect();
        let mut pos_desc: Vec<usize> = (0..kk).filter(|&i| vals2[i] > 0).collect();
        pos_desc.sort_by(|&a, &b| vals2[b].cmp(&vals2[a]).then(a.cmp(&b)));
        let exps: Vec<u32> = pos_desc.iter().map(|&i| vals2[i]).collect();
        vps.push(ViewPrime {
            kk,
            qq,
            u2: snf2.u,
            u2_inv: snf2.u_inv,
            vals2,
            pos_desc,
        });
        parts.push((pc.p, exps));
    }
    let structure = FinAbGroup::from_primary_parts(&parts);
    let desc_len = structure.rank();
    let mut view = View {
        structure,
        primes: vps,
        desc_len,
        gens: Vec::new(),
    };

    // Materialize one cocycle per invariant factor: at each prime that
    // contributes to the slot, pull the transformed basis vector back
    // through u2_inv to slice coordinates and lift into Z/modulus with
    // weight modulus/q, so the prime components combine without mixing.
    // The weight is a unit mod q, so its inverse is folded into the
    // coefficients to leave the q-component itself unscaled.
    for j in 0..view.desc_len {
        let t = view.desc_len - 1 - j;
        let mut slice = vec![0u64; tree.vars];
        for (pc, vp) in primes.iter().zip(&view.primes) {
            if t >= vp.pos_desc.len() {
                continue;
            }
            let pos = vp.pos_desc[t];
            let uinv = inv_mod((modulus / pc.q) % pc.q, pc.q);
            let a: Vec<u64> = (0..vp.kk)
                .map(|i| mul_mod(vp.u2_inv[i * vp.kk + pos], uinv, pc.q))
                .collect();
            let mut sq = vec![0u64; tree.vars];
            for (i, g) in pc.zgens.iter().enumerate() {
                let c = a[i] % pc.q;
                if c == 0 {
                    continue;
                }
                for (o, &gv) in sq.iter_mut().zip(g) {
                    *o = add_mod(*o, mul_mod(c, gv, pc.q), pc.q);
                }
            }
            let w = (modulus / pc.q) % modulus;
            for (o, &sv) in slice.iter_mut().zip(&sq) {
                *o = add_mod(*o, mul_mod(w, sv, modulus), modulus);
            }
        }
        let values = tree.propagate(table, &slice, modulus);
        let c = Cochain2::from_values(n, modulus, values)?;
        c.verify_cocycle(table)?;
        let coords = view_coords(tree, primes, &view, &c, n)?;
        let mut expect = vec![0u64; view.desc_len];
        expect[j] = 1;
        assert_eq!(coords, expect, "generator cocycle must hit its own slot");
        view.gens.push(c);
    }
    Ok(view)
}

/// Shared computation behind every view of H^2(G, Z/m).
struct Engine {
    group: PermGroup,
    modulus: u64,
    n: usize,
    table_cap: u64,
    tree: SliceTree,
    primes: Vec<PrimeCohom>,
    h2: View,
    m: View,
    /// Structure of the lifted-homomorphism image inside the full H^2.
    bock_structure: FinAbGroup,
    /// Its generators, as coordinates in the full H^2 view.
    bock_classes: Vec<Vec<u64>>,
}

impl Engine {
    fn build(group: &PermGroup, modulus: u64, cap: u64) -> Result<Engine> {
        if modulus < 2 || modulus >= 1 << 31 {
            return Err(Error::Unsupported(format!(
                "coefficient modulus {modulus} out of range"
            )));
        }
        let order = group.order_u64()?;
        if order > cap {
            return Err(Error::TooLarge { order, cap });
        }
        let g = group.clone();
        let table_cap = order.max(1);
        let table = g.table(table_cap)?;
        let n = table.n();
        let tree = SliceTree::build(table);
        let fac = factorize(modulus);

        let mut echelons: Vec<Echelon> = fac
            .iter()
            .map(|&(p, e)| Echelon::new(tree.vars, p, e))
            .collect();
        tree.stream_rows(table, &mut echelons);
        let mut primes = Vec::with_capacity(fac.len());
        for (&(p, e), ech) in fac.iter().zip(&echelons) {
            let piv = ech.pivot_matrix();
            let zsnf = mod_snf(&piv, ech.rank(), tree.vars, p, e);
            let (zgens, zord): (Vec<_>, Vec<_>) = zsnf.kernel_gens().into_iter().unzip();
            primes.push(PrimeCohom {
                p,
                e,
                q: pow_u64(p, e),
                zsnf,
                zgens,
                zord,
            });
        }
        drop(echelons);

        // Coboundary relations: the indicator 1-cochains span all of B^2.
        let mut b2: Vec<Vec<Vec<u64>>> = Vec::with_capacity(primes.len());
        for pc in &primes {
            let mut list = Vec::with_capacity(n.saturating_sub(1));
            for x in 1..n {
                let s = tree.coboundary_slice(table, x as u32, pc.q);
                list.push(z_coords(pc, &s).expect("coboundaries are cocycles"));
            }
            b2.push(list);
        }

        // Lifted-homomorphism relations: for each coordinate map of the
        // abelianization and each prime power q = p^e, lift the composite
        // G -> Z/p^c -> Z/q to integers and take the carry table
        // (a_g + a_h - a_gh) / q, a cocycle with values in {0, 1}.
        let ab = abelianization(&g, table_cap)?;
        let abf: Vec<u64> = ab.group().invariant_factors().to_vec();
        let proj: Vec<Vec<u64>> = if abf.is_empty() {
            Vec::new()
        } else {
            table.elems().iter().map(|x| ab.project(x)).collect::<Result<_>>()?
        };
        let mut bock_rel: Vec<Vec<Vec<u64>>> = vec![Vec::new(); primes.len()];
        let mut bock_lift: Vec<(usize, Vec<u64>)> = Vec::new();
        for (pi, pc) in primes.iter().enumerate() {
            for (j, &d) in abf.iter().enumerate() {
                let mut c = 0u32;
                let mut dd = d;
                while dd % pc.p == 0 {
                    dd /= pc.p;
                    c += 1;
                }
                let c = c.min(pc.e);
                if c == 0 {
                    continue;
                }
                let pc_pow = pow_u64(pc.p, c);
                let scale = pc.q / pc_pow;
                let a: Vec<u64> = proj.iter().map(|v| (v[j] % pc_pow) * scale).collect();
                let mut vals = vec![0u64; n * n];
                for gg in 0..n {
                    let ag = a[gg];
                    for hh in 0..n {
                        let gh = table.mul(gg as u32, hh as u32) as usize;
                        let num = ag + a[hh] - a[gh];
                        debug_assert!(num == 0 || num == pc.q);
                        vals[gg * n + hh] = num / pc.q;
                    }
                }
                let beta = Cochain2::from_values(n, pc.q, vals.clone())?;
                beta.verify_cocycle(table)?;
                let sl = tree.slice_of(beta.values(), n, pc.q);
                bock_rel[pi]
                    .push(z_coords(pc, &sl).expect("carry table lands in the lattice"));
                bock_lift.push((pi, vals));
            }
        }

        let m_rels: Vec<Vec<Vec<u64>>> = b2
            .iter()
            .zip(&bock_rel)
            .map(|(b, k)| b.iter().chain(k.iter()).cloned().collect())
            .collect();
        let h2 = build_view(table, &tree, &primes, &b2, modulus)?;
        let m = build_view(table, &tree, &primes, &m_rels, modulus)?;

        // Classes of the lifted-homomorphism generators inside the full
        // view: lift each carry table from Z/q to Z/modulus (the other
        // prime components vanish, the q-component is scaled by a unit).
        let mut bock_classes = Vec::with_capacity(bock_lift.len());
        for (pi, vals) in &bock_lift {
            let w = modulus / primes[*pi].q;
            let lifted: Vec<u64> = vals.iter().map(|&v| v * w).collect();
            let c = Cochain2::from_values(n, modulus, lifted)?;
            bock_classes.push(view_coords(&tree, &primes, &h2, &c, n)?);
        }
        let bock_structure = span_structure(&h2.structure, &bock_classes)?;

        Ok(Engine {
            group: g,
            modulus,
            n,
            table_cap,
            tree,
            primes,
            h2,
            m,
            bock_structure,
            bock_classes,
        })
    }

    fn table(&self) -> &GroupTable {
        self.group
            .table(self.table_cap)
            .expect("table built during construction")
    }

    /// Index map of the automorphism given by generator images, checked for
    /// bijectivity and multiplicativity over the whole table.
    fn automorphism_map(&self, images: &[Perm]) -> Result<Vec<u32>> {
        let table = self.table();
        if images.len() != self.group.generators().len() {
            return Err(Error::NotAutomorphism(
                "one image per generator is required".into(),
            ));
        }
        let img: Vec<u32> = images
            .iter()
            .map(|p| {
                table
                    .required_index(p)
                    .map_err(|_| Error::NotAutomorphism("image lies outside the group".into()))
            })
            .collect::<Result<_>>()?;
        let sigma = self.tree.extend_by_images(table, &img);
        let mut seen = vec![false; self.n];
        for &s in &sigma {
            if seen[s as usize] {
                return Err(Error::NotAutomorphism("images do not act bijectively".into()));
            }
            seen[s as usize] = true;
        }
        let nn = self.n as u32;
        for i in 0..nn {
            for j in 0..nn {
                if sigma[table.mul(i, j) as usize]
                    != table.mul(sigma[i as usize], sigma[j as usize])
                {
                    return Err(Error::NotAutomorphism(
                        "images do not respect the multiplication".into(),
                    ));
                }
            }
        }
        Ok(sigma)
    }
}

/// H^2(G, Z/m) or its multiplier quotient, with materialized generator
/// cocycles and coordinate maps. Cheap to clone; views share the engine.
#[derive(Clone)]
pub struct CohomGroup {
    engine: Arc<Engine>,
    reduced: bool,
}

impl CohomGroup {
    fn view(&self) -> &View {
        if self.reduced {
            &self.engine.m
        } else {
            &self.engine.h2
        }
    }

    pub fn group(&self) -> &PermGroup {
        &self.engine.group
    }

    pub fn modulus(&self) -> u64 {
        self.engine.modulus
    }

    /// Whether classes are taken modulo the lifted-homomorphism image.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The abelian group of classes in the active view.
    pub fn presentation(&self) -> &FinAbGroup {
        &self.view().structure
    }

    /// Cocycles representing the generators of the active view; the j-th
    /// has class coordinates e_j.
    pub fn generator_cocycles(&self) -> &[Cochain2] {
        &self.view().gens
    }

    /// The full cocycles-mod-coboundaries structure, regardless of view.
    pub fn h2_structure(&self) -> &FinAbGroup {
        &self.engine.h2.structure
    }

    /// The multiplier quotient's structure, regardless of view.
    pub fn multiplier_structure(&self) -> &FinAbGroup {
        &self.engine.m.structure
    }

    /// Structure of the lifted-homomorphism image inside the full view.
    pub fn bockstein_image(&self) -> &FinAbGroup {
        &self.engine.bock_structure
    }

    /// Its generators as coordinate vectors of the full view.
    pub fn bockstein_classes(&self) -> &[Vec<u64>] {
        &self.engine.bock_classes
    }

    /// The same engine presented as the multiplier quotient.
    pub fn reduced_view(&self) -> CohomGroup {
        CohomGroup {
            engine: Arc::clone(&self.engine),
            reduced: true,
        }
    }

    /// The same engine presented as the full cocycles-mod-coboundaries view.
    pub fn full_view(&self) -> CohomGroup {
        CohomGroup {
            engine: Arc::clone(&self.engine),
            reduced: false,
        }
    }

    /// Class coordinates of a cocycle in the active view. The table is
    /// verified against the full cocycle identity first.
    pub fn class_coords(&self, c: &Cochain2) -> Result<Vec<u64>> {
        if c.modulus() != self.engine.modulus || c.group_order() != self.engine.n {
            return Err(Error::Unsupported(
                "cochain does not match the group and modulus".into(),
            ));
        }
        c.verify_cocycle(self.engine.table())?;
        view_coords(
            &self.engine.tree,
            &self.engine.primes,
            self.view(),
            c,
            self.engine.n,
        )
    }

    /// A representative cocycle for the given class coordinates.
    pub fn class_rep(&self, coords: &[u64]) -> Result<Cochain2> {
        let view = self.view();
        if coords.len() != view.structure.rank() {
            return Err(Error::Unsupported(
                "coordinate count does not match the presentation".into(),
            ));
        }
        let mut acc = Cochain2::zero(self.engine.n, self.engine.modulus);
        for (gen, &c) in view.gens.iter().zip(coords) {
            acc.add_scaled(gen, c)?;
        }
        Ok(acc)
    }
}

/// H^2(G, Z/m) with trivial action, under the default order cap.
pub fn h2_mod(g: &PermGroup, modulus: u64) -> Result<CohomGroup> {
    h2_mod_with_cap(g, modulus, DIRECT_ORDER_CAP)
}

pub fn h2_mod_with_cap(g: &PermGroup, modulus: u64, cap: u64) -> Result<CohomGroup> {
    Ok(CohomGroup {
        engine: Arc::new(Engine::build(g, modulus, cap)?),
        reduced: false,
    })
}

/// The multiplier M(G): classes of H^2(G, Z/|G|) modulo the
/// lifted-homomorphism image, which is exactly the part that dies in
/// H^2(G, Q/Z). Every class order divides |G|, so no level is lost.
pub fn schur_multiplier(g: &PermGroup) -> Result<CohomGroup> {
    schur_multiplier_with_cap(g, DIRECT_ORDER_CAP)
}

pub fn schur_multiplier_with_cap(g: &PermGroup, cap: u64) -> Result<CohomGroup> {
    let order = g.order_u64()?;
    Ok(CohomGroup {
        engine: Arc::new(Engine::build(g, order.max(2), cap)?),
        reduced: true,
    })
}

/// Structure of the image of the connecting map from degree-one cohomology
/// inside H^2(G, Z/m).
pub fn bockstein_image(g: &PermGroup, modulus: u64) -> Result<FinAbGroup> {
    Ok(h2_mod(g, modulus)?.bockstein_image().clone())
}

/// The multiplier view of a subgroup at the ambient modulus, the target of
/// class restriction. Keeping the modulus of `src` (rather than |B|) makes
/// restricted classes comparable across subgroups; the multiplier quotient
/// is unchanged because |B| divides the ambient order.
pub fn subgroup_multiplier(src: &CohomGroup, sub: &PermGroup, cap: u64) -> Result<CohomGroup> {
    if !src.group().contains_group(sub)? {
        return Err(Error::NotMember);
    }
    Ok(CohomGroup {
        engine: Arc::new(Engine::build(sub, src.modulus(), cap)?),
        reduced: true,
    })
}

/// Restricts a class of `src` to the group of `dst` (a subgroup of src's
/// group at the same modulus) and returns its coordinates in dst's view.
pub fn restrict_class(src: &CohomGroup, coords: &[u64], dst: &CohomGroup) -> Result<Vec<u64>> {
    if dst.modulus() != src.modulus() {
        return Err(Error::Unsupported(
            "restriction requires matching moduli".into(),
        ));
    }
    let rep = src.class_rep(coords)?;
    let st = src.engine.table();
    let dt = dst.engine.table();
    let nb = dt.n();
    let mut into_src = Vec::with_capacity(nb);
    for i in 0..nb {
        into_src.push(st.required_index(dt.elem(i as u32))? as usize);
    }
    let mut vals = vec![0u64; nb * nb];
    for i in 0..nb {
        for j in 0..nb {
            vals[i * nb + j] = rep.value(into_src[i], into_src[j]);
        }
    }
    dst.class_coords(&Cochain2::from_values(nb, src.modulus(), vals)?)
}

/// The action of automorphisms on the active view of `m`: for each
/// automorphism (given by generator images) the map [c] -> [c composed with
/// the automorphism on both arguments], as a matrix on the generators.
pub fn aut_action_on_m(m: &CohomGroup, autos: &[Vec<Perm>]) -> Result<Vec<AbGroupMap>> {
    let pres = m.presentation().clone();
    let mut out = Vec::with_capacity(autos.len());
    for images in autos {
        let sigma = m.engine.automorphism_map(images)?;
        let mut cols = Vec::with_capacity(m.generator_cocycles().len());
        for gen in m.generator_cocycles() {
            let pulled = gen.pullback(&sigma)?;
            cols.push(m.class_coords(&pulled)?);
        }
        out.push(AbGroupMap::new(pres.clone(), pres.clone(), cols)?);
    }
    Ok(out)
}

/// The fixed subgroup of the active view of `m` under all the given maps:
/// the intersection of the kernels of (map - identity). Returns its
/// structure and generators in view coordinates.
pub fn invariant_subgroup(
    m: &CohomGroup,
    maps: &[AbGroupMap],
) -> Result<(FinAbGroup, Vec<Vec<u64>>)> {
    let pres = m.presentation();
    let rank = pres.rank();
    let mut conditions = Vec::new();
    for map in maps {
        if map.source() != pres || map.target() != pres {
            return Err(Error::Unsupported(
                "action maps must act on the given cohomology group".into(),
            ));
        }
        for j in 0..rank {
            let t = pres.invariant_factors()[j];
            let row: Vec<u64> = (0..rank)
                .map(|i| {
                    let v = map.columns()[i][j] % t;
                    if i == j {
                        (v + t - 1) % t
                    } else {
                        v
                    }
                })
                .collect();
            conditions.push((row, t));
        }
    }
    subgroup_killed_by(pres, &conditions)
}

/// Result of the product formula for N semidirect H with N perfect.
pub struct SemidirectMultiplier {
    /// M(N)^H x M(H).
    pub multiplier: FinAbGroup,
    /// The invariant part M(N)^H.
    pub normal_invariant: FinAbGroup,
    /// M(H).
    pub complement_multiplier: FinAbGroup,
    /// Whether a direct computation on the host confirmed the formula.
    pub checked_directly: bool,
}

/// Multiplier of `host` = normal semidirect complement, computed from the
/// parts: M(host) = M(normal)^complement x M(complement), valid because a
/// perfect normal factor admits no homomorphisms to the coefficients. The
/// conjugation action is read off inside `host`. When the host itself fits
/// under the cap, a direct computation is run and compared.
pub fn semidirect_multiplier(
    host: &PermGroup,
    normal: &PermGroup,
    complement: &PermGroup,
    cap: u64,
) -> Result<SemidirectMultiplier> {
    if !host.contains_group(normal)? || !host.contains_group(complement)? {
        return Err(Error::NotMember);
    }
    let no = normal.order()?;
    let co = complement.order()?;
    if no.clone() * co.clone() != host.order()? {
        return Err(Error::HypothesisViolated(
            "factor orders do not multiply to the host order".into(),
        ));
    }
    let c_elems = complement.elements(cap)?;
    for h in &c_elems {
        if !h.is_identity() && normal.is_member(h)? {
            return Err(Error::HypothesisViolated(
                "factors intersect beyond the identity".into(),
            ));
        }
    }
    for g in host.generators() {
        for x in normal.generators() {
            if !normal.is_member(&x.conjugate_by(g))? {
                return Err(Error::HypothesisViolated(
                    "first factor is not normal in the host".into(),
                ));
            }
        }
    }
    if !is_perfect(normal)? {
        return Err(Error::HypothesisViolated(
            "product formula requires a perfect normal factor".into(),
        ));
    }

    let mn = schur_multiplier_with_cap(normal, cap)?;
    let autos: Vec<Vec<Perm>> = complement
        .generators()
        .iter()
        .map(|h| {
            normal
                .generators()
                .iter()
                .map(|x| x.conjugate_by(h))
                .collect()
        })
        .collect();
    let maps = aut_action_on_m(&mn, &autos)?;
    let (normal_invariant, _) = invariant_subgroup(&mn, &maps)?;
    let mh = schur_multiplier_with_cap(complement, cap)?;
    let complement_multiplier = mh.presentation().clone();
    let multiplier = normal_invariant.direct_sum(&complement_multiplier);

    let mut checked_directly = false;
    if host.order_u64()? <= cap {
        let direct = schur_multiplier_with_cap(host, cap)?;
        if direct.presentation() != &multiplier {
            return Err(Error::HypothesisViolated(format!(
                "product formula gives {} but the direct computation gives {}",
                multiplier,
                direct.presentation()
            )));
        }
        checked_directly = true;
    }
    Ok(SemidirectMultiplier {
        multiplier,
        normal_invariant,
        complement_multiplier,
        checked_directly,
    })
}
