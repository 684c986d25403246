//! Deterministic constructors for the groups the library is exercised on:
//! cyclic, dihedral, quaternion, elementary abelian, alternating and
//! symmetric families, two- and three-dimensional linear groups over small
//! fields, direct products, and semidirect products of an abelian normal
//! part by a small acting group. Every constructor checks the order of
//! what it built against the closed formula, and a name parser turns
//! strings like "PSL(2,7)" or "C4xC2" into build recipes.

pub mod gf;
mod lie_out;
mod matrix_groups;

pub use lie_out::{
    almost_simple_multiplier, out_group, out_group_parts, outdiag_group, parse_descriptor,
    verify_out_lemma, AlmostSimpleMultiplier, LieOutDescriptor, OutLemmaVerdict, OutParts,
};
pub use matrix_groups::{pgl2, psl2, psl3_4, sl2, MAX_MATRIX_Q};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::linalg::modm::factorize;
use crate::perm::{Perm, MAX_DEGREE};

/// A reproducible recipe for building a permutation group.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    Alternating(u16),
    Symmetric(u16),
    Cyclic(u64),
    /// Dihedral group of order 2n on n points (n = 2 gives the Klein four
    /// group on 4 points).
    Dihedral(u64),
    Quaternion8,
    /// Elementary abelian p^k on p*k points.
    ElementaryAbelian(u64, u32),
    Sl2(u64),
    Psl2(u64),
    Pgl2(u64),
    Psl3_4,
    Product(Vec<GroupSpec>),
    /// Abelian normal part with the given invariant factors, acted on by
    /// the second group through one integer matrix per generator.
    SemidirectAbelian {
        factors: Vec<u64>,
        acting: Box<GroupSpec>,
        action: Vec<Vec<Vec<u64>>>,
    },
}

fn cycle_perm(degree: u16, shift_start: u16, len: u16) -> Perm {
    let mut images: Vec<u16> = (0..degree).collect();
    for i in 0..len {
        images[(shift_start + i) as usize] = shift_start + (i + 1) % len;
    }
    Perm::from_images(images).expect("cycle is a permutation")
}

pub fn cyclic(n: u64) -> Result<PermGroup> {
    if n == 0 || n > MAX_DEGREE as u64 {
        return Err(Error::Unsupported(format!(
            "cyclic order {n} outside 1..={MAX_DEGREE}"
        )));
    }
    let n = n as u16;
    if n == 1 {
        return Ok(PermGroup::trivial(1));
    }
    PermGroup::new(n, vec![cycle_perm(n, 0, n)])
}

pub fn dihedral(n: u64) -> Result<PermGroup> {
    if n < 2 || n > MAX_DEGREE as u64 {
        return Err(Error::Unsupported(format!(
            "dihedral half-order {n} outside 2..={MAX_DEGREE}"
        )));
    }
    let g = if n == 2 {
        PermGroup::new(
            4,
            vec![
                Perm::from_images(vec![1, 0, 2, 3]).unwrap(),
                Perm::from_images(vec![0, 1, 3, 2]).unwrap(),
            ],
        )?
    } else {
        let n16 = n as u16;
        let rot = cycle_perm(n16, 0, n16);
        let refl =
            Perm::from_images((0..n16).map(|i| (n16 - i) % n16).collect()).unwrap();
        PermGroup::new(n16, vec![rot, refl])?
    };
    check_order_u64(g, 2 * n, "dihedral")
}

/// The quaternion group in its regular representation, points ordered
/// 1, i, -1, -i, j, k, -j, -k.
pub fn quaternion8() -> PermGroup {
    PermGroup::new(
        8,
        vec![
            Perm::from_images(vec![1, 2, 3, 0, 7, 4, 5, 6]).unwrap(),
            Perm::from_images(vec![4, 5, 6, 7, 2, 3, 0, 1]).unwrap(),
        ],
    )
    .expect("quaternion generators")
}

pub fn elementary_abelian(p: u64, k: u32) -> Result<PermGroup> {
    let pf = if p < 2 { Vec::new() } else { factorize(p) };
    if pf.len() != 1 || pf[0].1 != 1 {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    if k == 0 || p * k as u64 > MAX_DEGREE as u64 {
        return Err(Error::Unsupported(format!(
            "elementary abelian {p}^{k} needs {} points, cap is {MAX_DEGREE}",
            p * k as u64
        )));
    }
    let degree = (p * k as u64) as u16;
    let gens = (0..k)
        .map(|i| cycle_perm(degree, i as u16 * p as u16, p as u16))
        .collect();
    let g = PermGroup::new(degree, gens)?;
    let expect = BigUint::from(p).pow(k);
    if g.order()? != expect {
        return Err(Error::HypothesisViolated(format!(
            "elementary abelian {p}^{k}: order mismatch"
        )));
    }
    Ok(g)
}

pub fn alternating(n: u16) -> Result<PermGroup> {
    if !(3..=9).contains(&n) {
        return Err(Error::Unsupported(format!(
            "alternating degree {n} outside 3..=9"
        )));
    }
    let three = cycle_perm(n, 0, 3);
    let gens = if n == 3 {
        vec![three]
    } else if n % 2 == 1 {
        vec![three, cycle_perm(n, 0, n)]
    } else {
        vec![three, cycle_perm(n, 1, n - 1)]
    };
    let g = PermGroup::new(n, gens)?;
    check_order(g, factorial(n) / 2u32, "alternating")
}

pub fn symmetric(n: u16) -> Result<PermGroup> {
    if !(2..=9).contains(&n) {
        return Err(Error::Unsupported(format!(
            "symmetric degree {n} outside 2..=9"
        )));
    }
    let swap = Perm::from_cycles(n, &[&[0, 1]]).unwrap();
    let gens = if n == 2 {
        vec![swap]
    } else {
        vec![swap, cycle_perm(n, 0, n)]
    };
    let g = PermGroup::new(n, gens)?;
    check_order(g, factorial(n), "symmetric")
}

fn factorial(n: u16) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

fn check_order(g: PermGroup, expect: BigUint, what: &str) -> Result<PermGroup> {
    let got = g.order()?;
    if got != expect {
        return Err(Error::HypothesisViolated(format!(
            "{what}: constructed order {got}, expected {expect}"
        )));
    }
    Ok(g)
}

fn check_order_u64(g: PermGroup, expect: u64, what: &str) -> Result<PermGroup> {
    check_order(g, BigUint::from(expect), what)
}

/// The two groups side by side on disjoint points.
pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let da = a.degree();
    let db = b.degree();
    if da as u32 + db as u32 > MAX_DEGREE as u32 {
        return Err(Error::Unsupported(format!(
            "product degree {} exceeds {MAX_DEGREE}",
            da as u32 + db as u32
        )));
    }
    let degree = da + db;
    let mut gens = Vec::new();
    for g in a.generators() {
        let mut images: Vec<u16> = g.images().to_vec();
        images.extend(da..degree);
        gens.push(Perm::from_images(images)?);
    }
    for g in b.generators() {
        let mut images: Vec<u16> = (0..da).collect();
        images.extend(g.images().iter().map(|&x| x + da));
        gens.push(Perm::from_images(images)?);
    }
    PermGroup::new(degree, gens)
}

/// Pieces of a semidirect product built by [`abelian_semidirect_parts`]:
/// the group itself plus the generators of its abelian normal part and of
/// the complement, as elements of the group.
pub struct SemidirectParts {
    pub group: PermGroup,
    pub normal_generators: Vec<Perm>,
    pub complement_generators: Vec<Perm>,
}

/// Builds the regular representation of A ⋉ O for an abelian group O with
/// the given invariant factors and an acting permutation group A, whose
/// k-th generator acts through the integer matrix `action[k]` (columns are
/// images of the standard generators of O, coordinates row-wise). The
/// action is verified to be by automorphisms and to respect every relation
/// of A; the constructed order is checked to be |O| * |A|.
pub fn abelian_semidirect_parts(
    factors: &[u64],
    a: &PermGroup,
    action: &[Vec<Vec<u64>>],
    cap: u64,
) -> Result<SemidirectParts> {
    if factors.iter().any(|&f| f < 2) {
        return Err(Error::Unsupported(
            "normal-part factors must be at least 2".into(),
        ));
    }
    if action.len() != a.generators().len() {
        return Err(Error::Unsupported(format!(
            "{} action matrices for {} generators",
            action.len(),
            a.generators().len()
        )));
    }
    let rank = factors.len();
    let o_size: u64 = factors.iter().product();
    let at = a.table(cap)?;
    let na = at.n() as u64;
    let degree_u64 = o_size * na;
    if degree_u64 > MAX_DEGREE as u64 {
        return Err(Error::TooLarge {
            order: degree_u64,
            cap: MAX_DEGREE as u64,
        });
    }
    let degree = degree_u64 as u16;

    let decode = |mut o: u64| -> Vec<u64> {
        let mut c = Vec::with_capacity(rank);
        for &f in factors {
            c.push(o % f);
            o /= f;
        }
        c
    };
    let encode = |c: &[u64]| -> u64 {
        c.iter()
            .zip(factors)
            .rev()
            .fold(0, |acc, (&x, &f)| acc * f + x)
    };

    // One permutation of the O-index set per acting generator.
    let mut sigma: Vec<Vec<u64>> = Vec::with_capacity(action.len());
    for mat in action {
        if mat.len() != rank || mat.iter().any(|row| row.len() != rank) {
            return Err(Error::Unsupported(format!(
                "action matrix must be {rank}x{rank}"
            )));
        }
        for (i, row) in mat.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                if (entry * factors[j]) % factors[i] != 0 {
                    return Err(Error::NotAutomorphism(format!(
                        "matrix entry ({i},{j}) does not respect the factor orders"
                    )));
                }
            }
        }
        let mut map = vec![0u64; o_size as usize];
        let mut seen = vec![false; o_size as usize];
        for o in 0..o_size {
            let c = decode(o);
            let image: Vec<u64> = (0..rank)
                .map(|i| {
                    c.iter()
                        .enumerate()
                        .fold(0, |acc, (j, &x)| (acc + x * mat[i][j]) % factors[i])
                })
                .collect();
            let io = encode(&image);
            map[o as usize] = io;
            if std::mem::replace(&mut seen[io as usize], true) {
                return Err(Error::NotAutomorphism(
                    "action matrix is not invertible".into(),
                ));
            }
        }
        sigma.push(map);
    }

    // phi[a] is the permutation of O induced by the table element a,
    // propagated along the Cayley graph and then checked on every edge so
    // the assignment is a genuine homomorphism.
    let gen_indices = at.generator_indices().to_vec();
    let id_map: Vec<u64> = (0..o_size).collect();
    let mut phi: Vec<Option<Vec<u64>>> = vec![None; na as usize];
    phi[0] = Some(id_map);
    let mut queue = vec![0u32];
    while let Some(x) = queue.pop() {
        for (k, &gi) in gen_indices.iter().enumerate() {
            let y = at.mul(x, gi);
            if phi[y as usize].is_none() {
                let px = phi[x as usize].as_ref().unwrap();
                let composed: Vec<u64> =
                    (0..o_size).map(|o| px[sigma[k][o as usize] as usize]).collect();
                phi[y as usize] = Some(composed);
                queue.push(y);
            }
        }
    }
    let phi: Vec<Vec<u64>> = phi
        .into_iter()
        .map(|m| m.ok_or_else(|| Error::InvalidGroup("acting table not connected".into())))
        .collect::<Result<_>>()?;
    for x in 0..na as u32 {
        for (k, &gi) in gen_indices.iter().enumerate() {
            let y = at.mul(x, gi);
            for o in 0..o_size as usize {
                if phi[y as usize][o] != phi[x as usize][sigma[k][o] as usize] {
                    return Err(Error::NotAutomorphism(
                        "action does not respect the relations of the acting group".into(),
                    ));
                }
            }
        }
    }

    let point = |o: u64, ai: u32| -> u16 { (o * na + ai as u64) as u16 };
    let mut normal_generators = Vec::new();
    for j in 0..rank {
        let mut unit = vec![0u64; rank];
        unit[j] = 1;
        let mut images = vec![0u16; degree as usize];
        for o in 0..o_size {
            let c = decode(o);
            for ai in 0..na as u32 {
                // Right multiplication by (e_j, 1): the O-part gains the
                // image of e_j under the automorphism attached to ai.
                let shifted = phi[ai as usize][encode(&unit) as usize];
                let sc = decode(shifted);
                let sum: Vec<u64> = c
                    .iter()
                    .zip(&sc)
                    .zip(factors)
                    .map(|((&x, &y), &f)| (x + y) % f)
                    .collect();
                images[point(o, ai) as usize] = point(encode(&sum), ai);
            }
        }
        normal_generators.push(Perm::from_images(images)?);
    }
    let mut complement_generators = Vec::new();
    for &gi in &gen_indices {
        let mut images = vec![0u16; degree as usize];
        for o in 0..o_size {
            for ai in 0..na as u32 {
                images[point(o, ai) as usize] = point(o, at.mul(ai, gi));
            }
        }
        complement_generators.push(Perm::from_images(images)?);
    }
    let mut gens = normal_generators.clone();
    gens.extend(complement_generators.iter().cloned());
    let group = PermGroup::new(degree.max(1), gens)?;
    let group = check_order_u64(group, o_size * na, "semidirect product")?;
    Ok(SemidirectParts {
        group,
        normal_generators,
        complement_generators,
    })
}

pub fn abelian_semidirect(
    factors: &[u64],
    a: &PermGroup,
    action: &[Vec<Vec<u64>>],
    cap: u64,
) -> Result<PermGroup> {
    Ok(abelian_semidirect_parts(factors, a, action, cap)?.group)
}

/// Builds the group a spec describes.
pub fn build(spec: &GroupSpec) -> Result<PermGroup> {
    match spec {
        GroupSpec::Alternating(n) => alternating(*n),
        GroupSpec::Symmetric(n) => symmetric(*n),
        GroupSpec::Cyclic(n) => cyclic(*n),
        GroupSpec::Dihedral(n) => dihedral(*n),
        GroupSpec::Quaternion8 => Ok(quaternion8()),
        GroupSpec::ElementaryAbelian(p, k) => elementary_abelian(*p, *k),
        GroupSpec::Sl2(q) => sl2(*q),
        GroupSpec::Psl2(q) => psl2(*q),
        GroupSpec::Pgl2(q) => pgl2(*q),
        GroupSpec::Psl3_4 => psl3_4(),
        GroupSpec::Product(parts) => {
            if parts.is_empty() {
                return Err(Error::Unsupported("empty product".into()));
            }
            let mut acc = build(&parts[0])?;
            for part in &parts[1..] {
                acc = direct_product(&acc, &build(part)?)?;
            }
            Ok(acc)
        }
        GroupSpec::SemidirectAbelian {
            factors,
            acting,
            action,
        } => abelian_semidirect(factors, &build(acting)?, action, 1 << 16),
    }
}

/// Parses a group name: a product of factors joined by `x`, where each
/// factor is one of `A<n>`, `S<n>`, `C<n>`, `D<n>` (dihedral of order 2n),
/// `Q8`, `E(p,k)` (elementary abelian), `SL(2,q)`, `PSL(2,q)`, `PGL(2,q)`,
/// or `PSL(3,4)`.
pub fn parse_group_name(name: &str) -> Result<GroupSpec> {
    let trimmed = name.trim();
    if trimmed.is_empty() {
        return Err(Error::Unsupported("empty group name".into()));
    }
    // Split on 'x' only at positions outside parentheses.
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in trimmed.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| {
                    Error::Unsupported(format!("unbalanced parentheses in {trimmed:?}"))
                })?
            }
            'x' if depth == 0 => {
                parts.push(&trimmed[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Unsupported(format!(
            "unbalanced parentheses in {trimmed:?}"
        )));
    }
    parts.push(&trimmed[start..]);
    let specs = parts
        .iter()
        .map(|p| parse_factor(p.trim()))
        .collect::<Result<Vec<_>>>()?;
    if specs.len() == 1 {
        Ok(specs.into_iter().next().unwrap())
    } else {
        Ok(GroupSpec::Product(specs))
    }
}

fn parse_factor(s: &str) -> Result<GroupSpec> {
    let bad = |why: &str| Error::Unsupported(format!("cannot parse group name {s:?}: {why}"));
    if s.len() < 2 || !s.is_ascii() {
        return Err(bad("expected an ASCII family name"));
    }
    if s == "Q8" {
        return Ok(GroupSpec::Quaternion8);
    }
    if let Some(args) = s.strip_prefix("E(").and_then(|r| r.strip_suffix(')')) {
        let (p, k) = parse_pair(args).ok_or_else(|| bad("expected E(p,k)"))?;
        return Ok(GroupSpec::ElementaryAbelian(p, k as u32));
    }
    for (prefix, tag) in [("PSL(", "psl"), ("PGL(", "pgl"), ("SL(", "sl")] {
        if let Some(args) = s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) {
            let (dim, q) = parse_pair(args).ok_or_else(|| bad("expected (dimension,q)"))?;
            return match (tag, dim) {
                ("psl", 2) => Ok(GroupSpec::Psl2(q)),
                ("pgl", 2) => Ok(GroupSpec::Pgl2(q)),
                ("sl", 2) => Ok(GroupSpec::Sl2(q)),
                ("psl", 3) if q == 4 => Ok(GroupSpec::Psl3_4),
                _ => Err(bad("only dimension 2 (any small q) and PSL(3,4) exist")),
            };
        }
    }
    let (head, digits) = s.split_at(1);
    let n: u64 = digits.parse().map_err(|_| bad("expected an integer"))?;
    match head {
        "A" => Ok(GroupSpec::Alternating(n as u16)),
        "S" => Ok(GroupSpec::Symmetric(n as u16)),
        "C" => Ok(GroupSpec::Cyclic(n)),
        "D" => Ok(GroupSpec::Dihedral(n)),
        _ => Err(bad("unknown family letter")),
    }
}

fn parse_pair(args: &str) -> Option<(u64, u64)> {
    let (a, b) = args.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Named groups of order at most 16, used as the cross-check corpus for
/// the cohomology engine.
pub fn small_group_suite() -> Vec<(String, GroupSpec)> {
    let names = [
        "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C12", "C16",
        "C2xC2", "E(2,3)", "E(2,4)", "C4xC2", "C4xC4", "C8xC2", "C6xC2", "E(3,2)",
        "S3", "D4", "D5", "D6", "D7", "D8",
        "Q8", "A4", "D4xC2", "Q8xC2",
    ];
    names
        .iter()
        .map(|n| (n.to_string(), parse_group_name(n).expect("suite name parses")))
        .collect()
}

#[cfg(test)]
mod tests;
