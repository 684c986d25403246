//! Vanishing criteria for the restricted cohomology kernel, commutator
//! witnesses, and the report ladder that routes a group through the
//! cheapest conclusive reduction.
//!
//! The kernel in question consists of the multiplier classes that restrict
//! to zero on every two-generator abelian subgroup. The ladder decides it
//! by, in order: the group being abelian; a normal abelian subgroup with
//! cyclic quotient; every Sylow subgroup either abelian or with vanishing
//! kernel; and finally the direct kernel computation. Every verdict is
//! packaged as a certificate that the independent replayer accepts.

mod extension;

pub use extension::{
    central_extension, derived_central_fiber, extension_commutator, CentralExtension,
    EXTENSION_ELEMENT_LIMIT,
};

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::certificate::{
    prime_order_classes, replay, AbelianGroupWitness, AbelianSylowWitness, BicyclicWitness,
    Certificate, CyclicByAbelianWitness, GroupCommutatorWitness, GroupData, InKernelNote,
    SylowB0Witness, UnresolvedNote, Witness, CERT_VERSION, COVERAGE_CAP,
};
use crate::cohomology::cochain::Cochain2;
use crate::cohomology::{
    restrict_class, schur_multiplier_with_cap, subgroup_multiplier, CohomGroup, DIRECT_ORDER_CAP,
};
use crate::error::{Error, Result};
use crate::group::{PermGroup, TABLE_ELEMENT_LIMIT};
use crate::linalg::modm::factorize;
use crate::linalg::{subgroup_contains, subgroup_killed_by, FinAbGroup};
use crate::perm::Perm;
use crate::perm_ops::{
    abelianization, bicyclic_subgroups, center, coset_action, derived_subgroup, is_metabelian,
    quasisimple_check, sylow_subgroup, QuasisimpleReport,
};

/// Replay ceiling on the subgroup size a nonvanishing witness may carry.
const WITNESS_SUBGROUP_CAP: usize = 128;

/// Ceilings for the subgroup scan of the cyclic-quotient shortcut.
const QUOTIENT_SCAN_ORDER_CAP: u64 = 512;
const QUOTIENT_SCAN_SUBGROUP_CAP: usize = 4096;

fn images(p: &Perm) -> Vec<u16> {
    p.images().to_vec()
}

fn is_p_power(order: u64) -> Option<u64> {
    let f = factorize(order);
    if f.len() == 1 {
        Some(f[0].0)
    } else {
        None
    }
}

/// Searches for a pair of group elements whose commutator is the central
/// element z, by walking conjugacy classes: the class of r contains rz
/// exactly when they are conjugate, and the conjugator u gives [r, u] = z.
/// Returns None when z is not a commutator at all.
pub fn commutator_witness_central(
    g: &PermGroup,
    z: &Perm,
    cap: u64,
) -> Result<Option<(Perm, Perm)>> {
    if !g.is_member(z)? {
        return Err(Error::NotMember);
    }
    for gen in g.generators() {
        if gen.mul(z) != z.mul(gen) {
            return Err(Error::NotCentral);
        }
    }
    if z.is_identity() {
        let id = g.identity();
        return Ok(Some((id.clone(), id)));
    }
    let t = g.table(cap)?;
    let zi = t.required_index(z)?;
    let classes = t.conjugacy_classes();
    for cid in 0..classes.classes().len() as u32 {
        let rep = classes.rep(cid);
        let target = t.mul(rep, zi);
        if classes.class_of(target) != cid {
            continue;
        }
        let u = t.conjugator_from_rep(target);
        let a = t.elem(rep).clone();
        let comm = a.inverse().mul(&u.inverse()).mul(&a).mul(&u);
        if comm != *z {
            return Err(Error::HypothesisViolated(
                "conjugator reconstruction disagrees with the class orbit".into(),
            ));
        }
        return Ok(Some((a, u)));
    }
    Ok(None)
}

/// The multiplier kernel cut out by restriction to every maximal
/// two-generator abelian subgroup, with one witness per handled class.
pub struct BicyclicKernel {
    /// Presentation of the multiplier the kernel lives in.
    pub multiplier: FinAbGroup,
    /// Structure of the kernel.
    pub structure: FinAbGroup,
    /// Kernel generators in multiplier coordinates.
    pub generators: Vec<Vec<u64>>,
    /// Witnesses: nonvanishing restrictions for excluded classes, kernel
    /// notes for generators inside, an unresolved note when coverage had to
    /// be truncated.
    pub witnesses: Vec<Witness>,
    /// Whether a trivial kernel is fully carried by the witnesses.
    pub coverage_complete: bool,
}

enum ClassOutcome {
    Witnessed(BicyclicWitness),
    InKernel,
    TooBig,
}

/// Computes the restricted-kernel subgroup of the multiplier presented by
/// `src`, pooling one congruence per invariant factor of every subgroup's
/// multiplier image.
pub fn bicyclic_kernel(src: &CohomGroup, cap: u64) -> Result<BicyclicKernel> {
    let m_struct = src.presentation().clone();
    if m_struct.is_trivial() {
        return Ok(BicyclicKernel {
            multiplier: m_struct,
            structure: FinAbGroup::trivial(),
            generators: Vec::new(),
            witnesses: Vec::new(),
            coverage_complete: true,
        });
    }
    let rank = m_struct.rank();
    let unit = |j: usize| -> Vec<u64> {
        let mut v = vec![0u64; rank];
        v[j] = 1;
        v
    };
    let fam = bicyclic_subgroups(src.group(), cap)?;
    // For each subgroup: its multiplier view at the ambient modulus and the
    // images of the multiplier generators under restriction.
    let mut subs: Vec<(CohomGroup, Vec<Vec<u64>>)> = Vec::new();
    let mut conditions: Vec<(Vec<u64>, u64)> = Vec::new();
    for h in &fam {
        let dst = subgroup_multiplier(src, h.group(), cap)?;
        if dst.presentation().is_trivial() {
            continue;
        }
        let cols = (0..rank)
            .map(|j| restrict_class(src, &unit(j), &dst))
            .collect::<Result<Vec<_>>>()?;
        let factors = dst.presentation().invariant_factors().to_vec();
        for (t_idx, &t) in factors.iter().enumerate() {
            conditions.push((cols.iter().map(|c| c[t_idx]).collect(), t));
        }
        subs.push((dst, cols));
    }
    let (structure, generators) = subgroup_killed_by(&m_struct, &conditions)?;

    // Classes to witness: every multiplier generator, plus every
    // prime-order class when the kernel is trivial (excluding all of those
    // is exactly a proof of triviality).
    let mut want: Vec<Vec<u64>> = (0..rank).map(unit).collect();
    let mut coverage_complete = true;
    if structure.is_trivial() {
        match prime_order_classes(m_struct.invariant_factors(), COVERAGE_CAP) {
            Some(classes) => {
                for c in classes {
                    if !want.contains(&c) {
                        want.push(c);
                    }
                }
            }
            None => coverage_complete = false,
        }
    }
    let mut witnesses = Vec::new();
    for coords in want {
        match witness_for_class(src, &subs, &coords, cap)? {
            ClassOutcome::Witnessed(w) => witnesses.push(Witness::BicyclicNonvanishing(w)),
            ClassOutcome::InKernel => {
                if !subgroup_contains(&m_struct, &generators, &coords)? {
                    return Err(Error::HypothesisViolated(
                        "a class restricts to zero everywhere but is outside the kernel".into(),
                    ));
                }
                if structure.is_trivial() {
                    return Err(Error::HypothesisViolated(
                        "kernel computed trivial yet a class restricts to zero everywhere".into(),
                    ));
                }
                witnesses.push(Witness::InKernel(InKernelNote { class: coords }));
            }
            ClassOutcome::TooBig => coverage_complete = false,
        }
    }
    if !coverage_complete {
        witnesses.push(Witness::Unresolved(UnresolvedNote {
            note: "some excluded classes have no witness within the replay size caps".into(),
        }));
    }
    Ok(BicyclicKernel {
        multiplier: m_struct,
        structure,
        generators,
        witnesses,
        coverage_complete,
    })
}

/// Builds a nonvanishing witness for the class on the smallest subgroup
/// that sees it, or reports that no subgroup does.
fn witness_for_class(
    src: &CohomGroup,
    subs: &[(CohomGroup, Vec<Vec<u64>>)],
    coords: &[u64],
    cap: u64,
) -> Result<ClassOutcome> {
    let mut any_nonzero = false;
    for (dst, cols) in subs {
        let factors = dst.presentation().invariant_factors();
        let image: Vec<u64> = (0..factors.len())
            .map(|t| {
                let mut acc: u128 = 0;
                for (j, &x) in coords.iter().enumerate() {
                    acc += x as u128 * cols[j][t] as u128;
                }
                (acc % factors[t] as u128) as u64
            })
            .collect();
        if image.iter().all(|&v| v == 0) {
            continue;
        }
        any_nonzero = true;
        let sub_group = dst.group();
        let sub_table = sub_group.table(cap)?;
        let n = sub_table.n();
        if n > WITNESS_SUBGROUP_CAP {
            continue;
        }
        let src_table = src.group().table(cap)?;
        let rep = src.class_rep(coords)?;
        let elements: Vec<Vec<u16>> = (0..n as u32)
            .map(|i| images(sub_table.elem(i)))
            .collect();
        let gens = sub_group.generators();
        if gens.len() != 2 {
            continue;
        }
        let pair = [
            sub_table.required_index(&gens[0])? as usize,
            sub_table.required_index(&gens[1])? as usize,
        ];
        let mut cocycle = Vec::new();
        let mut src_index = Vec::with_capacity(n);
        for i in 0..n as u32 {
            src_index.push(src_table.required_index(sub_table.elem(i))? as usize);
        }
        // Normalize by subtracting the constant coboundary gamma(e, e), so
        // the border of the table is zero and the class is unchanged.
        let m = src.modulus();
        let c0 = rep.value(0, 0);
        for i in 1..n {
            for j in 1..n {
                let v = (rep.value(src_index[i], src_index[j]) + m - c0) % m;
                if v != 0 {
                    cocycle.push((i, j, v));
                }
            }
        }
        return Ok(ClassOutcome::Witnessed(BicyclicWitness {
            class: coords.to_vec(),
            modulus: src.modulus(),
            elements,
            pair,
            cocycle,
        }));
    }
    if any_nonzero {
        Ok(ClassOutcome::TooBig)
    } else {
        Ok(ClassOutcome::InKernel)
    }
}

fn base_certificate(g: &PermGroup, strategy: &str) -> Certificate {
    Certificate {
        version: CERT_VERSION,
        group: g.hash(),
        group_data: GroupData::from_group(g),
        strategy: strategy.into(),
        multiplier: None,
        b0: None,
        witnesses: Vec::new(),
        sub_reports: Vec::new(),
    }
}

/// Direct computation of the restricted kernel, with a replayed
/// certificate. The group order must fit under `cap`.
pub fn bogomolov_multiplier(g: &PermGroup, cap: u64) -> Result<(FinAbGroup, Certificate)> {
    let src = schur_multiplier_with_cap(g, cap)?;
    let kern = bicyclic_kernel(&src, cap)?;
    let mut cert = base_certificate(g, "direct");
    cert.multiplier = Some(kern.multiplier.invariant_factors().to_vec());
    cert.b0 = Some(kern.structure.invariant_factors().to_vec());
    cert.witnesses = kern.witnesses;
    replay(&cert)?;
    Ok((kern.structure, cert))
}

/// Primary decomposition of a finite abelian group, smallest prime first.
pub fn primary_decomposition(a: &FinAbGroup) -> Vec<(u64, FinAbGroup)> {
    factorize(a.exponent())
        .into_iter()
        .map(|(p, _)| (p, a.primary_part(p)))
        .collect()
}

/// The restricted kernel split into its primary parts.
pub fn b0_primary_decomposition(
    g: &PermGroup,
    cap: u64,
) -> Result<(Vec<(u64, FinAbGroup)>, Certificate)> {
    let (b0, cert) = bogomolov_multiplier(g, cap)?;
    Ok((primary_decomposition(&b0), cert))
}

/// A commutator in a cocycle's central extension hitting a nonzero fiber
/// value: base components paired with fiber offsets.
#[derive(Clone, Debug)]
pub struct FiberCommutator {
    pub left: (Perm, u64),
    pub right: (Perm, u64),
    pub value: u64,
}

/// Result of the extension-commutator exclusion test for one class.
#[derive(Clone, Debug)]
pub struct ExclusionCheck {
    /// True when the class is excluded from the kernel.
    pub excluded: bool,
    /// Fiber values of the extension's derived subgroup.
    pub fiber_values: Vec<u64>,
    /// The commutator hitting a nonzero fiber value, when one exists.
    pub witness: Option<FiberCommutator>,
}

/// Tests whether the class of `gamma` is excluded from the restricted
/// kernel: some nonzero central fiber value of the extension built from
/// `gamma` must be a single commutator. Every run is cross-checked against
/// kernel membership computed by restriction; disagreement is an error.
pub fn excludes_from_b0(
    src: &CohomGroup,
    gamma: &Cochain2,
    cap: u64,
) -> Result<ExclusionCheck> {
    let kern = bicyclic_kernel(src, cap)?;
    excludes_from_b0_with(src, gamma, &kern, cap)
}

/// Same as [`excludes_from_b0`] with a precomputed kernel, so a sweep over
/// many classes can share it.
pub fn excludes_from_b0_with(
    src: &CohomGroup,
    gamma: &Cochain2,
    kern: &BicyclicKernel,
    cap: u64,
) -> Result<ExclusionCheck> {
    if gamma.modulus() != src.modulus() {
        return Err(Error::Unsupported(format!(
            "cocycle modulus {} differs from engine modulus {}",
            gamma.modulus(),
            src.modulus()
        )));
    }
    let coords = src.class_coords(gamma)?;
    let e = central_extension(src.group(), gamma, cap)?;
    let fiber = derived_central_fiber(&e);
    let mut witness = None;
    for &s in fiber.iter().filter(|&&s| s != 0) {
        if let Some((x, y)) = extension_commutator(&e, e.encode(0, s))? {
            let t = src.group().table(cap)?;
            let (gx, sx) = e.decode(x);
            let (gy, sy) = e.decode(y);
            witness = Some(FiberCommutator {
                left: (t.elem(gx).clone(), sx),
                right: (t.elem(gy).clone(), sy),
                value: s,
            });
            break;
        }
    }
    let excluded = witness.is_some();
    let member = subgroup_contains(&kern.multiplier, &kern.generators, &coords)?;
    if excluded == member {
        return Err(Error::HypothesisViolated(format!(
            "commutator exclusion ({excluded}) disagrees with kernel membership ({member})"
        )));
    }
    Ok(ExclusionCheck {
        excluded,
        fiber_values: fiber,
        witness,
    })
}

/// Evidence collected for one prime by the Sylow reduction.
pub struct SylowEvidence {
    pub prime: u64,
    pub order: u64,
    pub abelian: bool,
    /// Kernel of the Sylow subgroup when it had to be computed.
    pub b0: Option<FinAbGroup>,
    pub generators: Vec<Perm>,
    pub witness: Witness,
    pub conclusive: bool,
}

/// Verdict of the Sylow reduction: the kernel vanishes when every Sylow
/// subgroup is abelian or has vanishing kernel. The reduction never claims
/// a nonzero kernel.
pub enum SylowVerdict {
    Zero(Vec<SylowEvidence>),
    Inconclusive {
        evidence: Vec<SylowEvidence>,
        offending: Vec<u64>,
    },
}

/// Runs the per-prime Sylow reduction.
pub fn sylow_shortcut(g: &PermGroup, cap: u64) -> Result<SylowVerdict> {
    let order = g.order_u64()?;
    let mut evidence = Vec::new();
    let mut offending = Vec::new();
    for (p, _) in factorize(order) {
        let syl = sylow_subgroup(g, p, cap)?;
        let s = syl.group().clone();
        let s_order = s.order_u64()?;
        let gens: Vec<Perm> = s.generators().to_vec();
        if s.is_abelian() {
            evidence.push(SylowEvidence {
                prime: p,
                order: s_order,
                abelian: true,
                b0: None,
                witness: Witness::AbelianSylow(AbelianSylowWitness {
                    prime: p,
                    generators: gens.iter().map(images).collect(),
                }),
                generators: gens,
                conclusive: true,
            });
            continue;
        }
        let config = B0Config {
            strategy: Strategy::Auto,
            max_direct_order: DIRECT_ORDER_CAP,
            enum_cap: cap,
        };
        match b0_report(&s, &config) {
            Ok(report) => {
                let zero = matches!(&report.b0, Some(b) if b.is_trivial());
                if zero {
                    evidence.push(SylowEvidence {
                        prime: p,
                        order: s_order,
                        abelian: false,
                        b0: report.b0.clone(),
                        witness: Witness::SylowB0(SylowB0Witness {
                            prime: p,
                            certificate: report.certificate,
                        }),
                        generators: gens,
                        conclusive: true,
                    });
                } else {
                    offending.push(p);
                    evidence.push(SylowEvidence {
                        prime: p,
                        order: s_order,
                        abelian: false,
                        b0: report.b0.clone(),
                        witness: Witness::Unresolved(UnresolvedNote {
                            note: format!(
                                "the {p}-Sylow subgroup's kernel was not shown to vanish"
                            ),
                        }),
                        generators: gens,
                        conclusive: false,
                    });
                }
            }
            Err(e) => {
                offending.push(p);
                evidence.push(SylowEvidence {
                    prime: p,
                    order: s_order,
                    abelian: false,
                    b0: None,
                    witness: Witness::Unresolved(UnresolvedNote {
                        note: format!("{p}-Sylow kernel computation failed: {e}"),
                    }),
                    generators: gens,
                    conclusive: false,
                });
            }
        }
    }
    if offending.is_empty() {
        Ok(SylowVerdict::Zero(evidence))
    } else {
        Ok(SylowVerdict::Inconclusive {
            evidence,
            offending,
        })
    }
}

/// Verdict of the normal-abelian-with-cyclic-quotient shortcut.
pub enum CyclicByAbelianVerdict {
    Zero {
        normal_generators: Vec<Perm>,
        quotient_generator: Perm,
        witness: Witness,
    },
    Inconclusive {
        note: String,
    },
}

/// Searches for a normal abelian subgroup with cyclic quotient. Any such
/// subgroup contains the derived subgroup, so the scan runs over the
/// subgroups of the abelianization and lifts them back.
pub fn cyclic_by_abelian_shortcut(g: &PermGroup, cap: u64) -> Result<CyclicByAbelianVerdict> {
    if g.is_abelian() {
        let witness = Witness::CyclicByAbelian(CyclicByAbelianWitness {
            normal_generators: g.generators().iter().map(images).collect(),
            quotient_generator: images(&g.identity()),
        });
        return Ok(CyclicByAbelianVerdict::Zero {
            normal_generators: g.generators().to_vec(),
            quotient_generator: g.identity(),
            witness,
        });
    }
    let d = derived_subgroup(g)?;
    if !d.group().is_abelian() {
        return Ok(CyclicByAbelianVerdict::Inconclusive {
            note: "the derived subgroup is not abelian".into(),
        });
    }
    let act = coset_action(g, d.group())?;
    let q = act.image_group()?;
    let q_order = q.order_u64()?;
    if q_order > QUOTIENT_SCAN_ORDER_CAP {
        return Ok(CyclicByAbelianVerdict::Inconclusive {
            note: format!("abelian quotient of order {q_order} exceeds the scan cap"),
        });
    }
    let qt = q.table(cap.max(QUOTIENT_SCAN_ORDER_CAP))?;
    let nq = qt.n();
    // Every subgroup of the abelian quotient, as sorted element-index sets.
    let mut subgroups: Vec<Vec<u32>> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: Vec<Vec<u32>> = vec![vec![0]];
    seen.insert(vec![0]);
    while let Some(sub) = queue.pop() {
        for x in 1..nq as u32 {
            if sub.binary_search(&x).is_ok() {
                continue;
            }
            // Closure of sub + x: repeatedly multiply until stable.
            let mut members: HashSet<u32> = sub.iter().copied().collect();
            let mut frontier: Vec<u32> = vec![x];
            members.insert(x);
            while let Some(y) = frontier.pop() {
                for &m in members.clone().iter() {
                    let z = qt.mul(y, m);
                    if members.insert(z) {
                        frontier.push(z);
                    }
                }
            }
            let mut key: Vec<u32> = members.into_iter().collect();
            key.sort_unstable();
            if seen.insert(key.clone()) {
                if seen.len() > QUOTIENT_SCAN_SUBGROUP_CAP {
                    return Ok(CyclicByAbelianVerdict::Inconclusive {
                        note: "quotient subgroup scan exceeded its cap".into(),
                    });
                }
                queue.push(key);
            }
        }
        subgroups.push(sub);
    }
    // Largest subgroups first: their preimages are the best candidates.
    subgroups.sort_by(|a, b| (b.len(), a).cmp(&(a.len(), b)));
    let g_order = g.order_u64()?;
    for w in &subgroups {
        let r = nq / w.len();
        // An element whose coset has order exactly r makes the quotient by
        // the preimage cyclic.
        let mut gen_x = None;
        'outer: for x in 0..nq as u32 {
            let mut pw = x;
            for k in 1..=r {
                if w.binary_search(&pw).is_ok() {
                    if k == r {
                        gen_x = Some(x);
                        break 'outer;
                    }
                    break;
                }
                pw = qt.mul(pw, x);
            }
        }
        let x = match gen_x {
            Some(x) => x,
            None => continue,
        };
        // Preimage of the subgroup: derived generators plus one lift per
        // member coset.
        let mut v_gens: Vec<Perm> = d
            .group()
            .generators()
            .iter()
            .filter(|p| !p.is_identity())
            .cloned()
            .collect();
        for &wi in w {
            let coset = qt.elem(wi).apply(0) as usize;
            let rep = act.representatives()[coset].clone();
            if !rep.is_identity() {
                v_gens.push(rep);
            }
        }
        let pairwise = v_gens
            .iter()
            .enumerate()
            .all(|(i, a)| v_gens[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)));
        if !pairwise {
            continue;
        }
        let v = if v_gens.is_empty() {
            PermGroup::trivial(g.degree())
        } else {
            PermGroup::new(g.degree(), v_gens.clone())?
        };
        let v_order = v.order_u64()?;
        if v_order * r as u64 != g_order {
            return Err(Error::HypothesisViolated(
                "preimage order does not match the quotient index".into(),
            ));
        }
        let c = act.representatives()[qt.elem(x).apply(0) as usize].clone();
        // The preimage contains the derived subgroup, so it is normal; the
        // coset of c generates the quotient by construction. Both facts are
        // re-verified when the certificate replays.
        let witness = Witness::CyclicByAbelian(CyclicByAbelianWitness {
            normal_generators: v.generators().iter().map(images).collect(),
            quotient_generator: images(&c),
        });
        return Ok(CyclicByAbelianVerdict::Zero {
            normal_generators: v.generators().to_vec(),
            quotient_generator: c,
            witness,
        });
    }
    Ok(CyclicByAbelianVerdict::Inconclusive {
        note: "no normal abelian subgroup with cyclic quotient was found".into(),
    })
}

/// Structural facts that decide whether a group can host a minimal
/// nonvanishing class: it must be a p-group, metabelian, and when it is a
/// central extension of an elementary abelian quotient of rank n, n must be
/// even and at least four.
pub struct MinimalClassObstructions {
    pub order: u64,
    /// The prime when the order is a prime power.
    pub p_group: Option<u64>,
    pub metabelian: bool,
    pub exponent: u64,
    pub abelianization: FinAbGroup,
    /// Rank n when the derived subgroup is central and the abelianization
    /// is elementary abelian of rank n.
    pub central_elementary_rank: Option<usize>,
    pub cannot_host: bool,
    pub reasons: Vec<String>,
}

pub fn minimal_class_obstructions(
    g: &PermGroup,
    cap: u64,
) -> Result<MinimalClassObstructions> {
    let order = g.order_u64()?;
    let p_group = is_p_power(order);
    let metabelian = is_metabelian(g)?;
    let ab = abelianization(g, cap)?;
    let t = g.table(cap)?;
    let mut exponent: u64 = 1;
    for i in 0..t.n() as u32 {
        exponent = num_integer::lcm(exponent, t.order_of(i));
    }
    let d = derived_subgroup(g)?;
    let z = center(g, cap)?;
    let central_derived = z.group().contains_group(d.group())?;
    let factors = ab.group().invariant_factors().to_vec();
    let elementary = !factors.is_empty()
        && factors.iter().all(|&f| f == factors[0])
        && is_p_power(factors[0]).map_or(false, |p| p == factors[0]);
    let central_elementary_rank =
        (central_derived && elementary).then(|| ab.group().rank());
    let mut reasons = Vec::new();
    if p_group.is_none() {
        reasons.push("the order is not a prime power".to_string());
    }
    if !metabelian {
        reasons.push("the derived subgroup is not abelian".to_string());
    }
    if let Some(n) = central_elementary_rank {
        if n % 2 == 1 {
            reasons.push(format!("the elementary quotient rank {n} is odd"));
        } else if n < 4 {
            reasons.push(format!("the elementary quotient rank {n} is below four"));
        }
    }
    Ok(MinimalClassObstructions {
        order,
        p_group,
        metabelian,
        exponent,
        abelianization: ab.group().clone(),
        central_elementary_rank,
        cannot_host: !reasons.is_empty(),
        reasons,
    })
}

/// Which reductions the report ladder may use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Cheapest conclusive rung wins.
    Auto,
    /// Direct kernel computation only.
    Direct,
    /// Sylow reduction only.
    Sylow,
    /// No product rule exists for the kernel; runs the automatic ladder and
    /// notes the substitution.
    Semidirect,
}

#[derive(Clone, Debug)]
pub struct B0Config {
    pub strategy: Strategy,
    /// Largest order routed to the direct computation.
    pub max_direct_order: u64,
    /// Element enumeration ceiling for tables and Sylow scans.
    pub enum_cap: u64,
}

impl Default for B0Config {
    fn default() -> Self {
        B0Config {
            strategy: Strategy::Auto,
            max_direct_order: DIRECT_ORDER_CAP,
            enum_cap: TABLE_ELEMENT_LIMIT,
        }
    }
}

/// The rung that decided a report.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rung {
    Abelian,
    CyclicByAbelian,
    Sylow,
    Direct,
}

impl Rung {
    fn strategy_name(self) -> &'static str {
        match self {
            Rung::Abelian => "abelian",
            Rung::CyclicByAbelian => "cyclic_by_abelian",
            Rung::Sylow => "sylow",
            Rung::Direct => "direct",
        }
    }
}

/// Outcome of the report ladder for one group.
pub struct B0Report {
    pub order: BigUint,
    /// The kernel, when some rung decided it; None means inconclusive.
    pub b0: Option<FinAbGroup>,
    /// The multiplier, when the direct rung computed it.
    pub multiplier: Option<FinAbGroup>,
    pub rung: Option<Rung>,
    pub note: Option<String>,
    pub certificate: Certificate,
}

/// Routes the group through the configured reductions and packages the
/// verdict with a replayed certificate. Oversized groups produce an honest
/// inconclusive report, never an error.
pub fn b0_report(g: &PermGroup, config: &B0Config) -> Result<B0Report> {
    let order = g.order()?;
    let mut notes: Vec<String> = Vec::new();
    if config.strategy == Strategy::Semidirect {
        notes.push(
            "no product rule is available for the kernel; the automatic ladder ran instead"
                .into(),
        );
    }
    let auto = matches!(config.strategy, Strategy::Auto | Strategy::Semidirect);

    if auto && g.is_abelian() {
        let mut cert = base_certificate(g, "abelian");
        cert.b0 = Some(Vec::new());
        cert.witnesses = vec![Witness::AbelianGroup(AbelianGroupWitness {})];
        replay(&cert)?;
        return Ok(B0Report {
            order,
            b0: Some(FinAbGroup::trivial()),
            multiplier: None,
            rung: Some(Rung::Abelian),
            note: join_notes(&notes),
            certificate: cert,
        });
    }

    if auto {
        match cyclic_by_abelian_shortcut(g, config.enum_cap) {
            Ok(CyclicByAbelianVerdict::Zero { witness, .. }) => {
                let mut cert = base_certificate(g, Rung::CyclicByAbelian.strategy_name());
                cert.b0 = Some(Vec::new());
                cert.witnesses = vec![witness];
                replay(&cert)?;
                return Ok(B0Report {
                    order,
                    b0: Some(FinAbGroup::trivial()),
                    multiplier: None,
                    rung: Some(Rung::CyclicByAbelian),
                    note: join_notes(&notes),
                    certificate: cert,
                });
            }
            Ok(CyclicByAbelianVerdict::Inconclusive { note }) => notes.push(note),
            Err(e) => notes.push(format!("cyclic-quotient scan failed: {e}")),
        }
    }

    if auto || config.strategy == Strategy::Sylow {
        let order_u64 = g.order_u64();
        let p_group = order_u64.as_ref().ok().and_then(|&o| is_p_power(o));
        if p_group.is_some() {
            notes.push("the Sylow reduction does not shrink a p-group".into());
            if config.strategy == Strategy::Sylow {
                return inconclusive_report(g, order, notes);
            }
        } else {
            match sylow_shortcut(g, config.enum_cap) {
                Ok(SylowVerdict::Zero(evidence)) => {
                    let mut cert = base_certificate(g, Rung::Sylow.strategy_name());
                    cert.b0 = Some(Vec::new());
                    cert.witnesses = evidence.iter().map(|e| e.witness.clone()).collect();
                    replay(&cert)?;
                    return Ok(B0Report {
                        order,
                        b0: Some(FinAbGroup::trivial()),
                        multiplier: None,
                        rung: Some(Rung::Sylow),
                        note: join_notes(&notes),
                        certificate: cert,
                    });
                }
                Ok(SylowVerdict::Inconclusive { offending, .. }) => {
                    notes.push(format!(
                        "Sylow subgroups at primes {offending:?} were not shown to vanish"
                    ));
                    if config.strategy == Strategy::Sylow {
                        return inconclusive_report(g, order, notes);
                    }
                }
                Err(e) => {
                    notes.push(format!("Sylow reduction failed: {e}"));
                    if config.strategy == Strategy::Sylow {
                        return inconclusive_report(g, order, notes);
                    }
                }
            }
        }
    }

    if auto || config.strategy == Strategy::Direct {
        match g.order_u64() {
            Ok(o) if o <= config.max_direct_order => {
                let (b0, cert) = bogomolov_multiplier(g, config.max_direct_order)?;
                let multiplier = cert
                    .multiplier
                    .clone()
                    .map(FinAbGroup::new)
                    .transpose()?;
                return Ok(B0Report {
                    order,
                    b0: Some(b0),
                    multiplier,
                    rung: Some(Rung::Direct),
                    note: join_notes(&notes),
                    certificate: cert,
                });
            }
            Ok(o) => notes.push(format!(
                "order {o} exceeds the direct cap {}",
                config.max_direct_order
            )),
            Err(e) => notes.push(format!("order does not fit a machine word: {e}")),
        }
    }

    inconclusive_report(g, order, notes)
}

fn join_notes(notes: &[String]) -> Option<String> {
    if notes.is_empty() {
        None
    } else {
        Some(notes.join("; "))
    }
}

fn inconclusive_report(
    g: &PermGroup,
    order: BigUint,
    notes: Vec<String>,
) -> Result<B0Report> {
    let mut cert = base_certificate(g, "inconclusive");
    cert.witnesses = vec![Witness::Unresolved(UnresolvedNote {
        note: notes.join("; "),
    })];
    replay(&cert)?;
    Ok(B0Report {
        order,
        b0: None,
        multiplier: None,
        rung: None,
        note: join_notes(&notes),
        certificate: cert,
    })
}

/// Verification record for one central-cover instance: every nontrivial
/// central element of prime-power order written as a single commutator,
/// plus vanishing reports for the group and its central quotient.
pub struct QuasisimpleVerification {
    pub verified: bool,
    pub report: QuasisimpleReport,
    /// Triples (central element, left, right) with [left, right] = central.
    pub witnesses: Vec<(Perm, Perm, Perm)>,
    pub group_report: B0Report,
    pub quotient_report: B0Report,
    pub certificate: Certificate,
    pub notes: Vec<String>,
}

/// Checks a perfect central cover of a simple group: the hypothesis is
/// validated structurally, every nontrivial central element of prime-power
/// order is written as a single commutator, and the kernel of both the
/// group and its central quotient is independently shown to vanish.
pub fn verify_quasisimple(g: &PermGroup, cap: u64) -> Result<QuasisimpleVerification> {
    let report = quasisimple_check(g, cap)?;
    if !report.is_quasisimple {
        return Err(Error::HypothesisViolated(report.note.clone()));
    }
    let mut center_elems = report.center.group().elements(cap)?;
    center_elems.sort();
    let mut witnesses = Vec::new();
    let mut witness_json = Vec::new();
    let mut notes = Vec::new();
    let mut all_found = true;
    for z in center_elems {
        if z.is_identity() {
            continue;
        }
        if factorize(z.order()).len() != 1 {
            notes.push(format!(
                "central element of composite order {} skipped",
                z.order()
            ));
            continue;
        }
        match commutator_witness_central(g, &z, cap)? {
            Some((a, b)) => {
                witness_json.push(Witness::GroupCommutator(GroupCommutatorWitness {
                    central: images(&z),
                    left: images(&a),
                    right: images(&b),
                }));
                witnesses.push((z, a, b));
            }
            None => {
                all_found = false;
                notes.push(format!(
                    "no single commutator reaches the central element of order {}",
                    z.order()
                ));
            }
        }
    }
    let config = B0Config {
        enum_cap: cap,
        ..B0Config::default()
    };
    let group_report = b0_report(g, &config)?;
    let quotient_report = b0_report(&report.quotient, &config)?;
    let group_zero = matches!(&group_report.b0, Some(b) if b.is_trivial());
    let quotient_zero = matches!(&quotient_report.b0, Some(b) if b.is_trivial());
    if !group_zero {
        notes.push("the group's kernel was not shown to vanish".into());
    }
    if !quotient_zero {
        notes.push("the quotient's kernel was not shown to vanish".into());
    }
    let verified = all_found && group_zero && quotient_zero;
    let mut cert = base_certificate(g, if verified { "quasisimple" } else { "inconclusive" });
    if verified {
        cert.b0 = Some(Vec::new());
        cert.witnesses = witness_json;
        cert.sub_reports = vec![
            crate::certificate::SubReport {
                label: "b0(group)".into(),
                certificate: group_report.certificate.clone(),
            },
            crate::certificate::SubReport {
                label: "b0(central_quotient)".into(),
                certificate: quotient_report.certificate.clone(),
            },
        ];
    } else {
        cert.witnesses = vec![Witness::Unresolved(UnresolvedNote {
            note: notes.join("; "),
        })];
    }
    replay(&cert)?;
    Ok(QuasisimpleVerification {
        verified,
        report,
        witnesses,
        group_report,
        quotient_report,
        certificate: cert,
        notes,
    })
}

#[cfg(test)]
mod tests;
