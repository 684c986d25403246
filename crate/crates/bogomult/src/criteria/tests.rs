use super::*;
use crate::certificate::replay;
use crate::group::PermGroup;
use crate::perm::Perm;

fn perm(images: &[u16]) -> Perm {
    Perm::from_images(images.to_vec()).unwrap()
}

fn group(degree: u16, gens: &[&[u16]]) -> PermGroup {
    PermGroup::new(degree, gens.iter().map(|g| perm(g)).collect()).unwrap()
}

fn cyclic(n: u16) -> PermGroup {
    let images: Vec<u16> = (0..n).map(|i| (i + 1) % n).collect();
    group(n, &[&images])
}

fn dihedral8() -> PermGroup {
    group(4, &[&[1, 2, 3, 0], &[0, 3, 2, 1]])
}

/// The eight-element quaternion group in its regular representation, with
/// points ordered 1, i, -1, -i, j, k, -j, -k.
fn quaternion8() -> PermGroup {
    group(
        8,
        &[&[1, 2, 3, 0, 7, 4, 5, 6], &[4, 5, 6, 7, 2, 3, 0, 1]],
    )
}

fn sym4() -> PermGroup {
    group(4, &[&[1, 2, 3, 0], &[1, 0, 2, 3]])
}

#[test]
fn abelian_groups_report_trivially() {
    let g = cyclic(6);
    let report = b0_report(&g, &B0Config::default()).unwrap();
    assert_eq!(report.rung, Some(Rung::Abelian));
    assert!(report.b0.as_ref().unwrap().is_trivial());
    assert_eq!(report.certificate.strategy, "abelian");
    assert!(replay(&report.certificate).unwrap().fully_grounded);
}

#[test]
fn dihedral_and_quaternion_have_cyclic_quotients() {
    for g in [dihedral8(), quaternion8()] {
        let report = b0_report(&g, &B0Config::default()).unwrap();
        assert_eq!(report.rung, Some(Rung::CyclicByAbelian));
        assert!(report.b0.as_ref().unwrap().is_trivial());
        assert!(replay(&report.certificate).unwrap().fully_grounded);
    }
}

#[test]
fn symmetric_four_reduces_through_sylow_subgroups() {
    let report = b0_report(&sym4(), &B0Config::default()).unwrap();
    assert_eq!(report.rung, Some(Rung::Sylow));
    assert!(report.b0.as_ref().unwrap().is_trivial());
    assert_eq!(report.certificate.strategy, "sylow");
    assert!(replay(&report.certificate).is_ok());
}

#[test]
fn alternating_five_reduces_through_sylow_subgroups() {
    let g = group(5, &[&[1, 2, 0, 3, 4], &[0, 1, 3, 4, 2]]);
    assert_eq!(g.order_u64().unwrap(), 60);
    let report = b0_report(&g, &B0Config::default()).unwrap();
    assert_eq!(report.rung, Some(Rung::Sylow));
    assert!(report.b0.as_ref().unwrap().is_trivial());
    assert!(replay(&report.certificate).unwrap().fully_grounded);
}

#[test]
fn direct_kernel_of_dihedral_is_grounded() {
    let (b0, cert) = bogomolov_multiplier(&dihedral8(), 1000).unwrap();
    assert!(b0.is_trivial());
    assert_eq!(cert.multiplier.as_deref(), Some(&[2][..]));
    assert!(cert
        .witnesses
        .iter()
        .any(|w| matches!(w, Witness::BicyclicNonvanishing(_))));
    assert!(replay(&cert).unwrap().fully_grounded);
}

#[test]
fn direct_kernel_of_abelian_groups() {
    // Z/2 x Z/4: multiplier Z/2, and the class survives on the group itself.
    let g = group(6, &[&[1, 0, 2, 3, 4, 5], &[0, 1, 3, 4, 5, 2]]);
    let (b0, cert) = bogomolov_multiplier(&g, 1000).unwrap();
    assert!(b0.is_trivial());
    assert_eq!(cert.multiplier.as_deref(), Some(&[2][..]));
    assert!(replay(&cert).unwrap().fully_grounded);
}

#[test]
fn exclusion_test_matches_kernel_membership() {
    let g = dihedral8();
    let src = schur_multiplier_with_cap(&g, 1000).unwrap();
    assert_eq!(src.presentation().invariant_factors(), &[2]);
    let kern = bicyclic_kernel(&src, 1000).unwrap();
    assert!(kern.structure.is_trivial());
    for coords in [vec![0], vec![1]] {
        let gamma = src.class_rep(&coords).unwrap();
        let check = excludes_from_b0_with(&src, &gamma, &kern, 1000).unwrap();
        assert_eq!(check.excluded, coords == vec![1]);
        if check.excluded {
            let w = check.witness.expect("commutator witness");
            assert_ne!(w.value, 0);
        }
    }
}

#[test]
fn sylow_scan_handles_nonabelian_parts() {
    // The 2-Sylow subgroup of S4 is dihedral of order 8; the scan must
    // recurse into it and come back with a vanishing verdict.
    match sylow_shortcut(&sym4(), 10_000).unwrap() {
        SylowVerdict::Zero(evidence) => {
            assert_eq!(evidence.len(), 2);
            let two = evidence.iter().find(|e| e.prime == 2).unwrap();
            assert!(!two.abelian && two.conclusive);
            assert_eq!(two.order, 8);
            let three = evidence.iter().find(|e| e.prime == 3).unwrap();
            assert!(three.abelian);
        }
        SylowVerdict::Inconclusive { offending, .. } => {
            panic!("unexpectedly inconclusive at {offending:?}")
        }
    }
}

#[test]
fn commutator_witnesses_for_central_elements() {
    let q = quaternion8();
    // -1 sits at point 2 of the regular representation; right
    // multiplication by it swaps x and -x.
    let minus_one = perm(&[2, 3, 0, 1, 6, 7, 4, 5]);
    let (a, b) = commutator_witness_central(&q, &minus_one, 1000)
        .unwrap()
        .expect("-1 is a commutator");
    assert_eq!(
        a.inverse().mul(&b.inverse()).mul(&a).mul(&b),
        minus_one
    );
    // i is not central: the search must refuse it.
    let i_elem = perm(&[1, 2, 3, 0, 7, 4, 5, 6]);
    assert!(matches!(
        commutator_witness_central(&q, &i_elem, 1000),
        Err(Error::NotCentral)
    ));
}

#[test]
fn minimal_class_obstructions_on_small_groups() {
    let c6 = minimal_class_obstructions(&cyclic(6), 1000).unwrap();
    assert!(c6.cannot_host);
    assert!(c6.reasons.iter().any(|r| r.contains("prime power")));

    let d4 = minimal_class_obstructions(&dihedral8(), 1000).unwrap();
    assert_eq!(d4.p_group, Some(2));
    assert!(d4.metabelian);
    assert_eq!(d4.exponent, 4);
    assert_eq!(d4.central_elementary_rank, Some(2));
    assert!(d4.cannot_host);
    assert!(d4.reasons.iter().any(|r| r.contains("below four")));

    let a5 = group(5, &[&[1, 2, 0, 3, 4], &[0, 1, 3, 4, 2]]);
    let a5_facts = minimal_class_obstructions(&a5, 10_000).unwrap();
    assert!(!a5_facts.metabelian);
    assert!(a5_facts.cannot_host);
}

#[test]
fn quasisimple_verification_of_a_simple_group() {
    let a5 = group(5, &[&[1, 2, 0, 3, 4], &[0, 1, 3, 4, 2]]);
    let v = verify_quasisimple(&a5, 10_000).unwrap();
    assert!(v.verified);
    assert!(v.witnesses.is_empty());
    assert_eq!(v.certificate.strategy, "quasisimple");
    assert!(replay(&v.certificate).is_ok());
    // A solvable group must be rejected outright.
    assert!(matches!(
        verify_quasisimple(&sym4(), 10_000),
        Err(Error::HypothesisViolated(_))
    ));
}

#[test]
fn semidirect_strategy_falls_back_with_a_note() {
    let config = B0Config {
        strategy: Strategy::Semidirect,
        ..B0Config::default()
    };
    let report = b0_report(&dihedral8(), &config).unwrap();
    assert_eq!(report.rung, Some(Rung::CyclicByAbelian));
    assert!(report.note.unwrap().contains("no product rule"));
}

#[test]
fn caps_produce_honest_inconclusive_reports() {
    let config = B0Config {
        strategy: Strategy::Direct,
        max_direct_order: 10,
        ..B0Config::default()
    };
    let report = b0_report(&sym4(), &config).unwrap();
    assert!(report.b0.is_none());
    assert_eq!(report.rung, None);
    assert_eq!(report.certificate.strategy, "inconclusive");
    assert!(report.note.unwrap().contains("exceeds the direct cap"));

    // The Sylow strategy cannot shrink a p-group.
    let config = B0Config {
        strategy: Strategy::Sylow,
        ..B0Config::default()
    };
    let report = b0_report(&dihedral8(), &config).unwrap();
    assert!(report.b0.is_none());
    assert!(report.note.unwrap().contains("does not shrink"));
}

#[test]
fn primary_decomposition_splits_by_prime() {
    let a = FinAbGroup::new(vec![2, 12]).unwrap();
    let parts = primary_decomposition(&a);
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0].0, 2);
    assert_eq!(parts[0].1.invariant_factors(), &[2, 4]);
    assert_eq!(parts[1].0, 3);
    assert_eq!(parts[1].1.invariant_factors(), &[3]);
}
