use super::*;
use crate::cohomology::schur_multiplier_with_cap;
use crate::criteria::B0Config;
use crate::perm_ops::coset_action;

fn order_of(g: &PermGroup) -> u64 {
    g.order_u64().expect("order fits in u64")
}

#[test]
fn constructors_match_their_order_formulas() {
    assert_eq!(order_of(&cyclic(1).unwrap()), 1);
    assert_eq!(order_of(&cyclic(12).unwrap()), 12);
    assert!(cyclic(12).unwrap().is_abelian());

    let klein = dihedral(2).unwrap();
    assert_eq!(order_of(&klein), 4);
    assert!(klein.is_abelian());
    let d4 = dihedral(4).unwrap();
    assert_eq!(order_of(&d4), 8);
    assert!(!d4.is_abelian());

    assert_eq!(order_of(&quaternion8()), 8);

    let e9 = elementary_abelian(3, 2).unwrap();
    assert_eq!(order_of(&e9), 9);
    assert_eq!(e9.degree(), 6);
    assert!(e9.is_abelian());

    assert_eq!(order_of(&alternating(6).unwrap()), 360);
    assert_eq!(order_of(&symmetric(5).unwrap()), 120);

    let prod = direct_product(&cyclic(4).unwrap(), &cyclic(2).unwrap()).unwrap();
    assert_eq!(order_of(&prod), 8);
    assert!(prod.is_abelian());
}

#[test]
fn constructors_reject_out_of_range_parameters() {
    assert!(cyclic(0).is_err());
    assert!(dihedral(1).is_err());
    assert!(elementary_abelian(4, 2).is_err());
    assert!(elementary_abelian(2, 0).is_err());
    assert!(alternating(2).is_err());
    assert!(alternating(10).is_err());
    assert!(symmetric(1).is_err());
    assert!(symmetric(10).is_err());
}

#[test]
fn group_names_parse_to_build_recipes() {
    assert_eq!(parse_group_name("A5").unwrap(), GroupSpec::Alternating(5));
    assert_eq!(parse_group_name("S6").unwrap(), GroupSpec::Symmetric(6));
    assert_eq!(parse_group_name("C12").unwrap(), GroupSpec::Cyclic(12));
    assert_eq!(parse_group_name("D4").unwrap(), GroupSpec::Dihedral(4));
    assert_eq!(parse_group_name("Q8").unwrap(), GroupSpec::Quaternion8);
    assert_eq!(
        parse_group_name("E(2,3)").unwrap(),
        GroupSpec::ElementaryAbelian(2, 3)
    );
    assert_eq!(parse_group_name("PSL(2,7)").unwrap(), GroupSpec::Psl2(7));
    assert_eq!(parse_group_name("SL(2,5)").unwrap(), GroupSpec::Sl2(5));
    assert_eq!(parse_group_name("PGL(2,9)").unwrap(), GroupSpec::Pgl2(9));
    assert_eq!(parse_group_name("PSL(3,4)").unwrap(), GroupSpec::Psl3_4);
    assert_eq!(
        parse_group_name("C4xC2").unwrap(),
        GroupSpec::Product(vec![GroupSpec::Cyclic(4), GroupSpec::Cyclic(2)])
    );
    assert_eq!(
        parse_group_name("E(2,2)xS3").unwrap(),
        GroupSpec::Product(vec![
            GroupSpec::ElementaryAbelian(2, 2),
            GroupSpec::Symmetric(3)
        ])
    );
    assert_eq!(parse_group_name(" C6 ").unwrap(), GroupSpec::Cyclic(6));

    // Parsed recipes build groups of the advertised orders.
    assert_eq!(order_of(&build(&parse_group_name("PSL(2,5)").unwrap()).unwrap()), 60);
    assert_eq!(order_of(&build(&parse_group_name("SL(2,5)").unwrap()).unwrap()), 120);
    assert_eq!(order_of(&build(&parse_group_name("PGL(2,9)").unwrap()).unwrap()), 720);
    assert_eq!(order_of(&build(&parse_group_name("C4xC2").unwrap()).unwrap()), 8);
}

#[test]
fn malformed_group_names_are_rejected() {
    for bad in [
        "", "C", "X5", "C4x", "xC4", "PSL(2,7", "A5)C", "PSL(4,2)", "E(2)", "Q9",
        "Cfour", "Ç4",
    ] {
        assert!(
            parse_group_name(bad).is_err(),
            "expected {bad:?} to be rejected"
        );
    }
}

#[test]
fn the_small_group_suite_builds() {
    let suite = small_group_suite();
    assert_eq!(suite.len(), 29);
    let mut names: Vec<&str> = suite.iter().map(|(n, _)| n.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), 29, "suite names must be distinct");
    for (name, spec) in &suite {
        let g = build(spec).unwrap_or_else(|e| panic!("building {name}: {e}"));
        let order = order_of(&g);
        assert!(
            (1..=16).contains(&order),
            "{name} has order {order}, outside the desk range"
        );
    }
}

#[test]
fn semidirect_builder_recovers_the_symmetric_group() {
    // Klein four group acted on by S3 permuting its involutions: the result
    // is the symmetric group on four letters.
    let s3 = symmetric(3).unwrap();
    let action = vec![
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![0, 1], vec![1, 1]],
    ];
    let parts = abelian_semidirect_parts(&[2, 2], &s3, &action, 1 << 16).unwrap();
    assert_eq!(order_of(&parts.group), 24);
    assert!(!parts.group.is_abelian());
    assert_eq!(parts.normal_generators.len(), 2);
    assert_eq!(parts.complement_generators.len(), 2);

    // The normal part is indeed normal with quotient of order 6.
    let v = PermGroup::new(parts.group.degree(), parts.normal_generators.clone()).unwrap();
    let q = coset_action(&parts.group, &v).unwrap().image_group().unwrap();
    assert_eq!(order_of(&q), 6);
    assert!(!q.is_abelian());

    // The multiplier of the symmetric group on four letters has order two.
    let m = schur_multiplier_with_cap(&parts.group, 5000).unwrap();
    assert_eq!(m.presentation().invariant_factors(), &[2]);
}

#[test]
fn semidirect_builder_rejects_bad_actions() {
    let s3 = symmetric(3).unwrap();
    let c2 = cyclic(2).unwrap();
    let c3 = cyclic(3).unwrap();

    // One matrix for two generators.
    let short = abelian_semidirect_parts(
        &[2, 2],
        &s3,
        &[vec![vec![0, 1], vec![1, 0]]],
        1 << 16,
    );
    assert!(matches!(short, Err(Error::Unsupported(_))));

    // A singular matrix is not an automorphism.
    let singular = abelian_semidirect_parts(
        &[2, 2],
        &c2,
        &[vec![vec![1, 1], vec![1, 1]]],
        1 << 16,
    );
    assert!(matches!(singular, Err(Error::NotAutomorphism(_))));

    // Sending a generator of order two onto one of order four breaks the
    // factor orders.
    let wrong_orders = abelian_semidirect_parts(
        &[4, 2],
        &c2,
        &[vec![vec![1, 1], vec![0, 1]]],
        1 << 16,
    );
    assert!(matches!(wrong_orders, Err(Error::NotAutomorphism(_))));

    // Inversion has order two, so a generator of order three cannot act by
    // it: the assignment respects no relation of the acting group.
    let wrong_relations = abelian_semidirect_parts(&[4], &c3, &[vec![vec![3]]], 1 << 16);
    assert!(matches!(wrong_relations, Err(Error::NotAutomorphism(_))));

    // Factors below two are meaningless.
    let tiny = abelian_semidirect_parts(&[1], &c2, &[vec![vec![0]]], 1 << 16);
    assert!(matches!(tiny, Err(Error::Unsupported(_))));
}

#[test]
fn descriptor_json_is_validated() {
    let ok = parse_descriptor(r#"{"name":"A1(8)","family":"A","rank":1,"q":8}"#).unwrap();
    assert_eq!(ok.family, "A");
    assert_eq!(ok.rank, 1);
    assert_eq!(ok.q, 8);
    assert_eq!(ok.note, "");

    for bad in [
        // Unknown family.
        r#"{"name":"x","family":"H4","rank":4,"q":5}"#,
        // Rank below the family minimum.
        r#"{"name":"x","family":"E7","rank":6,"q":3}"#,
        // Fixed-rank family with the wrong rank.
        r#"{"name":"x","family":"G2","rank":3,"q":4}"#,
        // Odd rank in the D-family.
        r#"{"name":"x","family":"D","rank":5,"q":3}"#,
        // Even field size in the D-family.
        r#"{"name":"x","family":"D","rank":4,"q":4}"#,
        // Field size not a prime power.
        r#"{"name":"x","family":"A","rank":1,"q":12}"#,
        r#"{"name":"x","family":"A","rank":1,"q":1}"#,
        // Unknown extra field.
        r#"{"name":"x","family":"A","rank":1,"q":8,"weight":3}"#,
        // Missing field.
        r#"{"name":"x","family":"A","rank":1}"#,
        // Not JSON at all.
        "family: A",
    ] {
        assert!(parse_descriptor(bad).is_err(), "expected {bad:?} rejected");
    }
}

fn desc(family: &str, rank: u32, q: u64) -> LieOutDescriptor {
    LieOutDescriptor {
        name: format!("{family}{rank}({q})"),
        family: family.into(),
        rank,
        q,
        note: String::new(),
    }
}

#[test]
fn diagonal_parts_follow_the_family_rules() {
    let factors = |d: &LieOutDescriptor| -> Vec<u64> {
        outdiag_group(d).unwrap().invariant_factors().to_vec()
    };
    // The rank-1 linear cases are cross-checked internally against the
    // index of the projective special group in the projective general one.
    assert_eq!(factors(&desc("A", 1, 5)), vec![2]);
    assert_eq!(factors(&desc("A", 1, 8)), Vec::<u64>::new());
    assert_eq!(factors(&desc("A", 1, 9)), vec![2]);
    assert_eq!(factors(&desc("A", 1, 4)), Vec::<u64>::new());

    assert_eq!(factors(&desc("A", 3, 5)), vec![4]);
    assert_eq!(factors(&desc("2A", 3, 3)), vec![4]);
    assert_eq!(factors(&desc("B", 2, 5)), vec![2]);
    assert_eq!(factors(&desc("C", 3, 3)), vec![2]);
    assert_eq!(factors(&desc("D", 4, 3)), vec![2, 2]);
    assert_eq!(factors(&desc("D", 6, 3)), vec![2, 2]);
    assert_eq!(factors(&desc("E6", 6, 4)), vec![3]);
    assert_eq!(factors(&desc("2E6", 6, 2)), vec![3]);
    assert_eq!(factors(&desc("E7", 7, 3)), vec![2]);
    assert_eq!(factors(&desc("E8", 8, 2)), Vec::<u64>::new());
    assert_eq!(factors(&desc("B", 2, 4)), Vec::<u64>::new());
    assert_eq!(factors(&desc("G2", 2, 4)), Vec::<u64>::new());
    assert_eq!(factors(&desc("3D", 4, 2)), Vec::<u64>::new());
}

const DESCRIPTOR_FILES: [&str; 8] = [
    "a1q8.json",
    "a3q5.json",
    "2a3q3.json",
    "b2q4.json",
    "d4m2q3.json",
    "d6m3q3.json",
    "e7q3.json",
    "e8q2.json",
];

fn load_descriptor(file: &str) -> LieOutDescriptor {
    let path = format!(
        "{}/../../data/descriptors/{file}",
        env!("CARGO_MANIFEST_DIR")
    );
    let json = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"));
    parse_descriptor(&json).unwrap_or_else(|e| panic!("parsing {file}: {e}"))
}

#[test]
fn out_groups_take_their_expected_shapes() {
    // (file, order, abelian, graph label, field-part order, diagonal part)
    let expected: [(&str, u64, bool, &str, u64, &[u64]); 8] = [
        ("a1q8.json", 3, true, "1", 3, &[]),
        ("a3q5.json", 8, false, "Z2-invert", 1, &[4]),
        ("2a3q3.json", 8, false, "1", 2, &[4]),
        ("b2q4.json", 4, true, "merged", 4, &[]),
        ("d4m2q3.json", 24, false, "S3", 1, &[2, 2]),
        ("d6m3q3.json", 8, false, "Z2-swap", 1, &[2, 2]),
        ("e7q3.json", 2, true, "1", 1, &[2]),
        ("e8q2.json", 1, true, "1", 1, &[]),
    ];
    for (file, order, abelian, gamma, phi, diag) in expected {
        let d = load_descriptor(file);
        let parts = out_group_parts(&d).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert_eq!(order_of(&parts.group), order, "{file}: order");
        assert_eq!(parts.group.is_abelian(), abelian, "{file}: commutativity");
        assert_eq!(parts.gamma_kind, gamma, "{file}: graph part");
        assert_eq!(parts.phi_order, phi, "{file}: field part");
        assert_eq!(parts.diagonal.invariant_factors(), diag, "{file}: diagonal");
    }

    // The merged field/graph part is genuinely cyclic of order four.
    let merged = out_group(&load_descriptor("b2q4.json")).unwrap();
    let t = merged.table(100).unwrap();
    let max_order = (0..t.n() as u32).map(|i| t.order_of(i)).max().unwrap();
    assert_eq!(max_order, 4);

    // The full rank-4 graph symmetry gives a quotient of order six acting
    // on the Klein diagonal part.
    let parts = out_group_parts(&load_descriptor("d4m2q3.json")).unwrap();
    let v = PermGroup::new(parts.group.degree(), parts.diagonal_generators.clone()).unwrap();
    let q = coset_action(&parts.group, &v)
        .unwrap()
        .image_group()
        .unwrap();
    assert_eq!(order_of(&q), 6);
    assert!(!q.is_abelian());
}

#[test]
fn out_lemma_verification_covers_the_descriptor_set() {
    let config = B0Config::default();
    for file in DESCRIPTOR_FILES {
        let d = load_descriptor(file);
        let verdict = verify_out_lemma(&d, &config).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert!(verdict.b0_zero, "{file}: restricted kernel not shown trivial");
        assert!(
            verdict.proof_shape,
            "{file}: 2-Sylow shape check failed: {}",
            verdict.shape_note
        );
        assert!(verdict.verified());
        let b0 = verdict.report.b0.as_ref().expect("decided kernel");
        assert!(b0.is_trivial());
    }
}

#[test]
fn almost_simple_formula_matches_direct_multipliers() {
    // Alternating on five letters extended by a transposition: the
    // symmetric group, whose multiplier has order two.
    let a5 = alternating(5).unwrap();
    let t = Perm::from_cycles(5, &[&[0, 1]]).unwrap();
    let res = almost_simple_multiplier(&a5, &[t], 5000).unwrap();
    assert_eq!(res.invariant.invariant_factors(), &[2]);
    assert!(res.out_multiplier.is_trivial());
    assert_eq!(res.combined.invariant_factors(), &[2]);
    assert_eq!(
        res.direct.as_ref().map(|d| d.invariant_factors().to_vec()),
        Some(vec![2])
    );

    // The projective special group over the field with seven elements,
    // extended by a diagonal outer element to the projective general one.
    // The cap admits the simple part (168 elements) but not the extension
    // (336), so the product formula runs while the direct recomputation is
    // skipped; the combined value matches the known multiplier of the
    // projective general group.
    let l = psl2(7).unwrap();
    let pgl = pgl2(7).unwrap();
    let outer = pgl
        .generators()
        .iter()
        .find(|g| !l.is_member(g).unwrap())
        .expect("a generator outside the special subgroup")
        .clone();
    let res = almost_simple_multiplier(&l, &[outer], 200).unwrap();
    assert_eq!(res.invariant.invariant_factors(), &[2]);
    assert!(res.out_multiplier.is_trivial());
    assert_eq!(res.combined.invariant_factors(), &[2]);
    assert!(res.direct.is_none());

    // A non-simple normal part is refused.
    let s4 = symmetric(4).unwrap();
    assert!(matches!(
        almost_simple_multiplier(&s4, &[], 5000),
        Err(Error::HypothesisViolated(_))
    ));

    // An element that does not normalize the simple part is refused: a
    // transposition fixes six of the eight projective points, which no
    // normalizing element can do.
    let bad = Perm::from_cycles(8, &[&[0, 1]]).unwrap();
    assert!(matches!(
        almost_simple_multiplier(&l, &[bad], 5000),
        Err(Error::HypothesisViolated(_))
    ));
}
