//! Independent dense cross-check of the multiplier engine on every group of
//! order at most sixteen in the catalog, plus frozen expected values. The
//! oracle itself lives in `support/oracle.rs` and shares nothing with the
//! engine beyond permutation arithmetic.

#[path = "support/oracle.rs"]
mod oracle;

use bogomult::catalog::{build, parse_group_name, small_group_suite};
use oracle::{engine_invariant_factors, expected, oracle_invariant_factors};

#[test]
fn dense_oracle_agrees_with_the_engine_on_the_whole_suite() {
    let start = std::time::Instant::now();
    for (name, spec) in small_group_suite() {
        let g = build(&spec).unwrap();
        let oracle = oracle_invariant_factors(&g);
        let engine = engine_invariant_factors(&g);
        assert_eq!(
            oracle, engine,
            "{name}: oracle {oracle:?} vs engine {engine:?}"
        );
        assert_eq!(oracle, expected(&name), "{name}: frozen value");
    }
    assert!(
        start.elapsed().as_secs() < 60,
        "oracle suite must finish within a minute, took {:.1?}",
        start.elapsed()
    );
}

#[test]
fn dense_oracle_matches_the_named_anchors() {
    // The four anchor values, asserted directly against the oracle alone.
    let anchors = [
        ("C12", vec![]),
        ("C2xC2", vec![2]),
        ("Q8", vec![]),
        ("D4", vec![2]),
    ];
    for (name, want) in anchors {
        let g = build(&parse_group_name(name).unwrap()).unwrap();
        assert_eq!(oracle_invariant_factors(&g), want, "{name} anchor");
    }
}
