//! Temporary timing probe for the Sylow route on the large instances.

use std::time::Instant;

use bogomult::catalog::{build, parse_group_name, psl3_4, sl2};
use bogomult::criteria::{b0_report, B0Config, Strategy};

#[test]
#[ignore]
fn time_sylow_instances() {
    let cfg = B0Config {
        strategy: Strategy::Sylow,
        ..B0Config::default()
    };
    for name in [
        "A7",
        "A8",
        "A9",
        "PSL(2,8)",
        "PSL(2,11)",
        "PSL(2,13)",
        "SL(2,9)",
        "SL(2,11)",
        "SL(2,13)",
    ] {
        let g = build(&parse_group_name(name).unwrap()).unwrap();
        let t = Instant::now();
        let rep = b0_report(&g, &cfg).unwrap();
        println!(
            "{name}: b0 = {:?} rung {:?} in {:.1}s",
            rep.b0.as_ref().map(|b| b.invariant_factors().to_vec()),
            rep.rung,
            t.elapsed().as_secs_f64()
        );
    }
    let g = psl3_4().unwrap();
    let t = Instant::now();
    let rep = b0_report(&g, &cfg).unwrap();
    println!(
        "PSL(3,4): b0 = {:?} rung {:?} in {:.1}s",
        rep.b0.as_ref().map(|b| b.invariant_factors().to_vec()),
        rep.rung,
        t.elapsed().as_secs_f64()
    );
    // The quotient side of the binary covers, for the quasisimple route.
    for q in [9u64, 11, 13] {
        let g = sl2(q).unwrap();
        let t = Instant::now();
        let v = bogomult::criteria::verify_quasisimple(&g, 1 << 20).unwrap();
        println!(
            "verify_quasisimple SL(2,{q}): verified {} in {:.1}s",
            v.verified,
            t.elapsed().as_secs_f64()
        );
    }
}
