//! Acceptance criteria 1–7. Each test prints one `[PASS]`/`[FAIL]` line.
//! Run with `cargo test -p amalgamlab --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use amalgamlab::action::{action_profile, classify_action, ActionLevel, PlinthType};
use amalgamlab::amalgam::{core_sequence, is_faithful};
use amalgamlab::fiber_product::{construct_from_catalog, verify_fiber_product};
use amalgamlab::local::{ball_series, is_locally, regular_sym3_instance, CATALOG};
use amalgamlab::pairs::{build_ordered_pairs, verify_lemma_approx};
use amalgamlab::report::Status;
use amalgamlab::verify::{proof_trace, verify_theorem, LocalInput};
use amalgamlab::PermGroup;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn verdict(n: u32, what: &str, start: Instant, budget: Duration, failures: &[String]) {
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed <= budget;
    println!(
        "[{}] criterion {n}: {what} ({:.2?}, budget {:?})",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        budget
    );
    for f in failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
    assert!(elapsed <= budget, "criterion {n} exceeded {budget:?}: {elapsed:?}");
}

fn expect<T: PartialEq + std::fmt::Debug>(failures: &mut Vec<String>, what: &str, got: T, want: T) {
    if got != want {
        failures.push(format!("{what}: got {got:?}, expected {want:?}"));
    }
}

#[test]
fn criterion_1_ordered_pairs_action() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut factorial = 2u64;
    for n in 3..=7 {
        factorial *= n as u64;
        let l = build_ordered_pairs(n).unwrap();
        expect(&mut failures, &format!("degree for n = {n}"), l.degree(), n * (n - 1));
        expect(&mut failures, &format!("order for n = {n}"), l.group.order_u64(), factorial);
    }
    let l4 = build_ordered_pairs(4).unwrap().group;
    let class = classify_action(&l4).unwrap();
    expect(&mut failures, "level of L4", class.level, ActionLevel::Semiprimitive);
    expect(&mut failures, "L4 quasiprimitive", class.is_quasiprimitive(), false);
    let witness = class
        .witnesses
        .iter()
        .find(|w| w.fails == ActionLevel::Quasiprimitive)
        .and_then(|w| w.normal_subgroup.as_ref())
        .map(PermGroup::order_u64);
    expect(&mut failures, "quasiprimitivity witness order", witness, Some(4));
    expect(&mut failures, "plinth type", class.plinth_type(), Some(PlinthType::UniqueRegular));
    let derived = l4.derived_subgroup().unwrap();
    let profile = action_profile(&derived).unwrap();
    expect(&mut failures, "|[L,L]|", derived.order_u64(), 12);
    expect(&mut failures, "[L,L] regular", profile.regular, true);
    verdict(1, "ordered-pairs action", start, Duration::from_secs(5), &failures);
}

#[test]
fn criterion_2_two_point_stabiliser_lemma() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let expected = [(4, Some((2, 12))), (5, Some((3, 120))), (6, Some((2, 360))), (7, None), (8, None)];
    for (n, want) in expected {
        let v = verify_lemma_approx(n).unwrap();
        for check in v.report.checks.iter().filter(|c| c.status == Status::Violated) {
            failures.push(format!("n = {n}: {} violated", check.name));
        }
        let got = match v.clauses.as_slice() {
            [] => None,
            [c] => {
                if !c.transitive {
                    failures.push(format!("n = {n}: generated group intransitive"));
                }
                let wanted_type = if c.generated_order == 12 || c.generated_order == 360 {
                    "alternating"
                } else {
                    "symmetric"
                };
                expect(&mut failures, &format!("type for n = {n}"), c.generated_type, wanted_type);
                Some((c.prime, c.generated_order))
            }
            many => {
                failures.push(format!("n = {n}: {} primes", many.len()));
                None
            }
        };
        expect(&mut failures, &format!("prime and order for n = {n}"), got, want);
    }
    verdict(2, "two-point stabiliser lemma, n = 4..8", start, Duration::from_secs(60), &failures);
}

/// Automorphism orders and `[|G_x^[0]|, …]` up to the first trivial term.
const CENSUS: [(&str, u64, &[u64]); 5] = [
    ("k4", 24, &[6, 1]),
    ("k33", 72, &[12, 2, 1]),
    ("petersen", 120, &[12, 2, 1]),
    ("heawood", 336, &[24, 4, 1]),
    ("tutte-coxeter", 1440, &[48, 8, 2, 1]),
];

#[test]
fn criterion_3_cubic_census() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, order, series) in CENSUS {
        let inst = common::catalog().iter().zip(CATALOG).find(|(_, n)| *n == name).unwrap().0;
        let r_max = series.len() - 1;
        let autos = common::brute_force_automorphisms(&inst.graph);
        expect(&mut failures, &format!("{name}: oracle order"), autos.len() as u64, order);
        let oracle = common::brute_force_ball_series(&inst.graph, &autos, 0, r_max);
        expect(&mut failures, &format!("{name}: oracle series"), oracle.as_slice(), series);
        let computed = inst.graph.automorphisms().unwrap();
        expect(&mut failures, &format!("{name}: order"), computed.order_u64(), order);
        let got = ball_series(inst, 0, r_max).unwrap();
        expect(&mut failures, &format!("{name}: series"), got.as_slice(), series);
    }
    verdict(3, "cubic census", start, Duration::from_secs(120), &failures);
}

#[test]
fn criterion_4_fiber_product_sharpness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let cert = construct_from_catalog(4, "tutte-coxeter").unwrap();
    let out = &cert.output;
    expect(&mut failures, "|S|", cert.s.order_u64(), 4);
    expect(&mut failures, "|G_x|", out.a.order_u64(), 192);
    expect(&mut failures, "|G_e|", out.b.order_u64(), 32);
    expect(&mut failures, "|G_xy|", out.c_in_a.order_u64(), 16);
    expect(&mut failures, "faithful", is_faithful(out).unwrap(), true);
    let locally = verify_theorem(&LocalInput::Amalgam(out.clone()), 4).unwrap();
    expect(
        &mut failures,
        "local action ≅ L",
        locally.check("locally L certification").map(|c| c.status),
        Some(Status::Pass),
    );
    let cores = core_sequence(out, 3).unwrap().vertex_orders();
    expect(&mut failures, "core sequence", cores, vec![8, 2, 1]);
    let report = verify_fiber_product(&cert, 3).unwrap();
    expect(&mut failures, "construction report", report.overall, Status::Pass);
    verdict(4, "fiber-product construction and sharpness", start, Duration::from_secs(60), &failures);
}

#[test]
fn criterion_5_theorem_instances() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for name in CATALOG {
        let cert = construct_from_catalog(4, name).unwrap();
        let report = verify_theorem(&LocalInput::Amalgam(cert.output), 4).unwrap();
        if report.overall != Status::Pass {
            failures.push(format!("{name}: {report}"));
        }
    }
    let inst = regular_sym3_instance().unwrap();
    let l3 = build_ordered_pairs(3).unwrap().group;
    expect(&mut failures, "n = 3 locally L", is_locally(&inst, &l3).unwrap().holds, true);
    let report = verify_theorem(&LocalInput::graph(inst), 3).unwrap();
    expect(
        &mut failures,
        "n = 3: G_x^[1] = 1",
        report.check("G_x^[1] = 1").map(|c| c.status),
        Some(Status::Pass),
    );
    verdict(5, "fixity bound on constructed instances", start, Duration::from_secs(60), &failures);
}

#[test]
fn criterion_6_proof_trace() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let cert = construct_from_catalog(4, "tutte-coxeter").unwrap();
    let (trace, report) = proof_trace(&LocalInput::Amalgam(cert.output), 4).unwrap();
    expect(&mut failures, "p", trace.prime, Some(2));
    for check in &report.checks {
        if check.status != Status::Pass {
            failures.push(format!("{}: {:?} {}", check.name, check.status, check.details));
        }
    }
    let quotients: Vec<u64> = trace
        .r_circ
        .iter()
        .map(|r| r.order_u64() / trace.q_x.as_ref().unwrap().order_u64())
        .collect();
    expect(&mut failures, "|R_i° / Q_x|", quotients, vec![6, 6]);
    expect(&mut failures, "overall", report.overall, Status::Pass);
    verdict(6, "proof trace on the Tutte–Coxeter instance", start, Duration::from_secs(120), &failures);
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let config = || Config { cases: 200, failure_persistence: None, ..Config::default() };
    let mut record = |name: &str, result: Result<(), String>| {
        if let Err(e) = result {
            failures.push(format!("{name}: {e}"));
        }
    };

    record(
        "orbit-stabiliser",
        TestRunner::new(config())
            .run(&(common::small_group(), any::<prop::sample::Index>()), |(g, i)| {
                common::orbit_stabilizer(&g, i)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "core is the coset-action kernel",
        TestRunner::new(config())
            .run(&common::group_and_subgroup(), |(g, h)| common::core_is_coset_kernel(&g, &h))
            .map_err(|e| e.to_string()),
    );
    record(
        "O_p contains every normal p-subgroup",
        TestRunner::new(config())
            .run(&common::small_group(), |g| common::o_p_contains_normal_p_subgroups(&g))
            .map_err(|e| e.to_string()),
    );
    record(
        "Thompson hereditary",
        TestRunner::new(config())
            .run(
                &(
                    common::small_group(),
                    any::<prop::sample::Index>(),
                    prop::collection::vec(any::<prop::sample::Index>(), 0..=2),
                ),
                |(g, p, extra)| common::thompson_hereditary(&g, p, &extra),
            )
            .map_err(|e| e.to_string()),
    );
    record(
        "coprime action",
        TestRunner::new(config())
            .run(&(common::small_group(), any::<prop::sample::Index>()), |(g, p)| {
                common::coprime_action(&g, p)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "ball-stabiliser nesting",
        TestRunner::new(config())
            .run(
                &(any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0usize..3),
                |(i, v, r)| common::ball_nesting(i, v, r),
            )
            .map_err(|e| e.to_string()),
    );
    record(
        "core sequence equals ball-stabiliser orders",
        TestRunner::new(config())
            .run(&(any::<prop::sample::Index>(), any::<prop::sample::Index>()), |(i, e)| {
                common::cores_match_balls(i, e)
            })
            .map_err(|e| e.to_string()),
    );
    verdict(7, "property suites, 200 cases each", start, Duration::from_secs(600), &failures);
}
