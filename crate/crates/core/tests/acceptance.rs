use std::process::ExitCode;
use std::time::{Duration, Instant};

use qpb_core::calculus::{is_admissible, ker_eps_squared_generators};
use qpb_core::hopf::elem_to_text;
use qpb_core::verify::{run_suite, CheckResult, VerifyOptions};
use qpb_core::Su2;

struct Criterion {
    passed: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn checks(suite: &str, opts: &VerifyOptions) -> (Vec<CheckResult>, Duration) {
    let (r, t) = timed(|| run_suite(suite, opts).expect("known suite"));
    (r.checks, t)
}

fn judge(all: &[CheckResult], ids: &[&str], limit: Option<(Duration, Duration)>) -> Criterion {
    let mut missing = Vec::new();
    let mut failed = Vec::new();
    for id in ids {
        match all.iter().find(|c| c.id == *id) {
            None => missing.push(id.to_string()),
            Some(c) if !c.passed => failed.push(format!("{} ({})", id, c.witness.clone().unwrap_or_default())),
            Some(_) => {}
        }
    }
    let mut detail = format!("{} checks", ids.len());
    let mut passed = missing.is_empty() && failed.is_empty();
    if let Some((took, max)) = limit {
        detail.push_str(&format!(", {:.1}s of {}s", took.as_secs_f64(), max.as_secs()));
        passed &= took < max;
    }
    if !missing.is_empty() {
        detail.push_str(&format!("; missing {}", missing.join(", ")));
    }
    if !failed.is_empty() {
        detail.push_str(&format!("; failed {}", failed.join(", ")));
    }
    Criterion { passed, detail }
}

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let with = |tag: &str| VerifyOptions { calculus: Some(tag.into()), ..VerifyOptions::default() };
    let mut results: Vec<(usize, Criterion)> = Vec::new();

    let (hopf, t) = checks("hopf", &opts);
    let ids = ["hopf.coassociativity", "hopf.counit", "hopf.antipode", "hopf.star_compatibility"];
    results.push((1, judge(&hopf, &ids, Some((t, Duration::from_secs(60))))));

    let (calc, _) = checks("calculus", &opts);
    results.push((2, judge(&calc, &["calculus.projection_of_generators", "calculus.module_structure"], None)));

    let mut c3 = judge(&calc, &["calculus.minimal_ideal_admissible", "calculus.ker_eps_squared_generic_not_admissible"], None);
    let h1 = Su2::minus_one();
    let c3_other_clauses = c3.passed;
    let gens = ker_eps_squared_generators(&h1);
    let at_minus_one = is_admissible(&h1, &gens, 2);
    if !at_minus_one.admissible {
        c3.passed = false;
        let w = at_minus_one
            .witness
            .map(|(i, m, v)| format!("({}) {} maps to {}", elem_to_text(&gens[i], false), m, elem_to_text(&v, false)))
            .unwrap_or_default();
        c3.detail.push_str(&format!("; ker(eps)^2 at mu = -1 is not admissible: under (X (x) id)ad {}", w));
    }
    results.push((3, c3));

    let (qs, _) = checks("qspecial", &opts);
    results.push((4, judge(&qs, &["qspecial.k3_commutators", "qspecial.ladder_commutator", "qspecial.twisted_leibniz"], None)));
    let ids = ["qspecial.orthogonality", "qspecial.harmonic_ladders", "qspecial.partial_integration"];
    results.push((5, judge(&qs, &ids, None)));

    let (b4, t) = checks("braid", &with("4d"));
    let ids = [
        "braid.4d.sigma_table",
        "braid.4d.spectrum",
        "braid.4d.quadratic_ideal",
        "braid.4d.ideal_sigma_fixed",
        "braid.4d.braid_equation",
        "braid.4d.unitarity",
    ];
    results.push((6, judge(&b4, &ids, Some((t, Duration::from_secs(300))))));

    let (b1, _) = checks("braid", &with("mu-minus-one"));
    let (bm, _) = checks("braid", &with("minimal"));
    let braids: Vec<CheckResult> = b4.into_iter().chain(b1).chain(bm).collect();
    let ids = [
        "braid.4d.commutator_identity",
        "braid.mu-minus-one.commutator_identity",
        "braid.minimal.commutator_identity",
        "braid.mu-minus-one.restriction_identity",
        "braid.minimal.restriction_identity",
    ];
    results.push((7, judge(&braids, &ids, None)));

    let (g4, t4) = checks("gauge", &with("4d"));
    results.push((8, judge(&g4, &["gauge.4d.curvature_components"], None)));

    let (g1, t1) = checks("gauge", &with("mu-minus-one"));
    let mut c9 = judge(&g4, &["gauge.4d.structure_equation", "gauge.4d.bianchi_identity"], Some((t4, Duration::from_secs(300))));
    let ids = [
        "gauge.mu-minus-one.structure_equation",
        "gauge.mu-minus-one.bianchi_identity",
        "gauge.mu-minus-one.q_omega_vanishes",
        "gauge.mu-minus-one.bianchi_right_side_vanishes",
    ];
    let c9b = judge(&g1, &ids, Some((t1, Duration::from_secs(300))));
    c9.passed &= c9b.passed;
    c9.detail = format!("4d: {}; mu = -1: {}", c9.detail, c9b.detail);
    results.push((9, c9));

    let (bundle, _) = checks("bundle", &opts);
    let ids = [
        "bundle.cocycle_valid",
        "bundle.cocycle_violation_detected",
        "bundle.closure",
        "bundle.coaction_laws",
        "bundle.coinvariants_are_base",
        "bundle.fixed_point_isomorphism",
    ];
    results.push((10, judge(&bundle, &ids, None)));

    let (gm, _) = checks("gauge", &with("minimal"));
    let gauges: Vec<CheckResult> = gm.into_iter().chain(g1).collect();
    let ids = [
        "gauge.minimal.decomposition",
        "gauge.minimal.r_omega_classical",
        "gauge.mu-minus-one.r_omega_vanishes",
        "gauge.minimal.r_omega_witness",
    ];
    results.push((11, judge(&gauges, &ids, None)));

    for (n, c) in &results {
        println!("criterion {:>2}: {}  {}", n, if c.passed { "PASS" } else { "FAIL" }, c.detail);
    }
    // only the mu = -1 clause of criterion 3 is allowed to fail
    let gating_failure = !c3_other_clauses || results.iter().any(|(n, c)| *n != 3 && !c.passed);
    if gating_failure {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
