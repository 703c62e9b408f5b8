//! Acceptance suite. Prints one PASS/FAIL line per criterion, then asserts the
//! computed values, including those that disagree with the displayed formulas.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tautrel::closed::{verify_kdv, verify_virasoro, ClosedPotential, Descendents};
use tautrel::frobenius::{cp1, spin3};
use tautrel::named::{
    d_coeff, first_mismatch, ode_ab_residual, ode_hypergeometric_residual, phi_ode_residual, reflection_sum,
    sample_phi_points, series_a, series_cal_a, series_d, series_d_from_ode, series_h0, series_h1,
};
use tautrel::rational::{format_rational, int, rat};
use tautrel::report::Check;
use tautrel::series::PowerSeries;
use tautrel::{airy, kontsevich, open, pixton, strata};

/// Seed for every random specialization below.
const SEED: u64 = 20_240_601;
/// Significant digits required between the two Airy oracles.
const AIRY_ORACLE_DIGITS: f64 = 10.0;
/// Working precision for the Airy evaluations.
const AIRY_BITS: usize = 256;
/// Multiple of the first omitted term allowed as asymptotic error.
const AIRY_ENVELOPE: u32 = 2;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_checks(checks: &[Check]) -> Self {
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| match &c.mismatch {
                Some(m) => format!("{} at {}: expected {}, computed {}", c.name, m.location, m.expected, m.computed),
                None => format!("{}: {}", c.name, c.detail),
            })
            .collect();
        if failed.is_empty() {
            Outcome { passed: true, detail: format!("{} checks", checks.len()) }
        } else {
            Outcome { passed: false, detail: failed.join("; ") }
        }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> (Outcome, Vec<String>),
}

fn zero_check(name: &str, var: &str, residual: &PowerSeries) -> Check {
    Check::from_mismatch(name, "acceptance", "", first_mismatch(var, residual, &PowerSeries::zero(residual.order())))
}

fn c1() -> (Outcome, Vec<String>) {
    let checks = [
        zero_check("3z^2A' + (z/2-1)A - B", "z", &ode_ab_residual(30)),
        zero_check("3z^2A'' + (6z-2)A' + (5/12)A", "z", &ode_hypergeometric_residual(30)),
    ];
    (Outcome::from_checks(&checks), Vec::new())
}

fn c2() -> (Outcome, Vec<String>) {
    let checks = [
        Check::from_mismatch("reflection", "acceptance", "", first_mismatch("T", &reflection_sum(30), &PowerSeries::constant(int(2), 30))),
        Check::from_mismatch(
            "H0 printed",
            "acceptance",
            "",
            first_mismatch("T", &series_h0(2), &PowerSeries::from_coeffs(vec![int(1), int(-60), int(27720)])),
        ),
        Check::from_mismatch(
            "H1 printed",
            "acceptance",
            "",
            first_mismatch("T", &series_h1(2), &PowerSeries::from_coeffs(vec![int(1), int(84), int(-32760)])),
        ),
    ];
    (Outcome::from_checks(&checks), Vec::new())
}

fn c3() -> (Outcome, Vec<String>) {
    let mut checks = Vec::new();
    let mut worst = f64::INFINITY;
    for x in [5, 10, 20] {
        for prime in [false, true] {
            let reports = match airy::asymptotic_reports(&int(x), 1..=5, prime, AIRY_BITS) {
                Ok(r) => r,
                Err(e) => {
                    checks.push(Check::fail(format!("x={x}"), "acceptance", e.to_string(), None));
                    continue;
                }
            };
            for r in reports {
                worst = worst.min(r.oracle_agreement_digits);
                let name = format!("{} x={x} k={}", if prime { "Ai'" } else { "Ai" }, r.terms);
                checks.push(if r.envelope_ok {
                    Check::pass(name, "acceptance", "")
                } else {
                    Check::fail(
                        name,
                        "acceptance",
                        format!("|error| {} exceeds {AIRY_ENVELOPE} x {}", r.abs_error, r.first_omitted_term),
                        None,
                    )
                });
                if r.oracle_agreement_digits < AIRY_ORACLE_DIGITS {
                    checks.push(Check::fail(
                        format!("{} x={x} oracles", if prime { "Ai'" } else { "Ai" }),
                        "acceptance",
                        format!("{:.1} digits", r.oracle_agreement_digits),
                        None,
                    ));
                }
            }
        }
    }
    let mut out = Outcome::from_checks(&checks);
    if out.passed {
        out.detail = format!("{} truncations inside the envelope, oracles agree to >= {worst:.1} digits", checks.len());
    }
    (out, Vec::new())
}

fn c4() -> (Outcome, Vec<String>) {
    let pot = ClosedPotential::by_length(3, 15);
    let mut checks = verify_virasoro(&pot, 4);
    checks.extend(verify_kdv(&pot));
    let table = Descendents::new();
    let mut bad = Vec::new();
    if table.bracket(&[0, 0, 0]) != int(1) {
        bad.push(format!("<tau_0^3>_0 = {}", format_rational(&table.bracket(&[0, 0, 0]))));
    }
    if table.bracket(&[1]) != rat(1, 24) {
        bad.push(format!("<tau_1>_1 = {}", format_rational(&table.bracket(&[1]))));
    }
    let mut out = Outcome::from_checks(&checks);
    if !bad.is_empty() {
        out.passed = false;
        out.detail = format!("{}; {}", out.detail, bad.join("; "));
    } else if out.passed {
        out.detail = format!("{}; <tau_0^3>_0 = 1, <tau_1>_1 = 1/24", out.detail);
    }
    (out, bad)
}

fn c5() -> (Outcome, Vec<String>) {
    let mut bad = Vec::new();
    let specialized = kontsevich::specialize_airy(12);
    let target = series_cal_a(12);
    let printed = [(0, int(1)), (3, rat(-5, 24)), (6, rat(385, 1152))];
    for (k, v) in &printed {
        if target.at(*k) != v {
            bad.push(format!("calA at y^{k}: {}", format_rational(target.at(*k))));
        }
    }
    let check = match specialized {
        Ok(s) => Check::from_mismatch("specialization", "acceptance", "", first_mismatch("y", &s, &target)),
        Err(e) => Check::fail("specialization", "acceptance", e.to_string(), None),
    };
    let mut out = Outcome::from_checks(&[check]);
    if bad.is_empty() && out.passed {
        out.detail = format!(
            "equal through y^12; a_3 = {}, a_4 = {}",
            format_rational(target.at(9)),
            format_rational(target.at(12))
        );
    } else if !bad.is_empty() {
        out.passed = false;
        out.detail = format!("{}; {}", out.detail, bad.join("; "));
    }
    (out, bad)
}

fn c6() -> (Outcome, Vec<String>) {
    (Outcome::from_checks(&kontsevich::verify(12, 8)), Vec::new())
}

fn c7() -> (Outcome, Vec<String>) {
    match open::verify_open(8, 3) {
        Ok(c) => (Outcome::from_checks(&c), Vec::new()),
        Err(e) => (Outcome { passed: false, detail: e.to_string() }, vec![e.to_string()]),
    }
}

fn c8() -> (Outcome, Vec<String>) {
    let mut unexpected = Vec::new();
    let ode = first_mismatch("x", &series_d(21), &series_d_from_ode(21));
    if let Some(m) = &ode {
        unexpected.push(format!("closed form vs ODE at {}", m.location));
    }
    let d1 = d_coeff(1);
    // The closed form and the ODE both give 41/24.
    if d1 != rat(41, 24) {
        unexpected.push(format!("d_1 = {}", format_rational(&d1)));
    }
    let expected = rat(113, 24);
    let passed = ode.is_none() && d1 == expected;
    let detail = if d1 == expected {
        "closed form equals the ODE solution through x^21; d_1 = 113/24".to_string()
    } else {
        format!(
            "closed form equals the ODE solution through x^21, but d_1: expected {}, computed {}",
            format_rational(&expected),
            format_rational(&d1)
        )
    };
    (Outcome { passed, detail }, unexpected)
}

fn c9() -> (Outcome, Vec<String>) {
    match strata::census::verify() {
        Ok(c) => (Outcome::from_checks(&c), Vec::new()),
        Err(e) => (Outcome { passed: false, detail: e.to_string() }, vec![e.to_string()]),
    }
}

fn c10() -> (Outcome, Vec<String>) {
    match pixton::verify() {
        Ok(c) => (Outcome::from_checks(&c), Vec::new()),
        Err(e) => (Outcome { passed: false, detail: e.to_string() }, vec![e.to_string()]),
    }
}

fn c11() -> (Outcome, Vec<String>) {
    let mut unexpected = Vec::new();
    let checks = match spin3::verify(6) {
        Ok(c) => c,
        Err(e) => return (Outcome { passed: false, detail: e.to_string() }, vec![e.to_string()]),
    };
    let by_name = |n: &str| checks.iter().find(|c| c.name == n).cloned().expect("check present");
    // The recursion's R differs from the displayed matrix in the sign of the (0,1) entry.
    let literal = by_name("3-spin R from flatness vs closed form");
    match &literal.mismatch {
        Some(m) if m.location == "R[0][1] at z^1" && m.computed == "-7/144" && m.expected == "7/144" => {}
        other => unexpected.push(format!("literal comparison: {other:?}")),
    }
    for name in [
        "3-spin R vs closed form with R[0][1] negated",
        "S = Psi R e^(u/z) from the solved R",
        "Airy equation for S^1 from the closed form",
        "Airy equation without e^(u/z) fails",
        "3-spin product from the potential",
    ] {
        if !by_name(name).passed {
            unexpected.push(format!("{name} failed"));
        }
    }
    if by_name("S = Psi R e^(u/z) from the closed form").passed {
        unexpected.push("displayed matrix unexpectedly satisfies flatness".into());
    }
    let out = Outcome::from_checks(&checks);
    (out, unexpected)
}

fn c12() -> (Outcome, Vec<String>) {
    let mut checks = Vec::new();
    let pts = sample_phi_points(SEED, 5, 15);
    for (l, z) in &pts {
        match phi_ode_residual(15, l, z) {
            Ok(r) => checks.push(zero_check(&format!("Phi ODE at ({}, {})", format_rational(l), format_rational(z)), "q", &r)),
            Err(e) => checks.push(Check::fail("Phi ODE", "acceptance", e.to_string(), None)),
        }
    }
    match (cp1::cp1_gamma_limit_check(SEED, -1), cp1::cp1_gamma_limit_check(SEED, 1)) {
        (Ok(true), Ok(false)) => checks.push(Check::pass("Gamma identity", "acceptance", "")),
        other => checks.push(Check::fail("Gamma identity", "acceptance", format!("{other:?}"), None)),
    }
    let lead = cp1::cp1_leading_limit(10);
    checks.push(Check::from_mismatch("leading limit", "acceptance", "", first_mismatch("X", &lead, &series_a(10))));
    let mut out = Outcome::from_checks(&checks);
    if out.passed {
        out.detail = format!(
            "Phi ODE through q^15 at {} points; Gamma identity and its control; leading limit 1 + {} X",
            pts.len(),
            format_rational(lead.at(1))
        );
    }
    (out, Vec::new())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "A/B differential equations through z^30", budget: Duration::from_secs(1), run: c1 },
        Criterion { id: 2, title: "H0/H1 reflection and printed coefficients", budget: Duration::from_secs(1), run: c2 },
        Criterion { id: 3, title: "Airy asymptotics at x = 5, 10, 20", budget: Duration::from_secs(30), run: c3 },
        Criterion { id: 4, title: "Virasoro and KdV, genus <= 3", budget: Duration::from_secs(120), run: c4 },
        Criterion { id: 5, title: "Airy specialization of exp(F^c)", budget: Duration::from_secs(60), run: c5 },
        Criterion { id: 6, title: "determinantal formula, N = 1 and N = 2", budget: Duration::from_secs(120), run: c6 },
        Criterion { id: 7, title: "open potential three-way agreement", budget: Duration::from_secs(120), run: c7 },
        Criterion { id: 8, title: "D-series closed form vs ODE and d_1", budget: Duration::from_secs(1), run: c8 },
        Criterion { id: 9, title: "stable graph census", budget: Duration::from_secs(10), run: c9 },
        Criterion { id: 10, title: "Pixton zero pairings and edge coefficients", budget: Duration::from_secs(300), run: c10 },
        Criterion { id: 11, title: "3-spin R-matrix and flatness", budget: Duration::from_secs(60), run: c11 },
        Criterion { id: 12, title: "CP1 ODE, Gamma identity and leading limit", budget: Duration::from_secs(60), run: c12 },
    ];
    let mut unexpected = Vec::new();
    let mut results = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let (outcome, bad) = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let passed = outcome.passed && in_time;
        let timing = if in_time {
            format!("{:.2}s of {}s", elapsed.as_secs_f64(), c.budget.as_secs())
        } else {
            format!("{:.2}s exceeds {}s", elapsed.as_secs_f64(), c.budget.as_secs())
        };
        println!(
            "{} criterion {:>2}: {} ({}) [{}]",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            outcome.detail,
            timing
        );
        unexpected.extend(bad.into_iter().map(|b| format!("criterion {}: {b}", c.id)));
        results.push((c.id, outcome.passed));
    }
    // Criteria 8 and 11 fail against the displayed values; every other criterion must hold.
    for (id, passed) in &results {
        let documented_failure = matches!(id, 8 | 11);
        if *passed == documented_failure {
            unexpected.push(format!("criterion {id}: passed = {passed}, documented {}", !documented_failure));
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: results match the documented values");
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
