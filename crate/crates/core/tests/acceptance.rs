//! Acceptance gate: one check per shipped guarantee, each printing a single
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture` to
//! see the summary lines.

use adsearch::bounds::audit_theorem;
use adsearch::dynamics::{evolve_reduced, evolve_reduced_with_tol, final_fidelity};
use adsearch::model::PathSpec;
use adsearch::numerics::Tolerance;
use adsearch::oracle::{evolve_full, evolve_shifted, verify_degeneracy, verify_reduction};
use adsearch::scheduler::{synthesize, ProblemSpec, Schedule};

const CONSTANT_TIME_LIMIT: f64 = 1.0 + std::f64::consts::FRAC_PI_2;

fn report(criterion: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {criterion}: {detail}");
    assert!(pass, "{criterion}: {detail}");
}

fn saturating(n: usize, a: f64, epsilon: f64) -> (ProblemSpec, Schedule) {
    let path =
        if a == 0.0 { PathSpec::linear(n).unwrap() } else { PathSpec::quadratic(n, a).unwrap() };
    let spec = ProblemSpec::new(path, epsilon).unwrap();
    let schedule = Schedule::Synthesized(synthesize(&spec, 64).unwrap());
    (spec, schedule)
}

#[test]
fn c1_closed_form_run_time_linear_path() {
    let mut worst = 0.0_f64;
    for n in [2usize, 101, 10_000, 1_000_000] {
        let spec = ProblemSpec::new(PathSpec::linear(n).unwrap(), 0.1).unwrap();
        let got = 0.1 * spec.t_min().unwrap();
        let expect = (n as f64 - 1.0).sqrt();
        worst = worst.max((got - expect).abs() / expect);
    }
    report(
        "closed-form eps*T_min = sqrt(N-1), N in {2, 101, 1e4, 1e6}",
        worst <= 1e-6,
        &format!("worst relative error {worst:.3e} (<= 1e-6)"),
    );
}

#[test]
fn c2_constant_time_limit() {
    let errs: Vec<f64> = [1_000usize, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&n| {
            let a = (n as f64).sqrt();
            let spec = ProblemSpec::new(PathSpec::quadratic(n, a).unwrap(), 0.1).unwrap();
            (0.1 * spec.t_min().unwrap() - CONSTANT_TIME_LIMIT).abs()
        })
        .collect();
    let at_1e5 = errs[2] / CONSTANT_TIME_LIMIT;
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    report(
        "constant-time limit eps*T_min -> 1+pi/2 with A = sqrt(N)",
        at_1e5 <= 0.01 && monotone,
        &format!(
            "relative error {at_1e5:.3e} at N = 1e5 (<= 1e-2), error trend {errs:?} monotone: {monotone}"
        ),
    );
}

#[test]
fn c3_constant_time_trace() {
    let n = 100_000usize;
    let eps = 0.002;
    let (spec, schedule) = saturating(n, (n as f64).sqrt(), eps);
    let trace = evolve_reduced(&spec, &schedule, 400).unwrap();
    let min_p = trace.samples.iter().map(|s| s.p_minus).fold(f64::INFINITY, f64::min);
    let final_eps_t = eps * trace.total_time;
    let pass = min_p >= 1.0 - 10.0 * eps * eps && (2.55..=2.59).contains(&final_eps_t);
    report(
        "constant-time trace at N = 1e5, eps = 0.002",
        pass,
        &format!("min P- = {min_p:.8} (>= {:.6}), final eps*t = {final_eps_t:.5} (in [2.55, 2.59])",
            1.0 - 10.0 * eps * eps),
    );
}

#[test]
fn c4_reduction_exactness() {
    let n = 64usize;
    let tol = Tolerance::ode_tight();
    let mut worst = 0.0_f64;
    for a in [0.0, 8.0] {
        let (spec, schedule) = saturating(n, a, 0.05);
        worst = worst.max(verify_reduction(&spec, &schedule, 11, 40, &tol).unwrap());
        let quench = Schedule::ramp(1e-6).unwrap();
        worst = worst.max(verify_reduction(&spec, &quench, 11, 40, &tol).unwrap());
    }
    report(
        "two-level reduction exact at N = 64, A in {0, 8}, saturating + quench",
        worst <= 1e-6,
        &format!("max |P-_reduced - P-_full| = {worst:.3e} (<= 1e-6)"),
    );
}

#[test]
fn c5_spectrum_structure() {
    let n = 16usize;
    let mut worst_spread = 0.0_f64;
    let mut worst_forbidden = 0.0_f64;
    for a in [0.0, 4.0] {
        let path =
            if a == 0.0 { PathSpec::linear(n).unwrap() } else { PathSpec::quadratic(n, a).unwrap() };
        for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let (spread, forbidden) = verify_degeneracy(&path, s, 3).unwrap();
            worst_spread = worst_spread.max(spread);
            worst_forbidden = worst_forbidden.max(forbidden);
        }
    }
    report(
        "dense spectrum: (N-2)-fold degeneracy and forbidden couplings at N = 16",
        worst_spread <= 1e-10 && worst_forbidden <= 1e-10,
        &format!("eigenvalue spread {worst_spread:.3e}, coupling residual {worst_forbidden:.3e} (both <= 1e-10)"),
    );
}

#[test]
fn c6_peak_ground_energy() {
    let n = 10_000usize;
    let a = 100.0;
    let path = PathSpec::quadratic(n, a).unwrap();
    let mut peak = 0.0_f64;
    for i in 0..=20_000 {
        let s = i as f64 / 20_000.0;
        peak = peak.max(path.spectrum_at(s).unwrap().e_minus);
    }
    let expect = (a + 1.0) / 4.0;
    let rel = (peak - expect).abs() / expect;
    report(
        "peak ground energy (A+1)/4 at N = 1e4, A = 100",
        rel <= 0.01,
        &format!("max E- = {peak:.6} vs {expect} (relative error {rel:.3e} <= 1e-2)"),
    );
}

#[test]
fn c7_overlap_sum_audit() {
    let n = 64usize;
    let eps = 0.01;
    let (spec, schedule) = saturating(n, 0.0, eps);
    let tol = Tolerance::ode();

    let mut all_hold = true;
    let mut details = Vec::new();
    for factor in [1e-3, 1.0, 10.0] {
        let sch = schedule.time_scaled(factor).unwrap();
        let (rep, _) = audit_theorem(spec.path(), &sch, &tol).unwrap();
        all_hold &= rep.pass_time5;
        details.push(format!("T = {:.3e}: lhs {:.4e} <= rhs {:.4e}", rep.total_time, rep.lhs_sum, rep.rhs));
    }
    let (rep, _) = audit_theorem(spec.path(), &schedule, &tol).unwrap();
    let bound_ok = rep.pass_bound;
    report(
        "overlap-sum inequality across {1e-3, 1, 10} x T_min and action bound at T_min",
        all_hold && bound_ok,
        &format!(
            "{}; successful search action {:.4} >= k*sqrt(N)/4 = {:.4} with k = {:.4}",
            details.join("; "),
            rep.oracle_action,
            rep.bound_rhs,
            rep.k_measured
        ),
    );
}

#[test]
fn c8_gauge_shift_invariance() {
    let n = 64usize;
    let (spec, schedule) = saturating(n, 8.0, 0.05);
    let tol = Tolerance::ode_tight();
    let plain = evolve_full(spec.path(), &schedule, 7, &tol, 40).unwrap();
    let shifted = evolve_shifted(spec.path(), &schedule, 7, &tol, 40).unwrap();
    let overlap_dev = (plain.final_state.overlap(&shifted.final_state).unwrap() - 1.0).abs();
    let trace_dev = plain
        .samples
        .iter()
        .zip(&shifted.samples)
        .map(|(a, b)| (a.p_ground - b.p_ground).abs())
        .fold(0.0_f64, f64::max);
    report(
        "gauge shift H - E-(t)I leaves the physics unchanged at N = 64, A = 8",
        overlap_dev <= 1e-8 && trace_dev <= 1e-8,
        &format!("| |overlap| - 1 | = {overlap_dev:.3e}, max P- deviation {trace_dev:.3e} (both <= 1e-8)"),
    );
}

#[test]
fn c9_property_suite() {
    // Norm conservation on two-level runs.
    let mut worst_drift = 0.0_f64;
    for (n, a, eps) in [(100usize, 0.0, 0.05), (10_000, 100.0, 0.01), (64, 8.0, 0.1)] {
        let (spec, schedule) = saturating(n, a, eps);
        let trace = evolve_reduced_with_tol(&spec, &schedule, 20, &Tolerance::ode()).unwrap();
        worst_drift = worst_drift.max(trace.norm_drift);
    }

    // Saturation residual of synthesized schedules.
    let mut worst_residual = 0.0_f64;
    for (n, a) in [(64usize, 0.0), (1_000, 0.0), (10_000, 100.0)] {
        let spec = ProblemSpec::new(
            if a == 0.0 {
                PathSpec::linear(n).unwrap()
            } else {
                PathSpec::quadratic(n, a).unwrap()
            },
            0.05,
        )
        .unwrap();
        worst_residual = worst_residual.max(synthesize(&spec, 64).unwrap().saturation_residual());
    }

    // eps*T_min does not depend on eps.
    let path = PathSpec::quadratic(1_000, 5.0).unwrap();
    let mut values = Vec::new();
    for eps in [0.01, 0.1, 0.5] {
        let spec = ProblemSpec::new(path.clone(), eps).unwrap();
        values.push(eps * spec.t_min().unwrap());
    }
    let spread =
        values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let eps_independence = (spread.1 - spread.0) / spread.1;

    report(
        "property suite: norm drift, saturation residual, eps-independence",
        worst_drift <= 1e-9 && worst_residual <= 1e-6 && eps_independence <= 1e-9,
        &format!(
            "norm drift {worst_drift:.3e} (<= 1e-9), residual {worst_residual:.3e} (<= 1e-6), eps*T_min spread {eps_independence:.3e} (<= 1e-9)"
        ),
    );
}

#[test]
fn reduced_final_fidelity_meets_order_eps_squared() {
    // Cross-check used by several criteria: the saturating schedule delivers
    // 1 - O(eps^2) fidelity on both path families.
    for (n, a) in [(1_000usize, 0.0), (1_000, 31.6227766)] {
        let eps = 0.05;
        let (spec, schedule) = saturating(n, a, eps);
        let trace = evolve_reduced(&spec, &schedule, 10).unwrap();
        let fid = final_fidelity(&trace).unwrap();
        assert!(fid >= 1.0 - 10.0 * eps * eps, "A = {a}: fidelity {fid}");
    }
}
