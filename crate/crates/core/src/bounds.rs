//! Oracle action ∫g dt and the numerical audit of the overlap-sum
//! inequality and the √N lower bound.

use crate::model::PathSpec;
use crate::numerics::{quad_adaptive, Tolerance};
use crate::oracle::{evolve_full, FullState};
use crate::scheduler::Schedule;
use crate::{Error, Result};

/// All-pairs audit cap (N evolutions + N² overlaps).
pub const AUDIT_CAP: usize = 256;

/// The theorem audit report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BbbvReport {
    /// (1/ħ)∫₀ᵀ g(t) dt with ħ = 1.
    pub oracle_action: f64,
    /// Σ_{m,m'} [1 - |⟨ψ_m,T|ψ_{m'},T⟩|²].
    pub lhs_sum: f64,
    /// 4·N^{3/2}·oracle_action.
    pub rhs: f64,
    /// min over m ≠ m' of 1 - |⟨ψ_m,T|ψ_{m'},T⟩|².
    pub k_measured: f64,
    /// k_measured·√N/4.
    pub bound_rhs: f64,
    pub n: usize,
    pub total_time: f64,
    pub pass_time5: bool,
    pub pass_bound: bool,
}

/// ∫₀ᵀ g(t) dt evaluated by substitution: ∫₀¹ g(s)·(dt/ds) ds.
pub fn oracle_action(path: &PathSpec, schedule: &Schedule) -> Result<f64> {
    oracle_action_with_tol(path, schedule, &Tolerance::quadrature())
}

pub fn oracle_action_with_tol(path: &PathSpec, schedule: &Schedule, tol: &Tolerance) -> Result<f64> {
    let mut inner: Result<()> = Ok(());
    let v = quad_adaptive(
        |s| {
            match path
                .eval_path(s.clamp(0.0, 1.0))
                .and_then(|(_, g, _, _)| Ok(g * schedule.dt_ds(s.clamp(0.0, 1.0))?))
            {
                Ok(v) => v,
                Err(e) => {
                    if inner.is_ok() {
                        inner = Err(e);
                    }
                    0.0
                }
            }
        },
        0.0,
        1.0,
        tol,
    )?;
    inner?;
    Ok(v)
}

/// ∫₀ᵀ g(s(t)) dt by direct t-quadrature; cross-check for the substitution
/// route.
pub fn oracle_action_direct(path: &PathSpec, schedule: &Schedule) -> Result<f64> {
    let total = schedule.total_time();
    let mut inner: Result<()> = Ok(());
    let v = quad_adaptive(
        |t| {
            match schedule
                .s_of_t(t.clamp(0.0, total))
                .and_then(|s| path.eval_path(s).map(|(_, g, _, _)| g))
            {
                Ok(v) => v,
                Err(e) => {
                    if inner.is_ok() {
                        inner = Err(e);
                    }
                    0.0
                }
            }
        },
        0.0,
        total,
        &Tolerance::quadrature(),
    )?;
    inner?;
    Ok(v)
}

/// The final-state overlap matrix |⟨ψ_m,T|ψ_{m'},T⟩| for all marked pairs.
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    pub n: usize,
    /// Row-major absolute overlaps.
    pub values: Vec<f64>,
}

impl OverlapMatrix {
    pub fn get(&self, m: usize, mp: usize) -> f64 {
        self.values[m * self.n + mp]
    }
}

/// Evolve every marked index under the same path and schedule, assemble all
/// pairwise final overlaps, and evaluate both inequalities.
pub fn audit_theorem(
    path: &PathSpec,
    schedule: &Schedule,
    tol: &Tolerance,
) -> Result<(BbbvReport, OverlapMatrix)> {
    let n = path.n();
    if n > AUDIT_CAP {
        return Err(Error::CapExceeded { n, cap: AUDIT_CAP });
    }

    let finals: Result<Vec<FullState>> = (0..n)
        .map(|m| evolve_full(path, schedule, m, tol, 2).map(|t| t.final_state))
        .collect();
    let finals = finals?;

    let mut values = vec![0.0_f64; n * n];
    let mut lhs_sum = 0.0;
    let mut k_measured = f64::INFINITY;
    for m in 0..n {
        for mp in 0..n {
            let ovl = finals[m].overlap(&finals[mp])?;
            values[m * n + mp] = ovl;
            if m != mp {
                let dist = 1.0 - ovl * ovl;
                lhs_sum += dist;
                k_measured = k_measured.min(dist);
            }
        }
    }
    if !k_measured.is_finite() {
        k_measured = 0.0;
    }

    let action = oracle_action(path, schedule)?;
    let nf = n as f64;
    let rhs = 4.0 * nf.powf(1.5) * action;
    let bound_rhs = k_measured * nf.sqrt() / 4.0;
    let report = BbbvReport {
        oracle_action: action,
        lhs_sum,
        rhs,
        k_measured,
        bound_rhs,
        n,
        total_time: schedule.total_time(),
        pass_time5: lhs_sum <= rhs,
        pass_bound: action >= bound_rhs,
    };
    Ok((report, OverlapMatrix { n, values }))
}
