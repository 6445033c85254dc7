//! Locally adiabatic schedule synthesis: the time parametrization s(t) that
//! saturates the adiabatic criterion ṡ|M|/ω² = ε at every instant, minimum
//! run times, and the (N, α) scan with A = N^α.

use crate::model::PathSpec;
use crate::numerics::{quad_adaptive, MonotoneTable, Tolerance};
use crate::{Error, Result};

/// A path together with the accuracy parameter ε of the adiabatic criterion.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    path: PathSpec,
    epsilon: f64,
}

impl ProblemSpec {
    pub fn new(path: PathSpec, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        Ok(Self { path, epsilon })
    }

    pub fn path(&self) -> &PathSpec {
        &self.path
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The rate ṡ = ε·ω²/|M| that saturates the adiabatic criterion at `s`.
    pub fn saturating_sdot(&self, s: f64) -> Result<f64> {
        let pt = self.path.spectrum_at(s)?;
        if pt.m == 0.0 {
            return Err(Error::ScheduleDegenerate { s_lo: s, s_hi: s });
        }
        Ok(self.epsilon * pt.omega * pt.omega / pt.m.abs())
    }

    /// Inverse rate dt/ds = |M|/(ε·ω²) at `s`.
    fn dt_ds(&self, s: f64) -> Result<f64> {
        Ok(1.0 / self.saturating_sdot(s)?)
    }

    /// Minimum running time T = (1/ε)∫₀¹ |M|/ω² ds for the saturating schedule.
    pub fn t_min(&self) -> Result<f64> {
        self.t_min_with_tol(&Tolerance { rel: 1e-12, abs: 0.0, max_steps: 4000 })
    }

    pub fn t_min_with_tol(&self, tol: &Tolerance) -> Result<f64> {
        let mut inner: Result<()> = Ok(());
        let v = quad_adaptive(
            |s| match self.dt_ds(s) {
                Ok(v) => v,
                Err(e) => {
                    if inner.is_ok() {
                        inner = Err(e);
                    }
                    0.0
                }
            },
            0.0,
            1.0,
            tol,
        )?;
        inner?;
        Ok(v)
    }
}

/// A synthesized monotone map t(s) on [0, T_min] saturating the criterion.
#[derive(Debug, Clone)]
pub struct SynthesizedSchedule {
    t_of_s: MonotoneTable,
    t_min: f64,
    saturation_residual: f64,
}

impl SynthesizedSchedule {
    pub fn t_of_s(&self) -> &MonotoneTable {
        &self.t_of_s
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    /// max over the verification grid of |(ṡ·|M|/ω²)/ε - 1|.
    pub fn saturation_residual(&self) -> f64 {
        self.saturation_residual
    }
}

/// Tabulate t(s) on an adaptively refined s-grid: segments whose cubic
/// Hermite interpolant fails the saturation check at interior probe points
/// are bisected until the residual meets 1e-6 everywhere. t increments come
/// from local quadrature of dt/ds with exact endpoint slopes.
pub fn synthesize(spec: &ProblemSpec, grid_size: usize) -> Result<SynthesizedSchedule> {
    if grid_size < 64 {
        return Err(Error::Domain(format!("grid_size must be ≥ 64, got {grid_size}")));
    }
    let t_total = spec.t_min()?;
    let quad_tol = Tolerance { rel: 1e-12, abs: 0.0, max_steps: 2000 };

    // Segments as (s_lo, s_hi, Δt).
    let mut segments: Vec<(f64, f64, f64)> = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let lo = i as f64 / grid_size as f64;
        let hi = (i + 1) as f64 / grid_size as f64;
        segments.push((lo, hi, segment_time(spec, lo, hi, &quad_tol)?));
    }

    const RESIDUAL_LIMIT: f64 = 1e-6;
    const KNOT_CAP: usize = 1 << 18;
    loop {
        let mut refined = Vec::with_capacity(segments.len());
        let mut any_split = false;
        for &(lo, hi, dt) in &segments {
            if segment_residual(spec, lo, hi, dt)? > 0.5 * RESIDUAL_LIMIT && segments.len() < KNOT_CAP {
                let mid = 0.5 * (lo + hi);
                let dt_lo = segment_time(spec, lo, mid, &quad_tol)?;
                refined.push((lo, mid, dt_lo));
                refined.push((mid, hi, dt - dt_lo));
                any_split = true;
            } else {
                refined.push((lo, hi, dt));
            }
        }
        segments = refined;
        if !any_split {
            break;
        }
    }

    // Assemble cumulative knots.
    let mut s_knots = Vec::with_capacity(segments.len() + 1);
    let mut t_knots = Vec::with_capacity(segments.len() + 1);
    s_knots.push(0.0);
    t_knots.push(0.0);
    let mut acc = 0.0;
    for &(_, hi, dt) in &segments {
        acc += dt;
        s_knots.push(hi);
        t_knots.push(acc);
    }
    if (acc - t_total).abs() > 1e-8 * t_total {
        return Err(Error::Domain(format!(
            "schedule tabulation inconsistent with t_min: {acc} vs {t_total}"
        )));
    }
    let slopes: Result<Vec<f64>> = s_knots.iter().map(|&s| spec.dt_ds(s)).collect();
    let knots = s_knots.len();
    let table = MonotoneTable::with_derivatives(s_knots, t_knots, slopes?)?;

    let residual = saturation_residual(spec, &table, 10 * knots)?;
    if residual > RESIDUAL_LIMIT {
        return Err(Error::Domain(format!(
            "saturation residual {residual} above {RESIDUAL_LIMIT} at {knots} knots"
        )));
    }
    Ok(SynthesizedSchedule { t_of_s: table, t_min: acc, saturation_residual: residual })
}

fn segment_time(spec: &ProblemSpec, lo: f64, hi: f64, tol: &Tolerance) -> Result<f64> {
    let mut inner: Result<()> = Ok(());
    let v = quad_adaptive(
        |s| match spec.dt_ds(s.clamp(0.0, 1.0)) {
            Ok(v) => v,
            Err(e) => {
                if inner.is_ok() {
                    inner = Err(e);
                }
                0.0
            }
        },
        lo,
        hi,
        tol,
    )?;
    inner?;
    Ok(v)
}

/// Worst saturation error of one Hermite segment at interior probe points.
fn segment_residual(spec: &ProblemSpec, lo: f64, hi: f64, dt: f64) -> Result<f64> {
    let h = hi - lo;
    let m_lo = spec.dt_ds(lo)?;
    let m_hi = spec.dt_ds(hi)?;
    let t_lo = 0.0; // local coordinates; only the derivative matters
    let t_hi = dt;
    let mut worst = 0.0_f64;
    for &u in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        // d/ds of the cubic Hermite on the segment.
        let dh00 = (6.0 * u * u - 6.0 * u) / h;
        let dh10 = 3.0 * u * u - 4.0 * u + 1.0;
        let dh01 = -dh00;
        let dh11 = 3.0 * u * u - 2.0 * u;
        let deriv = dh00 * t_lo + dh10 * m_lo + dh01 * t_hi + dh11 * m_hi;
        let exact = spec.dt_ds(lo + u * h)?;
        worst = worst.max((deriv / exact - 1.0).abs());
    }
    Ok(worst)
}

fn saturation_residual(spec: &ProblemSpec, table: &MonotoneTable, grid: usize) -> Result<f64> {
    let (_, t_end) = table.y_range();
    let mut worst = 0.0_f64;
    for j in 0..=grid {
        let t = (t_end * j as f64 / grid as f64).min(t_end);
        let s = table.invert(t)?;
        let sdot = 1.0 / table.deriv(s)?;
        let pt = spec.path().spectrum_at(s)?;
        let criterion = sdot * pt.m.abs() / (pt.omega * pt.omega);
        worst = worst.max((criterion / spec.epsilon() - 1.0).abs());
    }
    Ok(worst)
}

/// A time parametrization usable by both evolution engines.
#[derive(Debug, Clone)]
pub enum Schedule {
    /// A synthesized locally adiabatic schedule.
    Synthesized(SynthesizedSchedule),
    /// Linear ramp s = t/T; T → 0 is the sudden quench.
    Ramp { total_time: f64 },
}

impl Schedule {
    pub fn ramp(total_time: f64) -> Result<Self> {
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(Error::Domain(format!("total_time must be positive, got {total_time}")));
        }
        Ok(Self::Ramp { total_time })
    }

    pub fn total_time(&self) -> f64 {
        match self {
            Self::Synthesized(s) => s.t_min(),
            Self::Ramp { total_time } => *total_time,
        }
    }

    pub fn dt_ds(&self, s: f64) -> Result<f64> {
        match self {
            Self::Synthesized(sch) => sch.t_of_s().deriv(s),
            Self::Ramp { total_time } => Ok(*total_time),
        }
    }

    pub fn t_of_s(&self, s: f64) -> Result<f64> {
        match self {
            Self::Synthesized(sch) => sch.t_of_s().eval(s),
            Self::Ramp { total_time } => Ok(s * total_time),
        }
    }

    pub fn s_of_t(&self, t: f64) -> Result<f64> {
        match self {
            Self::Synthesized(sch) => {
                // Guard against one-ulp overshoot from t-grid arithmetic.
                let (lo, hi) = sch.t_of_s().y_range();
                sch.t_of_s().invert(t.clamp(lo, hi))
            }
            Self::Ramp { total_time } => Ok((t / total_time).clamp(0.0, 1.0)),
        }
    }

    /// The same s-profile traversed in `factor`·T total time.
    pub fn time_scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::Domain(format!("time scale factor must be positive, got {factor}")));
        }
        Ok(match self {
            Self::Synthesized(sch) => Self::Synthesized(SynthesizedSchedule {
                t_of_s: sch.t_of_s().scale_y(factor)?,
                t_min: sch.t_min() * factor,
                saturation_residual: f64::NAN, // no longer saturating
            }),
            Self::Ramp { total_time } => Self::Ramp { total_time: total_time * factor },
        })
    }
}

/// One cell of the (N, α) scan; the value is ε·T_min for A = N^α.
#[derive(Debug, Clone)]
pub struct ScanCell {
    pub n: usize,
    pub alpha: f64,
    pub a: f64,
    pub eps_t_min: std::result::Result<f64, String>,
}

/// Scan ε·T_min over N-major, α-minor order with A = N^α.
pub fn scan_alpha(n_list: &[usize], alpha_list: &[f64], epsilon: f64) -> Vec<ScanCell> {
    let mut cells = Vec::with_capacity(n_list.len() * alpha_list.len());
    for &n in n_list {
        for &alpha in alpha_list {
            // α = 0 selects the plain linear path (A = 0), the √(N-1)
            // baseline column; otherwise A = N^α.
            let a = if alpha == 0.0 { 0.0 } else { (n as f64).powf(alpha) };
            let value = PathSpec::quadratic(n, a)
                .and_then(|path| ProblemSpec::new(path, epsilon))
                .and_then(|spec| spec.t_min().map(|t| t * epsilon));
            cells.push(ScanCell { n, alpha, a, eps_t_min: value.map_err(|e| e.to_string()) });
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn linear_spec(n: usize, eps: f64) -> ProblemSpec {
        ProblemSpec::new(PathSpec::linear(n).unwrap(), eps).unwrap()
    }

    #[test]
    fn epsilon_bounds_enforced() {
        let path = PathSpec::linear(4).unwrap();
        assert!(ProblemSpec::new(path.clone(), 0.0).is_err());
        assert!(ProblemSpec::new(path, 1.0).is_err());
    }

    #[test]
    fn saturating_rate_asymptotics() {
        let n = 1_000_000usize;
        let nf = n as f64;
        let spec = linear_spec(n, 0.01);
        // Slowest at the avoided crossing: ṡ = ε·ω²/|M| = ε/(√N·√(N-1)).
        let mid = spec.saturating_sdot(0.5).unwrap();
        assert_relative_eq!(mid, 0.01 / (nf.sqrt() * (nf - 1.0).sqrt()), max_relative = 1e-12);
        // Fast far from the crossing: ṡ ≈ ε·N/√(N-1).
        let edge = spec.saturating_sdot(0.0).unwrap();
        assert_relative_eq!(edge, 0.01 * nf / (nf - 1.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn criterion_saturated_by_construction() {
        let spec = linear_spec(1000, 0.05);
        for s in [0.1, 0.3, 0.5, 0.77, 0.99] {
            let sdot = spec.saturating_sdot(s).unwrap();
            let pt = spec.path().spectrum_at(s).unwrap();
            assert_relative_eq!(sdot * pt.m.abs() / (pt.omega * pt.omega), 0.05, epsilon = 1e-14);
        }
    }

    #[test]
    fn linear_t_min_closed_form() {
        // ε·T_min = √(N-1) for the linear path.
        for (n, eps) in [(2usize, 0.1), (101, 0.01), (10_000, 0.05)] {
            let spec = linear_spec(n, eps);
            let t = spec.t_min().unwrap();
            assert_relative_eq!(eps * t, ((n - 1) as f64).sqrt(), max_relative = 1e-9);
        }
    }

    #[test]
    fn constant_time_limit() {
        // A = √N: ε·T_min → 1 + π/2 as N → ∞.
        let n = 100_000usize;
        let path = PathSpec::quadratic(n, (n as f64).sqrt()).unwrap();
        let spec = ProblemSpec::new(path, 0.01).unwrap();
        let t = spec.t_min().unwrap();
        assert_relative_eq!(0.01 * t, 1.0 + std::f64::consts::FRAC_PI_2, max_relative = 0.01);
    }

    #[test]
    fn eps_t_min_independent_of_eps() {
        let path = PathSpec::quadratic(1000, 3.0).unwrap();
        let mut values = Vec::new();
        for eps in [0.1, 0.01, 0.001] {
            let spec = ProblemSpec::new(path.clone(), eps).unwrap();
            values.push(eps * spec.t_min().unwrap());
        }
        assert_relative_eq!(values[0], values[1], max_relative = 1e-9);
        assert_relative_eq!(values[1], values[2], max_relative = 1e-9);
    }

    #[test]
    fn synthesized_schedule_endpoints_and_residual() {
        let spec = linear_spec(100, 0.05);
        let sch = synthesize(&spec, 64).unwrap();
        let (t0, t1) = sch.t_of_s().y_range();
        assert_eq!(t0, 0.0);
        assert_relative_eq!(t1, spec.t_min().unwrap(), max_relative = 1e-8);
        assert!(sch.saturation_residual() <= 1e-6);
        // Reflection symmetry of the integrand: t(1/2) = T/2.
        assert_relative_eq!(sch.t_of_s().eval(0.5).unwrap(), t1 / 2.0, max_relative = 1e-7);
    }

    #[test]
    fn synthesize_large_n() {
        let spec = linear_spec(100_000, 0.01);
        let sch = synthesize(&spec, 64).unwrap();
        assert!(sch.saturation_residual() <= 1e-6);
        assert_relative_eq!(sch.t_min() * 0.01, (99_999.0_f64).sqrt(), max_relative = 1e-7);
    }

    #[test]
    fn small_grid_rejected() {
        let spec = linear_spec(16, 0.1);
        assert!(synthesize(&spec, 32).is_err());
    }

    #[test]
    fn scan_alpha_columns() {
        let cells = scan_alpha(&[100, 10_000], &[0.0, 0.5], 0.01);
        assert_eq!(cells.len(), 4);
        // N-major, α-minor order.
        assert_eq!((cells[0].n, cells[0].alpha), (100, 0.0));
        assert_eq!((cells[1].n, cells[1].alpha), (100, 0.5));
        assert_eq!((cells[2].n, cells[2].alpha), (10_000, 0.0));
        // α = 0 reproduces √(N-1).
        let v = cells[2].eps_t_min.as_ref().unwrap();
        assert_relative_eq!(*v, 9999.0_f64.sqrt(), max_relative = 1e-9);
        // Larger α is not slower at fixed N.
        let v0 = cells[0].eps_t_min.as_ref().unwrap();
        let v05 = cells[1].eps_t_min.as_ref().unwrap();
        assert!(v05 <= v0);
    }

    #[test]
    fn alpha_half_plateau() {
        let cells = scan_alpha(&[10_000, 1_000_000], &[0.5], 0.01);
        let a = cells[0].eps_t_min.as_ref().unwrap();
        let b = cells[1].eps_t_min.as_ref().unwrap();
        assert!((a - b).abs() / a < 0.05, "plateau violated: {a} vs {b}");
    }

    #[test]
    fn time_scaled_schedule() {
        let spec = linear_spec(64, 0.05);
        let sch = Schedule::Synthesized(synthesize(&spec, 64).unwrap());
        let fast = sch.time_scaled(1e-3).unwrap();
        assert_relative_eq!(fast.total_time(), 1e-3 * sch.total_time(), max_relative = 1e-12);
        // Same s-profile: s at half the (scaled) total time agrees.
        let s1 = sch.s_of_t(0.5 * sch.total_time()).unwrap();
        let s2 = fast.s_of_t(0.5 * fast.total_time()).unwrap();
        assert_relative_eq!(s1, s2, epsilon = 1e-9);
    }
}
