//! Brute-force full-Hilbert-space simulator used as ground truth for the
//! two-level reduction, the degenerate spectrum, and the gauge-shift claim.
//!
//! H = (f+g)·I - f|ψ₀⟩⟨ψ₀| - g|m⟩⟨m| is rank-2 plus identity, so H·v costs
//! O(N); a dense matrix is materialized only inside `verify_degeneracy`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dynamics::evolve_reduced_with_tol;
use crate::model::PathSpec;
use crate::numerics::{integrate_ode, Tolerance};
use crate::scheduler::{ProblemSpec, Schedule};
use crate::{Error, Result};

/// Default cap on N for full evolutions.
pub const FULL_EVOLUTION_CAP: usize = 4096;
/// Cap on N for dense diagonalization (test oracle only).
pub const DENSE_CAP: usize = 64;

/// A normalized state of the N-dimensional search space.
#[derive(Debug, Clone)]
pub struct FullState {
    pub amplitudes: Vec<Complex64>,
    pub marked: usize,
}

impl FullState {
    /// The uniform initial state |ψ₀⟩.
    pub fn uniform(n: usize, marked: usize) -> Result<Self> {
        if marked >= n {
            return Err(Error::Domain(format!("marked index {marked} out of range for N = {n}")));
        }
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Self { amplitudes: vec![amp; n], marked })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |⟨m|ψ⟩|².
    pub fn marked_probability(&self) -> f64 {
        self.amplitudes[self.marked].norm_sqr()
    }

    /// |⟨φ|ψ⟩| against another state of the same dimension.
    pub fn overlap(&self, other: &FullState) -> Result<f64> {
        if other.amplitudes.len() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: other.amplitudes.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            acc += a.conj() * b;
        }
        Ok(acc.norm())
    }
}

/// out = H(f, g)·v using the rank-2 structure.
pub fn apply_h(f: f64, g: f64, m: usize, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
    let n = v.len();
    if out.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: out.len() });
    }
    if m >= n {
        return Err(Error::Domain(format!("marked index {m} out of range for N = {n}")));
    }
    let sum: Complex64 = v.iter().sum();
    let proj0 = f * sum / n as f64; // f·⟨ψ₀|v⟩/√N
    let fg = f + g;
    for i in 0..n {
        out[i] = fg * v[i] - proj0;
    }
    out[m] -= g * v[m];
    Ok(())
}

/// One sampled point of a full evolution.
#[derive(Debug, Clone, Copy)]
pub struct FullSample {
    pub t: f64,
    pub s: f64,
    /// |⟨E₋,s|ψ⟩|², the instantaneous ground population.
    pub p_ground: f64,
    /// |⟨m|ψ⟩|².
    pub p_marked: f64,
    pub norm: f64,
}

/// Sampled trace plus exact final state of a full evolution.
#[derive(Debug, Clone)]
pub struct FullTrace {
    pub samples: Vec<FullSample>,
    pub final_state: FullState,
    pub total_time: f64,
    pub norm_drift: f64,
}

/// Integrate i·dψ/dt = H(t)ψ from |ψ₀⟩ along `schedule`, in the s-domain.
pub fn evolve_full(
    path: &PathSpec,
    schedule: &Schedule,
    m: usize,
    tol: &Tolerance,
    samples: usize,
) -> Result<FullTrace> {
    evolve_full_inner(path, schedule, m, tol, samples, false)
}

/// Same as [`evolve_full`] but under the gauge-shifted H(t) - E₋(t)·I.
pub fn evolve_shifted(
    path: &PathSpec,
    schedule: &Schedule,
    m: usize,
    tol: &Tolerance,
    samples: usize,
) -> Result<FullTrace> {
    evolve_full_inner(path, schedule, m, tol, samples, true)
}

fn evolve_full_inner(
    path: &PathSpec,
    schedule: &Schedule,
    m: usize,
    tol: &Tolerance,
    samples: usize,
    shift_ground: bool,
) -> Result<FullTrace> {
    let n = path.n();
    if n > FULL_EVOLUTION_CAP {
        return Err(Error::CapExceeded { n, cap: FULL_EVOLUTION_CAP });
    }
    if m >= n {
        return Err(Error::Domain(format!("marked index {m} out of range for N = {n}")));
    }

    let total = schedule.total_time();
    let k = samples.max(2);
    let points: Result<Vec<(f64, f64)>> = (0..k)
        .map(|i| {
            let t = total * i as f64 / (k - 1) as f64;
            Ok((t, schedule.s_of_t(t)?))
        })
        .collect();
    let points = points?;

    let psi0 = FullState::uniform(n, m)?;
    let mut y0 = vec![0.0_f64; 2 * n];
    for (i, a) in psi0.amplitudes.iter().enumerate() {
        y0[2 * i] = a.re;
        y0[2 * i + 1] = a.im;
    }

    let mut rhs_err: Result<()> = Ok(());
    // dψ/ds = -i·(dt/ds)·(H - shift·E₋)·ψ with the O(N) matvec inlined on
    // the packed (re, im) layout.
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let s = s.clamp(0.0, 1.0);
        let (pt, dtds) = match path.spectrum_at(s).and_then(|pt| Ok((pt, schedule.dt_ds(s)?))) {
            Ok(v) => v,
            Err(e) => {
                if rhs_err.is_ok() {
                    rhs_err = Err(e);
                }
                dy.fill(0.0);
                return;
            }
        };
        let diag = pt.f + pt.g - if shift_ground { pt.e_minus } else { 0.0 };
        let mut sum_re = 0.0;
        let mut sum_im = 0.0;
        for i in 0..n {
            sum_re += y[2 * i];
            sum_im += y[2 * i + 1];
        }
        let pr = pt.f * sum_re / n as f64;
        let pi = pt.f * sum_im / n as f64;
        for i in 0..n {
            // (Hψ)_i then multiply by -i·dtds: (hr, hi) → (hi, -hr)·dtds
            let hr = diag * y[2 * i] - pr;
            let hi = diag * y[2 * i + 1] - pi;
            dy[2 * i] = dtds * hi;
            dy[2 * i + 1] = -dtds * hr;
        }
        let hr = -pt.g * y[2 * m];
        let hi = -pt.g * y[2 * m + 1];
        dy[2 * m] += dtds * hi;
        dy[2 * m + 1] -= dtds * hr;
    };

    let mut out = Vec::with_capacity(points.len());
    let mut next = 0usize;
    let mut drift = 0.0_f64;
    let mut buf = vec![0.0_f64; 2 * n];

    let result = integrate_ode(
        rhs,
        &y0,
        0.0,
        1.0,
        tol,
        |step| {
            while next < points.len() && points[next].1 <= step.t1 {
                let (t, s) = points[next];
                step.eval(s, &mut buf);
                if let Ok(sample) = sample_from_packed(path, t, s, m, &buf) {
                    out.push(sample);
                }
                next += 1;
            }
            step.eval(step.t1, &mut buf);
            let norm_sq: f64 = buf.iter().map(|v| v * v).sum();
            drift = drift.max((norm_sq - 1.0).abs());
        },
    );
    rhs_err?;
    let final_y = result?;

    let amplitudes: Vec<Complex64> =
        (0..n).map(|i| Complex64::new(final_y[2 * i], final_y[2 * i + 1])).collect();
    let final_state = FullState { amplitudes, marked: m };

    if next < points.len() {
        let (t, s) = points[points.len() - 1];
        out.push(FullSample {
            t,
            s,
            p_ground: ground_projection(path, s, &final_state)?,
            p_marked: final_state.marked_probability(),
            norm: final_state.norm(),
        });
    }

    Ok(FullTrace { samples: out, final_state, total_time: total, norm_drift: drift })
}

fn sample_from_packed(path: &PathSpec, t: f64, s: f64, m: usize, y: &[f64]) -> Result<FullSample> {
    let n = y.len() / 2;
    let amplitudes: Vec<Complex64> = (0..n).map(|i| Complex64::new(y[2 * i], y[2 * i + 1])).collect();
    let state = FullState { amplitudes, marked: m };
    Ok(FullSample {
        t,
        s,
        p_ground: ground_projection(path, s, &state)?,
        p_marked: state.marked_probability(),
        norm: state.norm(),
    })
}

/// |⟨E₋,s|ψ⟩|² from the closed-form ground eigenvector of the 2×2 block
/// spanned by |m⟩ and the orthonormalized remainder of |ψ₀⟩.
pub fn ground_projection(path: &PathSpec, s: f64, psi: &FullState) -> Result<f64> {
    let n = psi.amplitudes.len();
    if n != path.n() {
        return Err(Error::DimensionMismatch { expected: path.n(), got: n });
    }
    let pt = path.spectrum_at(s)?;
    let nf = n as f64;
    let (f, g) = (pt.f, pt.g);

    // Basis u₁ = |m⟩, u₂ = (|ψ₀⟩ - ⟨m|ψ₀⟩|m⟩)/√(1 - 1/N).
    let a = f * (1.0 - 1.0 / nf); // ⟨u₁|H|u₁⟩
    let b = g + f / nf; // ⟨u₂|H|u₂⟩
    let c = -f * (nf - 1.0).sqrt() / nf; // ⟨u₁|H|u₂⟩
    let lambda = pt.e_minus;

    // Ground eigenvector of [[a, c], [c, b]]; pick the numerically stable form.
    let (x, yv) = if (lambda - a).abs() > (lambda - b).abs() {
        (c, lambda - a)
    } else {
        (lambda - b, c)
    };
    let norm = (x * x + yv * yv).sqrt();
    if norm == 0.0 {
        return Err(Error::Degenerate { s });
    }
    let (x, yv) = (x / norm, yv / norm);

    let sum: Complex64 = psi.amplitudes.iter().sum();
    let overlap_psi0 = sum / nf.sqrt(); // ⟨ψ₀|ψ⟩
    let amp_m = psi.amplitudes[psi.marked]; // ⟨u₁|ψ⟩
    let amp_u2 = (overlap_psi0 - amp_m / nf.sqrt()) / (1.0 - 1.0 / nf).sqrt();
    Ok((x * amp_m + yv * amp_u2).norm_sqr())
}

/// Run the reduced and the full engine on the same schedule and return the
/// maximum deviation of the ground populations over the sample grid.
pub fn verify_reduction(
    spec: &ProblemSpec,
    schedule: &Schedule,
    m: usize,
    samples: usize,
    tol: &Tolerance,
) -> Result<f64> {
    let reduced = evolve_reduced_with_tol(spec, schedule, samples, tol)?;
    let full = evolve_full(spec.path(), schedule, m, tol, samples)?;
    if reduced.samples.len() != full.samples.len() {
        return Err(Error::DimensionMismatch {
            expected: reduced.samples.len(),
            got: full.samples.len(),
        });
    }
    let mut max_dev = 0.0_f64;
    for (r, f) in reduced.samples.iter().zip(&full.samples) {
        max_dev = max_dev.max((r.p_minus - f.p_ground).abs());
    }
    Ok(max_dev)
}

/// Dense-diagonalization check of the (N-2)-fold degenerate level and the
/// vanishing dH/ds elements between {E±} and the degenerate subspace.
///
/// Returns (max eigenvalue spread around f+g, max forbidden coupling norm).
pub fn verify_degeneracy(path: &PathSpec, s: f64, m: usize) -> Result<(f64, f64)> {
    let n = path.n();
    if n > DENSE_CAP {
        return Err(Error::CapExceeded { n, cap: DENSE_CAP });
    }
    if m >= n {
        return Err(Error::Domain(format!("marked index {m} out of range for N = {n}")));
    }
    let pt = path.spectrum_at(s)?;
    let nf = n as f64;

    // Dense H (real symmetric).
    let mut h = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = -pt.f / nf;
            if i == j {
                v += pt.f + pt.g;
                if i == m {
                    v -= pt.g;
                }
            }
            h[(i, j)] = v;
        }
    }
    let mut eigvals: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    eigvals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Sorted ascending: the top N-2 must sit at the degenerate level f+g.
    let spread = eigvals[2..]
        .iter()
        .map(|&e| (e - pt.degenerate_level).abs())
        .fold(0.0_f64, f64::max);

    // Forbidden couplings: (dH/ds)|E±⟩ must stay inside span{|ψ₀⟩, |m⟩}.
    // dH/ds has the same rank-2 form with (f, g) → (f', g').
    let e_minus_vec = two_level_eigvec(path, s, m, true)?;
    let e_plus_vec = two_level_eigvec(path, s, m, false)?;
    let mut forbidden = 0.0_f64;
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for v in [&e_minus_vec, &e_plus_vec] {
        apply_dh_ds(pt.df, pt.dg, m, v, &mut w)?;
        // Remove the span{u₁, u₂} component.
        let sum: Complex64 = w.iter().sum();
        let c0 = sum / nf.sqrt();
        let cm = w[m];
        let u2_coef = (c0 - cm / nf.sqrt()) / (1.0 - 1.0 / nf).sqrt();
        let mut resid_sq = 0.0;
        for (i, wi) in w.iter().enumerate() {
            let mut r = *wi;
            // u₂ components: (1/√N - δ_im/√N... ) expanded explicitly below.
            let u2_i = if i == m {
                0.0
            } else {
                (1.0 / nf.sqrt()) / (1.0 - 1.0 / nf).sqrt()
            };
            if i == m {
                r -= cm;
            }
            r -= u2_coef * u2_i;
            resid_sq += r.norm_sqr();
        }
        forbidden = forbidden.max(resid_sq.sqrt());
    }

    Ok((spread, forbidden))
}

/// dH/ds · v with the rank-2 structure; coefficients may be negative.
fn apply_dh_ds(df: f64, dg: f64, m: usize, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
    let n = v.len();
    if out.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: out.len() });
    }
    let sum: Complex64 = v.iter().sum();
    let proj0 = df * sum / n as f64;
    let diag = df + dg;
    for i in 0..n {
        out[i] = diag * v[i] - proj0;
    }
    out[m] -= dg * v[m];
    Ok(())
}

/// The analytic |E₋⟩ or |E₊⟩ embedded in the N-dimensional space.
fn two_level_eigvec(path: &PathSpec, s: f64, m: usize, ground: bool) -> Result<Vec<Complex64>> {
    let n = path.n();
    let nf = n as f64;
    let pt = path.spectrum_at(s)?;
    let a = pt.f * (1.0 - 1.0 / nf);
    let b = pt.g + pt.f / nf;
    let c = -pt.f * (nf - 1.0).sqrt() / nf;
    let lambda = if ground { pt.e_minus } else { pt.e_plus };
    let (x, y) = if (lambda - a).abs() > (lambda - b).abs() {
        (c, lambda - a)
    } else {
        (lambda - b, c)
    };
    let norm = (x * x + y * y).sqrt();
    if norm == 0.0 {
        return Err(Error::Degenerate { s });
    }
    let (x, y) = (x / norm, y / norm);
    // v = x·|m⟩ + y·u₂
    let u2_off = (1.0 / nf.sqrt()) / (1.0 - 1.0 / nf).sqrt();
    let mut v = vec![Complex64::new(y * u2_off, 0.0); n];
    v[m] = Complex64::new(x, 0.0);
    Ok(v)
}
