//! Embedded Dormand-Prince 5(4) integrator with 5th-order dense output.
//!
//! State vectors are flat `f64` slices; complex amplitudes are packed as
//! (re, im) pairs by the callers. Integration direction follows the sign of
//! `t1 - t0`.

use super::Tolerance;
use crate::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

// 5th-order weights equal the last row of A (FSAL); these are the
// differences b5 - b4 used for the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

// Dense-output coefficients (Hairer & Wanner, DOPRI5 CONTD5).
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One accepted step with its dense interpolant.
pub struct DenseStep<'a> {
    pub t0: f64,
    pub t1: f64,
    cont: &'a [f64], // 5 * dim
    dim: usize,
}

impl DenseStep<'_> {
    /// Evaluate the interpolant at `t` (expected within the step span).
    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let h = self.t1 - self.t0;
        let theta = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let th1 = 1.0 - theta;
        let (c0, rest) = self.cont.split_at(self.dim);
        let (c1, rest) = rest.split_at(self.dim);
        let (c2, rest) = rest.split_at(self.dim);
        let (c3, c4) = rest.split_at(self.dim);
        for i in 0..self.dim {
            out[i] = c0[i] + theta * (c1[i] + th1 * (c2[i] + theta * (c3[i] + th1 * c4[i])));
        }
    }
}

/// Integrate `rhs` from `t0` to `t1` with adaptive step-size control.
///
/// `observer` is invoked once per accepted step, in time order, with a dense
/// interpolant valid over the step.
pub fn integrate_ode<F, O>(
    mut rhs: F,
    state0: &[f64],
    t0: f64,
    t1: f64,
    tol: &Tolerance,
    mut observer: O,
) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(&DenseStep),
{
    let dim = state0.len();
    if t0 == t1 {
        return Ok(state0.to_vec());
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();

    let mut t = t0;
    let mut y = state0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    let mut ytmp = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];
    let mut cont = vec![0.0; 5 * dim];

    rhs(t, &y, &mut k[0]);

    // Initial step guess from the first derivative magnitude.
    let d0 = norm_scaled(&y, &y, tol);
    let d1 = norm_scaled(&k[0], &y, tol);
    let mut h = if d1 > 1e-10 { 0.01 * d0.max(1e-6) / d1 } else { span * 1e-3 };
    h = h.min(span).max(span * 1e-12) * dir;

    for _ in 0..tol.max_steps {
        if (t - t1) * dir >= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() < 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::OdeNonConvergence { t, reason: "step size underflow".into() });
        }

        for s in 1..7 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                ytmp[i] = y[i] + h * acc;
            }
            let ts = t + C[s] * h;
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            rhs(ts, &ytmp, &mut tail[0]);
        }
        // Stage 6 already produced y_{n+1} (FSAL): A[6] are the 5th-order weights.
        ynew.copy_from_slice(&ytmp);

        // Embedded error estimate.
        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += E[j] * kj[i];
                }
            }
            e *= h;
            let sc = tol.abs + tol.rel * y[i].abs().max(ynew[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / dim as f64).sqrt();

        if err <= 1.0 {
            // Accept: build the dense interpolant, then advance.
            for i in 0..dim {
                let ydiff = ynew[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                let mut dsum = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    if D[j] != 0.0 {
                        dsum += D[j] * kj[i];
                    }
                }
                cont[i] = y[i];
                cont[dim + i] = ydiff;
                cont[2 * dim + i] = bspl;
                cont[3 * dim + i] = ydiff - h * k[6][i] - bspl;
                cont[4 * dim + i] = h * dsum;
            }
            let t_next = t + h;
            observer(&DenseStep { t0: t, t1: t_next, cont: &cont, dim });
            t = t_next;
            std::mem::swap(&mut y, &mut ynew);
            k.swap(0, 6); // FSAL: derivative at the new point is stage 7
        }

        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
    }

    Err(Error::OdeNonConvergence { t, reason: format!("max_steps = {} exceeded", tol.max_steps) })
}

fn norm_scaled(v: &[f64], y: &[f64], tol: &Tolerance) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        let sc = tol.abs + tol.rel * y[i].abs();
        s += (v[i] / sc) * (v[i] / sc);
    }
    (s / v.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::ode()
    }

    #[test]
    fn zero_rhs_constant_state() {
        let y = integrate_ode(|_, _, dy| dy.fill(0.0), &[1.5, -2.0], 0.0, 10.0, &tol(), |_| {}).unwrap();
        assert_eq!(y, vec![1.5, -2.0]);
    }

    #[test]
    fn unit_modulus_rotation() {
        // ẏ = i y packed as (re, im); y(π) = -1.
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = -y[1];
            dy[1] = y[0];
        };
        let y = integrate_ode(rhs, &[1.0, 0.0], 0.0, std::f64::consts::PI, &tol(), |_| {}).unwrap();
        assert_relative_eq!(y[0], -1.0, epsilon = 1e-8);
        assert!(y[1].abs() < 1e-8);
        let modulus = (y[0] * y[0] + y[1] * y[1]).sqrt();
        assert_relative_eq!(modulus, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn constant_coupling_two_level() {
        // ȧ₋ = -c a₊, ȧ₊ = c a₋ with real c: a₋ = cos(ct), a₊ = sin(ct).
        let c = 0.7;
        let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
            // (re a₋, im a₋, re a₊, im a₊)
            dy[0] = -c * y[2];
            dy[1] = -c * y[3];
            dy[2] = c * y[0];
            dy[3] = c * y[1];
        };
        let t_end = 2.3;
        let y = integrate_ode(rhs, &[1.0, 0.0, 0.0, 0.0], 0.0, t_end, &tol(), |_| {}).unwrap();
        assert_relative_eq!(y[0], (c * t_end).cos(), epsilon = 1e-8);
        assert_relative_eq!(y[2], (c * t_end).sin(), epsilon = 1e-8);
        assert!(y[1].abs() < 1e-10 && y[3].abs() < 1e-10);
    }

    #[test]
    fn dense_output_matches_solution() {
        // ẏ = y, compare interpolant against exp at interior points.
        let mut max_err: f64 = 0.0;
        let mut buf = [0.0];
        integrate_ode(
            |_, y, dy| dy[0] = y[0],
            &[1.0],
            0.0,
            2.0,
            &tol(),
            |step| {
                for q in 1..4 {
                    let t = step.t0 + (step.t1 - step.t0) * q as f64 / 4.0;
                    step.eval(t, &mut buf);
                    max_err = max_err.max((buf[0] - t.exp()).abs());
                }
            },
        )
        .unwrap();
        assert!(max_err < 1e-8, "dense output error {max_err}");
    }

    #[test]
    fn backward_integration() {
        let y = integrate_ode(|_, y, dy| dy[0] = y[0], &[1.0], 2.0, 0.0, &tol(), |_| {}).unwrap();
        assert_relative_eq!(y[0], (-2.0_f64).exp(), max_relative = 1e-8);
    }

    #[test]
    fn observer_sees_monotone_steps() {
        let mut last = 0.0;
        integrate_ode(
            |t, _, dy| dy[0] = (5.0 * t).cos(),
            &[0.0],
            0.0,
            3.0,
            &tol(),
            |step| {
                assert!(step.t1 > step.t0);
                assert_eq!(step.t0, last);
                last = step.t1;
            },
        )
        .unwrap();
        assert_eq!(last, 3.0);
    }

    #[test]
    fn max_steps_exhaustion_reported() {
        let tight = Tolerance { rel: 1e-12, abs: 1e-14, max_steps: 5 };
        let err = integrate_ode(|t, _, dy| dy[0] = (100.0 * t).sin(), &[0.0], 0.0, 50.0, &tight, |_| {});
        assert!(matches!(err, Err(Error::OdeNonConvergence { .. })));
    }
}
