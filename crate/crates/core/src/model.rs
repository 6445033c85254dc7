//! Interpolation-path family and closed-form spectral quantities of
//! H = f·H₀ + g·H₁ on an N-item search space (ħ = 1 throughout).

use crate::{Error, Result};
use num_complex::Complex64;

/// Interpolation functions (f, g) on s ∈ [0, 1].
#[derive(Debug, Clone)]
pub enum PathFamily {
    /// f = 1 - s, g = s.
    Linear,
    /// f = 1 - s + A·s(1-s), g = s + A·s(1-s), A ≥ 0. Linear ≡ QuadraticA(0).
    QuadraticA(f64),
    /// User-tabulated path; derivative samples are required, values are
    /// interpolated by cubic Hermite with the supplied slopes.
    Tabulated(TabulatedPath),
}

/// Samples of (s, f, g, f', g') with strictly increasing s covering [0, 1].
#[derive(Debug, Clone)]
pub struct TabulatedPath {
    s: Vec<f64>,
    f: Vec<f64>,
    g: Vec<f64>,
    df: Vec<f64>,
    dg: Vec<f64>,
}

impl TabulatedPath {
    pub fn new(s: Vec<f64>, f: Vec<f64>, g: Vec<f64>, df: Vec<f64>, dg: Vec<f64>) -> Result<Self> {
        let n = s.len();
        if n < 2 {
            return Err(Error::Domain("tabulated path needs at least 2 samples".into()));
        }
        for v in [&f, &g, &df, &dg] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        for w in s.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain("tabulated s values must be strictly increasing".into()));
            }
        }
        if s[0] != 0.0 || *s.last().unwrap() != 1.0 {
            return Err(Error::Domain("tabulated path must cover s ∈ [0, 1]".into()));
        }
        Ok(Self { s, f, g, df, dg })
    }

    fn eval(&self, x: f64) -> (f64, f64, f64, f64) {
        let i = match self.s.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.s.len() - 2),
            Err(i) => i.clamp(1, self.s.len() - 1) - 1,
        };
        let h = self.s[i + 1] - self.s[i];
        let t = (x - self.s[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let dh00 = (6.0 * t2 - 6.0 * t) / h;
        let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
        let dh01 = -dh00;
        let dh11 = 3.0 * t2 - 2.0 * t;
        let f = h00 * self.f[i] + h10 * h * self.df[i] + h01 * self.f[i + 1] + h11 * h * self.df[i + 1];
        let g = h00 * self.g[i] + h10 * h * self.dg[i] + h01 * self.g[i + 1] + h11 * h * self.dg[i + 1];
        let df = dh00 * self.f[i] + dh10 * self.df[i] + dh01 * self.f[i + 1] + dh11 * self.df[i + 1];
        let dg = dh00 * self.g[i] + dh10 * self.dg[i] + dh01 * self.g[i + 1] + dh11 * self.dg[i + 1];
        (f, g, df, dg)
    }
}

/// A validated interpolation path together with the database size N.
#[derive(Debug, Clone)]
pub struct PathSpec {
    family: PathFamily,
    n: usize,
}

const BOUNDARY_TOL: f64 = 1e-12;

impl PathSpec {
    pub fn new(family: PathFamily, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("database size N must be ≥ 2, got {n}")));
        }
        if let PathFamily::QuadraticA(a) = family {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::Domain(format!("QuadraticA requires finite A ≥ 0, got {a}")));
            }
        }
        let path = Self { family, n };
        path.validate_shape()?;
        Ok(path)
    }

    pub fn linear(n: usize) -> Result<Self> {
        Self::new(PathFamily::Linear, n)
    }

    pub fn quadratic(n: usize, a: f64) -> Result<Self> {
        Self::new(PathFamily::QuadraticA(a), n)
    }

    fn validate_shape(&self) -> Result<()> {
        let (f0, g0, _, _) = self.eval_unchecked(0.0);
        let (f1, g1, _, _) = self.eval_unchecked(1.0);
        if (f0 - 1.0).abs() > BOUNDARY_TOL
            || g0.abs() > BOUNDARY_TOL
            || f1.abs() > BOUNDARY_TOL
            || (g1 - 1.0).abs() > BOUNDARY_TOL
        {
            return Err(Error::Domain(format!(
                "boundary conditions violated: f(0)={f0}, g(0)={g0}, f(1)={f1}, g(1)={g1}"
            )));
        }
        // Non-negativity and non-simultaneous vanishing on a dense grid.
        const GRID: usize = 2000;
        for i in 0..=GRID {
            let s = i as f64 / GRID as f64;
            let (f, g, _, _) = self.eval_unchecked(s);
            if f < -BOUNDARY_TOL || g < -BOUNDARY_TOL {
                return Err(Error::Domain(format!("path negative at s = {s}: f = {f}, g = {g}")));
            }
            if f.abs() <= BOUNDARY_TOL && g.abs() <= BOUNDARY_TOL {
                return Err(Error::Degenerate { s });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &PathFamily {
        &self.family
    }

    fn eval_unchecked(&self, s: f64) -> (f64, f64, f64, f64) {
        match &self.family {
            PathFamily::Linear => (1.0 - s, s, -1.0, 1.0),
            PathFamily::QuadraticA(a) => {
                let q = a * s * (1.0 - s);
                let dq = a * (1.0 - 2.0 * s);
                (1.0 - s + q, s + q, -1.0 + dq, 1.0 + dq)
            }
            PathFamily::Tabulated(t) => t.eval(s),
        }
    }

    /// Values and s-derivatives (f, g, f', g') at `s` ∈ [0, 1].
    pub fn eval_path(&self, s: f64) -> Result<(f64, f64, f64, f64)> {
        check_s(s)?;
        Ok(self.eval_unchecked(s))
    }

    /// Stationary points of f and g for QuadraticA with A > 1.
    pub fn path_peaks(&self) -> Result<PathPeaks> {
        let a = match self.family {
            PathFamily::QuadraticA(a) if a > 1.0 => a,
            PathFamily::Linear | PathFamily::QuadraticA(_) => {
                return Err(Error::Domain(
                    "path is monotone on [0,1], no interior peak (requires QuadraticA with A > 1)".into(),
                ))
            }
            PathFamily::Tabulated(_) => {
                return Err(Error::Domain("peak location is defined for the QuadraticA family only".into()))
            }
        };
        // f' = 0 at s = (1 - 1/A)/2, g' = 0 at s = (1 + 1/A)/2; both peaks
        // share the value A/4 + 1/2 + 1/(4A).
        let peak = a / 4.0 + 0.5 + 1.0 / (4.0 * a);
        Ok(PathPeaks {
            s_f_peak: 0.5 * (1.0 - 1.0 / a),
            f_peak: peak,
            s_g_peak: 0.5 * (1.0 + 1.0 / a),
            g_peak: peak,
        })
    }

    /// Closed-form spectral data at `s`.
    pub fn spectrum_at(&self, s: f64) -> Result<SpectralPoint> {
        let (f, g, df, dg) = self.eval_path(s)?;
        let n = self.n as f64;
        let omega_sq = (f - g) * (f - g) + 4.0 * f * g / n;
        if omega_sq <= 0.0 {
            return Err(Error::Degenerate { s });
        }
        let omega = omega_sq.sqrt();
        let sum = f + g;
        Ok(SpectralPoint {
            s,
            f,
            g,
            df,
            dg,
            e_minus: 0.5 * (sum - omega),
            e_plus: 0.5 * (sum + omega),
            omega,
            degenerate_level: sum,
            m: ((n - 1.0).sqrt() / n) * (df * g - dg * f) / omega,
        })
    }

    /// Transition coupling F₊ at `s` for rate ṡ and accumulated phase φ;
    /// F₋ = -F₊*.
    pub fn coupling_f(&self, s: f64, sdot: f64, phi: f64) -> Result<Complex64> {
        let pt = self.spectrum_at(s)?;
        let envelope = ((self.n as f64 - 1.0).sqrt() / self.n as f64) * (pt.dg * pt.f - pt.g * pt.df)
            / (pt.omega * pt.omega);
        Ok(envelope * sdot * Complex64::new(0.0, phi).exp())
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    Ok(())
}

/// Stationary points of f and g (QuadraticA, A > 1).
#[derive(Debug, Clone, Copy)]
pub struct PathPeaks {
    pub s_f_peak: f64,
    pub f_peak: f64,
    pub s_g_peak: f64,
    pub g_peak: f64,
}

/// Spectral quantities of the 2×2 block at a given s.
#[derive(Debug, Clone, Copy)]
pub struct SpectralPoint {
    pub s: f64,
    pub f: f64,
    pub g: f64,
    pub df: f64,
    pub dg: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    /// Gap ω = E₊ - E₋ = √((f-g)² + 4fg/N).
    pub omega: f64,
    /// The (N-2)-fold degenerate level f + g.
    pub degenerate_level: f64,
    /// Coupling ⟨E₊|dH/ds|E₋⟩ = (√(N-1)/N)(f'g - g'f)/ω.
    pub m: f64,
}
