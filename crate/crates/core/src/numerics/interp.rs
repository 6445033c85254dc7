//! Monotone cubic Hermite tables with inversion.

use crate::{Error, Result};

/// A strictly increasing tabulated function y(x) with C¹ cubic Hermite
/// interpolation. Slopes either come from the caller (exact derivatives) or
/// are estimated with the Fritsch-Carlson shape-preserving rule.
#[derive(Debug, Clone)]
pub struct MonotoneTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneTable {
    /// Build from knots alone; slopes are Fritsch-Carlson estimates.
    pub fn from_knots(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Self::validate(&xs, &ys)?;
        let slopes = fritsch_carlson_slopes(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    /// Build from knots with caller-supplied derivatives dy/dx.
    pub fn with_derivatives(xs: Vec<f64>, ys: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        Self::validate(&xs, &ys)?;
        if slopes.len() != xs.len() {
            return Err(Error::DimensionMismatch { expected: xs.len(), got: slopes.len() });
        }
        if slopes.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(Error::Domain("supplied slopes must be finite and non-negative".into()));
        }
        Ok(Self { xs, ys, slopes })
    }

    fn validate(xs: &[f64], ys: &[f64]) -> Result<()> {
        if xs.len() < 2 {
            return Err(Error::Domain("monotone table needs at least 2 knots".into()));
        }
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch { expected: xs.len(), got: ys.len() });
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(format!("x knots not strictly increasing: {} !< {}", w[0], w[1])));
            }
        }
        for w in ys.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(format!("y knots not strictly increasing: {} !< {}", w[0], w[1])));
            }
        }
        Ok(())
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.ys[0], *self.ys.last().unwrap())
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().zip(self.ys.iter()).map(|(&x, &y)| (x, y))
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.clamp(1, self.xs.len() - 1) - 1,
        }
    }

    /// Interpolated value at `x` (must lie within the x-range).
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.x_range();
        if x < lo || x > hi {
            return Err(Error::OutOfRange { value: x, lo, hi });
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(t);
        Ok(h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1])
    }

    /// Interpolated derivative dy/dx at `x`.
    pub fn deriv(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.x_range();
        if x < lo || x > hi {
            return Err(Error::OutOfRange { value: x, lo, hi });
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let dh00 = (6.0 * t * t - 6.0 * t) / h;
        let dh10 = 3.0 * t * t - 4.0 * t + 1.0;
        let dh01 = -dh00;
        let dh11 = 3.0 * t * t - 2.0 * t;
        Ok(dh00 * self.ys[i] + dh10 * self.slopes[i] + dh01 * self.ys[i + 1] + dh11 * self.slopes[i + 1])
    }

    /// Same table with y and dy/dx multiplied by a positive factor.
    pub fn scale_y(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::Domain(format!("scale factor must be positive and finite, got {factor}")));
        }
        Ok(Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y * factor).collect(),
            slopes: self.slopes.iter().map(|m| m * factor).collect(),
        })
    }

    /// Solve y(x) = `y` for x by per-segment safeguarded bisection.
    pub fn invert(&self, y: f64) -> Result<f64> {
        let (lo, hi) = self.y_range();
        if y < lo || y > hi {
            return Err(Error::OutOfRange { value: y, lo, hi });
        }
        // Locate the bracketing segment by knot values.
        let i = match self.ys.binary_search_by(|v| v.partial_cmp(&y).unwrap()) {
            Ok(i) => return Ok(self.xs[i]),
            Err(i) => i.clamp(1, self.xs.len() - 1) - 1,
        };
        let (mut a, mut b) = (self.xs[i], self.xs[i + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.eval(mid)? < y {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    }
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

fn fritsch_carlson_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut d = vec![0.0; n - 1];
    for i in 0..n - 1 {
        d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    }
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        // Weighted harmonic mean keeps the interpolant monotone.
        let w1 = 2.0 * (xs[i + 1] - xs[i]) + (xs[i] - xs[i - 1]);
        let w2 = (xs[i + 1] - xs[i]) + 2.0 * (xs[i] - xs[i - 1]);
        m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
    m
}
