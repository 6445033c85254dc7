//! Shared deterministic numerical kernels: adaptive Gauss-Kronrod quadrature,
//! embedded Runge-Kutta integration with dense output, and monotone tables.

mod interp;
mod ode;
mod quad;

pub use interp::MonotoneTable;
pub use ode::{integrate_ode, DenseStep};
pub use quad::quad_adaptive;

/// Accuracy control shared by the quadrature and ODE kernels.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_steps: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_steps: usize) -> crate::Result<Self> {
        if !(rel > 0.0) || !(abs >= 0.0) || max_steps == 0 {
            return Err(crate::Error::Domain(format!(
                "invalid tolerance: rel = {rel}, abs = {abs}, max_steps = {max_steps}"
            )));
        }
        Ok(Self { rel, abs, max_steps })
    }

    /// Default for quadrature: rel 1e-10.
    pub fn quadrature() -> Self {
        Self { rel: 1e-10, abs: 1e-14, max_steps: 2000 }
    }

    /// Default for ODE integration: rel 1e-9, abs 1e-12.
    pub fn ode() -> Self {
        Self { rel: 1e-9, abs: 1e-12, max_steps: 50_000_000 }
    }

    /// Tight control for long full-space evolutions, keeping accumulated
    /// norm drift under 1e-9.
    pub fn ode_tight() -> Self {
        Self { rel: 1e-11, abs: 1e-14, max_steps: 50_000_000 }
    }
}
