//! Special-function kernel used by the closed-form engine.
//!
//! Everything here is a pure function of its arguments. The cascaded-gain
//! helpers in [`cascade`] are the workhorse of the analytic module: every
//! CDF, PDF and SOP expression reduces to `z^{q/2} K_q(2 sqrt z)` evaluated
//! at some scaled argument.

mod bessel;
pub mod cascade;
mod gamma;
mod laguerre;

pub use bessel::{bessel_k, bessel_k_eval, ln_bessel_k, KValue};
pub use cascade::{cascade_cdf, cascade_pdf, cascade_sf, ln_cascade_sf};
pub use gamma::ln_gamma;
pub use laguerre::{gauss_laguerre, QuadratureTable, MAX_QUADRATURE_ORDER};

use thiserror::Error;

/// Euler–Mascheroni constant.
pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function}: argument {value} is outside the function's domain")]
    Domain { function: &'static str, value: f64 },
    #[error("quadrature order {0} is outside 1..={max}", max = MAX_QUADRATURE_ORDER)]
    QuadratureOrder(usize),
    #[error("Laguerre root refinement did not converge for order {order}")]
    RootFinding { order: usize },
}
