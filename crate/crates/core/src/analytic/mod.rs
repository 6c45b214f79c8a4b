//! Closed-form secrecy statistics.
//!
//! Every expression is a (possibly quadrature-averaged) evaluation of the
//! normalized cascade CDF `F(z) = 1 - (2/Γ(Q)) z^{Q/2} K_Q(2 sqrt z)` at a
//! scenario-specific argument, so all outage values go through
//! [`crate::specfun::cascade_cdf`], which keeps full relative precision for
//! small probabilities.

mod dist;
mod sop;

pub use dist::{
    cdf_user_f, cdf_user_n_ipsic, cdf_user_n_psic, pdf_eve_f, pdf_eve_n_ipsic, pdf_eve_n_psic,
    pdf_internal_f_to_n,
};
pub use sop::{
    diversity_order, epsilon_f, epsilon_f_to_n, epsilon_n1, epsilon_n2, quadrature_drift, secrecy_throughput,
    sop, sop_asymptotic, sop_external_f, sop_external_n, sop_internal, sop_system,
};

use serde::Serialize;
use thiserror::Error;

use crate::model::{ModelError, Scenario, Sic};
use crate::specfun::{gauss_laguerre, QuadratureTable, SpecFunError};

pub const DEFAULT_ORDER: usize = 64;

/// Drift beyond which clamping a probability into `[0, 1]` is reported.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Asymptote arguments above this are outside the high-SNR regime.
pub const REGIME_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("no asymptotic expression for {scenario} with {sic}")]
    Unsupported { scenario: &'static str, sic: &'static str },
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error(transparent)]
    Quadrature(#[from] SpecFunError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    Asymptotic,
    MonteCarlo,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Asymptotic => "asymptotic",
            Provenance::MonteCarlo => "monte-carlo",
        }
    }
}

/// A secrecy outage probability and where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SopEstimate {
    /// Clamped into `[0, 1]`.
    pub value: f64,
    /// Value before clamping.
    pub raw: f64,
    pub provenance: Provenance,
    pub trials: Option<u64>,
    pub stderr: Option<f64>,
    /// Set when clamping moved the value by more than [`CLAMP_TOLERANCE`].
    pub clamp_warning: bool,
    /// For asymptotes: whether the point lies in the high-SNR regime.
    pub regime_valid: Option<bool>,
}

impl SopEstimate {
    fn clamped(raw: f64, provenance: Provenance) -> SopEstimate {
        let value = if raw.is_nan() { raw } else { raw.clamp(0.0, 1.0) };
        SopEstimate {
            value,
            raw,
            provenance,
            trials: None,
            stderr: None,
            clamp_warning: (value - raw).abs() > CLAMP_TOLERANCE,
            regime_valid: None,
        }
    }

    pub fn analytic(raw: f64) -> SopEstimate {
        Self::clamped(raw, Provenance::Analytic)
    }

    pub fn asymptotic(raw: f64, regime_valid: bool) -> SopEstimate {
        SopEstimate { regime_valid: Some(regime_valid), ..Self::clamped(raw, Provenance::Asymptotic) }
    }

    pub fn monte_carlo(hits: u64, trials: u64) -> SopEstimate {
        let p = hits as f64 / trials as f64;
        SopEstimate {
            value: p,
            raw: p,
            provenance: Provenance::MonteCarlo,
            trials: Some(trials),
            stderr: Some((p * (1.0 - p) / trials as f64).sqrt()),
            clamp_warning: false,
            regime_valid: None,
        }
    }
}

/// The two Gauss–Laguerre rules used by the closed forms: `inner` (order D)
/// averages residual interference at the legitimate receiver, `outer`
/// (order S) averages it at the eavesdropper.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub inner: QuadratureTable,
    pub outer: QuadratureTable,
}

impl Quadrature {
    pub fn new(d: usize, s: usize) -> Result<Quadrature, SpecFunError> {
        Ok(Quadrature { inner: gauss_laguerre(d)?, outer: gauss_laguerre(s)? })
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(DEFAULT_ORDER, DEFAULT_ORDER).expect("default order is in range")
    }
}

pub(crate) fn unsupported(scenario: Scenario, sic: Sic) -> AnalyticError {
    AnalyticError::Unsupported { scenario: scenario.as_str(), sic: sic.as_str() }
}
