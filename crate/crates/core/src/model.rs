//! Scenario parameters, derived constants and exact per-draw SINRs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("distance must be positive, got {0}")]
    Distance(f64),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ModelError {
    ModelError::Invalid { field, reason: reason.into() }
}

/// Successive interference cancellation quality at user n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sic {
    Ipsic,
    Psic,
}

impl Sic {
    pub fn as_str(self) -> &'static str {
        match self {
            Sic::Ipsic => "ipsic",
            Sic::Psic => "psic",
        }
    }
}

/// Which secrecy event is evaluated.
///
/// `System` is the event that at least one user is in secrecy outage against
/// the external eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    ExternalN,
    ExternalF,
    Internal,
    System,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::ExternalN => "external_n",
            Scenario::ExternalF => "external_f",
            Scenario::Internal => "internal",
            Scenario::System => "system",
        }
    }
}

/// Full scenario description in linear units (watts, linear gains).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub d_br: f64,
    pub d_rn: f64,
    pub d_rf: f64,
    pub d_re: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: u32,
    pub p: u32,
    pub q: u32,
    pub kappa: f64,
    pub sigma2: f64,
    pub sigma2_e: f64,
    pub sigma2_t: f64,
    pub a_f: f64,
    pub a_n: f64,
    pub r_f: f64,
    pub r_n: f64,
    pub varpi: f64,
    pub omega_ipu: f64,
    pub omega_ipe: f64,
    pub p_bs: f64,
    /// BS power seen by the eavesdroppers. `None` means `p_bs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eve_p_bs: Option<f64>,
}

impl SystemParams {
    pub fn eve_power(&self) -> f64 {
        self.eve_p_bs.unwrap_or(self.p_bs)
    }

    /// Copy with `varpi = 0` for pSIC; unchanged for ipSIC.
    pub fn with_sic(&self, sic: Sic) -> SystemParams {
        let mut out = self.clone();
        if sic == Sic::Psic {
            out.varpi = 0.0;
        }
        out
    }

    /// The passive-surface special case: unit amplification, no thermal noise.
    pub fn passive(&self) -> SystemParams {
        SystemParams { kappa: 1.0, sigma2_t: 0.0, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("d_br", self.d_br),
            ("d_rn", self.d_rn),
            ("d_rf", self.d_rf),
            ("d_re", self.d_re),
            ("beta", self.beta),
            ("sigma2", self.sigma2),
            ("sigma2_e", self.sigma2_e),
            ("omega_ipu", self.omega_ipu),
            ("omega_ipe", self.omega_ipe),
            ("p_bs", self.p_bs),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(field, format!("must be positive and finite, got {v}")));
            }
        }
        if let Some(pe) = self.eve_p_bs {
            if !(pe.is_finite() && pe > 0.0) {
                return Err(invalid("eve_p_bs", format!("must be positive and finite, got {pe}")));
            }
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(invalid("alpha", "must be finite and nonnegative"));
        }
        if !(self.sigma2_t.is_finite() && self.sigma2_t >= 0.0) {
            return Err(invalid("sigma2_t", "must be finite and nonnegative"));
        }
        if self.m == 0 || self.p == 0 || self.q == 0 {
            return Err(invalid("m", "element counts must be positive"));
        }
        if self.p.checked_mul(self.q) != Some(self.m) {
            return Err(invalid("m", format!("M = {} is not P*Q = {}*{}", self.m, self.p, self.q)));
        }
        if !(self.kappa.is_finite() && self.kappa >= 1.0) {
            return Err(invalid("kappa", format!("must be at least 1, got {}", self.kappa)));
        }
        if !(self.a_n > 0.0 && self.a_f > self.a_n) {
            return Err(invalid("a_f", "need a_f > a_n > 0"));
        }
        if (self.a_f + self.a_n - 1.0).abs() > 1e-12 {
            return Err(invalid("a_n", format!("a_f + a_n = {} != 1", self.a_f + self.a_n)));
        }
        if !(self.r_f.is_finite() && self.r_f >= 0.0) {
            return Err(invalid("r_f", "must be finite and nonnegative"));
        }
        if !(self.r_n.is_finite() && self.r_n >= 0.0) {
            return Err(invalid("r_n", "must be finite and nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.varpi) {
            return Err(invalid("varpi", format!("must lie in [0, 1], got {}", self.varpi)));
        }
        Ok(())
    }
}

pub fn mean_channel_gain(d: f64, alpha: f64, beta: f64) -> Result<f64, ModelError> {
    if !(d.is_finite() && d > 0.0) {
        return Err(ModelError::Distance(d));
    }
    Ok(beta * d.powf(-alpha))
}

/// Composite constants of the closed-form expressions.
///
/// Quantities tagged `_eve` use the eavesdropper-side BS power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub omega_br: f64,
    pub omega_rn: f64,
    pub omega_rf: f64,
    pub omega_re: f64,
    pub c_n: f64,
    pub c_f: f64,
    pub c_n_eve: f64,
    pub c_f_eve: f64,
    pub v_n: f64,
    pub v_f: f64,
    pub v_e1: f64,
    pub v_e2: f64,
    pub rho_e: f64,
    pub xi_f: f64,
    pub xi_e2: f64,
    pub xi_e3: f64,
    pub xi_e4: f64,
}

impl DerivedConstants {
    /// Assumes `params` passed [`SystemParams::validate`]; distances are
    /// still checked because they feed a power law.
    pub fn derive(params: &SystemParams) -> Result<DerivedConstants, ModelError> {
        let gain = |d| mean_channel_gain(d, params.alpha, params.beta);
        let omega_br = gain(params.d_br)?;
        let omega_rn = gain(params.d_rn)?;
        let omega_rf = gain(params.d_rf)?;
        let omega_re = gain(params.d_re)?;
        let k2 = params.kappa * params.kappa;
        let pe = params.eve_power();
        let thermal = k2 * params.sigma2_t * params.q as f64;
        let c_n = params.a_n * params.p_bs * k2;
        let c_f = params.a_f * params.p_bs * k2;
        let c_n_eve = params.a_n * pe * k2;
        let c_f_eve = params.a_f * pe * k2;
        let v_n = thermal * omega_rn + params.sigma2;
        let v_f = thermal * omega_rf + params.sigma2;
        let v_e1 = thermal * omega_re + params.sigma2_e;
        let v_e2 = thermal * omega_rf + params.sigma2_e;
        Ok(DerivedConstants {
            omega_br,
            omega_rn,
            omega_rf,
            omega_re,
            c_n,
            c_f,
            c_n_eve,
            c_f_eve,
            v_n,
            v_f,
            v_e1,
            v_e2,
            rho_e: pe / params.sigma2_e,
            xi_f: v_f / (omega_br * omega_rf),
            xi_e2: v_e1 / (c_n_eve * omega_br * omega_re),
            xi_e3: v_e1 / (omega_br * omega_re),
            xi_e4: v_e2 / (c_n_eve * omega_br * omega_rf),
        })
    }
}

/// One realization of every random quantity entering the SINRs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ChannelDraw {
    pub cascaded_gain_n: f64,
    pub cascaded_gain_f: f64,
    pub cascaded_gain_e: f64,
    pub norm_n: f64,
    pub norm_f: f64,
    pub norm_e: f64,
    pub ip_user: f64,
    pub ip_eve: f64,
}

fn k2(params: &SystemParams) -> f64 {
    params.kappa * params.kappa
}

pub fn sinr_user_n(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    let k2 = k2(params);
    let p = params.p_bs;
    params.a_n * p * k2 * draw.cascaded_gain_n
        / (k2 * params.sigma2_t * draw.norm_n + params.varpi * p * draw.ip_user + params.sigma2)
}

pub fn sinr_user_f(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    let k2 = k2(params);
    let s = params.p_bs * k2 * draw.cascaded_gain_f;
    params.a_f * s / (params.a_n * s + k2 * params.sigma2_t * draw.norm_f + params.sigma2)
}

pub fn sinr_eve_n(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    let k2 = k2(params);
    let p = params.eve_power();
    params.a_n * p * k2 * draw.cascaded_gain_e
        / (k2 * params.sigma2_t * draw.norm_e + params.varpi * p * draw.ip_eve + params.sigma2_e)
}

pub fn sinr_eve_f(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    let k2 = k2(params);
    let s = params.eve_power() * k2 * draw.cascaded_gain_e;
    params.a_f * s / (params.a_n * s + k2 * params.sigma2_t * draw.norm_e + params.sigma2_e)
}

/// SINR of user f decoding user n's message (internal eavesdropper).
pub fn sinr_internal_f_to_n(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    let k2 = k2(params);
    params.a_n * params.eve_power() * k2 * draw.cascaded_gain_f
        / (k2 * params.sigma2_t * draw.norm_f + params.sigma2_e)
}
