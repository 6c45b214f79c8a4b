use super::dist::{ceiling_cdf, laguerre_mean};
use super::{unsupported, AnalyticError, Quadrature, SopEstimate, REGIME_LIMIT};
use crate::model::{DerivedConstants, Scenario, Sic, SystemParams};
use crate::specfun::{cascade_cdf, QuadratureTable};

struct Ctx<'a> {
    p: &'a SystemParams,
    d: DerivedConstants,
}

impl<'a> Ctx<'a> {
    fn new(p: &'a SystemParams) -> Result<Self, AnalyticError> {
        Ok(Ctx { p, d: DerivedConstants::derive(p)? })
    }

    fn k2(&self) -> f64 {
        self.p.kappa * self.p.kappa
    }

    /// `κ² σ_t² Q Ω / σ_e²`: normalized thermal noise reaching an eavesdropper.
    fn eve_thermal(&self, omega_r: f64) -> f64 {
        self.k2() * self.p.sigma2_t * self.p.q as f64 * omega_r / self.p.sigma2_e
    }

    /// `ρ_e κ² Q Ω_br Ω`: mean cascaded SNR at an eavesdropper before power split.
    fn eve_snr(&self, omega_r: f64) -> f64 {
        self.d.rho_e * self.k2() * self.p.q as f64 * self.d.omega_br * omega_r
    }

    fn eps_n1(&self, zeta: f64) -> f64 {
        let p = self.p;
        let den = self.eve_thermal(self.d.omega_re) + p.varpi * self.d.rho_e * p.omega_ipe * zeta + 1.0;
        p.r_n.exp2() * (1.0 + p.a_n * self.eve_snr(self.d.omega_re) / den) - 1.0
    }

    fn eps_n2(&self) -> f64 {
        let p = self.p;
        let den = self.eve_thermal(self.d.omega_re) + 1.0;
        p.r_n.exp2() * (1.0 + p.a_n * self.eve_snr(self.d.omega_re) / den) - 1.0
    }

    fn eps_f(&self) -> f64 {
        let p = self.p;
        let g = self.eve_snr(self.d.omega_re);
        p.r_f.exp2() * (1.0 + p.a_f * g / (self.eve_thermal(self.d.omega_re) + p.a_n * g + 1.0)) - 1.0
    }

    fn eps_f_to_n(&self) -> f64 {
        let p = self.p;
        let den = self.eve_thermal(self.d.omega_rf) + 1.0;
        p.r_n.exp2() * (1.0 + p.a_n * self.eve_snr(self.d.omega_rf) / den) - 1.0
    }

    /// `c_n Ω_br Ω_rn`
    fn n_scale(&self) -> f64 {
        self.d.c_n * self.d.omega_br * self.d.omega_rn
    }

    /// `Σ_d G_d F(ε (v_n + ϖ P Ω_ipu ζ_d) / (c_n Ω_br Ω_rn))`
    fn user_n_outage(&self, eps: f64, table: &QuadratureTable) -> f64 {
        let ip = self.p.varpi * self.p.p_bs * self.p.omega_ipu;
        let scale = self.n_scale();
        laguerre_mean(table, |z| cascade_cdf(self.p.q, eps * (self.d.v_n + ip * z) / scale))
    }

    fn external_n(&self, quad: &Quadrature, sic: Sic) -> f64 {
        match sic {
            Sic::Ipsic => laguerre_mean(&quad.outer, |zs| self.user_n_outage(self.eps_n1(zs), &quad.inner)),
            Sic::Psic => cascade_cdf(self.p.q, self.eps_n2() * self.d.v_n / self.n_scale()),
        }
    }

    fn external_f(&self) -> f64 {
        ceiling_cdf(self.p.q, self.eps_f(), self.d.xi_f, self.d.c_f, self.d.c_n)
    }

    fn internal(&self, table: &QuadratureTable, sic: Sic) -> f64 {
        let eps = self.eps_f_to_n();
        match sic {
            Sic::Ipsic => self.user_n_outage(eps, table),
            Sic::Psic => cascade_cdf(self.p.q, eps * self.d.v_n / self.n_scale()),
        }
    }

    /// Small-argument form of `F`: `-A ln A` for a single element, `A/(Q-1)` otherwise.
    fn leading(&self, a: f64) -> f64 {
        if self.p.q == 1 {
            -a * a.ln()
        } else {
            a / (self.p.q as f64 - 1.0)
        }
    }

    /// `(raw, regime_valid)`
    fn asymptote(&self, scenario: Scenario, sic: Sic, quad: &Quadrature) -> Result<(f64, bool), AnalyticError> {
        let p = self.p;
        match (scenario, sic) {
            (Scenario::ExternalN, Sic::Ipsic) => {
                let scale = p.a_n * self.k2() * self.d.omega_br * self.d.omega_rn;
                let ip = p.varpi * p.omega_ipu;
                let v = laguerre_mean(&quad.outer, |zs| {
                    let e = self.eps_n1(zs);
                    laguerre_mean(&quad.inner, |zd| cascade_cdf(p.q, e * ip * zd / scale))
                });
                Ok((v, self.d.v_n < REGIME_LIMIT * p.varpi * p.p_bs * p.omega_ipu))
            }
            (Scenario::ExternalN, Sic::Psic) => {
                let a = self.d.v_n * self.eps_n2() / self.n_scale();
                Ok((self.leading(a), a < REGIME_LIMIT))
            }
            (Scenario::ExternalF, _) => {
                let eps = self.eps_f();
                let gap = self.d.c_f - self.d.c_n * eps;
                if gap <= 0.0 {
                    return Ok((1.0, false));
                }
                let b = self.d.xi_f * eps / gap;
                Ok((self.leading(b), b < REGIME_LIMIT))
            }
            (Scenario::Internal, Sic::Psic) => {
                let a = self.d.v_n * self.eps_f_to_n() / self.n_scale();
                Ok((self.leading(a), a < REGIME_LIMIT))
            }
            (Scenario::Internal, Sic::Ipsic) => Err(unsupported(scenario, sic)),
            (Scenario::System, _) => {
                let (pn, vn) = self.asymptote(Scenario::ExternalN, sic, quad)?;
                let (pf, vf) = self.asymptote(Scenario::ExternalF, sic, quad)?;
                Ok((1.0 - (1.0 - pn) * (1.0 - pf), vn && vf))
            }
        }
    }
}

/// `ε_n1(ζ_s)`: outage threshold for user n against the external eavesdropper.
pub fn epsilon_n1(params: &SystemParams, zeta: f64) -> Result<f64, AnalyticError> {
    Ok(Ctx::new(params)?.eps_n1(zeta))
}

pub fn epsilon_n2(params: &SystemParams) -> Result<f64, AnalyticError> {
    Ok(Ctx::new(params)?.eps_n2())
}

pub fn epsilon_f(params: &SystemParams) -> Result<f64, AnalyticError> {
    Ok(Ctx::new(params)?.eps_f())
}

pub fn epsilon_f_to_n(params: &SystemParams) -> Result<f64, AnalyticError> {
    Ok(Ctx::new(params)?.eps_f_to_n())
}

/// SOP of user n against the external eavesdropper.
pub fn sop_external_n(params: &SystemParams, quad: &Quadrature, sic: Sic) -> Result<SopEstimate, AnalyticError> {
    Ok(SopEstimate::analytic(Ctx::new(params)?.external_n(quad, sic)))
}

/// SOP of user f against the external eavesdropper; exactly 1 when the
/// threshold reaches the SINR ceiling `a_f/a_n`.
pub fn sop_external_f(params: &SystemParams) -> Result<SopEstimate, AnalyticError> {
    Ok(SopEstimate::analytic(Ctx::new(params)?.external_f()))
}

/// SOP of user n when user f eavesdrops.
pub fn sop_internal(params: &SystemParams, table: &QuadratureTable, sic: Sic) -> Result<SopEstimate, AnalyticError> {
    Ok(SopEstimate::analytic(Ctx::new(params)?.internal(table, sic)))
}

/// Probability that at least one user is in outage, treating the two
/// per-user events as independent.
pub fn sop_system(params: &SystemParams, quad: &Quadrature, sic: Sic) -> Result<SopEstimate, AnalyticError> {
    let ctx = Ctx::new(params)?;
    let pn = ctx.external_n(quad, sic);
    let pf = ctx.external_f();
    Ok(SopEstimate::analytic(1.0 - (1.0 - pn) * (1.0 - pf)))
}

pub fn sop(params: &SystemParams, scenario: Scenario, sic: Sic, quad: &Quadrature) -> Result<SopEstimate, AnalyticError> {
    match scenario {
        Scenario::ExternalN => sop_external_n(params, quad, sic),
        Scenario::ExternalF => sop_external_f(params),
        Scenario::Internal => sop_internal(params, &quad.inner, sic),
        Scenario::System => sop_system(params, quad, sic),
    }
}

/// High-SNR approximation of [`sop`].
///
/// The raw formula can leave `[0, 1]` outside its regime; the estimate keeps
/// it in `raw` and reports the regime check in `regime_valid`.
pub fn sop_asymptotic(
    params: &SystemParams,
    scenario: Scenario,
    sic: Sic,
    quad: &Quadrature,
) -> Result<SopEstimate, AnalyticError> {
    let (raw, valid) = Ctx::new(params)?.asymptote(scenario, sic, quad)?;
    Ok(SopEstimate::asymptotic(raw, valid))
}

/// Negative log-log slope between the last two `(rho, sop)` points.
pub fn diversity_order(curve: &[(f64, f64)]) -> Result<f64, AnalyticError> {
    let [.., (r0, s0), (r1, s1)] = curve else {
        return Err(AnalyticError::DegenerateCurve("need at least two points".into()));
    };
    if !(*s0 > 0.0 && *s1 > 0.0 && *s0 < 1.0 && *s1 < 1.0) {
        return Err(AnalyticError::DegenerateCurve(format!("sop values {s0}, {s1} not in (0, 1)")));
    }
    if !(*r0 > 0.0 && r1 > r0) {
        return Err(AnalyticError::DegenerateCurve(format!("rho values {r0}, {r1} not ascending")));
    }
    Ok(-(s1.ln() - s0.ln()) / (r1.ln() - r0.ln()))
}

/// Secrecy throughput `(1 - SOP) R` in BPCU; the system scenario sums both users.
pub fn secrecy_throughput(
    params: &SystemParams,
    scenario: Scenario,
    sic: Sic,
    quad: &Quadrature,
) -> Result<f64, AnalyticError> {
    let ctx = Ctx::new(params)?;
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    Ok(match scenario {
        Scenario::ExternalN => (1.0 - clamp(ctx.external_n(quad, sic))) * params.r_n,
        Scenario::ExternalF => (1.0 - clamp(ctx.external_f())) * params.r_f,
        Scenario::Internal => (1.0 - clamp(ctx.internal(&quad.inner, sic))) * params.r_n,
        Scenario::System => {
            (1.0 - clamp(ctx.external_n(quad, sic))) * params.r_n + (1.0 - clamp(ctx.external_f())) * params.r_f
        }
    })
}

/// `|SOP(D, S) - SOP(2D, 2S)|`, the quadrature convergence check.
pub fn quadrature_drift(
    params: &SystemParams,
    scenario: Scenario,
    sic: Sic,
    d: usize,
    s: usize,
) -> Result<f64, AnalyticError> {
    let lo = sop(params, scenario, sic, &Quadrature::new(d, s)?)?;
    let hi = sop(params, scenario, sic, &Quadrature::new(2 * d, 2 * s)?)?;
    Ok((lo.raw - hi.raw).abs())
}
