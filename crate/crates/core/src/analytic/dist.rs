//! Marginal SINR distributions.
//!
//! The densities are the derivatives of the corresponding CDFs. Using
//! `d/dz [z^{Q/2} K_Q(2 sqrt z)] = -z^{(Q-1)/2} K_{Q-1}(2 sqrt z)` they all
//! collapse onto the cascade density `g`, which avoids the cancellation
//! between the `K_{Q-1} + K_{Q+1}` and `Q K_Q` terms of the expanded form.

use crate::model::{DerivedConstants, ModelError, SystemParams};
use crate::specfun::{cascade_cdf, cascade_pdf, QuadratureTable};

fn derived(params: &SystemParams) -> Result<DerivedConstants, ModelError> {
    DerivedConstants::derive(params)
}

/// Weighted average of `f(ζ_d)` over a Laguerre rule.
pub(crate) fn laguerre_mean(table: &QuadratureTable, mut f: impl FnMut(f64) -> f64) -> f64 {
    table.iter().filter(|&(_, w)| w > 0.0).map(|(z, w)| w * f(z)).sum()
}

/// CDF of user n's SINR with residual interference `varpi`.
pub fn cdf_user_n_ipsic(x: f64, params: &SystemParams, table: &QuadratureTable) -> Result<f64, ModelError> {
    let d = derived(params)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let scale = d.c_n * d.omega_br * d.omega_rn;
    let ip = params.varpi * params.p_bs * params.omega_ipu;
    let v = laguerre_mean(table, |z| cascade_cdf(params.q, x * (d.v_n + ip * z) / scale));
    Ok(v.clamp(0.0, 1.0))
}

pub fn cdf_user_n_psic(x: f64, params: &SystemParams) -> Result<f64, ModelError> {
    let d = derived(params)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(cascade_cdf(params.q, x * d.v_n / (d.c_n * d.omega_br * d.omega_rn)))
}

/// `F(x Ξ/(c_f - x c_n))`, saturating at the SINR ceiling `c_f/c_n`.
pub(crate) fn ceiling_cdf(q: u32, x: f64, xi: f64, c_f: f64, c_n: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let gap = c_f - x * c_n;
    if gap <= 1e-300 * c_f {
        return 1.0;
    }
    cascade_cdf(q, x * xi / gap)
}

pub fn cdf_user_f(x: f64, params: &SystemParams) -> Result<f64, ModelError> {
    let d = derived(params)?;
    Ok(ceiling_cdf(params.q, x, d.xi_f, d.c_f, d.c_n))
}

pub fn pdf_eve_n_ipsic(x: f64, params: &SystemParams, table: &QuadratureTable) -> Result<f64, ModelError> {
    let d = derived(params)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let scale = d.c_n_eve * d.omega_br * d.omega_re;
    let ip = params.varpi * params.eve_power() * params.omega_ipe;
    Ok(laguerre_mean(table, |z| {
        let xi = (d.v_e1 + ip * z) / scale;
        xi * cascade_pdf(params.q, xi * x)
    }))
}

pub fn pdf_eve_n_psic(x: f64, params: &SystemParams) -> Result<f64, ModelError> {
    let d = derived(params)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(d.xi_e2 * cascade_pdf(params.q, d.xi_e2 * x))
}

/// Zero at and beyond the ceiling `a_f/a_n`.
pub fn pdf_eve_f(x: f64, params: &SystemParams) -> Result<f64, ModelError> {
    let d = derived(params)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let gap = d.c_f_eve - x * d.c_n_eve;
    if gap <= 1e-300 * d.c_f_eve {
        return Ok(0.0);
    }
    let p = d.xi_e3 * x / gap;
    let dp_dx = d.xi_e3 * d.c_f_eve / (gap * gap);
    Ok(cascade_pdf(params.q, p) * dp_dx)
}

pub fn pdf_internal_f_to_n(x: f64, params: &SystemParams) -> Result<f64, ModelError> {
    let d = derived(params)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(d.xi_e4 * cascade_pdf(params.q, d.xi_e4 * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::table_one;
    use crate::specfun::{bessel_k, gauss_laguerre, ln_gamma};

    fn gamma(q: u32) -> f64 {
        ln_gamma(q as u64).unwrap().exp()
    }

    /// The expanded density as displayed in closed form, with `K_{Q±1}` terms.
    fn expanded_kernel(q: u32, xi: f64, x: f64) -> f64 {
        let qf = q as f64;
        let a = 2.0 * (xi * x).sqrt();
        let k = |n| bessel_k(n, a).unwrap();
        let km1 = if q == 0 { k(1) } else { k(q - 1) };
        (xi * x).powf(qf / 2.0) * (-(qf / x) * k(q) + (xi / x).sqrt() * (km1 + k(q + 1))) / gamma(q)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn psic_densities_match_expanded_form() {
        let mut p = table_one();
        p.eve_p_bs = Some(1e-3);
        let d = DerivedConstants::derive(&p).unwrap();
        for x in [0.01, 0.1, 1.0, 3.0] {
            let want = expanded_kernel(p.q, d.xi_e2, x);
            assert!(rel(pdf_eve_n_psic(x, &p).unwrap(), want) < 1e-9, "x={x}");
            let want = expanded_kernel(p.q, d.xi_e4, x);
            assert!(rel(pdf_internal_f_to_n(x, &p).unwrap(), want) < 1e-9, "x={x}");
        }
    }

    #[test]
    fn eve_f_density_matches_expanded_form() {
        let mut p = table_one();
        p.eve_p_bs = Some(1e-3);
        let d = DerivedConstants::derive(&p).unwrap();
        let qf = p.q as f64;
        for x in [0.05, 0.5, 1.0, 1.5] {
            let px = d.xi_e3 * x / (d.c_f_eve - x * d.c_n_eve);
            let a = 2.0 * px.sqrt();
            let k = |n| bessel_k(n, a).unwrap();
            let want = d.c_f_eve * px / (gamma(p.q) * (d.c_f_eve - x * d.c_n_eve) * x)
                * (px.powf((qf - 1.0) / 2.0) * (k(p.q - 1) + k(p.q + 1)) - qf * px.powf(qf / 2.0 - 1.0) * k(p.q));
            assert!(want > 0.0 && rel(pdf_eve_f(x, &p).unwrap(), want) < 1e-9, "x={x}");
        }
        assert_eq!(pdf_eve_f(p.a_f / p.a_n, &p).unwrap(), 0.0);
    }

    #[test]
    fn ipsic_density_matches_expanded_sum() {
        let mut p = table_one();
        p.eve_p_bs = Some(1e-3);
        let t = gauss_laguerre(16).unwrap();
        let d = DerivedConstants::derive(&p).unwrap();
        let scale = d.c_n_eve * d.omega_br * d.omega_re;
        for x in [0.1, 1.0] {
            let want: f64 = t
                .iter()
                .map(|(z, w)| w * expanded_kernel(p.q, (d.v_e1 + p.varpi * 1e-3 * p.omega_ipe * z) / scale, x))
                .sum();
            assert!(rel(pdf_eve_n_ipsic(x, &p, &t).unwrap(), want) < 1e-9);
        }
    }

    #[test]
    fn cdf_limits() {
        let p = table_one();
        let t = gauss_laguerre(32).unwrap();
        assert_eq!(cdf_user_n_ipsic(0.0, &p, &t).unwrap(), 0.0);
        assert_eq!(cdf_user_n_psic(0.0, &p).unwrap(), 0.0);
        assert_eq!(cdf_user_f(0.0, &p).unwrap(), 0.0);
        assert_eq!(cdf_user_f(p.a_f / p.a_n, &p).unwrap(), 1.0);
        assert_eq!(cdf_user_f(5.0, &p).unwrap(), 1.0);
        assert!((cdf_user_n_psic(1e12, &p).unwrap() - 1.0).abs() < 1e-12);
        assert!((cdf_user_n_ipsic(1e12, &p, &t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ipsic_cdf_collapses_without_residual() {
        let p = table_one().with_sic(crate::model::Sic::Psic);
        let t = gauss_laguerre(64).unwrap();
        for x in [1e-3, 0.1, 1.0, 10.0, 100.0] {
            let a = cdf_user_n_ipsic(x, &p, &t).unwrap();
            let b = cdf_user_n_psic(x, &p).unwrap();
            assert!((a - b).abs() < 1e-10, "x={x}");
        }
    }
}
