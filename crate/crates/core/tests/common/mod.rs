#![allow(dead_code)]

use aris_secrecy::budget::{solve_bs_power, PowerBudget, RisMode};
use aris_secrecy::model::SystemParams;

pub fn dbm(x: f64) -> f64 {
    10f64.powf(x / 10.0) * 1e-3
}

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Table I geometry and hardware with κ = 10, M = 40, P = 2, Q = 20,
/// σ_t² = -40 dBm, residual interference -80 dB, eavesdropper reference
/// power 0 dBm. `p_bs` is a placeholder until a budget is applied.
pub fn desk() -> SystemParams {
    SystemParams {
        d_br: 20.0,
        d_rn: 10.0,
        d_rf: 20.0,
        d_re: 20.0,
        alpha: 2.0,
        beta: db(-30.0),
        m: 40,
        p: 2,
        q: 20,
        kappa: 10.0,
        sigma2: dbm(-55.0),
        sigma2_e: dbm(-55.0),
        sigma2_t: dbm(-40.0),
        a_f: 0.7,
        a_n: 0.3,
        r_f: 0.05,
        r_n: 0.05,
        varpi: 1.0,
        omega_ipu: db(-80.0),
        omega_ipe: db(-80.0),
        p_bs: 1e-3,
        eve_p_bs: Some(dbm(0.0)),
    }
}

/// `base` at total power `p_tot_dbm` with a 20 % amplifier share; the
/// passive variant drops amplification and thermal noise.
pub fn at_budget(base: &SystemParams, p_tot_dbm: f64, mode: RisMode) -> SystemParams {
    let p_tot = dbm(p_tot_dbm);
    let budget = PowerBudget { p_tot, p_ris: 0.2 * p_tot, p_ps: dbm(-10.0), p_dc: dbm(-10.0), mode };
    let p_bs = solve_bs_power(&budget, base.m, base.p, base.q).expect("feasible budget");
    let params = match mode {
        RisMode::Aris => base.clone(),
        RisMode::Pris => base.passive(),
    };
    SystemParams { p_bs, ..params }
}
