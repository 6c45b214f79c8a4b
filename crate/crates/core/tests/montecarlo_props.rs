mod common;

use aris_secrecy::budget::RisMode;
use aris_secrecy::model::{sinr_internal_f_to_n, sinr_user_f, sinr_user_n, DerivedConstants, Scenario, Sic, SystemParams};
use aris_secrecy::montecarlo::{
    draw_for_trial, empirical_cdf, estimate_batch, estimate_sop, estimate_sop_with, sample_draw, trial_rng, Coupling, McConfig, McJob,
    SinrKind,
};
use aris_secrecy::specfun::cascade_cdf;
use common::{at_budget, desk};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

const SCENARIOS: [Scenario; 4] = [Scenario::ExternalN, Scenario::ExternalF, Scenario::Internal, Scenario::System];

fn point() -> SystemParams {
    at_budget(&desk(), 25.0, RisMode::Aris)
}

#[test]
fn results_ignore_worker_count() {
    let p = point();
    for coupling in [Coupling::Independent, Coupling::SharedHbr] {
        for s in SCENARIOS {
            let one = McConfig { trials: 50_000, seed: 11, coupling, workers: 1 };
            let three = McConfig { workers: 3, ..one };
            let a = estimate_sop_with(&p, s, Sic::Ipsic, &one).unwrap();
            let b = estimate_sop_with(&p, s, Sic::Ipsic, &three).unwrap();
            assert_eq!(a, b, "{s:?} {coupling:?}");
        }
    }
}

#[test]
fn disjoint_seeds_agree() {
    let p = point();
    for s in SCENARIOS {
        let a = estimate_sop(&p, s, Sic::Ipsic, 200_000, 1).unwrap().sop;
        let b = estimate_sop(&p, s, Sic::Ipsic, 200_000, 2).unwrap().sop;
        let se = (a.stderr.unwrap().powi(2) + b.stderr.unwrap().powi(2)).sqrt();
        assert!((a.value - b.value).abs() <= 6.0 * se.max(1e-12), "{s:?}: {} vs {}", a.value, b.value);
    }
}

#[test]
fn user_f_never_exceeds_ceiling() {
    let p = point();
    let ceiling = p.a_f / p.a_n;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
    for _ in 0..100_000 {
        let d = sample_draw(&mut rng, &p, Coupling::Independent).unwrap();
        assert!(sinr_user_f(&d, &p) <= ceiling);
    }
    let cfg = McConfig::new(100_000, 4);
    assert_eq!(empirical_cdf(&p, SinrKind::UserF, &[ceiling], &cfg).unwrap(), vec![1.0]);
}

/// Residual interference only adds outages on shared draws.
#[test]
fn ipsic_dominates_psic_on_paired_draws() {
    let mut p = point();
    let cfg = McConfig::new(100_000, 21);
    let check = |p: &SystemParams, s: Scenario| {
        let jobs = [Sic::Ipsic, Sic::Psic].map(|sic| McJob { params: p.clone(), scenario: s, sic });
        let r = estimate_batch(&jobs, &cfg).unwrap();
        assert!(r[0].sop.value >= r[1].sop.value, "{s:?}");
    };
    check(&p, Scenario::Internal);
    p.omega_ipe = 1e-30;
    check(&p, Scenario::ExternalN);

    // the indicator ordering itself, trial by trial
    let ip = p.with_sic(Sic::Ipsic);
    let ps = p.with_sic(Sic::Psic);
    let thr = |eve: f64, p: &SystemParams| p.r_n.exp2() * (1.0 + eve) - 1.0;
    for t in 0..20_000 {
        let d = draw_for_trial(&p, 21, t, Coupling::Independent).unwrap();
        let out_ip = sinr_user_n(&d, &ip) < thr(sinr_internal_f_to_n(&d, &ip), &ip);
        let out_ps = sinr_user_n(&d, &ps) < thr(sinr_internal_f_to_n(&d, &ps), &ps);
        assert!(out_ip || !out_ps, "trial {t}");
    }
}

#[test]
fn draw_means_match_cascade_moments() {
    let p = point();
    let d = DerivedConstants::derive(&p).unwrap();
    let q = p.q as f64;
    let n = 1_000_000;
    let mut rng = trial_rng(99, 0);
    let (mut ce, mut nn) = (0.0, 0.0);
    for _ in 0..n {
        let draw = sample_draw(&mut rng, &p, Coupling::Independent).unwrap();
        ce += draw.cascaded_gain_e;
        nn += draw.norm_n;
    }
    let ce = ce / n as f64 / (q * d.omega_br * d.omega_re);
    let nn = nn / n as f64 / (q * d.omega_rn);
    assert!((ce - 1.0).abs() < 0.01, "cascade mean ratio {ce}");
    assert!((nn - 1.0).abs() < 0.01, "norm mean ratio {nn}");
}

#[test]
fn cascade_cdf_at_median() {
    let p = point();
    let d = DerivedConstants::derive(&p).unwrap();
    let scale = d.omega_br * d.omega_rn;
    let mut rng = trial_rng(5, 0);
    let mut g: Vec<f64> = (0..200_001)
        .map(|_| sample_draw(&mut rng, &p, Coupling::Independent).unwrap().cascaded_gain_n / scale)
        .collect();
    g.sort_by(f64::total_cmp);
    let median = g[g.len() / 2];
    assert!((cascade_cdf(p.q, median) - 0.5).abs() < 0.005);
}

#[test]
fn zero_rate_without_eavesdropper_never_outages() {
    let mut p = point();
    p.r_n = 0.0;
    p.r_f = 0.0;
    p.eve_p_bs = Some(0.0);
    for s in SCENARIOS {
        for sic in [Sic::Ipsic, Sic::Psic] {
            let r = estimate_sop(&p, s, sic, 20_000, 8).unwrap();
            assert_eq!(r.sop.value, 0.0, "{s:?}");
            assert_eq!(r.throughput, 0.0);
        }
    }
}

#[test]
fn silent_user_n_always_outages() {
    let mut p = point();
    p.a_n = 0.0;
    p.a_f = 1.0;
    let r = estimate_sop(&p, Scenario::ExternalN, Sic::Psic, 20_000, 8).unwrap();
    assert_eq!(r.sop.value, 1.0);
    assert_eq!(r.sop.stderr, Some(0.0));
}
