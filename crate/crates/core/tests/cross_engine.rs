//! Closed forms against the Monte Carlo engine at moderate trial counts.

mod common;

use aris_secrecy::analytic::{sop, Quadrature};
use aris_secrecy::budget::RisMode;
use aris_secrecy::model::{Scenario, Sic};
use aris_secrecy::montecarlo::{estimate_batch, McConfig, McJob};
use common::{at_budget, desk};

#[test]
fn sop_agrees_with_simulation() {
    let quad = Quadrature::default();
    let mut jobs = Vec::new();
    for p_tot in [20.0, 30.0] {
        for mode in [RisMode::Aris, RisMode::Pris] {
            let params = at_budget(&desk(), p_tot, mode);
            for scenario in [Scenario::ExternalN, Scenario::ExternalF, Scenario::Internal] {
                for sic in [Sic::Ipsic, Sic::Psic] {
                    jobs.push(McJob { params: params.clone(), scenario, sic });
                }
            }
        }
    }
    let mc = estimate_batch(&jobs, &McConfig::new(200_000, 11)).unwrap();
    for (job, m) in jobs.iter().zip(&mc) {
        let a = sop(&job.params, job.scenario, job.sic, &quad).unwrap().value;
        let se = m.sop.stderr.unwrap();
        let tol = (4.0 * se).max(0.15 * a).max(1e-4);
        eprintln!("{:?} {:?} p_bs={:.3e} analytic={a:.5e} mc={:.5e} se={se:.1e}", job.scenario, job.sic, job.params.p_bs, m.sop.value);
        assert!((a - m.sop.value).abs() <= tol, "{:?} {:?}: {a} vs {}", job.scenario, job.sic, m.sop.value);
    }
}
