//! Sweep evaluation: resolves every point, runs the requested engines and
//! collects rows in sweep order.

use aris_secrecy::analytic::{secrecy_throughput, sop, sop_asymptotic, AnalyticError, Quadrature, SopEstimate};
use aris_secrecy::budget::{solve_bs_power, BudgetError, PowerBudget, RisMode};
use aris_secrecy::model::{ModelError, Scenario, Sic, SystemParams};
use aris_secrecy::montecarlo::{estimate_batch, McConfig, McError, McJob};
use serde::Serialize;
use thiserror::Error;

use crate::config::{dbm, to_dbm, Config, Engine, Fixed, Metric, ScenarioSpec, SweepSpec, SweepVar};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    MonteCarlo(#[from] McError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

/// One line of curve data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub sweep_var: &'static str,
    pub value: f64,
    pub scenario: Scenario,
    pub sic: Sic,
    pub mode: RisMode,
    pub engine: Engine,
    pub metric: Metric,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub flags: Vec<String>,
    /// Resolved parameters at this point; absent when the point is infeasible.
    pub params: Option<SystemParams>,
}

impl Row {
    pub fn is_infeasible(&self) -> bool {
        self.flags.iter().any(|f| f == "infeasible" || f == "invalid")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error(transparent)]
    Infeasible(#[from] BudgetError),
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

impl PointError {
    pub fn flag(&self) -> &'static str {
        match self {
            PointError::Infeasible(_) => "infeasible",
            PointError::Invalid(_) => "invalid",
        }
    }
}

/// Parameters of one sweep point for one scenario tuple.
pub fn point_params(cfg: &Config, sweep: Option<&SweepSpec>, value: f64, mode: RisMode) -> Result<SystemParams, PointError> {
    let mut sys = cfg.system.clone();
    let mut budget = cfg.budget;
    if let Some(s) = sweep {
        match s.variable {
            SweepVar::PTotDbm => budget.p_tot = dbm(value),
            SweepVar::Kappa => sys.kappa = value,
            SweepVar::M => {
                sys.m = value as u32;
                match s.fixed {
                    Fixed::P => sys.q = sys.m / sys.p,
                    Fixed::Q => sys.p = sys.m / sys.q,
                }
            }
            SweepVar::AlphaP => {
                sys.a_f = value;
                sys.a_n = 1.0 - value;
            }
            SweepVar::Sigma2TDbm => sys.sigma2_t = dbm(value),
            SweepVar::R => {
                sys.r_n = value;
                sys.r_f = value;
            }
        }
    }
    if mode == RisMode::Pris {
        sys = sys.passive();
    }
    let pb = PowerBudget {
        p_tot: budget.p_tot,
        p_ris: budget.p_ris_at(budget.p_tot),
        p_ps: budget.p_ps,
        p_dc: budget.p_dc,
        mode,
    };
    sys.p_bs = solve_bs_power(&pb, sys.m, sys.p, sys.q)?;
    sys.validate()?;
    Ok(sys)
}

/// Sweep variable and values; a configuration without a sweep is a single
/// point at its own total power.
pub fn axis(cfg: &Config) -> (&'static str, Vec<f64>) {
    match &cfg.sweep {
        Some(s) => (s.variable.as_str(), s.values.clone()),
        None => (SweepVar::PTotDbm.as_str(), vec![to_dbm(cfg.budget.p_tot)]),
    }
}

fn sop_flags(e: &SopEstimate) -> Vec<String> {
    let mut f = Vec::new();
    if e.clamp_warning {
        f.push("clamped".to_string());
    }
    if e.regime_valid == Some(false) {
        f.push("regime-invalid".to_string());
    }
    f
}

/// Evaluates `cfg` over its sweep with the given engines. Rows come out in
/// sweep order, then scenario order, then engine order, then metric order.
pub fn run(cfg: &Config, engines: &[Engine], workers: usize) -> Result<Vec<Row>, RunError> {
    let (var, values) = axis(cfg);
    let quad = Quadrature::new(cfg.quadrature.d, cfg.quadrature.s).map_err(AnalyticError::from)?;
    struct Slot {
        value: f64,
        spec: ScenarioSpec,
        params: Result<SystemParams, PointError>,
    }
    let slots: Vec<Slot> = values
        .iter()
        .flat_map(|&value| {
            cfg.scenarios.iter().map(move |&spec| Slot {
                value,
                spec,
                params: point_params(cfg, cfg.sweep.as_ref(), value, spec.mode),
            })
        })
        .collect();

    let mc = if engines.contains(&Engine::Montecarlo) {
        let feasible: Vec<usize> = (0..slots.len()).filter(|&i| slots[i].params.is_ok()).collect();
        let jobs: Vec<McJob> = feasible
            .iter()
            .map(|&i| McJob {
                params: slots[i].params.clone().expect("feasible"),
                scenario: slots[i].spec.scenario,
                sic: slots[i].spec.sic,
            })
            .collect();
        let mc_cfg = McConfig { trials: cfg.trials, seed: cfg.seed, coupling: cfg.coupling, workers };
        let results = estimate_batch(&jobs, &mc_cfg)?;
        let mut by_slot = vec![None; slots.len()];
        for (i, r) in feasible.into_iter().zip(results) {
            by_slot[i] = Some(r);
        }
        by_slot
    } else {
        vec![None; slots.len()]
    };

    let mut rows = Vec::new();
    for (slot, mc) in slots.iter().zip(mc) {
        let ScenarioSpec { scenario, sic, mode } = slot.spec;
        for &engine in engines {
            for &metric in &cfg.metrics {
                if engine == Engine::Asymptotic && metric == Metric::Throughput {
                    continue;
                }
                let mut row = Row {
                    sweep_var: var,
                    value: slot.value,
                    scenario,
                    sic,
                    mode,
                    engine,
                    metric,
                    estimate: None,
                    stderr: None,
                    trials: None,
                    seed: None,
                    flags: Vec::new(),
                    params: None,
                };
                let p = match &slot.params {
                    Ok(p) => p,
                    Err(e) => {
                        row.flags.push(e.flag().to_string());
                        rows.push(row);
                        continue;
                    }
                };
                row.params = Some(p.clone());
                match engine {
                    Engine::Analytic => {
                        let est = sop(p, scenario, sic, &quad)?;
                        row.flags = sop_flags(&est);
                        row.estimate = Some(match metric {
                            Metric::Sop => est.value,
                            Metric::Throughput => secrecy_throughput(p, scenario, sic, &quad)?,
                        });
                    }
                    Engine::Asymptotic => match sop_asymptotic(p, scenario, sic, &quad) {
                        Ok(est) => {
                            row.flags = sop_flags(&est);
                            row.estimate = Some(est.value);
                        }
                        Err(AnalyticError::Unsupported { .. }) => row.flags.push("unsupported".to_string()),
                        Err(e) => return Err(e.into()),
                    },
                    Engine::Montecarlo => {
                        let r = mc.expect("montecarlo results exist for feasible points");
                        row.trials = Some(r.trials);
                        row.seed = Some(r.seed);
                        match metric {
                            Metric::Sop => {
                                row.estimate = Some(r.sop.value);
                                row.stderr = r.sop.stderr;
                            }
                            Metric::Throughput => {
                                row.estimate = Some(r.throughput);
                                row.stderr = Some(r.throughput_stderr);
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Warnings about configurations that are legal but probably unintended.
pub fn warnings(cfg: &Config) -> Vec<String> {
    let mut out = Vec::new();
    let aris = cfg.scenarios.iter().any(|s| s.mode == RisMode::Aris);
    if aris && cfg.system.kappa > 1.0 && cfg.budget.p_ris_at(cfg.budget.p_tot) == 0.0 {
        out.push(format!(
            "kappa = {} but the amplifier budget p_ris is 0; the active surface has no power to amplify with",
            cfg.system.kappa
        ));
    }
    out
}
