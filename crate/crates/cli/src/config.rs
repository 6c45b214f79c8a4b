//! JSON run configuration.
//!
//! Numeric fields may carry a `_db` or `_dbm` suffix; they are converted to
//! linear ratios or watts at parse time and stored under the bare name.

use std::collections::BTreeMap;

use aris_secrecy::analytic::DEFAULT_ORDER;
use aris_secrecy::budget::RisMode;
use aris_secrecy::model::{Scenario, Sic, SystemParams};
use aris_secrecy::montecarlo::{Coupling, MIN_TRIALS};
use aris_secrecy::specfun::MAX_QUADRATURE_ORDER;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}field `{field}`: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

const SYSTEM_FIELDS: [&str; 22] = [
    "d_br", "d_rn", "d_rf", "d_re", "alpha", "beta", "m", "p", "q", "kappa", "sigma2", "sigma2_e", "sigma2_t",
    "a_f", "a_n", "r_f", "r_n", "varpi", "omega_ipu", "omega_ipe", "eve_p_bs", "p_bs",
];

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn dbm(x: f64) -> f64 {
    db(x) * 1e-3
}

pub fn to_dbm(w: f64) -> f64 {
    10.0 * (w * 1e3).log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[serde(alias = "a")]
    Analytic,
    #[serde(alias = "asy")]
    Asymptotic,
    #[serde(alias = "m", alias = "mc")]
    Montecarlo,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Asymptotic => "asymptotic",
            Engine::Montecarlo => "montecarlo",
        }
    }

    /// Parses a comma-separated list such as `a,m,asy`.
    pub fn parse_list(s: &str) -> Result<Vec<Engine>, ConfigError> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let e = match tok {
                "a" | "analytic" => Engine::Analytic,
                "asy" | "asymptotic" => Engine::Asymptotic,
                "m" | "mc" | "montecarlo" => Engine::Montecarlo,
                other => return Err(err(None, "engines", format!("unknown engine `{other}`"))),
            };
            if !out.contains(&e) {
                out.push(e);
            }
        }
        if out.is_empty() {
            return Err(err(None, "engines", "empty engine list"));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Sop,
    Throughput,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Sop => "sop",
            Metric::Throughput => "throughput",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepVar {
    #[serde(rename = "p_tot_dbm")]
    PTotDbm,
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "M", alias = "m")]
    M,
    #[serde(rename = "alpha_p")]
    AlphaP,
    #[serde(rename = "sigma2_t_dbm")]
    Sigma2TDbm,
    #[serde(rename = "R", alias = "r")]
    R,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::PTotDbm => "p_tot_dbm",
            SweepVar::Kappa => "kappa",
            SweepVar::M => "M",
            SweepVar::AlphaP => "alpha_p",
            SweepVar::Sigma2TDbm => "sigma2_t_dbm",
            SweepVar::R => "R",
        }
    }
}

/// Which factor of `M = P·Q` stays fixed in an `M` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fixed {
    #[default]
    P,
    Q,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub values: Vec<f64>,
    pub fixed: Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    #[serde(default = "default_sic")]
    pub sic: Sic,
    #[serde(default = "default_mode")]
    pub mode: RisMode,
}

fn default_sic() -> Sic {
    Sic::Psic
}

fn default_mode() -> RisMode {
    RisMode::Aris
}

/// Amplifier budget, either absolute or as a share of the total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RisPower {
    Fraction(f64),
    Absolute(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetSpec {
    /// Watts.
    pub p_tot: f64,
    pub p_ris: RisPower,
    pub p_ps: f64,
    pub p_dc: f64,
}

impl BudgetSpec {
    pub fn p_ris_at(&self, p_tot: f64) -> f64 {
        match self.p_ris {
            RisPower::Fraction(f) => f * p_tot,
            RisPower::Absolute(w) => w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub d: usize,
    pub s: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { d: DEFAULT_ORDER, s: DEFAULT_ORDER }
    }
}

/// A fully resolved configuration in linear units. `system.p_bs` is a
/// placeholder; the BS power is solved from the budget at every point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub name: String,
    pub notes: Vec<String>,
    pub system: SystemParams,
    pub budget: BudgetSpec,
    pub quadrature: QuadratureSpec,
    pub sweep: Option<SweepSpec>,
    pub scenarios: Vec<ScenarioSpec>,
    pub engines: Vec<Engine>,
    pub metrics: Vec<Metric>,
    pub trials: u64,
    pub seed: u64,
    pub coupling: Coupling,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: SweepVar,
    values: Option<Vec<f64>>,
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
    #[serde(default)]
    fixed: Fixed,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    name: String,
    #[serde(default)]
    notes: Vec<String>,
    system: BTreeMap<String, Value>,
    budget: BTreeMap<String, Value>,
    #[serde(default)]
    quadrature: QuadratureSpec,
    sweep: Option<RawSweep>,
    scenarios: Vec<ScenarioSpec>,
    #[serde(default = "default_engines")]
    engines: Vec<Engine>,
    #[serde(default = "default_metrics")]
    metrics: Vec<Metric>,
    #[serde(default = "default_trials")]
    trials: u64,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default)]
    coupling: Coupling,
}

fn default_engines() -> Vec<Engine> {
    vec![Engine::Analytic]
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::Sop]
}

fn default_trials() -> u64 {
    1_000_000
}

fn default_seed() -> u64 {
    1
}

fn err(line: Option<usize>, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { line, field: field.to_string(), message: message.into() }
}

/// Line of the first occurrence of `"key"` in the source.
fn line_of(src: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    src.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

/// Splits `key` into its bare name and a unit converter.
fn unit_suffix(key: &str) -> (&str, Option<fn(f64) -> f64>) {
    if let Some(base) = key.strip_suffix("_dbm") {
        (base, Some(dbm))
    } else if let Some(base) = key.strip_suffix("_db") {
        (base, Some(db))
    } else {
        (key, None)
    }
}

/// Resolves suffixed keys of one section into bare linear keys.
fn resolve_units(src: &str, section: &str, raw: &BTreeMap<String, Value>) -> Result<BTreeMap<String, Value>, ConfigError> {
    let mut out = BTreeMap::new();
    for (key, value) in raw {
        let (base, conv) = unit_suffix(key);
        let here = || line_of(src, key);
        let value = match conv {
            None => value.clone(),
            Some(f) => {
                let x = value
                    .as_f64()
                    .ok_or_else(|| err(here(), &format!("{section}.{key}"), "expected a number"))?;
                let y = Number::from_f64(f(x))
                    .ok_or_else(|| err(here(), &format!("{section}.{key}"), "converted value is not finite"))?;
                Value::Number(y)
            }
        };
        if out.insert(base.to_string(), value).is_some() {
            return Err(err(here(), &format!("{section}.{base}"), "given more than once (with and without unit suffix)"));
        }
    }
    Ok(out)
}

fn number(src: &str, section: &str, map: &BTreeMap<String, Value>, key: &str) -> Result<Option<f64>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| err(line_of(src, key), &format!("{section}.{key}"), "expected a number")),
    }
}

fn resolve_system(src: &str, raw: &BTreeMap<String, Value>) -> Result<SystemParams, ConfigError> {
    let mut map = resolve_units(src, "system", raw)?;
    for key in map.keys() {
        if !SYSTEM_FIELDS.contains(&key.as_str()) {
            return Err(err(line_of(src, key), &format!("system.{key}"), "unknown field"));
        }
    }
    if map.contains_key("p_bs") {
        return Err(err(line_of(src, "p_bs"), "system.p_bs", "the BS power is solved from the budget"));
    }
    map.insert("p_bs".into(), Value::from(1.0));
    let obj: serde_json::Map<String, Value> = map.into_iter().collect();
    let system: SystemParams = serde_json::from_value(Value::Object(obj)).map_err(|e| {
        let msg = e.to_string();
        let field = msg.split('`').nth(1).unwrap_or("").to_string();
        err(line_of(src, &field).or(line_of(src, "system")), &format!("system.{field}"), msg)
    })?;
    system.validate().map_err(|e| {
        let field = match &e {
            aris_secrecy::model::ModelError::Invalid { field, .. } => field.to_string(),
            _ => "system".into(),
        };
        err(line_of(src, &field), &format!("system.{field}"), e.to_string())
    })?;
    Ok(SystemParams { p_bs: 0.0, ..system })
}

fn resolve_budget(src: &str, raw: &BTreeMap<String, Value>) -> Result<BudgetSpec, ConfigError> {
    let map = resolve_units(src, "budget", raw)?;
    for key in map.keys() {
        if !["p_tot", "p_ris", "p_ris_fraction", "p_ps", "p_dc"].contains(&key.as_str()) {
            return Err(err(line_of(src, key), &format!("budget.{key}"), "unknown field"));
        }
    }
    let need = |key: &str| -> Result<f64, ConfigError> {
        number(src, "budget", &map, key)?.ok_or_else(|| err(line_of(src, "budget"), &format!("budget.{key}"), "missing"))
    };
    let p_tot = need("p_tot")?;
    let p_ps = need("p_ps")?;
    let p_dc = need("p_dc")?;
    let p_ris = match (number(src, "budget", &map, "p_ris")?, number(src, "budget", &map, "p_ris_fraction")?) {
        (Some(w), None) => RisPower::Absolute(w),
        (None, Some(f)) if (0.0..1.0).contains(&f) => RisPower::Fraction(f),
        (None, Some(_)) => return Err(err(line_of(src, "p_ris_fraction"), "budget.p_ris_fraction", "must lie in [0, 1)")),
        (None, None) => RisPower::Fraction(0.0),
        (Some(_), Some(_)) => {
            return Err(err(line_of(src, "p_ris_fraction"), "budget.p_ris", "give either p_ris or p_ris_fraction"))
        }
    };
    for (key, v) in [("p_tot", p_tot), ("p_ps", p_ps), ("p_dc", p_dc)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(err(line_of(src, key), &format!("budget.{key}"), "must be a finite non-negative power"));
        }
    }
    Ok(BudgetSpec { p_tot, p_ris, p_ps, p_dc })
}

fn resolve_sweep(src: &str, raw: RawSweep, system: &SystemParams) -> Result<SweepSpec, ConfigError> {
    let here = || line_of(src, "sweep");
    let values = match (raw.values, raw.start, raw.stop, raw.step) {
        (Some(v), None, None, None) => v,
        (None, Some(start), Some(stop), Some(step)) => {
            if step == 0.0 || !step.is_finite() || (stop - start) / step < 0.0 {
                return Err(err(line_of(src, "step"), "sweep.step", "step must move start towards stop"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..n).map(|i| start + i as f64 * step).collect()
        }
        _ => return Err(err(here(), "sweep", "give either `values` or all of `start`, `stop`, `step`")),
    };
    if values.is_empty() {
        return Err(err(here(), "sweep.values", "empty range"));
    }
    let up = values.windows(2).all(|w| w[1] > w[0]);
    let down = values.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) || values.iter().any(|v| !v.is_finite()) {
        return Err(err(here(), "sweep.values", "range must be strictly monotone and finite"));
    }
    match raw.variable {
        SweepVar::M => {
            let unit = match raw.fixed {
                Fixed::P => system.p,
                Fixed::Q => system.q,
            };
            for &m in &values {
                if m < 1.0 || m.fract() != 0.0 || (m as u32) % unit != 0 {
                    return Err(err(here(), "sweep.values", format!("M = {m} is not a positive multiple of {unit}")));
                }
            }
        }
        SweepVar::AlphaP if values.iter().any(|&a| !(a > 0.0 && a < 1.0)) => {
            return Err(err(here(), "sweep.values", "alpha_p must lie in (0, 1)"));
        }
        SweepVar::Kappa | SweepVar::R if values.iter().any(|&v| v < 0.0) => {
            return Err(err(here(), "sweep.values", "must be non-negative"));
        }
        _ => {}
    }
    Ok(SweepSpec { variable: raw.variable, values, fixed: raw.fixed })
}

impl Config {
    pub fn parse(src: &str) -> Result<Config, ConfigError> {
        let raw: RawConfig = serde_json::from_str(src).map_err(|e| {
            let msg = e.to_string();
            let field = msg.split('`').nth(1).unwrap_or("").to_string();
            ConfigError { line: Some(e.line()), field, message: msg }
        })?;
        let system = resolve_system(src, &raw.system)?;
        let budget = resolve_budget(src, &raw.budget)?;
        let sweep = raw.sweep.map(|s| resolve_sweep(src, s, &system)).transpose()?;
        let q = raw.quadrature;
        for (key, d) in [("d", q.d), ("s", q.s)] {
            if d == 0 || d > MAX_QUADRATURE_ORDER {
                return Err(err(line_of(src, "quadrature"), &format!("quadrature.{key}"), "order must lie in 1..=512"));
            }
        }
        if raw.scenarios.is_empty() {
            return Err(err(line_of(src, "scenarios"), "scenarios", "at least one scenario is required"));
        }
        if raw.engines.is_empty() {
            return Err(err(line_of(src, "engines"), "engines", "at least one engine is required"));
        }
        if raw.metrics.is_empty() {
            return Err(err(line_of(src, "metrics"), "metrics", "at least one metric is required"));
        }
        if raw.trials < MIN_TRIALS {
            return Err(err(line_of(src, "trials"), "trials", format!("at least {MIN_TRIALS} trials are required")));
        }
        Ok(Config {
            name: raw.name,
            notes: raw.notes,
            system,
            budget,
            quadrature: q,
            sweep,
            scenarios: raw.scenarios,
            engines: raw.engines,
            metrics: raw.metrics,
            trials: raw.trials,
            seed: raw.seed,
            coupling: raw.coupling,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
