//! First-principles Monte Carlo engine.
//!
//! Every trial regenerates its channels from a dedicated generator seeded by
//! `(seed, trial index)`, and trials are tallied in integer counters, so a
//! run is bit-for-bit reproducible whatever the number of workers.
//!
//! Draws are sampled at unit scale and multiplied by the mean gains of each
//! job. Jobs with the same surface size `Q` therefore share one stream of
//! channel realizations (common random numbers), which both saves time and
//! makes comparisons across powers, amplification factors or SIC quality
//! paired rather than independent.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, SeedableRng};
use rand_distr::{Exp1, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::SopEstimate;
use crate::model::{
    sinr_eve_f, sinr_eve_n, sinr_internal_f_to_n, sinr_user_f, sinr_user_n, ChannelDraw, DerivedConstants,
    ModelError, Scenario, Sic, SystemParams,
};

pub const MIN_TRIALS: u64 = 10_000;
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("at least {MIN_TRIALS} trials are required, got {0}")]
    TooFewTrials(u64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// How the eavesdropper's cascade relates to the legitimate ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    /// Every receiver sees its own BS→surface realization.
    #[default]
    Independent,
    /// All receivers share the physical BS→surface channel.
    SharedHbr,
}

impl Coupling {
    pub fn as_str(self) -> &'static str {
        match self {
            Coupling::Independent => "independent",
            Coupling::SharedHbr => "shared-hbr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub coupling: Coupling,
    /// `0` lets the pool pick.
    pub workers: usize,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> McConfig {
        McConfig { trials, seed, coupling: Coupling::Independent, workers: 0 }
    }
}

/// A [`ChannelDraw`] at unit mean gains.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormalizedDraw {
    pub cascade_n: f64,
    pub cascade_f: f64,
    pub cascade_e: f64,
    pub norm_n: f64,
    pub norm_f: f64,
    pub norm_e: f64,
    pub ip_user: f64,
    pub ip_eve: f64,
}

impl NormalizedDraw {
    pub fn scale(&self, params: &SystemParams, d: &DerivedConstants) -> ChannelDraw {
        ChannelDraw {
            cascaded_gain_n: self.cascade_n * d.omega_br * d.omega_rn,
            cascaded_gain_f: self.cascade_f * d.omega_br * d.omega_rf,
            cascaded_gain_e: self.cascade_e * d.omega_br * d.omega_re,
            norm_n: self.norm_n * d.omega_rn,
            norm_f: self.norm_f * d.omega_rf,
            norm_e: self.norm_e * d.omega_re,
            ip_user: self.ip_user * params.omega_ipu,
            ip_eve: self.ip_eve * params.omega_ipe,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one trial; a pure function of `(seed, trial)`.
pub fn trial_rng(seed: u64, trial: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(splitmix64(seed) ^ trial)
}

/// `CN(0, 1)` sample.
fn cn<R: Rng>(rng: &mut R) -> (f64, f64) {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    (re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

#[derive(Default)]
struct Cascade {
    re: f64,
    im: f64,
    norm: f64,
}

impl Cascade {
    /// Adds `conj(h_r) h_br` and `|h_r|^2`.
    fn push(&mut self, hr: (f64, f64), hbr: (f64, f64)) {
        self.re += hr.0 * hbr.0 + hr.1 * hbr.1;
        self.im += hr.0 * hbr.1 - hr.1 * hbr.0;
        self.norm += hr.0 * hr.0 + hr.1 * hr.1;
    }

    fn gain(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

pub fn sample_normalized<R: Rng>(rng: &mut R, q: u32, coupling: Coupling) -> NormalizedDraw {
    let (mut n, mut f, mut e) = (Cascade::default(), Cascade::default(), Cascade::default());
    for _ in 0..q {
        match coupling {
            Coupling::SharedHbr => {
                let hbr = cn(rng);
                n.push(cn(rng), hbr);
                f.push(cn(rng), hbr);
                e.push(cn(rng), hbr);
            }
            Coupling::Independent => {
                for c in [&mut n, &mut f, &mut e] {
                    let hbr = cn(rng);
                    c.push(cn(rng), hbr);
                }
            }
        }
    }
    NormalizedDraw {
        cascade_n: n.gain(),
        cascade_f: f.gain(),
        cascade_e: e.gain(),
        norm_n: n.norm,
        norm_f: f.norm,
        norm_e: e.norm,
        ip_user: rng.sample(Exp1),
        ip_eve: rng.sample(Exp1),
    }
}

/// One physical realization for `params`.
pub fn sample_draw<R: Rng>(rng: &mut R, params: &SystemParams, coupling: Coupling) -> Result<ChannelDraw, McError> {
    let d = DerivedConstants::derive(params)?;
    Ok(sample_normalized(rng, params.q, coupling).scale(params, &d))
}

/// The draw of trial `trial` under `seed`, regenerated from scratch.
pub fn draw_for_trial(params: &SystemParams, seed: u64, trial: u64, coupling: Coupling) -> Result<ChannelDraw, McError> {
    sample_draw(&mut trial_rng(seed, trial), params, coupling)
}

#[derive(Debug, Clone)]
pub struct McJob {
    pub params: SystemParams,
    pub scenario: Scenario,
    pub sic: Sic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McResult {
    pub sop: SopEstimate,
    /// Secrecy throughput in BPCU.
    pub throughput: f64,
    pub throughput_stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

struct Prepared {
    params: SystemParams,
    derived: DerivedConstants,
    scenario: Scenario,
    gain_n: f64,
    gain_f: f64,
}

impl Prepared {
    fn new(job: &McJob) -> Result<Prepared, McError> {
        let params = job.params.with_sic(job.sic);
        let derived = DerivedConstants::derive(&params)?;
        Ok(Prepared {
            gain_n: params.r_n.exp2(),
            gain_f: params.r_f.exp2(),
            params,
            derived,
            scenario: job.scenario,
        })
    }

    /// `(user n in outage, user f in outage)` for the scenario's event(s).
    fn outcome(&self, draw: &NormalizedDraw) -> (bool, bool) {
        let p = &self.params;
        let d = draw.scale(p, &self.derived);
        let n_out = |eve: f64| sinr_user_n(&d, p) < self.gain_n * (1.0 + eve) - 1.0;
        let f_out = || sinr_user_f(&d, p) < self.gain_f * (1.0 + sinr_eve_f(&d, p)) - 1.0;
        match self.scenario {
            Scenario::ExternalN => (n_out(sinr_eve_n(&d, p)), false),
            Scenario::ExternalF => (false, f_out()),
            Scenario::Internal => (n_out(sinr_internal_f_to_n(&d, p)), false),
            Scenario::System => (n_out(sinr_eve_n(&d, p)), f_out()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    n: u64,
    f: u64,
    any: u64,
}

fn add_counts(mut a: Vec<Counts>, b: Vec<Counts>) -> Vec<Counts> {
    for (x, y) in a.iter_mut().zip(b) {
        x.n += y.n;
        x.f += y.f;
        x.any += y.any;
    }
    a
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, McError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| McError::Pool(e.to_string()))
}

/// Runs `visit` on every trial's normalized draw, folding per-chunk
/// accumulators with `merge`. Chunks are fixed-size and merged with
/// associative integer arithmetic, so the result ignores scheduling.
fn for_each_trial<A, V, M>(q: u32, cfg: &McConfig, init: impl Fn() -> A + Sync, visit: V, merge: M) -> Result<A, McError>
where
    A: Send,
    V: Fn(&mut A, &NormalizedDraw) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    let chunks = cfg.trials.div_ceil(CHUNK);
    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                for t in c * CHUNK..((c + 1) * CHUNK).min(cfg.trials) {
                    let draw = sample_normalized(&mut trial_rng(cfg.seed, t), q, cfg.coupling);
                    visit(&mut acc, &draw);
                }
                acc
            })
            .reduce(&init, &merge)
    };
    Ok(pool(cfg.workers)?.install(run))
}

fn finish(job: &Prepared, c: Counts, cfg: &McConfig) -> McResult {
    let trials = cfg.trials;
    let nf = trials as f64;
    let (r_n, r_f) = (job.params.r_n, job.params.r_f);
    let sop = SopEstimate::monte_carlo(c.any, trials);
    let se = sop.stderr.unwrap_or(0.0);
    let (throughput, throughput_stderr) = match job.scenario {
        Scenario::ExternalN | Scenario::Internal => ((1.0 - sop.value) * r_n, se * r_n),
        Scenario::ExternalF => ((1.0 - sop.value) * r_f, se * r_f),
        Scenario::System => {
            let ok_n = (trials - c.n) as f64 / nf;
            let ok_f = (trials - c.f) as f64 / nf;
            let ok_both = (trials - c.any) as f64 / nf;
            let mean = r_n * ok_n + r_f * ok_f;
            let second = r_n * r_n * ok_n + r_f * r_f * ok_f + 2.0 * r_n * r_f * ok_both;
            (mean, ((second - mean * mean).max(0.0) / nf).sqrt())
        }
    };
    McResult { sop, throughput, throughput_stderr, trials, seed: cfg.seed }
}

/// Estimates every job from one shared stream of draws per surface size.
pub fn estimate_batch(jobs: &[McJob], cfg: &McConfig) -> Result<Vec<McResult>, McError> {
    if cfg.trials < MIN_TRIALS {
        return Err(McError::TooFewTrials(cfg.trials));
    }
    let prepared = jobs.iter().map(Prepared::new).collect::<Result<Vec<_>, _>>()?;
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, p) in prepared.iter().enumerate() {
        groups.entry(p.params.q).or_default().push(i);
    }
    let mut out: Vec<Option<McResult>> = vec![None; jobs.len()];
    for (q, idx) in groups {
        let members: Vec<&Prepared> = idx.iter().map(|&i| &prepared[i]).collect();
        let counts = for_each_trial(
            q,
            cfg,
            || vec![Counts::default(); members.len()],
            |acc, draw| {
                for (c, job) in acc.iter_mut().zip(&members) {
                    let (n, f) = job.outcome(draw);
                    c.n += n as u64;
                    c.f += f as u64;
                    c.any += (n || f) as u64;
                }
            },
            add_counts,
        )?;
        for (k, &i) in idx.iter().enumerate() {
            out[i] = Some(finish(&prepared[i], counts[k], cfg));
        }
    }
    Ok(out.into_iter().map(|r| r.expect("every job belongs to a group")).collect())
}

pub fn estimate_sop_with(params: &SystemParams, scenario: Scenario, sic: Sic, cfg: &McConfig) -> Result<McResult, McError> {
    let job = McJob { params: params.clone(), scenario, sic };
    Ok(estimate_batch(std::slice::from_ref(&job), cfg)?[0])
}

/// SOP with independent cascades and the default worker pool.
pub fn estimate_sop(
    params: &SystemParams,
    scenario: Scenario,
    sic: Sic,
    trials: u64,
    seed: u64,
) -> Result<McResult, McError> {
    estimate_sop_with(params, scenario, sic, &McConfig::new(trials, seed))
}

/// Same run as [`estimate_sop`]; the throughput fields carry the answer.
pub fn estimate_throughput(
    params: &SystemParams,
    scenario: Scenario,
    sic: Sic,
    trials: u64,
    seed: u64,
) -> Result<McResult, McError> {
    estimate_sop(params, scenario, sic, trials, seed)
}

/// Which SINR to sample for distribution checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SinrKind {
    UserN,
    UserF,
    EveN,
    EveF,
    InternalFToN,
}

pub fn sinr_of(kind: SinrKind, draw: &ChannelDraw, params: &SystemParams) -> f64 {
    match kind {
        SinrKind::UserN => sinr_user_n(draw, params),
        SinrKind::UserF => sinr_user_f(draw, params),
        SinrKind::EveN => sinr_eve_n(draw, params),
        SinrKind::EveF => sinr_eve_f(draw, params),
        SinrKind::InternalFToN => sinr_internal_f_to_n(draw, params),
    }
}

/// One distribution to tally in a shared pass over the draws.
#[derive(Debug, Clone, Copy)]
pub struct SinrTally<'a> {
    pub params: &'a SystemParams,
    pub kind: SinrKind,
    pub edges: &'a [f64],
}

/// Number of trials whose SINR is `<= edge`, for each (ascending) edge.
pub fn sinr_counts(params: &SystemParams, kind: SinrKind, edges: &[f64], cfg: &McConfig) -> Result<Vec<u64>, McError> {
    Ok(sinr_counts_many(&[SinrTally { params, kind, edges }], cfg)?.remove(0))
}

/// [`sinr_counts`] for several distributions from one stream of draws.
/// All tallies must share the surface size `Q`.
pub fn sinr_counts_many(tallies: &[SinrTally<'_>], cfg: &McConfig) -> Result<Vec<Vec<u64>>, McError> {
    if cfg.trials < MIN_TRIALS {
        return Err(McError::TooFewTrials(cfg.trials));
    }
    let Some(first) = tallies.first() else { return Ok(Vec::new()) };
    let q = first.params.q;
    if let Some(t) = tallies.iter().find(|t| t.params.q != q) {
        return Err(McError::Model(ModelError::Invalid {
            field: "q",
            reason: format!("tallies mix surface sizes {q} and {}", t.params.q),
        }));
    }
    let derived = tallies.iter().map(|t| DerivedConstants::derive(t.params)).collect::<Result<Vec<_>, _>>()?;
    let sorted: Vec<Vec<f64>> = tallies
        .iter()
        .map(|t| {
            let mut e = t.edges.to_vec();
            e.sort_by(f64::total_cmp);
            e
        })
        .collect();
    // histograms over the sorted edges, cumulated afterwards
    let bins = for_each_trial(
        q,
        cfg,
        || sorted.iter().map(|e| vec![0u64; e.len() + 1]).collect::<Vec<_>>(),
        |acc, draw| {
            for (((h, t), d), e) in acc.iter_mut().zip(tallies).zip(&derived).zip(&sorted) {
                let s = sinr_of(t.kind, &draw.scale(t.params, d), t.params);
                h[e.partition_point(|&x| x < s)] += 1;
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.iter_mut().zip(y).for_each(|(u, v)| *u += v);
            }
            a
        },
    )?;
    Ok(tallies
        .iter()
        .zip(sorted)
        .zip(bins)
        .map(|((t, sorted), bins)| {
            let mut cum = 0;
            let cumulative: Vec<u64> = bins[..sorted.len()].iter().map(|b| { cum += b; cum }).collect();
            t.edges.iter().map(|e| cumulative[sorted.partition_point(|s| s < e)]).collect()
        })
        .collect())
}

/// Empirical CDF at each grid point.
pub fn empirical_cdf(params: &SystemParams, kind: SinrKind, grid: &[f64], cfg: &McConfig) -> Result<Vec<f64>, McError> {
    let counts = sinr_counts(params, kind, grid, cfg)?;
    Ok(counts.iter().map(|&c| c as f64 / cfg.trials as f64).collect())
}

/// Histogram density on `[x(1-w), x(1+w)]` around each point.
pub fn histogram_density(
    params: &SystemParams,
    kind: SinrKind,
    points: &[f64],
    rel_half_width: f64,
    cfg: &McConfig,
) -> Result<Vec<f64>, McError> {
    let edges: Vec<f64> = points
        .iter()
        .flat_map(|&x| [x * (1.0 - rel_half_width), x * (1.0 + rel_half_width)])
        .collect();
    let counts = sinr_counts(params, kind, &edges, cfg)?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, &x)| (counts[2 * i + 1] - counts[2 * i]) as f64 / (cfg.trials as f64 * 2.0 * rel_half_width * x))
        .collect())
}
