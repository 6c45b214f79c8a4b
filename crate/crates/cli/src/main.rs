use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use aris_cli::config::{Config, ConfigError, Engine};
use aris_cli::output::{self, VERSION};
use aris_cli::run::{self, Row};
use aris_cli::validate::{self, Check};
use aris_secrecy::specfun::gauss_laguerre;
use clap::{Args, Parser, Subcommand};

const EXIT_CONFIG: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(name = "aris", version, about = "Secrecy outage evaluation for active-RIS NOMA downlinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form (and asymptotic) values at the configured operating point.
    Analytic(RunArgs),
    /// Monte Carlo estimates at the configured operating point.
    Simulate(RunArgs),
    /// The configured parameter sweep.
    Sweep(RunArgs),
    /// Closed forms against Monte Carlo; exits 3 when any comparison fails.
    Validate(RunArgs),
    /// Gauss–Laguerre nodes and weights.
    QuadratureDump {
        /// Quadrature order D.
        order: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of a (analytic), asy (asymptotic), m (montecarlo).
    #[arg(long)]
    engines: Option<String>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON mirror destination.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Monte Carlo worker threads; 0 picks the number of cores.
    #[arg(long, env = "ARIS_WORKERS", default_value_t = 0)]
    workers: usize,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(args: &RunArgs) -> Result<(Config, Option<Vec<Engine>>), Failure> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            Config::parse(&src).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => aris_cli::preset(name)?,
        (None, None) => unreachable!("clap requires one of --config and --preset"),
    };
    if let Some(t) = args.trials {
        if t < aris_secrecy::montecarlo::MIN_TRIALS {
            return Err(Failure::Config(format!("--trials must be at least {}", aris_secrecy::montecarlo::MIN_TRIALS)));
        }
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let engines = args.engines.as_deref().map(Engine::parse_list).transpose()?;
    Ok((cfg, engines))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

fn curves(name: &str, args: &RunArgs, default: &[Engine], single_point: bool) -> Result<u8, Failure> {
    let (mut cfg, engines) = load(args)?;
    if single_point {
        cfg.sweep = None;
    }
    let engines = engines.unwrap_or_else(|| default.iter().copied().filter(|e| cfg.engines.contains(e)).collect());
    let engines = if engines.is_empty() { default.to_vec() } else { engines };
    for w in run::warnings(&cfg) {
        eprintln!("warning: {w}");
    }
    let start = Instant::now();
    let rows: Vec<Row> = run::run(&cfg, &engines, args.workers).map_err(|e| Failure::Runtime(e.to_string()))?;
    eprintln!("{name}: {} rows in {:.2?}", rows.len(), start.elapsed());
    emit(args.out.as_deref(), &output::csv(name, &cfg, &rows))?;
    if let Some(j) = &args.json {
        write(j, &output::json(name, &cfg, &rows))?;
    }
    if !rows.is_empty() && rows.iter().all(Row::is_infeasible) {
        eprintln!("error: the budget is infeasible at every point");
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(0)
}

fn report_csv(cfg: &Config, checks: &[Check]) -> Vec<u8> {
    let mut out = format!("# {VERSION}\n# command: validate\n# config: {}\n", cfg.to_json()).into_bytes();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "mode", "x", "analytic", "montecarlo", "stderr", "tolerance", "pass", "note"])
        .expect("in-memory write");
    for c in checks {
        w.write_record([
            c.check.clone(),
            c.mode.as_str().to_string(),
            c.x.map(|x| format!("{x:e}")).unwrap_or_default(),
            format!("{:e}", c.analytic),
            format!("{:e}", c.montecarlo),
            format!("{:e}", c.stderr),
            format!("{:e}", c.tolerance),
            if c.pass { "pass" } else { "FAIL" }.to_string(),
            c.note.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    out.extend(w.into_inner().expect("in-memory flush"));
    out
}

fn validation(args: &RunArgs) -> Result<u8, Failure> {
    let (cfg, _) = load(args)?;
    let start = Instant::now();
    let checks = validate::validate(&cfg, args.workers).map_err(|e| Failure::Runtime(e.to_string()))?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    eprintln!("validate: {} checks, {failed} failed, {:.2?}", checks.len(), start.elapsed());
    emit(args.out.as_deref(), &report_csv(&cfg, &checks))?;
    if let Some(j) = &args.json {
        write(j, &output::json("validate", &cfg, &checks))?;
    }
    Ok(if failed > 0 { EXIT_VALIDATION } else { 0 })
}

fn quadrature_dump(order: usize, out: Option<&Path>, json: Option<&Path>) -> Result<u8, Failure> {
    let table = gauss_laguerre(order).map_err(|e| Failure::Config(e.to_string()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "node", "weight", "ln_weight"]).expect("in-memory write");
    for (i, ((z, g), lg)) in table.nodes().iter().zip(table.weights()).zip(table.ln_weights()).enumerate() {
        w.write_record([(i + 1).to_string(), format!("{z:e}"), format!("{g:e}"), format!("{lg:e}")])
            .expect("in-memory write");
    }
    emit(out, &w.into_inner().expect("in-memory flush"))?;
    if let Some(j) = json {
        let mut bytes = serde_json::to_vec_pretty(&table).map_err(|e| Failure::Runtime(e.to_string()))?;
        bytes.push(b'\n');
        write(j, &bytes)?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Analytic(a) => curves("analytic", a, &[Engine::Analytic, Engine::Asymptotic], true),
        Command::Simulate(a) => curves("simulate", a, &[Engine::Montecarlo], true),
        Command::Sweep(a) => curves("sweep", a, &[Engine::Analytic, Engine::Asymptotic, Engine::Montecarlo], false),
        Command::Validate(a) => validation(a),
        Command::QuadratureDump { order, json, out } => quadrature_dump(*order, out.as_deref(), json.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
