//! CSV and JSON rendering of curve rows.

use serde::Serialize;

use crate::config::Config;
use crate::run::Row;

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub const COLUMNS: [&str; 12] =
    ["sweep_var", "value", "scenario", "sic", "mode", "engine", "metric", "estimate", "stderr", "trials", "seed", "flags"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn sci(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// The fixed-schema CSV, preceded by `#` lines carrying the code version,
/// the command and the resolved configuration.
pub fn csv(command: &str, cfg: &Config, rows: &[Row]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(format!("# {VERSION}\n# command: {command}\n# config: {}\n", cfg.to_json()).as_bytes());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.sweep_var.to_string(),
            r.value.to_string(),
            r.scenario.as_str().to_string(),
            r.sic.as_str().to_string(),
            r.mode.as_str().to_string(),
            r.engine.as_str().to_string(),
            r.metric.as_str().to_string(),
            sci(r.estimate),
            sci(r.stderr),
            opt(r.trials),
            opt(r.seed),
            r.flags.join(";"),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

#[derive(Serialize)]
struct Mirror<'a, T: Serialize> {
    version: &'static str,
    command: &'a str,
    config: &'a Config,
    rows: &'a [T],
}

pub fn json<T: Serialize>(command: &str, cfg: &Config, rows: &[T]) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(&Mirror { version: VERSION, command, config: cfg, rows }).expect("rows serialize");
    v.push(b'\n');
    v
}
