//! Scenario runner for `aris-secrecy`: JSON configurations, figure presets,
//! parameter sweeps and analytic-versus-simulation validation reports.

pub mod config;
pub mod output;
pub mod run;
pub mod validate;

use config::{Config, ConfigError};

/// Shipped configurations, by name.
pub const PRESETS: [(&str, &str); 8] = [
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
    ("fig6", include_str!("../presets/fig6.json")),
    ("fig7", include_str!("../presets/fig7.json")),
    ("fig8", include_str!("../presets/fig8.json")),
    ("fig9", include_str!("../presets/fig9.json")),
    ("fig10", include_str!("../presets/fig10.json")),
];

pub fn preset(name: &str) -> Result<Config, ConfigError> {
    let (_, src) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| ConfigError {
        line: None,
        field: "preset".into(),
        message: format!(
            "unknown preset `{name}` (available: {})",
            PRESETS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        ),
    })?;
    Config::parse(src)
}
