use std::f64::consts::PI;
use std::sync::OnceLock;

use super::SpecFunError;

const TABLE_LEN: usize = 172;

fn table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // ln((n-1)!) from the running factorial; 170! is the last finite one
        let mut out = [0.0; TABLE_LEN];
        let mut factorial = 1.0_f64;
        for n in 2..TABLE_LEN {
            factorial *= (n - 1) as f64;
            out[n] = factorial.ln();
        }
        out
    })
}

/// `ln Γ(n) = ln((n-1)!)` for integer `n >= 1`.
pub fn ln_gamma(n: u64) -> Result<f64, SpecFunError> {
    if n == 0 {
        return Err(SpecFunError::Domain { function: "ln_gamma", value: 0.0 });
    }
    if (n as usize) < TABLE_LEN {
        return Ok(table()[n as usize]);
    }
    // Stirling series; the first omitted term is below 1e-22 for n >= 172
    let x = n as f64;
    let x2 = x * x;
    let series = (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x;
    Ok((x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series)
}
