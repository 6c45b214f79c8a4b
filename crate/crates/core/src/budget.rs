//! Equal-total-power bookkeeping between active and passive surfaces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RisMode {
    Aris,
    Pris,
}

impl RisMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RisMode::Aris => "aris",
            RisMode::Pris => "pris",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    pub p_tot: f64,
    /// Amplifier budget; ignored in passive mode.
    pub p_ris: f64,
    pub p_ps: f64,
    pub p_dc: f64,
    pub mode: RisMode,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BudgetError {
    #[error("budget infeasible: BS power would be {remaining:e} W (short by {shortfall:e} W)")]
    Infeasible { remaining: f64, shortfall: f64 },
    #[error("element counts must satisfy M = P*Q > 0 (M={m}, P={p}, Q={q})")]
    Elements { m: u32, p: u32, q: u32 },
}

/// BS transmit power left over once the surface has taken its share.
pub fn solve_bs_power(budget: &PowerBudget, m: u32, p: u32, q: u32) -> Result<f64, BudgetError> {
    if q == 0 || p.checked_mul(q) != Some(m) {
        return Err(BudgetError::Elements { m, p, q });
    }
    let remaining = match budget.mode {
        RisMode::Aris => budget.p_tot - budget.p_ris - q as f64 * (budget.p_ps + budget.p_dc),
        RisMode::Pris => budget.p_tot - m as f64 * budget.p_ps,
    };
    if remaining > 0.0 {
        Ok(remaining)
    } else {
        Err(BudgetError::Infeasible { remaining, shortfall: -remaining })
    }
}
