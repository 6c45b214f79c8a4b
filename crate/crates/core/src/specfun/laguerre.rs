use nalgebra::DMatrix;
use serde::Serialize;

use super::SpecFunError;

pub const MAX_QUADRATURE_ORDER: usize = 512;

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;
const RESCALE: f64 = 1e150;

/// Gauss–Laguerre rule for `∫_0^∞ e^{-x} f(x) dx`.
///
/// Weights of high-order rules fall below the f64 range for the largest nodes
/// and are stored as `0.0`; `ln_weights` stays finite for every node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureTable {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ln_weights: Vec<f64>,
}

impl QuadratureTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn ln_weights(&self) -> &[f64] {
        &self.ln_weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| if w == 0.0 { 0.0 } else { w * f(x) }).sum()
    }
}

/// `(L_n(x), L_{n-1}(x), ln scale)`; the true values are the first two times
/// `exp(ln scale)`.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    let mut ln_scale = 0.0;
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    (cur, prev, ln_scale)
}

fn initial_guesses(n: usize) -> Vec<f64> {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (2 * i + 1) as f64
        } else if i + 1 == j || j + 1 == i {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    roots.sort_by(f64::total_cmp);
    roots
}

fn polish(n: usize, guess: f64) -> Option<f64> {
    let mut x = guess;
    for _ in 0..NEWTON_MAX_ITER {
        let (ln, lnm1, _) = laguerre_pair(n, x);
        // L_n' = n (L_n - L_{n-1}) / x
        let step = x * ln / (n as f64 * (ln - lnm1));
        x -= step;
        if !x.is_finite() || x <= 0.0 {
            return None;
        }
        if step.abs() <= NEWTON_TOL * x {
            return Some(x);
        }
    }
    Some(x)
}

pub fn gauss_laguerre(order: usize) -> Result<QuadratureTable, SpecFunError> {
    if order == 0 || order > MAX_QUADRATURE_ORDER {
        return Err(SpecFunError::QuadratureOrder(order));
    }
    let fail = SpecFunError::RootFinding { order };
    let n = order;
    let mut nodes = Vec::with_capacity(n);
    for guess in initial_guesses(n) {
        nodes.push(polish(n, guess).ok_or_else(|| fail.clone())?);
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(fail);
    }
    let ln_n = (n as f64).ln();
    let ln_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (_, lnm1, ln_scale) = laguerre_pair(n, x);
            x.ln() - 2.0 * ln_n - 2.0 * (lnm1.abs().ln() + ln_scale)
        })
        .collect();
    let weights = ln_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadratureTable { order, nodes, weights, ln_weights })
}
