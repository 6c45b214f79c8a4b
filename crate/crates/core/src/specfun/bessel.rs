//! Integer-order modified Bessel function of the second kind.
//!
//! `K_0` and `K_1` come from their ascending series for `x <= 2` and from
//! Steed's continued fraction (Temme's CF2 form) above that. Higher orders use
//! the upward recurrence `K_{n+1} = K_{n-1} + (2n/x) K_n`, which is stable
//! because `K` is the dominant solution in the direction of increasing order.
//! The recurrence is run on ratios `K_n / K_{n-1}` and accumulated in log
//! space, so neither overflow at small `x` nor underflow at large `x` occurs
//! before the final exponentiation.

use std::f64::consts::PI;

use super::{SpecFunError, EULER_GAMMA};

const SERIES_LIMIT: f64 = 2.0;
const TINY_ARGUMENT: f64 = 1e-150;
const CF_EPS: f64 = 1e-17;
const CF_MAX_ITER: usize = 10_000;

/// `K_order(x)` together with its logarithm.
///
/// `value` underflows to exactly zero once `ln_value` drops below the
/// smallest representable exponent; use [`KValue::underflowed`] to tell
/// that case apart from a genuine zero (which `K` never takes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KValue {
    pub value: f64,
    pub ln_value: f64,
}

impl KValue {
    pub fn underflowed(&self) -> bool {
        self.value == 0.0 && self.ln_value.is_finite()
    }
}

fn check_argument(x: f64) -> Result<(), SpecFunError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(SpecFunError::Domain { function: "bessel_k", value: x })
    }
}

/// `K_0(x)` and `K_1(x)` from the ascending series, valid for `0 < x <= 2`.
fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();

    // K_0 = sum_k y^k/(k!)^2 (H_k - gamma - ln(x/2))
    // K_1 = 1/x + (x/2) sum_k y^k/(k!(k+1)!) (ln(x/2) - (psi(k+1) + psi(k+2))/2)
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut harmonic = 0.0;
    let mut k0 = -(EULER_GAMMA + ln_half);
    let mut s1 = ln_half - 0.5 * (1.0 - 2.0 * EULER_GAMMA);
    for k in 1..200 {
        let kf = k as f64;
        t0 *= y / (kf * kf);
        t1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let d0 = t0 * (harmonic - EULER_GAMMA - ln_half);
        let psi_pair = 2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        let d1 = t1 * (ln_half - 0.5 * psi_pair);
        k0 += d0;
        s1 += d1;
        if d0.abs() < 1e-18 * k0.abs() && d1.abs() < 1e-18 * s1.abs() {
            break;
        }
    }
    (k0, 1.0 / x + 0.5 * x * s1)
}

/// `e^x K_0(x)` and `e^x K_1(x)` from Steed's continued fraction, for `x > 2`.
fn k01_scaled_cf(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..CF_MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < CF_EPS {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `(ln K_0(x), ln K_1(x))`.
fn ln_k01(x: f64) -> (f64, f64) {
    if x < TINY_ARGUMENT {
        // the series terms beyond the leading ones are below f64 resolution
        ((-(0.5 * x).ln() - EULER_GAMMA).ln(), -x.ln())
    } else if x <= SERIES_LIMIT {
        let (k0, k1) = k01_series(x);
        (k0.ln(), k1.ln())
    } else {
        let (k0, k1) = k01_scaled_cf(x);
        (k0.ln() - x, k1.ln() - x)
    }
}

/// Natural logarithm of `K_order(x)`; finite for every finite `x > 0`.
pub fn ln_bessel_k(order: u32, x: f64) -> Result<f64, SpecFunError> {
    check_argument(x)?;
    let (ln0, ln1) = ln_k01(x);
    match order {
        0 => Ok(ln0),
        1 => Ok(ln1),
        _ => {
            let mut ratio = (ln1 - ln0).exp();
            let mut acc = ln1;
            for n in 1..order {
                ratio = 1.0 / ratio + 2.0 * n as f64 / x;
                acc += ratio.ln();
            }
            Ok(acc)
        }
    }
}

pub fn bessel_k_eval(order: u32, x: f64) -> Result<KValue, SpecFunError> {
    let ln_value = ln_bessel_k(order, x)?;
    Ok(KValue { value: ln_value.exp(), ln_value })
}

/// `K_order(x)`. Returns `0.0` once the true value falls below the f64 range.
pub fn bessel_k(order: u32, x: f64) -> Result<f64, SpecFunError> {
    bessel_k_eval(order, x).map(|k| k.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_argument_leading_term() {
        let k = bessel_k(1, 1e-8).unwrap();
        assert!(rel(k, 1e8) < 1e-6);
    }

    #[test]
    fn k1_at_two() {
        // mpmath: besselk(1, 2)
        assert!(rel(bessel_k(1, 2.0).unwrap(), 0.139_865_881_816_522_43) < 1e-14);
    }

    #[test]
    fn branch_seam_is_continuous() {
        for order in [0, 1, 5] {
            let below = bessel_k(order, 2.0).unwrap();
            let above = bessel_k(order, 2.0 + 1e-12).unwrap();
            assert!(rel(below, above) < 1e-11, "order {order}: {below} vs {above}");
        }
    }

    #[test]
    fn domain_errors() {
        for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(bessel_k(2, x), Err(SpecFunError::Domain { .. })));
        }
    }

    #[test]
    fn far_tail_underflows_without_error() {
        let k = bessel_k_eval(3, 900.0).unwrap();
        assert!(k.underflowed());
        assert!(k.ln_value < -890.0 && k.ln_value > -910.0);
        assert!(!bessel_k_eval(3, 600.0).unwrap().underflowed());
    }

    #[test]
    fn tiny_argument_path_agrees_with_series() {
        let a = ln_bessel_k(2, 0.999e-150).unwrap();
        let b = ln_bessel_k(2, 1.001e-150).unwrap();
        assert!((a - b).abs() < 5e-3);
    }
}
