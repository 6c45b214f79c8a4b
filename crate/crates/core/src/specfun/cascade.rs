//! Distribution of the normalized cascaded gain `z`.
//!
//! For a `q`-element surface with unit-scale hops, `z` has survival function
//! `S(z) = (2/Γ(q)) z^{q/2} K_q(2 sqrt z)` and density
//! `g(z) = (2/Γ(q)) z^{(q-1)/2} K_{q-1}(2 sqrt z)`.
//!
//! `1 - S` loses every significant digit when `S` is close to one, which is
//! precisely the high-SNR regime. Below [`SERIES_SWITCH`] the CDF is summed
//! directly from the ascending series of `K_q` with the leading `1` removed:
//!
//! ```text
//! F(z) = -Σ_{k=1}^{q-1} (q-k-1)!/((q-1)! k!) (-z)^k
//!        - (-1)^q z^q/((q-1)! q!) Σ_j [ψ(j+1) + ψ(q+j+1) - ln z] z^j q!/(j! (q+j)!)
//! ```

use super::{ln_bessel_k, ln_gamma, EULER_GAMMA};

pub const SERIES_SWITCH: f64 = 0.1;

fn lgamma(n: u32) -> f64 {
    ln_gamma(n as u64).expect("order is at least one")
}

fn cdf_series(q: u32, z: f64) -> f64 {
    let qf = q as f64;
    let mut sum = 0.0;
    if q >= 2 {
        let mut c = 1.0 / (qf - 1.0);
        let mut zk = -z;
        for k in 1..q {
            let term = c * zk;
            sum -= term;
            if term == 0.0 {
                break;
            }
            let kf = k as f64;
            c /= (kf + 1.0) * (qf - kf - 1.0);
            zk *= -z;
        }
    }

    let ln_z = z.ln();
    let ln_pref = qf * ln_z - lgamma(q) - lgamma(q + 1);
    if ln_pref < -745.0 {
        return sum;
    }
    let mut h_j = 0.0;
    let mut h_qj: f64 = (1..=q).map(|i| 1.0 / i as f64).sum();
    let mut t = 1.0;
    let mut tail = 0.0;
    for j in 0..500u32 {
        let jf = j as f64;
        if j > 0 {
            t *= z / (jf * (qf + jf));
            h_j += 1.0 / jf;
            h_qj += 1.0 / (qf + jf);
        }
        let d = t * (h_j + h_qj - 2.0 * EULER_GAMMA - ln_z);
        tail += d;
        if d.abs() < 1e-18 * tail.abs() {
            break;
        }
    }
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    sum - sign * ln_pref.exp() * tail
}

/// `ln S(z)`; `0` at `z <= 0`, `-inf` at `z = inf`.
///
/// # Panics
///
/// If `q == 0`.
pub fn ln_cascade_sf(q: u32, z: f64) -> f64 {
    assert!(q >= 1, "surface size must be at least one");
    if z.is_nan() {
        return f64::NAN;
    }
    if z <= 0.0 {
        return 0.0;
    }
    if z == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    if z < SERIES_SWITCH {
        return (-cdf_series(q, z)).ln_1p();
    }
    let qf = q as f64;
    let k = ln_bessel_k(q, 2.0 * z.sqrt()).expect("argument is positive and finite");
    std::f64::consts::LN_2 - lgamma(q) + 0.5 * qf * z.ln() + k
}

/// `P(z > x)` for the normalized cascaded gain.
pub fn cascade_sf(q: u32, z: f64) -> f64 {
    assert!(q >= 1, "surface size must be at least one");
    if z > 0.0 && z < SERIES_SWITCH {
        return 1.0 - cdf_series(q, z);
    }
    ln_cascade_sf(q, z).exp().min(1.0)
}

/// `P(z <= x)` for the normalized cascaded gain.
pub fn cascade_cdf(q: u32, z: f64) -> f64 {
    assert!(q >= 1, "surface size must be at least one");
    if z.is_nan() {
        return f64::NAN;
    }
    if z <= 0.0 {
        return 0.0;
    }
    if z < SERIES_SWITCH {
        return cdf_series(q, z).clamp(0.0, 1.0);
    }
    (1.0 - ln_cascade_sf(q, z).exp()).clamp(0.0, 1.0)
}

/// Density of the normalized cascaded gain.
pub fn cascade_pdf(q: u32, z: f64) -> f64 {
    assert!(q >= 1, "surface size must be at least one");
    if z.is_nan() {
        return f64::NAN;
    }
    if z < 0.0 || z == f64::INFINITY {
        return 0.0;
    }
    if z == 0.0 {
        return if q == 1 { f64::INFINITY } else { 1.0 / (q as f64 - 1.0) };
    }
    let qf = q as f64;
    let k = ln_bessel_k(q - 1, 2.0 * z.sqrt()).expect("argument is positive and finite");
    (std::f64::consts::LN_2 - lgamma(q) + 0.5 * (qf - 1.0) * z.ln() + k).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_meets_bessel_route() {
        for q in [1, 2, 3, 7, 20, 64] {
            let z = SERIES_SWITCH;
            let series = cdf_series(q, z);
            let bessel = 1.0 - ln_cascade_sf(q, z * (1.0 + 1e-15)).exp();
            assert!(((series - bessel) / series).abs() < 1e-10, "q={q}: {series} vs {bessel}");
        }
    }

    #[test]
    fn leading_order_behaviour() {
        let z = 1e-9;
        assert!((cascade_cdf(5, z) / (z / 4.0) - 1.0).abs() < 1e-8);
        let f1 = cascade_cdf(1, z);
        assert!((f1 / (-z * z.ln()) - 1.0).abs() < 0.1);
    }

    #[test]
    fn edges() {
        assert_eq!(cascade_cdf(3, 0.0), 0.0);
        assert_eq!(cascade_cdf(3, -2.0), 0.0);
        assert_eq!(cascade_cdf(3, f64::INFINITY), 1.0);
        assert_eq!(cascade_sf(3, 0.0), 1.0);
        assert_eq!(cascade_pdf(3, 0.0), 0.5);
        assert!(cascade_pdf(1, 0.0).is_infinite());
    }
}
