//! Special functions against high-precision reference values.
//!
//! The CSV fixtures were produced by `data/gen_oracles.py` (mpmath, 60 digits).

use aris_secrecy::specfun::{
    bessel_k, cascade_cdf, cascade_pdf, cascade_sf, gauss_laguerre, ln_bessel_k, ln_gamma,
};

fn rows(name: &str) -> Vec<Vec<f64>> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|f| f.trim().parse::<f64>().unwrap()).collect())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

#[test]
fn bessel_k_matches_reference() {
    let mut worst = 0.0f64;
    for r in rows("bessel_k_oracle.csv") {
        let (order, x, k) = (r[0] as u32, r[1], r[2]);
        if k < 1e-300 {
            // compare in log space where the f64 value would be subnormal
            let lk = ln_bessel_k(order, x).unwrap();
            assert!((lk - k.ln()).abs() < 1e-9 * k.ln().abs(), "K_{order}({x})");
            continue;
        }
        let got = bessel_k(order, x).unwrap();
        let e = rel(got, k);
        worst = worst.max(e);
        assert!(e < 1e-10, "K_{order}({x}) = {got}, want {k} (rel {e:.2e})");
    }
    eprintln!("bessel_k worst relative error {worst:.2e}");
}

#[test]
fn ln_gamma_matches_reference() {
    for r in rows("ln_gamma_oracle.csv") {
        let (n, v) = (r[0] as u64, r[1]);
        let got = ln_gamma(n).unwrap();
        assert!(rel(got, v) < 1e-12 || (got - v).abs() < 1e-15, "ln_gamma({n})");
    }
}

#[test]
fn cascade_distribution_matches_reference() {
    for r in rows("cascade_cdf_oracle.csv") {
        let (q, z, cdf, sf, pdf) = (r[0] as u32, r[1], r[2], r[3], r[4]);
        let c = cascade_cdf(q, z);
        let s = cascade_sf(q, z);
        let p = cascade_pdf(q, z);
        if cdf > 1e-300 {
            assert!(rel(c, cdf) < 1e-9 || (c - cdf).abs() < 1e-15, "F_{q}({z}) = {c}, want {cdf}");
        }
        if sf > 1e-300 {
            assert!(rel(s, sf) < 1e-9 || (s - sf).abs() < 1e-15, "S_{q}({z}) = {s}, want {sf}");
        }
        if pdf > 1e-300 {
            assert!(rel(p, pdf) < 1e-9, "g_{q}({z}) = {p}, want {pdf}");
        }
    }
}

#[test]
fn closure_at_small_argument() {
    for q in [1u32, 2, 5, 20, 30] {
        let z: f64 = 1e-12;
        let v = 2.0 / ln_gamma(q as u64).unwrap().exp()
            * z.powf(q as f64 / 2.0)
            * bessel_k(q, 2.0 * z.sqrt()).unwrap();
        assert!(v <= 1.0 + 1e-12 && v >= 1.0 - 1e-4, "q={q}: {v}");
    }
}

#[test]
fn laguerre_rules_are_exact_for_low_degree() {
    for d in [2usize, 16, 64] {
        let t = gauss_laguerre(d).unwrap();
        for k in 0..(2 * d) {
            // ∫ e^{-x} x^k dx = k!; compare x^k / k! against 1 in log form
            let lk = ln_gamma(k as u64 + 1).unwrap();
            let sum: f64 = t
                .nodes()
                .iter()
                .zip(t.ln_weights())
                .map(|(&x, &lw)| (lw + k as f64 * x.ln() - lk).exp())
                .sum();
            assert!((sum - 1.0).abs() < 1e-10, "D={d}, k={k}: {sum}");
        }
    }
}

#[test]
fn laguerre_mass_and_ordering_up_to_max_order() {
    for d in [1usize, 3, 100, 256, 512] {
        let t = gauss_laguerre(d).unwrap();
        assert_eq!(t.nodes().len(), d);
        assert!(t.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(t.nodes()[0] > 0.0);
        assert!(t.ln_weights().iter().all(|w| w.is_finite()));
        let mass: f64 = t.weights().iter().sum();
        assert!((mass - 1.0).abs() < 1e-10, "D={d}: mass {mass}");
    }
}
