use aris_secrecy::specfun::{bessel_k, cascade_cdf, cascade_pdf, cascade_sf, gauss_laguerre};
use proptest::prelude::*;

proptest! {
    #[test]
    fn bessel_k_decreases_in_x(order in 0u32..=30, x in 1e-6f64..600.0, step in 1e-3f64..0.5) {
        let a = bessel_k(order, x).unwrap();
        let b = bessel_k(order, x * (1.0 + step)).unwrap();
        prop_assert!(b < a || (a == 0.0 && b == 0.0));
    }

    #[test]
    fn bessel_k_recurrence(order in 1u32..=29, x in 1e-3f64..300.0) {
        let km = bessel_k(order - 1, x).unwrap();
        let k = bessel_k(order, x).unwrap();
        let kp = bessel_k(order + 1, x).unwrap();
        prop_assume!(kp > 1e-290 && kp < 1e290);
        prop_assert!((kp - km - 2.0 * order as f64 / x * k).abs() <= 1e-9 * kp);
    }

    #[test]
    fn laguerre_table_invariants(d in 1usize..=160) {
        let t = gauss_laguerre(d).unwrap();
        prop_assert_eq!(t.order(), d);
        prop_assert!(t.nodes()[0] > 0.0);
        prop_assert!(t.nodes().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(t.weights().iter().all(|&w| w > 0.0));
        let mass: f64 = t.weights().iter().sum();
        let first: f64 = t.iter().map(|(x, w)| x * w).sum();
        prop_assert!((mass - 1.0).abs() < 1e-10);
        prop_assert!((first - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cascade_cdf_and_sf_are_complementary(q in 1u32..=64, z in 1e-6f64..200.0) {
        let c = cascade_cdf(q, z);
        let s = cascade_sf(q, z);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((c + s - 1.0).abs() < 1e-13);
        prop_assert!(cascade_pdf(q, z) >= 0.0);
    }

    #[test]
    fn cascade_cdf_is_monotone(q in 1u32..=64, z in 1e-8f64..100.0, step in 1e-6f64..1.0) {
        prop_assert!(cascade_cdf(q, z * (1.0 + step)) >= cascade_cdf(q, z));
    }
}

#[test]
fn gauss_laguerre_64_third_moment() {
    let t = gauss_laguerre(64).unwrap();
    assert!((t.integrate(|x| x * x * x) - 6.0).abs() < 1e-9);
}

#[test]
fn bessel_k_20_at_5() {
    // mpmath: besselk(20, 5)
    let want = 482_700_052.062_148_47;
    let got = bessel_k(20, 5.0).unwrap();
    assert!(((got - want) / want).abs() < 1e-10, "{got}");
}
