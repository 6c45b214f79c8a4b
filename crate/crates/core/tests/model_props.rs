mod common;

use aris_secrecy::budget::{solve_bs_power, PowerBudget, RisMode};
use aris_secrecy::model::{sinr_eve_f, sinr_user_f, sinr_user_n, ChannelDraw, Sic};
use proptest::prelude::*;

fn draw_strategy() -> impl Strategy<Value = ChannelDraw> {
    (
        (1e-14f64..1e-8, 1e-14f64..1e-8, 1e-14f64..1e-8),
        (1e-6f64..1e-3, 1e-6f64..1e-3, 1e-6f64..1e-3),
        (0.0f64..1e-6, 0.0f64..1e-6),
    )
        .prop_map(|((gn, gf, ge), (nn, nf, ne), (iu, ie))| ChannelDraw {
            cascaded_gain_n: gn,
            cascaded_gain_f: gf,
            cascaded_gain_e: ge,
            norm_n: nn,
            norm_f: nf,
            norm_e: ne,
            ip_user: iu,
            ip_eve: ie,
        })
}

proptest! {
    #[test]
    fn far_user_sinr_below_ceiling(draw in draw_strategy(), p_bs in 1e-4f64..10.0, kappa in 1.0f64..30.0) {
        let p = common::desk();
        let p = aris_secrecy::model::SystemParams { p_bs, kappa, ..p };
        let ceiling = p.a_f / p.a_n;
        let f = sinr_user_f(&draw, &p);
        let e = sinr_eve_f(&draw, &p);
        prop_assert!(f > 0.0 && f < ceiling);
        prop_assert!(e > 0.0 && e < ceiling);
    }

    #[test]
    fn residual_interference_only_hurts(draw in draw_strategy(), varpi in 0.0f64..=1.0) {
        let p = aris_secrecy::model::SystemParams { varpi, ..common::desk() };
        prop_assert!(sinr_user_n(&draw, &p.with_sic(Sic::Psic)) >= sinr_user_n(&draw, &p));
    }

    #[test]
    fn more_power_helps_without_impairments(draw in draw_strategy(), c in 1.0001f64..100.0) {
        let p = aris_secrecy::model::SystemParams { sigma2_t: 0.0, varpi: 0.0, ..common::desk() };
        let q = aris_secrecy::model::SystemParams { p_bs: p.p_bs * c, ..p.clone() };
        prop_assert!(sinr_user_n(&draw, &q) > sinr_user_n(&draw, &p));
    }

    #[test]
    fn budget_matches_raw_arithmetic(
        p_tot in 1e-3f64..10.0,
        ris_share in 0.0f64..0.5,
        p_ps in 1e-9f64..1e-5,
        p_dc in 1e-9f64..1e-5,
        (p, q) in (1u32..=8, 1u32..=64),
    ) {
        let m = p * q;
        let p_ris = ris_share * p_tot;
        let aris = PowerBudget { p_tot, p_ris, p_ps, p_dc, mode: RisMode::Aris };
        let pris = PowerBudget { mode: RisMode::Pris, ..aris };
        let want_a = p_tot - p_ris - (q as f64) * (p_ps + p_dc);
        let want_p = p_tot - (m as f64) * p_ps;
        let got_a = solve_bs_power(&aris, m, p, q).unwrap();
        let got_p = solve_bs_power(&pris, m, p, q).unwrap();
        prop_assert!((got_a - want_a).abs() <= 1e-15 * p_tot);
        prop_assert!((got_p - want_p).abs() <= 1e-15 * p_tot);
    }
}
