use proptest::prelude::*;

use segmap::bcb::{
    bcp1_k1, bcp1_k1_numeric, bcp2_k2, bcp2_k2_numeric, diagonal_thresholds, find_cycles_1d, k_bar_by_bisection,
};
use segmap::io::parse_config;
use segmap::restrict::{build_restriction, RestrictionTag};
use segmap::{orbit, region_of, step, ModelParams, RegionId, State};

fn symmetric(gamma: f64, tau: f64, n: f64, k: f64) -> ModelParams {
    ModelParams { gamma1: gamma, gamma2: gamma, tau1: tau, tau2: tau, n1: n, n2: n, k1: k, k2: k }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn k_bar_matches_bisection(gamma in 0.3..3.0f64, tau in 1.2..8.0f64, n in 0.5..3.0f64) {
        let p = symmetric(gamma, tau, n, n);
        let t = diagonal_thresholds(&p).unwrap();
        let b = k_bar_by_bisection(&p).unwrap();
        prop_assert!((t.k_bar - b).abs() <= 1e-10, "{} vs {}", t.k_bar, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bcp_curves_mirror(k in 0.05..1.4f64) {
        let p = ModelParams::canonical(1.0, 1.0);
        let a = bcp2_k2(&p, k).unwrap();
        let b = bcp1_k1(&p, k).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
        prop_assert!((a - bcp2_k2_numeric(&p, k)).abs() <= 1e-9);
        prop_assert!((b - bcp1_k1_numeric(&p, k)).abs() <= 1e-9);
    }

    #[test]
    fn orbits_stay_in_rect(k1 in 0.1..1.5f64, k2 in 0.1..1.5f64, x1 in 0.0..4.0f64, x2 in 0.0..4.0f64) {
        let p = ModelParams::canonical(k1, k2);
        for s in orbit(&p, State::new(x1, x2), 200).iter().skip(1) {
            prop_assert!(s.in_rect(k1, k2), "{s:?}");
        }
    }

    #[test]
    fn step_commutes_with_swap(k1 in 0.1..1.5f64, k2 in 0.1..1.5f64, x1 in 0.0..1.5f64, x2 in 0.0..1.5f64) {
        let p = ModelParams::canonical(k1, k2);
        let a = step(&p, State::new(x1, x2));
        let b = step(&p.swapped(), State::new(x2, x1));
        prop_assert_eq!(a, b.swapped());
        prop_assert_eq!(region_of(&p, State::new(x1, x2)).index() > 0, true);
    }

    #[test]
    fn config_round_trip(k1 in 0.01..1.5f64, k2 in 0.01..1.5f64, res in 2usize..1000, transient in 0usize..50_000) {
        let text = format!("k1 = {k1}\nk2 = {k2}\nresolution = {res}\ntransient = {transient}\n");
        let c = parse_config(&text).unwrap();
        prop_assert_eq!(c.params.k1, k1);
        prop_assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }
}

#[test]
fn superstable_diagonal_cycles_have_one_flat_point() {
    let base = ModelParams::canonical(1.0, 1.0);
    let t = diagonal_thresholds(&base).unwrap();
    let mut superstable = 0;
    for i in 1..60 {
        let k = t.k_fp_bcb + (t.k_smooth - t.k_fp_bcb) * i as f64 / 60.0;
        let m = build_restriction(&ModelParams::symmetric(k), RestrictionTag::Diagonal).unwrap();
        for c in find_cycles_1d(&m, 32).unwrap() {
            if c.superstable {
                superstable += 1;
                assert_eq!(c.word.matches('F').count(), 1, "K={k}: {c:?}");
            }
        }
    }
    assert!(superstable > 20, "{superstable}");
}

#[test]
fn axis_regions_are_absorbing() {
    // orbits started in the regions mapped onto an axis land there in one step
    let p = ModelParams::canonical(1.4, 1.1);
    for i in 0..200 {
        for j in 0..200 {
            let s = State::new(2.0 * (i as f64 + 0.5) / 200.0, 2.0 * (j as f64 + 0.5) / 200.0);
            let t = step(&p, s);
            match region_of(&p, s) {
                RegionId::Omega2 | RegionId::Omega4 => assert_eq!(t.x1, 0.0, "{s:?}"),
                RegionId::Omega6 | RegionId::Omega8 => assert_eq!(t.x2, 0.0, "{s:?}"),
                _ => {}
            }
        }
    }
}
