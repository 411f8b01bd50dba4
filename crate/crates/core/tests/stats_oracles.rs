mod oracles;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use micromap_core::stats::{
    ci_from_prse, location_quotient, lowess_fit, over_year_pct_change, pca_scores, tricube,
    LowessParams, LqInput,
};
use oracles::{lowess_oracle, names, pca_oracle, random_matrix, random_points};

#[test]
fn lowess_matches_brute_force_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let n = rng.gen_range(5..=200);
        let pts = random_points(&mut rng, n);
        for span in [2.0 / 3.0, 0.3] {
            if ((span * n as f64) - 1e-9).ceil() < 2.0 {
                continue;
            }
            for iters in [0, 3] {
                let got = lowess_fit(&pts, LowessParams::new(span, iters)).unwrap();
                let want = lowess_oracle(&pts, span, iters);
                for (i, (g, w)) in got.iter().zip(&want).enumerate() {
                    assert!(
                        (g - w).abs() < 1e-8,
                        "case {case} n {n} span {span} iters {iters} point {i}: {g} vs {w}"
                    );
                }
            }
        }
    }
}

#[test]
fn lowess_reproduces_exact_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(5..80);
        let (a, b): (f64, f64) = (rng.gen_range(-5.0..5.0), rng.gen_range(-3.0..3.0));
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let x: f64 = rng.gen_range(-20.0..20.0);
                (x, a + b * x)
            })
            .collect();
        for iters in [0, 3] {
            let fit = lowess_fit(&pts, LowessParams::new(2.0 / 3.0, iters)).unwrap();
            for (p, f) in pts.iter().zip(fit) {
                assert!((p.1 - f).abs() < 1e-9, "{} vs {f}", p.1);
            }
        }
    }
}

#[test]
fn pca_matches_eigen_oracle_on_random_20_by_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let rows = random_matrix(&mut rng, 20, 4);
        for k in 1..=4 {
            let got = pca_scores(&names(4), &rows, k).unwrap();
            let want = pca_oracle(&rows, k);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-8, "k {k}: {g} vs {w}");
            }
        }
    }
}

#[test]
fn pca_of_one_column_is_its_z_score() {
    let rows: Vec<Vec<f64>> = [3.0, 7.0, 1.0, 9.0, 5.0].iter().map(|&v| vec![v]).collect();
    let got = pca_scores(&names(1), &rows, 1).unwrap();
    let sd = 10f64.sqrt();
    for (g, r) in got.iter().zip(&rows) {
        assert!((g - (r[0] - 5.0) / sd).abs() < 1e-12);
    }
}

#[test]
fn pca_components_are_orthogonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for _ in 0..50 {
        let rows = random_matrix(&mut rng, 20, 4);
        let scores: Vec<Vec<f64>> = (1..=4)
            .map(|k| pca_scores(&names(4), &rows, k).unwrap())
            .collect();
        for a in 0..4 {
            for b in a + 1..4 {
                let dot: f64 = scores[a].iter().zip(&scores[b]).map(|(x, y)| x * y).sum();
                assert!(dot.abs() < 1e-8, "{a} {b}: {dot}");
            }
        }
    }
}

fn lq(a: f64, b: f64, c: f64, d: f64) -> f64 {
    location_quotient(LqInput {
        emp_cat_area: a,
        emp_total_area: b,
        emp_cat_nat: c,
        emp_total_nat: d,
    })
    .unwrap()
}

#[test]
fn lq_worked_example() {
    assert!((lq(50.0, 1000.0, 200.0, 10000.0) - 2.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn lq_is_scale_invariant(
        total in 1.0f64..1e7,
        share in 0.0f64..1.0,
        nat_total in 1.0f64..1e9,
        nat_share in 1e-4f64..1.0,
        k in 1e-3f64..1e3,
    ) {
        let (a, c) = (share * total, nat_share * nat_total);
        let q = lq(a, total, c, nat_total);
        let scaled = lq(a * k, total * k, c * k, nat_total * k);
        prop_assert!((q - scaled).abs() <= 1e-12 * q.abs().max(1.0));
        // the area as its own nation has quotient one
        if a > 0.0 {
            prop_assert!((lq(a, total, a, total) - 1.0).abs() < 1e-12);
        }
        // and matches the ratio of shares
        prop_assert!((q - (a / total) / (c / nat_total)).abs() <= 1e-12 * q.abs().max(1.0));
    }

    #[test]
    fn lowess_is_shift_and_scale_equivariant(
        seed in 0u64..10_000,
        n in 6usize..60,
        c in -100.0f64..100.0,
        a in 0.01f64..50.0,
        iters in prop_oneof![Just(0usize), Just(3usize)],
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, n);
        let params = LowessParams::new(2.0 / 3.0, iters);
        let base = lowess_fit(&pts, params).unwrap();
        let shifted: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, y + c)).collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, a * y)).collect();
        let fs = lowess_fit(&shifted, params).unwrap();
        let fa = lowess_fit(&scaled, params).unwrap();
        for i in 0..n {
            prop_assert!((fs[i] - (base[i] + c)).abs() < 1e-9);
            prop_assert!((fa[i] - a * base[i]).abs() <= 1e-9 * (a * base[i]).abs().max(1.0));
        }
    }

    #[test]
    fn tricube_is_symmetric_and_vanishes_at_the_boundary(u in -2.0f64..2.0) {
        prop_assert_eq!(tricube(u), tricube(-u));
        prop_assert!((0.0..=1.0).contains(&tricube(u)));
        if u.abs() >= 1.0 {
            prop_assert_eq!(tricube(u), 0.0);
        }
        prop_assert_eq!(tricube(1.0), 0.0);
        prop_assert_eq!(tricube(-1.0), 0.0);
    }

    #[test]
    fn pct_change_ignores_units(
        series in prop::collection::vec(prop::option::weighted(0.9, 1.0f64..1e6), 6..30),
        a in 1e-3f64..1e3,
        lag in 1usize..5,
    ) {
        let scaled: Vec<Option<f64>> = series.iter().map(|v| v.map(|x| x * a)).collect();
        let p = over_year_pct_change(&series, lag).unwrap();
        let q = over_year_pct_change(&scaled, lag).unwrap();
        for (u, v) in p.iter().zip(&q) {
            match (u, v) {
                (Some(u), Some(v)) => prop_assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0)),
                (None, None) => {}
                _ => prop_assert!(false, "missingness changed"),
            }
        }
    }

    #[test]
    fn ci_width_grows_with_prse_and_level(
        mean in 1.0f64..500.0,
        prse in 0.0f64..40.0,
        dp in 0.01f64..10.0,
        level in 0.5f64..0.98,
        dl in 0.001f64..0.015,
    ) {
        let width = |p: f64, l: f64| {
            let (lo, hi) = ci_from_prse(mean, p, l).unwrap();
            hi - lo
        };
        prop_assert!(width(prse + dp, level) > width(prse, level));
        if prse > 0.0 {
            prop_assert!(width(prse, level + dl) > width(prse, level));
        }
    }
}
