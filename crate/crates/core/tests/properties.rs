use std::sync::Arc;

use proptest::prelude::*;

use rearrange_core::geometry::{coarea_check, gamma_for_case, GammaCase, GammaInputs};
use rearrange_core::numeric::{isoperimetric_factor, unit_ball_volume};
use rearrange_core::orlicz::{luxemburg_norm, NFunction, LUXEMBURG_TOL};
use rearrange_core::rearrange::{decreasing_rearrangement, distribution, parse_profile, render_profile, schwarz};
use rearrange_core::grid::{parse_grid, render_grid};
use rearrange_core::{Domain, GridFunction};

fn grid(cells: usize, values: Vec<f64>) -> GridFunction {
    GridFunction::new(Arc::new(Domain::unit_box(2, cells).unwrap()), values).unwrap()
}

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-4.0..4.0f64, (-4i32..=4).prop_map(|k| k as f64 * 0.5)], n)
}

fn pair(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (values(n), values(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rearrangement_is_equimeasurable(v in values(64), t in -5.0..5.0f64) {
        let u = grid(8, v);
        let p = decreasing_rearrangement(&u);
        prop_assert!(p.is_nonincreasing());
        prop_assert_eq!(p.measure(), u.domain().measure());
        prop_assert_eq!(distribution(&u, t), p.distribution(t));
        prop_assert_eq!(schwarz(&u).profile().distribution(t), p.distribution(t));
    }

    #[test]
    fn lp_norms_are_preserved(v in values(64)) {
        let u = grid(8, v);
        let p = decreasing_rearrangement(&u);
        for q in [1.0, 2.0, 4.0] {
            let a = u.lp_norm(q);
            let b = p.lp_norm_pow(q).powf(1.0 / q);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }
    }

    #[test]
    fn rearrangement_is_monotone((a, b) in pair(64)) {
        let lo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect();
        let hi: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect();
        let pl = decreasing_rearrangement(&grid(8, lo));
        let ph = decreasing_rearrangement(&grid(8, hi));
        prop_assert!(pl.values().iter().zip(ph.values()).all(|(x, y)| x <= y));
    }

    #[test]
    fn rearrangement_does_not_expand_l2((a, b) in pair(64)) {
        let u = grid(8, a);
        let v = grid(8, b);
        let pu = decreasing_rearrangement(&u);
        let pv = decreasing_rearrangement(&v);
        let w = u.domain().cell_volume();
        let lhs: f64 = pu.values().iter().zip(pv.values()).map(|(x, y)| (x - y).powi(2) * w).sum::<f64>().sqrt();
        let rhs = u.zip_with(&v, |x, y| x - y).unwrap().lp_norm(2.0);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn permuting_cells_does_not_change_the_rearrangement(v in values(64), seed in any::<u64>()) {
        let mut w = v.clone();
        // Fisher-Yates with a small LCG
        let mut s = seed | 1;
        for i in (1..w.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            w.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(decreasing_rearrangement(&grid(8, v)), decreasing_rearrangement(&grid(8, w)));
    }

    #[test]
    fn luxemburg_norm_axioms((a, b) in pair(16), c in -3.0..3.0f64, p in 1.0..3.0f64) {
        let u = grid(4, a);
        let v = grid(4, b);
        let f = NFunction::p_log(p).unwrap();
        let nu = luxemburg_norm(&u, &f).unwrap().value;
        let nv = luxemburg_norm(&v, &f).unwrap().value;
        let sum = u.zip_with(&v, |x, y| x + y).unwrap();
        let ns = luxemburg_norm(&sum, &f).unwrap().value;
        let tol = 4.0 * LUXEMBURG_TOL * (nu + nv).max(1e-300);
        prop_assert!(ns <= nu + nv + tol);
        let nc = luxemburg_norm(&u.map(|x| c * x).unwrap(), &f).unwrap().value;
        prop_assert!((nc - c.abs() * nu).abs() <= 4.0 * LUXEMBURG_TOL * nc.max(c.abs() * nu) + 1e-300);
    }

    #[test]
    fn grid_and_profile_text_round_trip(v in values(16)) {
        let u = grid(4, v);
        let back = parse_grid(&render_grid(&u)).unwrap();
        prop_assert_eq!(back.values(), u.values());
        let p = decreasing_rearrangement(&u);
        prop_assert_eq!(parse_profile(&render_profile(&p)).unwrap(), p);
    }

    #[test]
    fn coarea_sides_agree_for_affine_data(a in -2.0..2.0f64, b in -2.0..2.0f64) {
        prop_assume!(a.abs() + b.abs() > 0.1);
        let d = Arc::new(Domain::unit_box(2, 128).unwrap());
        let u = rearrange_core::sample(&d, |x| a * x[0] + b * x[1]).unwrap();
        let one = GridFunction::constant(d, 1.0).unwrap();
        let (lhs, rhs) = coarea_check(&u, &one).unwrap();
        prop_assert!((lhs - rhs).abs() <= 0.02 * lhs, "{} {}", lhs, rhs);
    }
}

#[test]
fn ball_volume_matches_gamma_function() {
    for n in 1..=8 {
        let nf = n as f64;
        let expected = std::f64::consts::PI.powf(nf / 2.0) / libm::tgamma(nf / 2.0 + 1.0);
        assert!((unit_ball_volume(n) - expected).abs() < 1e-13 * expected, "n={n}");
    }
}

#[test]
fn compact_support_gamma_is_the_isoperimetric_factor() {
    let c = gamma_for_case(GammaCase::I, GammaInputs::new(2, 1.0)).unwrap();
    assert!((c.gamma - 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
    assert!((c.gamma - isoperimetric_factor(2)).abs() < 1e-15);
    assert_eq!(c.gradient_constant(), 1.0);
}
