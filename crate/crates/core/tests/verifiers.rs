use std::f64::consts::PI;
use std::sync::Arc;

use rearrange_core::fixtures;
use rearrange_core::geometry::{gamma_for_case, GammaCase, GammaInputs, IsoperimetricConstants};
use rearrange_core::inequalities::*;
use rearrange_core::numeric::isoperimetric_factor;
use rearrange_core::{sample, Domain, GridFunction};

fn square(h: f64) -> Arc<Domain> {
    Arc::new(Domain::unit_box(2, (1.0 / h).round() as usize).unwrap())
}

fn case_i(u: &GridFunction) -> rearrange_core::geometry::GammaCertificate {
    gamma_for_case(GammaCase::I, GammaInputs::new(u.domain().dim(), u.domain().measure())).unwrap()
}

fn square_constants() -> IsoperimetricConstants {
    IsoperimetricConstants::search(&square(1.0 / 64.0)).unwrap()
}

#[test]
fn radial_bump_is_the_equality_case() {
    let u = fixtures::radial_bump(1.0 / 128.0).unwrap();
    let r = verify_thm_1_1(&u, &case_i(&u)).unwrap();
    assert_eq!(r.constant, 1.0);
    assert_eq!(r.verdict, Verdict::Holds);
    assert!(r.ratio() > 0.99, "{}", r.ratio());
}

#[test]
fn non_radial_bumps_hold_with_margin_at_two_resolutions() {
    for h in [1.0 / 64.0, 1.0 / 128.0] {
        let u = fixtures::two_bumps(h).unwrap();
        let r = verify_thm_1_1(&u, &case_i(&u)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.margin > 0.0);
    }
}

#[test]
fn constant_function_has_no_certificate() {
    let d = square(1.0 / 16.0);
    let u = GridFunction::constant(d, 1.0).unwrap();
    let r = verify_thm_1_1(&u, &case_i(&u)).unwrap();
    assert_eq!(r.verdict, Verdict::Vacuous);
    assert!(r.meta["reason"].contains("condition"));
}

#[test]
fn negative_values_are_vacuous_not_errors() {
    let u = fixtures::cosine(1.0 / 16.0).unwrap();
    let r = verify_thm_1_1(&u, &case_i(&u)).unwrap();
    assert_eq!(r.verdict, Verdict::Vacuous);
    assert!(r.lhs.is_nan());
}

#[test]
fn half_support_gives_alpha_one() {
    let d = square(1.0 / 32.0);
    let u = sample(&d, |x| if x[0] < 0.5 { (2.0 * PI * x[0]).sin().powi(2) } else { 0.0 }).unwrap();
    let q = 0.75;
    let r = verify_thm_1_2(&u, q).unwrap();
    let eps: f64 = r.meta["eps"].parse().unwrap();
    assert!(eps >= 0.5);
    assert_eq!(r.meta["alpha"], "1");
    assert!((r.constant - (q * isoperimetric_factor(2)).powi(2)).abs() < 1e-12);
}

#[test]
fn zero_function_trivially_holds() {
    let d = square(1.0 / 16.0);
    let u = GridFunction::constant(d, 0.0).unwrap();
    let r = verify_thm_1_2(&u, 0.75).unwrap();
    assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    assert_eq!(r.verdict, Verdict::Holds);
}

#[test]
fn larger_zero_sets_never_increase_the_constant() {
    let m = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..=50 {
        let eps = 0.5 * m * k as f64 / 50.0;
        let l2 = thm_1_2_constant(0.7, eps, m, 2);
        assert!(l2 <= prev);
        prev = l2;
    }
}

#[test]
fn quadrant_bump_holds_with_searched_q() {
    let k = square_constants();
    let u = fixtures::quadrant_bump(1.0 / 64.0).unwrap();
    let r = verify_thm_1_2(&u, k.q).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
}

#[test]
fn boundary_vanishing_estimates() {
    let k = square_constants();
    let h = 1.0 / 64.0;
    let u = sample(&square(h), |x| (PI * x[0]).sin() * (PI * x[1]).sin()).unwrap();
    let all = BoundarySet::all(u.domain());
    assert!((all.measure() - 4.0).abs() < 1e-12);
    let r = verify_thm_1_3(&u, k.q, k.c, &all).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);

    let ramp = fixtures::ramp(h).unwrap();
    let f = BoundarySet::where_small(&ramp, vanishing_tolerance(&ramp).unwrap());
    let r = verify_thm_1_3(&ramp, k.q, k.c, &f).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert_eq!(r.meta["constant_form"], "C*n*c_n^(1/n)");
    let eps: f64 = r.meta["eps"].parse().unwrap();
    assert!((1.0..1.1).contains(&eps), "{eps}");

    let empty = BoundarySet::from_predicate(ramp.domain(), |_| false);
    assert!(verify_thm_1_3(&ramp, k.q, k.c, &empty).is_err());
}

#[test]
fn diameter_zero_set_holds() {
    let h = 1.0 / 64.0;
    let u = fixtures::diameter_zero(h).unwrap();
    let k = IsoperimetricConstants::search(u.domain()).unwrap();
    let f = CellSet::where_small(&u, vanishing_tolerance(&u).unwrap());
    let (_, eps) = f.max_projection_measure();
    assert!((eps - 2.0).abs() < 0.1, "{eps}");
    let r = verify_thm_1_4(&u, k.q, k.c, &f).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
}

#[test]
fn local_estimate_examples() {
    let k = square_constants();
    let u = fixtures::cosine(1.0 / 64.0).unwrap();
    let r = verify_thm_2_1(&u, k.q, 0.5).unwrap();
    assert_eq!(r.meta["c_eps"], "1");
    let r = verify_thm_2_1(&u, k.q, 0.1).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert_eq!(r.meta["replay.holds"], "true");
    assert!(verify_thm_2_1(&u, k.q, 0.0).is_err());
    assert!(verify_thm_2_1(&u, k.q, 1.0).is_err());

    // on a nonnegative compactly supported function the truncated energy
    // is below the full one
    let b = fixtures::quadrant_bump(1.0 / 64.0).unwrap();
    let local = verify_thm_2_1(&b, k.q, 0.2).unwrap();
    let full = verify_thm_1_2(&b, k.q).unwrap();
    assert!(local.lhs <= full.lhs);
}

#[test]
fn uniform_bound_examples() {
    let k = square_constants();
    let h = 1.0 / 64.0;
    let u = fixtures::cosine(h).unwrap();
    let r = verify_cor_2_2(&u, &u, k.q, 0.1).unwrap();
    assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    assert_eq!(r.verdict, Verdict::Holds);

    let c = 0.37;
    let v = u.map(|x| x + c).unwrap();
    let r = verify_cor_2_2(&u, &v, k.q, 0.1).unwrap();
    assert!((r.lhs - c).abs() < 1e-12);
    let dist: f64 = r.meta["l2_distance"].parse().unwrap();
    assert!((dist - c).abs() < 1e-12);
    assert_eq!(r.verdict, Verdict::Holds);

    let w = fixtures::perturbation(h).unwrap();
    let trend = verify_cor_2_2_sequence(&u, &w, &[1.0, 2.0, 4.0, 8.0, 16.0], k.q, 0.1).unwrap();
    assert!(trend.decays);
    let first = trend.reports[0].lhs;
    let last = trend.reports[4].lhs;
    assert!(last <= first / 16f64.sqrt());
    assert!(verify_cor_2_2(&u, &v, k.q, 0.5).is_err());
}

#[test]
fn sobolev_corollary_examples() {
    let u = fixtures::half_ball_bump(1.0 / 32.0).unwrap();
    let l = case_i(&u).gradient_constant();
    let r = verify_cor_1_6(&u, l).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let r2 = verify_cor_1_6(&u.map(|v| 2.0 * v).unwrap(), l).unwrap();
    assert!((r2.lhs / r.lhs - 2.0).abs() < 1e-12);
    assert!((r2.rhs / r.rhs - 2.0).abs() < 1e-12);

    let zero = GridFunction::constant(u.domain().clone(), 0.0).unwrap();
    let z = verify_cor_1_6(&zero, l).unwrap();
    assert_eq!((z.lhs, z.rhs, z.verdict), (0.0, 0.0, Verdict::Holds));

    let planar = fixtures::radial_bump(1.0 / 16.0).unwrap();
    assert_eq!(verify_cor_1_6(&planar, 1.0).unwrap().verdict, Verdict::Vacuous);
}

#[test]
fn verdicts_do_not_flip_under_refinement() {
    let k = square_constants();
    for (name, make) in [
        ("two_bumps", fixtures::two_bumps as fn(f64) -> rearrange_core::Result<GridFunction>),
        ("quadrant_bump", fixtures::quadrant_bump),
        ("cosine", fixtures::cosine),
    ] {
        let mut verdicts = vec![];
        for h in [1.0 / 64.0, 1.0 / 128.0] {
            let u = make(h).unwrap();
            let r = if name == "cosine" {
                verify_thm_2_1(&u, k.q, 0.1).unwrap()
            } else if name == "two_bumps" {
                verify_thm_1_1(&u, &case_i(&u)).unwrap()
            } else {
                verify_thm_1_2(&u, k.q).unwrap()
            };
            verdicts.push(r.verdict);
        }
        assert_eq!(verdicts[0], verdicts[1], "{name}");
        assert_eq!(verdicts[0], Verdict::Holds, "{name}");
    }
}

#[test]
fn reports_round_trip_through_text() {
    let u = fixtures::radial_bump(1.0 / 32.0).unwrap();
    let mut reports = vec![
        verify_thm_1_1(&u, &case_i(&u)).unwrap(),
        verify_cor_1_6(&u, 1.0).unwrap(),
    ];
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let text = render_reports(&reports);
    let back = parse_reports(&text).unwrap();
    assert_eq!(render_reports(&back), text);
    assert_eq!(back[0].verdict, Verdict::Vacuous);
    assert!(back[0].lhs.is_nan());
}
