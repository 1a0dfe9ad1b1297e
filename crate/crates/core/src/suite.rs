//! The built-in verification battery: every verifier on the fixtures it
//! was designed for, plus the counterexample traces.
//!
//! Items run concurrently; the output is sorted by report name, so it is
//! byte-identical from run to run.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Result;
use crate::fixtures;
use crate::geometry::{
    gamma_for_case, lipschitz_bound_check, ConstantsRecord, GammaCase, GammaInputs,
    IsoperimetricConstants,
};
use crate::grid::{Domain, GridFunction};
use crate::inequalities::{
    run_counterexample, vanishing_tolerance, verify_cor_1_6, verify_cor_2_2_sequence, verify_thm_1_1,
    verify_thm_1_2, verify_thm_1_3, verify_thm_1_4, verify_thm_2_1, BoundarySet, CellSet,
    CounterexampleKind, CounterexampleTrace, InequalityReport, Symmetrized,
};
use crate::orlicz::{verify_orlicz_local, verify_orlicz_polya_szego, NFunction};

/// Grid spacings of the battery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Spacing of the planar fixtures.
    pub h: f64,
    /// Spacing of the three-dimensional fixture.
    pub h3: f64,
    /// Local estimates use `ε = eps_fraction · |Ω|`.
    pub eps_fraction: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            h: 1.0 / 128.0,
            h3: 1.0 / 48.0,
            eps_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutput {
    /// Sorted by name.
    pub reports: Vec<InequalityReport>,
    /// Counterexample traces for `n = 1, 2, 3`.
    pub traces: Vec<CounterexampleTrace>,
    /// Searched constants by domain name.
    pub constants: Vec<(String, ConstantsRecord)>,
}

impl SuiteOutput {
    pub fn any_violated(&self) -> bool {
        self.reports.iter().any(|r| r.verdict == crate::inequalities::Verdict::Violated)
    }
}

fn named(mut r: InequalityReport, fixture: &str) -> InequalityReport {
    r.name = format!("{}/{}", r.name, fixture);
    r.with("fixture", fixture)
}

type Item<'a> = Box<dyn Fn() -> Result<Vec<InequalityReport>> + Send + Sync + 'a>;

/// Runs the battery.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutput> {
    let h = cfg.h;
    let square = Arc::new(Domain::unit_box(2, (1.0 / h).round() as usize)?);
    let disk = Arc::new(Domain::ball(2, 1.0, h)?);
    let (ks, kd) = rayon::join(
        || IsoperimetricConstants::search(&square),
        || IsoperimetricConstants::search(&disk),
    );
    let (ks, kd) = (ks?, kd?);
    let plog2 = NFunction::p_log(2.0)?;
    let plog1 = NFunction::p_log(1.0)?;
    let frac = cfg.eps_fraction;

    let case_i = |u: &GridFunction| {
        gamma_for_case(GammaCase::I, GammaInputs::new(u.domain().dim(), u.domain().measure()))
    };

    let items: Vec<Item> = vec![
        Box::new(|| {
            let u = fixtures::radial_bump(h)?;
            let cert = case_i(&u)?;
            Ok(vec![
                named(verify_thm_1_1(&u, &cert)?, "radial_bump"),
                named(verify_orlicz_polya_szego(&u, &cert, &plog2)?, "radial_bump"),
            ])
        }),
        Box::new(|| {
            let u = fixtures::two_bumps(h)?;
            let cert = case_i(&u)?;
            let lip = lipschitz_bound_check(
                &Symmetrized::of(&u).linear,
                2,
                fixtures::two_bumps_lipschitz(),
                cert.gamma,
                0.05 * u.domain().measure(),
                1.1,
            );
            let lip_report = InequalityReport::compare("lipschitz", lip.worst_ratio, 1.1, 1.1)
                .with_grid(&u)
                .with_real("L", fixtures::two_bumps_lipschitz())
                .with_real("gamma", cert.gamma)
                .with_real("at", lip.at);
            Ok(vec![
                named(verify_thm_1_1(&u, &cert)?, "two_bumps"),
                named(verify_orlicz_polya_szego(&u, &cert, &plog2)?, "two_bumps"),
                named(lip_report, "two_bumps"),
            ])
        }),
        Box::new(|| {
            let u = fixtures::quadrant_bump(h)?;
            Ok(vec![named(verify_thm_1_2(&u, ks.q)?, "quadrant_bump")])
        }),
        Box::new(|| {
            let u = fixtures::ramp(h)?;
            let f = BoundarySet::where_small(&u, vanishing_tolerance(&u)?);
            Ok(vec![named(verify_thm_1_3(&u, ks.q, ks.c, &f)?, "ramp")])
        }),
        Box::new(|| {
            let u = fixtures::diameter_zero(h)?;
            let f = CellSet::where_small(&u, vanishing_tolerance(&u)?);
            Ok(vec![named(verify_thm_1_4(&u, kd.q, kd.c, &f)?, "diameter_zero")])
        }),
        Box::new(|| {
            let u = fixtures::cosine(h)?;
            let eps = frac * u.domain().measure();
            Ok(vec![
                named(verify_thm_2_1(&u, ks.q, eps)?, "cosine"),
                named(verify_orlicz_local(&u, ks.q, eps, &plog1)?, "cosine"),
            ])
        }),
        Box::new(|| {
            let u = fixtures::cosine(h)?;
            let w = fixtures::perturbation(h)?;
            let eps = frac * u.domain().measure();
            let trend = verify_cor_2_2_sequence(&u, &w, &[1.0, 2.0, 4.0, 8.0, 16.0], ks.q, eps)?;
            let decays = trend.decays;
            Ok(trend
                .reports
                .into_iter()
                .zip(&trend.ms)
                .map(|(r, m)| named(r, &format!("cosine+w/{:02}", *m as u32)).with("decays", decays))
                .collect())
        }),
        Box::new(|| {
            let u = fixtures::half_ball_bump(cfg.h3)?;
            let cert = case_i(&u)?;
            Ok(vec![named(verify_cor_1_6(&u, cert.gradient_constant())?, "half_ball_bump")])
        }),
    ];

    let batches: Vec<Result<Vec<InequalityReport>>> = items.par_iter().map(|f| f()).collect();
    let mut reports = Vec::new();
    for b in batches {
        reports.extend(b?);
    }
    reports.sort_by(|a, b| a.name.cmp(&b.name));

    let traces = [1usize, 2, 3]
        .par_iter()
        .map(|&n| run_counterexample(n, CounterexampleKind::Interior))
        .collect::<Result<Vec<_>>>()?;

    let mut constants = vec![
        ("disk".to_string(), ConstantsRecord::from_constants(&kd)),
        ("unit_square".to_string(), ConstantsRecord::from_constants(&ks)),
    ];
    constants.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(SuiteOutput {
        reports,
        traces,
        constants,
    })
}
