use crate::error::{Error, Result};
use crate::geometry::{gradient_magnitude, scan_condition, FaceWeighting, GammaCertificate, LevelScan};
use crate::grid::GridFunction;
use crate::inequalities::verify::{check_certificate, describe_gamma};
use crate::inequalities::{InequalityReport, Symmetrized};
use crate::numeric::isoperimetric_factor;

use super::{luxemburg_norm, luxemburg_norm_radial_gradient, NFunction};

fn describe(r: InequalityReport, a: &NFunction) -> InequalityReport {
    r.with("nfunction", a)
}

/// `‖Dũ‖_{L_A(Ω̃)} ≤ (n c_n^{1/n}/γ) ‖Du‖_{L_A(Ω)}` for `u ≥ 0` satisfying
/// the level-set condition with the certificate's `γ`.
pub fn verify_orlicz_polya_szego(
    u: &GridFunction,
    cert: &GammaCertificate,
    a: &NFunction,
) -> Result<InequalityReport> {
    const NAME: &str = "orlicz.global";
    check_certificate(u, cert)?;
    if u.min() < 0.0 {
        return Ok(describe(InequalityReport::vacuous(NAME, "u takes negative values"), a).with_grid(u));
    }
    let scan = LevelScan::new(u, &FaceWeighting::GradientNormal)?;
    let cond = scan_condition(&scan, cert.gamma);
    let base = |r: InequalityReport| {
        describe_gamma(describe(r, a), cert)
            .with_grid(u)
            .with_real("condition.worst_ratio", cond.worst_ratio)
    };
    if !cond.holds {
        let reason = format!("level-set condition fails at t={}", cond.worst_t);
        return Ok(base(InequalityReport::vacuous(NAME, reason)));
    }
    let lambda0 = cert.gradient_constant();
    let sym = Symmetrized::of(u);
    let m = sym.ball().measure();
    let lhs = luxemburg_norm_radial_gradient(&sym.linear, sym.ball(), 0.0, m, a)?;
    let rhs = luxemburg_norm(&gradient_magnitude(u)?, a)?;
    Ok(base(InequalityReport::compare(NAME, lhs.value, lambda0 * rhs.value, lambda0))
        .with_real("lhs.modular", lhs.modular)
        .with_real("rhs.norm", rhs.value))
}

/// `‖Dũ‖_{L_A(Ω̃_ε)} ≤ Q n c_n^{1/n} ((|Ω|-ε)/ε)^{1-1/n} ‖Du‖_{L_A(Ω)}`
/// for `0 < ε < |Ω|/2` and `u` of any sign.
pub fn verify_orlicz_local(u: &GridFunction, q: f64, eps: f64, a: &NFunction) -> Result<InequalityReport> {
    const NAME: &str = "orlicz.local";
    let d = u.domain();
    let m = d.measure();
    if !(eps > 0.0 && eps < 0.5 * m) {
        return Err(Error::out_of_range("eps", format!("{eps} not in (0, {})", 0.5 * m)));
    }
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::out_of_range("Q", format!("{q} is not positive")));
    }
    let n = d.dim() as f64;
    let lambda = ((m - eps) / eps).powf(1.0 - 1.0 / n);
    let constant = q * isoperimetric_factor(d.dim()) * lambda;
    let sym = Symmetrized::of(u);
    let lhs = luxemburg_norm_radial_gradient(&sym.linear, sym.ball(), 0.0, m - eps, a)?;
    let rhs = luxemburg_norm(&gradient_magnitude(u)?, a)?;
    Ok(describe(InequalityReport::compare(NAME, lhs.value, constant * rhs.value, constant), a)
        .with_grid(u)
        .with_real("Q", q)
        .with_real("eps", eps)
        .with_real("lambda", lambda)
        .with_real("rhs.norm", rhs.value))
}
