//! Gradients, energies, level-set perimeters and isoperimetric constants.

mod constants;
mod energy;
mod gradient;
mod level;

pub use constants::{
    alpha, default_directions, estimate_c, estimate_q, gamma_for_case, parse_constants,
    read_constants, render_constants, write_constants, ConstantEstimate, ConstantMethod,
    ConstantsRecord, GammaCase, GammaCertificate, GammaInputs, IsoperimetricConstants,
    SearchFamily,
};
pub use energy::{
    mirrored_radial_energy, radial_energy, radial_gradient_integral, radial_power_energy,
};
pub use gradient::{dirichlet_energy, gradient, gradient_lp_norm, gradient_magnitude};
pub use level::{
    boundary_calibration, coarea_check, lipschitz_bound_check, perimeter_slack, scan_condition,
    threshold_grid, ConditionScan, FaceMeasure, FaceWeighting, LevelScan, LevelSet,
    LipschitzCheck, THRESHOLD_CAP,
};
