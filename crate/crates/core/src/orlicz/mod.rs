//! N-functions, Luxemburg norms and the Orlicz-Sobolev versions of the
//! symmetrization estimates.

mod nfunction;
mod norm;
mod verify;

pub use nfunction::{delta2_classify, parse_nfunc, render_nfunc, Delta2, NFunction, NKind};
pub use norm::{
    jensen_check, luxemburg_by_bisection, luxemburg_norm, luxemburg_norm_radial_gradient, modular,
    modular_profile, modular_radial_gradient, JensenCheck, LuxemburgNorm, LUXEMBURG_TOL,
};
pub use verify::{verify_orlicz_local, verify_orlicz_polya_szego};

/// Reads an N-function from a descriptor or an `NFUNC v1` file path.
pub fn load_nfunc(arg: &str) -> crate::Result<NFunction> {
    let path = std::path::Path::new(arg);
    if !arg.trim_start().starts_with("tag=") && path.exists() {
        parse_nfunc(&std::fs::read_to_string(path)?)
    } else {
        parse_nfunc(arg)
    }
}
