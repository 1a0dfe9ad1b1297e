use std::sync::Arc;

use super::{LinearProfile, StepProfile};
use crate::error::{Error, Result};
use crate::grid::{BallDomain, Domain, GridFunction};

/// Radial thickness, in grid cells, of the shells over which `u*` is
/// averaged before it is differentiated.
///
/// Central differences underestimate `∫|Du|²` by about `(h²/3)∫|D²u|²`; a
/// four-cell shell makes the secant error of the radial profile the larger
/// of the two, so that discrete energies of `ũ` do not overshoot those of
/// `u` in the equality case.
pub const SHELL_THICKNESS_CELLS: f64 = 4.0;

/// `ũ(x) = u*(c_n |x|^n)` on the ball `Ω̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    ball: BallDomain,
    profile: StepProfile,
    spacing: f64,
}

impl RadialFunction {
    /// `spacing` is the grid spacing of the source function; it sets the
    /// resolution of [`Self::linear_profile`] and [`Self::resample`].
    pub fn new(ball: BallDomain, profile: StepProfile, spacing: f64) -> Result<Self> {
        if ball.measure() != profile.measure() {
            return Err(Error::InvalidArgument(
                "ball measure must equal the profile length".into(),
            ));
        }
        Ok(RadialFunction {
            ball,
            profile,
            spacing,
        })
    }

    pub fn ball(&self) -> &BallDomain {
        &self.ball
    }

    pub fn profile(&self) -> &StepProfile {
        &self.profile
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Volume coordinate of `x`, clamped to `|Ω̃|`.
    pub fn volume_coordinate(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        self.ball.volume_coordinate(r).min(self.ball.measure())
    }

    /// `u*(c_n |x|^n)`, using the step profile.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.profile.eval(self.volume_coordinate(x))
    }

    /// The differentiable view of `u*` used for energies and norms.
    pub fn linear_profile(&self) -> LinearProfile {
        self.profile
            .shell_view(&self.ball, SHELL_THICKNESS_CELLS * self.spacing)
    }

    /// `ũ` sampled on a ball grid with the source spacing, using the linear
    /// profile so that finite differences see a continuous function.
    pub fn resample(&self) -> Result<GridFunction> {
        let domain = Arc::new(Domain::ball(self.ball.dim(), self.ball.radius(), self.spacing)?);
        let lin = self.linear_profile();
        crate::grid::sample(&domain, |x| lin.eval(self.volume_coordinate(x)))
    }
}
