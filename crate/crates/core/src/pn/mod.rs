//! Post-Newtonian corrections to a rigidly rotating polytrope.
//!
//! Everything is dimensionless: lengths in units of a, energies per mass in
//! units of u_O, 4 pi G rho_O = u_O / a^2, so c^2 = 1/tau and Omega^2 = b/2.

mod background;
mod metric;
mod solver;
mod sources;

pub use background::{newtonian_background, Background};
pub use metric::{assemble_metric, corotating_point, static_point, to_static_frame, MetricBundle};
pub use solver::{inner_solve, norms, outer_map, outer_solve, InnerReport, Norms, OuterReport, PnOptions, PnSolvers};
pub use sources::{compute_sources, gradient_point, k_prime_gradient, point_data, source_point, GradientTerms, PointData, SourceTerms, Sources, VGradient};

use crate::eos::{DimEos, EosParams};
use crate::error::{Error, Result};
use crate::grid::ScalarField;

#[derive(Clone, Debug)]
pub struct PnParams {
    pub tau: f64,
    pub b_rot: f64,
    pub n_index: f64,
    pub eos: DimEos,
}

impl PnParams {
    pub fn new(eos: &EosParams, tau: f64, b_rot: f64) -> Result<Self> {
        eos.validate()?;
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Config(format!("tau must lie in (0, 1), got {tau}")));
        }
        Ok(PnParams { tau, b_rot, n_index: eos.n_index(), eos: DimEos::new(eos, tau) })
    }

    pub fn omega2(&self) -> f64 {
        0.5 * self.b_rot
    }

    /// Omega a / c
    pub fn oc(&self) -> f64 {
        (0.5 * self.b_rot * self.tau).sqrt()
    }

    pub fn c2(&self) -> f64 {
        1.0 / self.tau
    }

    /// Diagnostic weight kappa = 2 tau^{1-alpha} of the higher norm.
    pub fn kappa(&self, alpha: f64) -> f64 {
        2.0 * self.tau.powf(1.0 - alpha)
    }
}

/// The four unknowns: enthalpy correction w, frame-dragging shape Y,
/// Pi deviation X and K' correction V.
#[derive(Clone, Debug)]
pub struct PnState {
    pub w: ScalarField,
    pub y: ScalarField,
    pub x: ScalarField,
    pub v: ScalarField,
}

impl PnState {
    pub fn zeros(grid: crate::grid::AxiGrid) -> Self {
        let z = ScalarField::zeros(grid);
        PnState { w: z.clone(), y: z.clone(), x: z.clone(), v: z }
    }

    pub fn sub(&self, o: &PnState) -> PnState {
        PnState { w: self.w.sub(&o.w), y: self.y.sub(&o.y), x: self.x.sub(&o.x), v: self.v.sub(&o.v) }
    }

    pub fn add_state(&self, o: &PnState) -> PnState {
        PnState { w: self.w.add(&o.w), y: self.y.add(&o.y), x: self.x.add(&o.x), v: self.v.add(&o.v) }
    }

    pub fn scale(&self, s: f64) -> PnState {
        PnState { w: self.w.scale(s), y: self.y.scale(s), x: self.x.scale(s), v: self.v.scale(s) }
    }
}
