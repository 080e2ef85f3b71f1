//! Independent checks of a solved configuration against the full field
//! equations: Lewis-form Ricci and stress components, the reduced system,
//! integrability of the K' gradient, and the spherical TOV limit.

mod lewis;
mod residuals;
mod ricci;
mod stress;
mod tov;

pub use lewis::{lewis_fields, lewis_point, LewisFields, LewisPoint};
pub use residuals::{
    einstein_residuals, path_independence, reduced_residuals, verify_solution, RegionMask, RegionSup, ResidualReport,
    Verification, AXIS_STRIP, COLLAR,
    EINSTEIN_NAMES, REDUCED_NAMES,
};
pub use ricci::{ricci_components, RicciFields};
pub use stress::{stress_components, stress_point, StressFields, StressPoint};
pub use tov::{tov_compare, tov_oracle, TovComparison, TovProfile};
