use crate::error::Result;
use crate::grid::{Deriv, ScalarField};
use crate::lane_emden::{pos_pow, DistortedLaneEmden};
use crate::potential::PotentialSolver;

/// Newtonian rotating star: u_N = Theta, rho_N = (Theta v 0)^n, P_N = rho_N Theta/(n+1),
/// Phi_N = -K^(3) rho_N.
#[derive(Clone, Debug)]
pub struct Background {
    pub theta: ScalarField,
    pub rho_n: ScalarField,
    pub p_n: ScalarField,
    pub m: ScalarField,
    pub phi_n: ScalarField,
    pub phi_v: ScalarField,
    pub phi_z: ScalarField,
    pub phi_v_over_v: ScalarField,
    pub phi_vv: ScalarField,
    pub phi_zz: ScalarField,
    pub phi_vz: ScalarField,
    pub bernoulli: f64,
    pub n_index: f64,
    pub b_rot: f64,
    pub xi1: f64,
    pub mu1: f64,
}

pub fn newtonian_background(dle: &DistortedLaneEmden, solver: &PotentialSolver) -> Result<Background> {
    let n = dle.n_index;
    let theta = dle.theta.clone();
    let rho_n = theta.map(|t| pos_pow(t, n));
    let p_n = theta.map(|t| pos_pow(t, n + 1.0) / (n + 1.0));
    let m = theta.map(|t| n * pos_pow(t, n - 1.0));
    let phi_n = solver.apply(&rho_n)?.scale(-1.0);
    let bernoulli = 1.0 + phi_n.values[0];
    Ok(Background {
        phi_v: phi_n.derive(Deriv::DVarpi),
        phi_z: phi_n.derive(Deriv::DZ),
        phi_v_over_v: phi_n.over_varpi_dvarpi(),
        phi_vv: phi_n.derive(Deriv::DVarpiVarpi),
        phi_zz: phi_n.derive(Deriv::DZZ),
        phi_vz: phi_n.derive(Deriv::DVarpiZ),
        theta,
        rho_n,
        p_n,
        m,
        phi_n,
        bernoulli,
        n_index: n,
        b_rot: dle.b_rot,
        xi1: dle.xi1,
        mu1: dle.mu1,
    })
}

impl Background {
    /// Phi'_N = Phi_N - Omega^2 varpi^2 / 2
    pub fn phi_prime(&self) -> ScalarField {
        let b = self.b_rot;
        let g = self.phi_n.grid;
        ScalarField::from_fn(g, |v, _| -0.25 * b * v * v).add(&self.phi_n)
    }

    /// sup over {Theta > 0} of |u_N + Phi'_N - const|.
    pub fn bernoulli_residual(&self) -> f64 {
        let pp = self.phi_prime();
        self.theta
            .values
            .iter()
            .zip(&pp.values)
            .filter(|(t, _)| **t > 0.0)
            .map(|(t, p)| (t + p - self.bernoulli).abs())
            .fold(0.0, f64::max)
    }
}
