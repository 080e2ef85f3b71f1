//! The resolvent L: Q = K[m Q + g] with m = n (Theta v 0)^{n-1}, K origin-subtracted.

use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::lane_emden::pos_pow;
use crate::math::gmres;
use crate::potential::PotentialSolver;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolventMethod {
    Krylov,
    Picard,
}

#[derive(Clone)]
pub struct ResolventContext {
    pub m: ScalarField,
    pub solver: Arc<PotentialSolver>,
    pub tol: f64,
    pub method: ResolventMethod,
}

#[derive(Clone, Debug)]
pub struct ResolventReport {
    pub method: ResolventMethod,
    pub iterations: usize,
    pub residual: f64,
}

impl ResolventContext {
    pub fn new(theta: &ScalarField, n_index: f64, solver: Arc<PotentialSolver>) -> Result<Self> {
        if solver.n_dim != 3 {
            return Err(Error::Contract("the resolvent is built on the n = 3 operator".into()));
        }
        let m = theta.map(|t| n_index * pos_pow(t, n_index - 1.0));
        Ok(ResolventContext { m, solver, tol: 1e-10, method: ResolventMethod::Krylov })
    }

    fn op(&self, q: &[f64]) -> Result<Vec<f64>> {
        let grid = self.solver.grid;
        let src = ScalarField { values: q.iter().zip(&self.m.values).map(|(a, b)| a * b).collect(), ..ScalarField::zeros(grid) };
        let k = self.solver.apply_origin_subtracted(&src)?;
        Ok(q.iter().zip(&k.values).map(|(a, b)| a - b).collect())
    }

    /// Q = L g, together with how it was obtained.
    pub fn apply_with_report(&self, g: &ScalarField) -> Result<(ScalarField, ResolventReport)> {
        let rhs = self.solver.apply_origin_subtracted(g)?;
        let scale = rhs.sup();
        if scale == 0.0 {
            let rep = ResolventReport { method: self.method, iterations: 0, residual: 0.0 };
            return Ok((ScalarField::zeros(g.grid), rep));
        }
        if self.method == ResolventMethod::Krylov {
            let mut err = None;
            let (x, rep) = gmres(
                |q| match self.op(q) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        vec![0.0; q.len()]
                    }
                },
                &rhs.values,
                &rhs.values,
                60,
                600,
                1e-2 * self.tol,
            );
            if let Some(e) = err {
                return Err(e);
            }
            let q = ScalarField { values: x, ..rhs.clone() };
            let res = self.fixed_point_residual(&q, g)?;
            if rep.converged && res <= self.tol * scale.max(1.0) {
                let report = ResolventReport { method: ResolventMethod::Krylov, iterations: rep.iterations, residual: res };
                return Ok((q, report));
            }
        }
        self.picard(g, &rhs, scale)
    }

    fn picard(&self, g: &ScalarField, rhs: &ScalarField, scale: f64) -> Result<(ScalarField, ResolventReport)> {
        let mut q = rhs.clone();
        let mut history = Vec::new();
        for it in 0..2000 {
            let next = self.solver.apply_origin_subtracted(&q.zip_map(&self.m, |a, b| a * b).add(g))?;
            let d = next.sub(&q).sup();
            q = next;
            history.push(d);
            if d <= 0.1 * self.tol * scale.max(1.0) {
                let res = self.fixed_point_residual(&q, g)?;
                return Ok((q, ResolventReport { method: ResolventMethod::Picard, iterations: it + 1, residual: res }));
            }
            if !d.is_finite() || (it > 50 && d > history[it - 50]) {
                break;
            }
        }
        Err(Error::Diverged { msg: "resolvent solve did not reach tolerance".into(), history })
    }

    /// sup |Q - K[m Q + g]|.
    pub fn fixed_point_residual(&self, q: &ScalarField, g: &ScalarField) -> Result<f64> {
        let k = self.solver.apply_origin_subtracted(&q.zip_map(&self.m, |a, b| a * b).add(g))?;
        Ok(k.sub(q).sup())
    }

    pub fn apply(&self, g: &ScalarField) -> Result<ScalarField> {
        Ok(self.apply_with_report(g)?.0)
    }
}

pub fn apply_resolvent(g: &ScalarField, ctx: &ResolventContext) -> Result<ScalarField> {
    ctx.apply(g)
}
