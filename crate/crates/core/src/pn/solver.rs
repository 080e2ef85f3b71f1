//! The nested fixed point: inner (w, Y, X) for frozen V, outer V from the
//! K' gradient by quadrature.

use super::sources::{compute_sources, k_prime_gradient};
use super::{Background, PnParams, PnState};
use crate::error::{Error, Result};
use crate::grid::{holder_norm, quadrature_from_gradient, Deriv, ScalarField};
use crate::potential::{Cutoff, PotentialSolver};
use crate::resolvent::ResolventContext;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PnOptions {
    pub alpha: f64,
    pub tol_inner: f64,
    pub tol_outer: f64,
    pub max_iter_inner: usize,
    pub max_iter_outer: usize,
    pub damping: f64,
}

impl Default for PnOptions {
    fn default() -> Self {
        PnOptions { alpha: 0.25, tol_inner: 1e-10, tol_outer: 1e-9, max_iter_inner: 200, max_iter_outer: 100, damping: 1.0 }
    }
}

impl PnOptions {
    /// alpha = min(0.25, (n-1)/2), kept below the Holder exponent of (Theta v 0)^{n-1}.
    pub fn for_index(n_index: f64) -> Self {
        PnOptions { alpha: 0.25f64.min(0.5 * (n_index - 1.0)), ..Default::default() }
    }
}

/// The potential operators in 3, 4 and 5 dimensions plus the resolvent on one grid.
pub struct PnSolvers {
    pub k3: Arc<PotentialSolver>,
    pub k4: PotentialSolver,
    pub k5: PotentialSolver,
    pub resolvent: ResolventContext,
}

impl PnSolvers {
    pub fn new(k3: Arc<PotentialSolver>, bg: &Background) -> Result<Self> {
        let grid = k3.grid;
        let cut: Cutoff = k3.cutoff;
        let k4 = PotentialSolver::new(grid, 4, cut)?;
        let k5 = PotentialSolver::new(grid, 5, cut)?;
        let resolvent = ResolventContext::new(&bg.theta, bg.n_index, k3.clone())?;
        Ok(PnSolvers { k3, k4, k5, resolvent })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    /// max of the C^1 norms of w, Y, X
    pub n1: f64,
    /// same with C^{2,alpha}
    pub n_star: f64,
    /// n1 + kappa n_star
    pub weighted: f64,
}

pub fn norms(s: &PnState, alpha: f64, kappa: f64) -> Norms {
    let fields = [&s.w, &s.y, &s.x];
    let n1 = fields.iter().map(|f| holder_norm(f, 1, 0.0)).fold(0.0, f64::max);
    let n_star = fields.iter().map(|f| holder_norm(f, 2, alpha)).fold(0.0, f64::max);
    Norms { n1, n_star, weighted: n1 + kappa * n_star }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct InnerReport {
    pub iterations: usize,
    pub differences: Vec<f64>,
    pub ratios: Vec<f64>,
    pub resolvent_iterations: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct OuterReport {
    pub iterations: usize,
    pub differences: Vec<f64>,
    pub ratios: Vec<f64>,
    pub inner: Vec<InnerReport>,
    pub fixed_point_residual: f64,
    pub norms: Norms,
    pub v_norm: f64,
    pub grad_pi2_min: f64,
}

fn ratios(d: &[f64]) -> Vec<f64> {
    d.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect()
}

/// Y_1 = 2Y + varpi Y_varpi
fn y1_field(y: &ScalarField) -> ScalarField {
    let yv = y.derive(Deriv::DVarpi);
    let g = y.grid;
    let mut out = y.scale(2.0);
    for k in 0..g.len() {
        out.values[k] += g.x(k / g.n) * yv.values[k];
    }
    out
}

/// One sweep: Y and X from the current state, then w with the fresh Y_1.
fn sweep(s: &PnState, bg: &Background, par: &PnParams, sol: &PnSolvers) -> Result<(PnState, usize)> {
    let src = compute_sources(s, bg, par)?;
    let y = sol.k5.apply(&src.s_b)?;
    let x = sol.k4.apply(&src.s_c)?;
    let y1 = y1_field(&y);
    let om2 = par.omega2();
    let ga = src.g_a.add(&src.r_a).zip_map(&y1, |a, b| a - 2.0 * om2 * b);
    let (w, rep) = sol.resolvent.apply_with_report(&ga)?;
    Ok((PnState { w, y, x, v: s.v.clone() }, rep.iterations))
}

fn check_support(s: &PnState, bg: &Background, tau: f64) -> Result<()> {
    let g = s.w.grid;
    for k in 0..g.len() {
        let r = g.x(k / g.n).hypot(g.x(k % g.n));
        if r > 2.0 * bg.xi1 && bg.theta.values[k] + tau * s.w.values[k] > 0.0 {
            return Err(Error::Domain(format!("positive enthalpy at r={r:.4} beyond 2 xi1")));
        }
    }
    Ok(())
}

/// (w, Y, X) = S(V) by Picard iteration from `start` (zero if None).
pub fn inner_solve(
    v: &ScalarField,
    bg: &Background,
    par: &PnParams,
    sol: &PnSolvers,
    opts: &PnOptions,
    start: Option<&PnState>,
) -> Result<(PnState, InnerReport)> {
    let kappa = par.kappa(opts.alpha);
    let mut s = match start {
        Some(s0) => PnState { v: v.clone(), ..s0.clone() },
        None => PnState { v: v.clone(), ..PnState::zeros(v.grid) },
    };
    let mut rep = InnerReport::default();
    loop {
        let (next, it) = sweep(&s, bg, par, sol)?;
        rep.resolvent_iterations += it;
        let next = if opts.damping == 1.0 { next } else { s.scale(1.0 - opts.damping).add_state(&next.scale(opts.damping)) };
        let d = norms(&next.sub(&s), opts.alpha, kappa).weighted;
        s = next;
        rep.iterations += 1;
        rep.differences.push(d);
        if !d.is_finite() {
            return Err(Error::Diverged { msg: "inner iteration produced non-finite values".into(), history: rep.differences });
        }
        if d < opts.tol_inner {
            break;
        }
        if rep.iterations >= opts.max_iter_inner {
            return Err(Error::Diverged {
                msg: format!("inner iteration did not converge in {} sweeps at tau={}", rep.iterations, par.tau),
                history: rep.differences,
            });
        }
    }
    rep.ratios = ratios(&rep.differences);
    check_support(&s, bg, par.tau)?;
    Ok((s, rep))
}

/// T(V): the quadrature of the K' gradient evaluated on S(V).
pub fn outer_map(s: &PnState, bg: &Background, par: &PnParams) -> Result<(ScalarField, f64)> {
    let g = k_prime_gradient(s, bg, par)?;
    Ok((quadrature_from_gradient(&g.v1, &g.v3)?, g.grad_pi2_min))
}

/// Full nested solve starting from V = 0.
pub fn outer_solve(bg: &Background, par: &PnParams, sol: &PnSolvers, opts: &PnOptions) -> Result<(PnState, OuterReport)> {
    let kappa = par.kappa(opts.alpha);
    let grid = bg.theta.grid;
    let mut v = ScalarField::zeros(grid);
    let mut state: Option<PnState> = None;
    let mut rep = OuterReport::default();
    loop {
        let (s, irep) = inner_solve(&v, bg, par, sol, opts, state.as_ref())?;
        rep.inner.push(irep);
        let (tv, _) = outer_map(&s, bg, par)?;
        let dv = tv.sub(&v);
        let dn = match &state {
            Some(prev) => norms(&s.sub(prev), opts.alpha, kappa).weighted,
            None => f64::INFINITY,
        };
        let d = holder_norm(&dv, 1, 0.0).max(if dn.is_finite() { dn } else { 0.0 });
        rep.iterations += 1;
        rep.differences.push(d);
        v = if opts.damping == 1.0 { tv } else { v.scale(1.0 - opts.damping).add(&tv.scale(opts.damping)) };
        state = Some(s);
        if !d.is_finite() {
            return Err(Error::Diverged { msg: "outer iteration produced non-finite values".into(), history: rep.differences });
        }
        if d < opts.tol_outer && rep.iterations > 1 {
            break;
        }
        if rep.iterations >= opts.max_iter_outer {
            return Err(Error::Diverged {
                msg: format!("outer iteration did not converge in {} steps at tau={}", rep.iterations, par.tau),
                history: rep.differences,
            });
        }
    }
    // settle the inner state on the final V
    let (s, irep) = inner_solve(&v, bg, par, sol, opts, state.as_ref())?;
    rep.inner.push(irep);
    let (tv, gmin) = outer_map(&s, bg, par)?;
    rep.fixed_point_residual = tv.sub(&v).sup();
    rep.ratios = ratios(&rep.differences);
    rep.norms = norms(&s, opts.alpha, kappa);
    rep.v_norm = holder_norm(&s.v, 0, opts.alpha);
    rep.grad_pi2_min = gmin;
    Ok((s, rep))
}
