//! Lane-Emden functions: the spherical profile theta(r; n) and the rotating
//! (distorted) solution Theta of u = (b/4) varpi^2 + K[(u v 0)^n] + 1.

use crate::error::{Error, Result};
use crate::grid::{AxiGrid, ScalarField};
use crate::math::{dopri5, find_root, OdeSolution};
use crate::potential::{Cutoff, PotentialSolver};
use nalgebra::DMatrix;
use serde::Serialize;

/// (t v 0)^n with the n = 0 convention 1 on t > 0.
pub fn pos_pow(t: f64, n: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if n == 0.0 {
        1.0
    } else {
        t.powf(n)
    }
}

#[derive(Clone, Debug)]
pub struct LaneEmdenSolution {
    pub n_index: f64,
    pub xi1: f64,
    pub mu1: f64,
    pub r_max: f64,
    r0: f64,
    ode: OdeSolution,
}

impl LaneEmdenSolution {
    fn series(&self, r: f64) -> (f64, f64) {
        let n = self.n_index;
        let r2 = r * r;
        let c2 = -1.0 / 6.0;
        let c4 = n / 120.0;
        let c6 = -n * (8.0 * n - 5.0) / 15120.0;
        (1.0 + r2 * (c2 + r2 * (c4 + r2 * c6)), r * (2.0 * c2 + r2 * (4.0 * c4 + r2 * 6.0 * c6)))
    }

    /// theta and dtheta/dr at r >= 0; past xi1 the vacuum solution mu1 (1/r - 1/xi1).
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let r = r.abs();
        if r <= self.r0 {
            self.series(r)
        } else if r <= self.xi1 {
            let y = self.ode.eval(r);
            (y[0], y[1])
        } else {
            (self.mu1 * (1.0 / r - 1.0 / self.xi1), -self.mu1 / (r * r))
        }
    }

    pub fn theta(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    /// Samples of theta on a uniform radial mesh over [0, r_max].
    pub fn profile(&self, points: usize) -> Vec<(f64, f64)> {
        (0..points)
            .map(|k| {
                let r = self.r_max * k as f64 / (points - 1) as f64;
                (r, self.theta(r))
            })
            .collect()
    }
}

/// Spherical Lane-Emden function for 0 <= n < 5.
pub fn solve_lane_emden(n_index: f64, r_max: f64) -> Result<LaneEmdenSolution> {
    if !(0.0..5.0).contains(&n_index) {
        return Err(Error::Config(format!(
            "Lane-Emden index {n_index} unsupported: no finite first zero for n >= 5 (need 0 <= n < 5)"
        )));
    }
    let r0 = 1e-3;
    let mut sol = LaneEmdenSolution { n_index, xi1: 0.0, mu1: 0.0, r_max, r0, ode: OdeSolution { t: vec![], y: vec![], steps: vec![] } };
    let (t0, d0) = sol.series(r0);
    let ode = dopri5(
        |r, y, dy| {
            dy[0] = y[1];
            dy[1] = -pos_pow(y[0], n_index) - 2.0 * y[1] / r;
        },
        r0,
        &[t0, d0],
        1e3,
        1e-13,
        1e-15,
        |_, y| y[0] < 0.0,
    );
    let last = ode.y.last().unwrap();
    if last[0] >= 0.0 {
        return Err(Error::Data(format!("Lane-Emden profile for n={n_index} did not reach zero")));
    }
    let k = ode.steps.len() - 1;
    let step = ode.steps[k].clone();
    let xi1 = find_root(|r| step.eval(r)[0], step.t0, step.t0 + step.h, 1e-14)
        .ok_or_else(|| Error::Data("no sign change in the last Lane-Emden step".into()))?;
    let dth = step.eval(xi1)[1];
    sol.xi1 = xi1;
    sol.mu1 = -xi1 * xi1 * dth;
    sol.ode = ode;
    if sol.r_max < xi1 {
        sol.r_max = xi1;
    }
    Ok(sol)
}

/// The rotating solution on a grid plus its zero curve.
#[derive(Clone, Debug)]
pub struct DistortedLaneEmden {
    pub theta: ScalarField,
    pub b_rot: f64,
    pub n_index: f64,
    pub xi1: f64,
    pub mu1: f64,
    pub xi1_curve: Vec<(f64, f64)>,
    pub rot_cutoff_applied: bool,
    pub iterations: usize,
    pub residual: f64,
    pub history: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct DistortedOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub rot_cutoff: bool,
    pub b_max: f64,
}

impl Default for DistortedOptions {
    fn default() -> Self {
        DistortedOptions { damping: 0.5, tol: 1e-10, max_iter: 500, rot_cutoff: true, b_max: 0.05 }
    }
}

/// Chebyshev-Lobatto nodes on zeta in [0, 1]: cos(k pi / 128), k = 0..64.
pub fn zeta_nodes() -> Vec<f64> {
    (0..=64).map(|k| (k as f64 * std::f64::consts::PI / 128.0).cos()).collect()
}

fn centrifugal(grid: AxiGrid, b_rot: f64, xi1: f64, cut: bool) -> ScalarField {
    let rc = Cutoff { xi_in: 1.5 * xi1, xi_out: 2.0 * xi1 };
    ScalarField::from_fn(grid, |v, z| {
        let c = if cut { rc.eval(v.hypot(z)) } else { 1.0 };
        0.25 * b_rot * v * v * c
    })
}

/// The right-hand side G(u) + (b/4) varpi^2 of the integral equation.
fn ie_rhs(u: &ScalarField, n: f64, rot: &ScalarField, solver: &PotentialSolver) -> Result<ScalarField> {
    let src = u.map(|t| pos_pow(t, n));
    let k = solver.apply_origin_subtracted(&src)?;
    Ok(k.zip_map(rot, |a, b| a + b + 1.0))
}

pub fn solve_distorted(
    b_rot: f64,
    n_index: f64,
    solver: &PotentialSolver,
    opts: &DistortedOptions,
) -> Result<DistortedLaneEmden> {
    if solver.n_dim != 3 {
        return Err(Error::Contract("the distorted Lane-Emden solve needs the n = 3 operator".into()));
    }
    if !(1.0 < n_index && n_index < 5.0) {
        return Err(Error::Config(format!("polytropic index {n_index} outside (1, 5)")));
    }
    if !(0.0..=opts.b_max).contains(&b_rot) {
        return Err(Error::Config(format!("rotation parameter b={b_rot} outside [0, {}]", opts.b_max)));
    }
    let le = solve_lane_emden(n_index, solver.grid.xi0 * std::f64::consts::SQRT_2)?;
    if solver.cutoff.xi_in < 2.0 * le.xi1 * (1.0 - 1e-12) {
        return Err(Error::Config(format!(
            "cutoff plateau {} must reach 2 xi1 = {}",
            solver.cutoff.xi_in,
            2.0 * le.xi1
        )));
    }
    let grid = solver.grid;
    let rot = centrifugal(grid, b_rot, le.xi1, opts.rot_cutoff);
    let mut u = ScalarField::from_fn(grid, |v, z| le.theta(v.hypot(z)));
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        let g = ie_rhs(&u, n_index, &rot, solver)?;
        let diff = g.sub(&u).sup();
        history.push(diff);
        if !diff.is_finite() || iterations >= opts.max_iter {
            return Err(Error::Diverged {
                msg: format!("distorted Lane-Emden iteration stalled at b={b_rot} after {iterations} steps"),
                history,
            });
        }
        if diff < opts.tol {
            break;
        }
        u = u.zip_map(&g, |a, b| (1.0 - opts.damping) * a + opts.damping * b);
        iterations += 1;
    }
    let residual = ie_rhs(&u, n_index, &rot, solver)?.sub(&u).sup();
    let mut dle = DistortedLaneEmden {
        theta: u,
        b_rot,
        n_index,
        xi1: le.xi1,
        mu1: le.mu1,
        xi1_curve: Vec::new(),
        rot_cutoff_applied: opts.rot_cutoff,
        iterations,
        residual,
        history,
    };
    dle.xi1_curve = xi1_curve(&dle)?;
    Ok(dle)
}

/// Root of a field along the ray of direction cosine zeta, searched on
/// (0, r_hi]; the field must decrease through its single sign change.
pub fn ray_root(field: &ScalarField, zeta: f64, r_hi: f64) -> Result<f64> {
    let s = (1.0 - zeta * zeta).max(0.0).sqrt();
    let at = |r: f64| field.interp(r * s, r * zeta);
    let step = 0.25 * field.grid.h;
    let m = (r_hi / step).ceil() as usize;
    let mut prev = at(0.0);
    let mut bracket = None;
    for k in 1..=m {
        let r = (k as f64 * step).min(r_hi);
        let v = at(r);
        if v > prev && prev > 0.0 {
            return Err(Error::Data(format!("field increases along the ray zeta={zeta} near r={r}")));
        }
        if prev > 0.0 && v <= 0.0 && bracket.is_none() {
            bracket = Some((r - step, r));
        }
        if bracket.is_some() && v > 0.0 {
            return Err(Error::Data(format!("second positive region along the ray zeta={zeta} near r={r}")));
        }
        prev = v;
    }
    let (a, b) = bracket.ok_or_else(|| Error::Data(format!("no sign change along the ray zeta={zeta}")))?;
    find_root(at, a, b, 1e-12).ok_or_else(|| Error::Data(format!("root bracketing failed on the ray zeta={zeta}")))
}

/// Xi_1(zeta) at the Chebyshev zeta nodes, ordered from the pole to the equator.
pub fn xi1_curve(dle: &DistortedLaneEmden) -> Result<Vec<(f64, f64)>> {
    let r_hi = (2.0 * dle.xi1).min(dle.theta.grid.xi0);
    zeta_nodes().into_iter().map(|z| Ok((z, ray_root(&dle.theta, z, r_hi)?))).collect()
}

/// Dense matrix of h -> h - Kc[m h] on the nodal values, Kc the origin-subtracted operator.
pub fn linearized_matrix(theta: &ScalarField, n_index: f64, solver: &PotentialSolver) -> Result<DMatrix<f64>> {
    let grid = solver.grid;
    let m = theta.map(|t| n_index * pos_pow(t, n_index - 1.0));
    let len = grid.len();
    let mut a = DMatrix::<f64>::identity(len, len);
    let mut e = ScalarField::zeros(grid);
    for c in 0..len {
        if m.values[c] == 0.0 {
            continue;
        }
        e.values[c] = m.values[c];
        let col = solver.apply_origin_subtracted(&e)?;
        e.values[c] = 0.0;
        for r in 0..len {
            a[(r, c)] -= col.values[r];
        }
    }
    Ok(a)
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelProxy {
    pub sigma_min: f64,
    pub grid_n: usize,
}

/// Smallest singular value of I - DG(Theta) on a coarse copy of the problem.
pub fn kernel_sigma_min(b_rot: f64, n_index: f64, xi0: f64, grid_n: usize) -> Result<KernelProxy> {
    let le = solve_lane_emden(n_index, xi0)?;
    let grid = AxiGrid::new(xi0, grid_n)?;
    let solver = PotentialSolver::new(grid, 3, Cutoff::for_domain(2.0 * le.xi1, xi0)?)?;
    let dle = solve_distorted(b_rot, n_index, &solver, &DistortedOptions::default())?;
    let a = linearized_matrix(&dle.theta, n_index, &solver)?;
    let sv = a.singular_values();
    Ok(KernelProxy { sigma_min: sv.iter().cloned().fold(f64::INFINITY, f64::min), grid_n })
}
