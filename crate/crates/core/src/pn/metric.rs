//! Metric potentials of the corotating and static frames. Lengths in units
//! of a; A' and A carry the same unit, so Omega A/c = oc * A with oc = Omega a/c.

use super::{Background, PnParams, PnState};
use crate::error::{Error, Result};
use crate::grid::{Deriv, ScalarField};

#[derive(Clone, Debug)]
pub struct MetricBundle {
    pub f_p: ScalarField,
    pub k_p: ScalarField,
    pub a_p: ScalarField,
    pub pi: ScalarField,
    pub u: ScalarField,
    pub rho: ScalarField,
    pub pres: ScalarField,
    pub f: Option<ScalarField>,
    pub k: Option<ScalarField>,
    pub a: Option<ScalarField>,
    pub oc: f64,
    pub lapse_min: f64,
    pub grad_pi_sq_min: f64,
    /// largest relative defect of (1 - oc A') e^{2F'} = (1 + oc A) e^{2F}
    pub frame_link_residual: f64,
}

fn static_lapse(fp: f64, ap: f64, pi: f64, oc: f64) -> f64 {
    (2.0 * fp).exp() * (1.0 - oc * ap).powi(2) - (-2.0 * fp).exp() * oc * oc * pi * pi
}

/// Nodes inside the disk r < r_max.
fn in_disk(g: &crate::grid::AxiGrid, k: usize, r_max: f64) -> bool {
    g.x(k / g.n).hypot(g.x(k % g.n)) < r_max
}

/// Corotating potentials F', K', A', Pi and the matter fields of a solved state.
/// Static-frame e^(2F) > 0 and grad Pi != 0 are enforced on the disk r < 2 xi1.
pub fn assemble_metric(s: &PnState, bg: &Background, par: &PnParams) -> Result<MetricBundle> {
    let tau = par.tau;
    let om2 = par.omega2();
    let oc = par.oc();
    let grid = s.w.grid;
    let vv = |k: usize| grid.x(k / grid.n);
    let mut f_p = ScalarField::zeros(grid);
    let mut k_p = ScalarField::zeros(grid);
    let mut a_p = ScalarField::zeros(grid);
    let mut pi = ScalarField::zeros(grid);
    let mut u = ScalarField::zeros(grid);
    let mut rho = ScalarField::zeros(grid);
    let mut pres = ScalarField::zeros(grid);
    for k in 0..grid.len() {
        let v = vv(k);
        f_p.values[k] = tau * (bg.phi_n.values[k] - 0.5 * om2 * v * v - tau * s.w.values[k]);
        k_p.values[k] = tau * (-0.5 * om2 * v * v + tau * s.v.values[k]);
        a_p.values[k] = -oc * v * v * (1.0 + tau * s.y.values[k]);
        pi.values[k] = v * (1.0 + tau * tau * s.x.values[k]);
        let uk = bg.theta.values[k] + tau * s.w.values[k];
        let e = par.eos.point(uk);
        u.values[k] = uk;
        rho.values[k] = e.rho;
        pres.values[k] = e.pres;
    }
    let pi = pi.with_parity(crate::grid::Parity::Odd, crate::grid::Parity::Even);
    let r_max = 2.0 * bg.xi1;
    let mut lapse_min = f64::INFINITY;
    for k in (0..grid.len()).filter(|&k| in_disk(&grid, k, r_max)) {
        lapse_min = lapse_min.min(static_lapse(f_p.values[k], a_p.values[k], pi.values[k], oc));
    }
    if !(lapse_min > 0.0) {
        return Err(Error::Degenerate(format!("static-frame e^(2F) not positive: min {lapse_min:e}")));
    }
    let pv = pi.derive(Deriv::DVarpi);
    let pz = pi.derive(Deriv::DZ);
    let mut grad_pi_sq_min = f64::INFINITY;
    for k in (0..grid.len()).filter(|&k| in_disk(&grid, k, r_max)) {
        grad_pi_sq_min = grad_pi_sq_min.min(pv.values[k].powi(2) + pz.values[k].powi(2));
    }
    if !(grad_pi_sq_min > 0.0) {
        return Err(Error::Degenerate(format!("grad Pi vanishes: min |grad Pi|^2 = {grad_pi_sq_min:e}")));
    }
    Ok(MetricBundle { f_p, k_p, a_p, pi, u, rho, pres, f: None, k: None, a: None, oc, lapse_min, grad_pi_sq_min, frame_link_residual: 0.0 })
}

/// Pointwise static-frame potentials (F, A) from the corotating (F', A', Pi).
pub fn static_point(fp: f64, ap: f64, pi: f64, oc: f64) -> Result<(f64, f64)> {
    if oc == 0.0 {
        return Ok((fp, ap));
    }
    let e2f = static_lapse(fp, ap, pi, oc);
    if !(e2f > 0.0) {
        return Err(Error::Degenerate(format!("static-frame e^(2F) not positive: e^(2F) = {e2f:e}")));
    }
    let num = (2.0 * fp).exp() * (1.0 - oc * ap) * ap + oc * (-2.0 * fp).exp() * pi * pi;
    Ok((0.5 * e2f.ln(), num / e2f))
}

/// Inverse map, static (F, A) to corotating (F', A').
pub fn corotating_point(f: f64, a: f64, pi: f64, oc: f64) -> Result<(f64, f64)> {
    if oc == 0.0 {
        return Ok((f, a));
    }
    let e2f = (2.0 * f).exp() * (1.0 + oc * a).powi(2) - (-2.0 * f).exp() * oc * oc * pi * pi;
    if !(e2f > 0.0) {
        return Err(Error::Degenerate(format!("corotating frame undefined: e^(2F') = {e2f:e}")));
    }
    let num = (2.0 * f).exp() * (1.0 + oc * a) * a - oc * (-2.0 * f).exp() * pi * pi;
    Ok((0.5 * e2f.ln(), num / e2f))
}

/// Fills F, K, A and records the frame-compatibility defect.
pub fn to_static_frame(m: &MetricBundle) -> Result<MetricBundle> {
    let oc = m.oc;
    let mut f = m.f_p.clone();
    let mut a = m.a_p.clone();
    let mut k = m.k_p.clone();
    let mut link = 0.0f64;
    for i in 0..f.values.len() {
        let (fp, ap, pi) = (m.f_p.values[i], m.a_p.values[i], m.pi.values[i]);
        let (fs, as_) = static_point(fp, ap, pi, oc)?;
        f.values[i] = fs;
        a.values[i] = as_;
        k.values[i] = m.k_p.values[i] + (fs - fp);
        let lhs = (1.0 - oc * ap) * (2.0 * fp).exp();
        let rhs = (1.0 + oc * as_) * (2.0 * fs).exp();
        link = link.max((lhs - rhs).abs() / lhs.abs());
    }
    Ok(MetricBundle { f: Some(f), k: Some(k), a: Some(a), frame_link_residual: link, ..m.clone() })
}
