//! Residuals of a solved configuration, reported per region.

use super::lewis::{lewis_fields, LewisFields};
use super::ricci::{ricci_components, RicciFields};
use super::stress::{stress_components, StressFields};
use crate::error::Result;
use crate::grid::{quadrature_from_gradient, quadrature_transposed, Deriv, Parity, ScalarField};
use crate::pn::{assemble_metric, k_prime_gradient, to_static_frame, Background, MetricBundle, PnParams, PnState, VGradient};
use serde::Serialize;

pub const EINSTEIN_NAMES: [&str; 6] = ["R00", "R02", "R22", "R11", "R33", "R13"];
pub const REDUCED_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

/// Half-width of the surface collar in u.
pub const COLLAR: f64 = 0.05;

/// Width of the axis strip as a fraction of xi1.
pub const AXIS_STRIP: f64 = 0.25;

/// Node classification on the disk r <= 2 xi1 - 3h. Terms of the field
/// equations that are separately singular like 1/varpi cancel only up to the
/// discretisation error, so nodes with varpi < AXIS_STRIP xi1 form their own
/// region; the axis column itself is excluded.
#[derive(Clone, Debug)]
pub struct RegionMask {
    pub interior: Vec<bool>,
    pub collar: Vec<bool>,
    pub vacuum: Vec<bool>,
    pub axis: Vec<bool>,
}

impl RegionMask {
    pub fn new(u: &ScalarField, xi1: f64) -> Self {
        let g = u.grid;
        let r_max = 2.0 * xi1 - 3.0 * g.h;
        let len = g.len();
        let mut m = RegionMask {
            interior: vec![false; len],
            collar: vec![false; len],
            vacuum: vec![false; len],
            axis: vec![false; len],
        };
        for k in 0..len {
            let (v, z) = (g.x(k / g.n), g.x(k % g.n));
            if v.hypot(z) > r_max || k / g.n == 0 {
                continue;
            }
            if v < AXIS_STRIP * xi1 {
                m.axis[k] = true;
                continue;
            }
            let uk = u.values[k];
            if uk > COLLAR {
                m.interior[k] = true;
            } else if uk < -COLLAR {
                m.vacuum[k] = true;
            } else {
                m.collar[k] = true;
            }
        }
        m
    }

    /// Disk minus the collar and the axis strip.
    pub fn outside_collar(&self) -> Vec<bool> {
        self.interior.iter().zip(&self.vacuum).map(|(a, b)| *a || *b).collect()
    }

    /// Disk minus the collar.
    pub fn outside_collar_with_axis(&self) -> Vec<bool> {
        (0..self.axis.len()).map(|k| self.interior[k] || self.vacuum[k] || self.axis[k]).collect()
    }

    pub fn sup(&self, f: &ScalarField) -> RegionSup {
        let s = |mask: &[bool]| {
            f.values.iter().zip(mask).filter(|(_, m)| **m).fold(0.0f64, |a, (v, _)| a.max(v.abs()))
        };
        RegionSup { interior: s(&self.interior), collar: s(&self.collar), vacuum: s(&self.vacuum), axis: s(&self.axis) }
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct RegionSup {
    pub interior: f64,
    pub collar: f64,
    pub vacuum: f64,
    pub axis: f64,
}

impl RegionSup {
    pub fn outside_collar(&self) -> f64 {
        self.interior.max(self.vacuum)
    }
}

fn fill_axis(f: &mut ScalarField) {
    let g = f.grid;
    for j in 0..g.n {
        f.values[g.idx(0, j)] = 3.0 * f.at(1, j) - 3.0 * f.at(2, j) + f.at(3, j);
    }
}

/// (R_mn - T_mn)/tau for the six non-trivial components.
pub fn einstein_residuals(ric: &RicciFields, st: &StressFields, tau: f64) -> Vec<ScalarField> {
    let pairs = [
        (&ric.r00, &st.t00),
        (&ric.r02, &st.t02),
        (&ric.r22, &st.t22),
        (&ric.r11, &st.t11),
        (&ric.r33, &st.t11),
    ];
    let mut out: Vec<ScalarField> = pairs.iter().map(|(r, t)| r.sub(t).scale(1.0 / tau)).collect();
    out.push(ric.r13.scale(1.0 / tau));
    out
}

/// Residuals of the reduced corotating system, divided by tau.
pub fn reduced_residuals(mb: &MetricBundle, tau: f64) -> Vec<ScalarField> {
    let g = mb.f_p.grid;
    let d = |q: &ScalarField| {
        (
            q.derive(Deriv::DVarpi),
            q.derive(Deriv::DZ),
            q.derive(Deriv::DVarpiVarpi),
            q.derive(Deriv::DZZ),
            q.derive(Deriv::DVarpiZ),
        )
    };
    let kp = mb.k_p.clone();
    let (f1, f3, f11, f33, _) = d(&mb.f_p);
    let (a1, a3, a11, ..) = d(&mb.a_p);
    let (p1, p3, p11, p33, p13) = d(&mb.pi);
    let (k1, k3, ..) = d(&kp);
    // e^{4F'} A'_1 / Pi (even) and e^{4F'} A'_3 / Pi (odd in both)
    let mut q1 = ScalarField::zeros(g);
    let mut q3 = ScalarField::zeros(g).with_parity(Parity::Odd, Parity::Odd);
    for k in 0..g.len() {
        let e4 = (4.0 * mb.f_p.values[k]).exp();
        if k / g.n == 0 {
            q1.values[k] = e4 * a11.values[k] / p1.values[k];
        } else {
            q1.values[k] = e4 * a1.values[k] / mb.pi.values[k];
            q3.values[k] = e4 * a3.values[k] / mb.pi.values[k];
        }
    }
    let div_b = q1.derive(Deriv::DVarpi).add(&q3.derive(Deriv::DZ));
    let mut r: Vec<ScalarField> = (0..5).map(|_| ScalarField::zeros(g)).collect();
    for k in 0..g.len() {
        if k / g.n == 0 {
            continue;
        }
        let pi = mb.pi.values[k];
        let e4 = (4.0 * mb.f_p.values[k]).exp();
        let es = (2.0 * (kp.values[k] - mb.f_p.values[k])).exp();
        let (rho, pres) = (mb.rho.values[k], mb.pres.values[k]);
        let (f1, f3, a1, a3) = (f1.values[k], f3.values[k], a1.values[k], a3.values[k]);
        let (p1k, p3k) = (p1.values[k], p3.values[k]);
        r[0].values[k] = f11.values[k] + f33.values[k] + (f1 * p1k + f3 * p3k) / pi
            + e4 * (a1 * a1 + a3 * a3) / (2.0 * pi * pi)
            - tau * es * (rho + 3.0 * tau * pres);
        r[1].values[k] = div_b.values[k];
        r[2].values[k] = p11.values[k] + p33.values[k] - 4.0 * tau * tau * es * pres * pi;
        let rhd = 0.5 * (p11.values[k] - p33.values[k]) + pi * (f1 * f1 - f3 * f3) - e4 * (a1 * a1 - a3 * a3) / (4.0 * pi);
        let rhe = p13.values[k] + 2.0 * pi * f1 * f3 - e4 * a1 * a3 / (2.0 * pi);
        r[3].values[k] = p1k * k1.values[k] - p3k * k3.values[k] - rhd;
        r[4].values[k] = p3k * k1.values[k] + p1k * k3.values[k] - rhe;
    }
    for f in r.iter_mut() {
        fill_axis(f);
    }
    r.into_iter().map(|f| f.scale(1.0 / tau)).collect()
}

/// sup over `mask` of the disagreement between the two quadrature orders
/// that reconstruct V from its gradient.
pub fn path_independence(grad: &VGradient, mask: &[bool]) -> Result<f64> {
    let a = quadrature_from_gradient(&grad.v1, &grad.v3)?;
    let b = quadrature_transposed(&grad.v1, &grad.v3)?;
    Ok(a.values.iter().zip(&b.values).zip(mask).filter(|(_, m)| **m).fold(0.0f64, |s, ((x, y), _)| s.max((x - y).abs())))
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub grid_n: usize,
    pub h: f64,
    pub tau: f64,
    pub einstein: Vec<(String, RegionSup)>,
    pub reduced: Vec<(String, RegionSup)>,
    /// spread of F'/tau + u over the interior
    pub bernoulli_spread: f64,
    pub path_defect: f64,
    pub lewis_defects: [f64; 3],
    pub trace_identity: f64,
    pub frame_identity: f64,
    pub lapse_min: f64,
    pub grad_pi_sq_min: f64,
    pub frame_link_residual: f64,
}

impl ResidualReport {
    pub fn einstein_max(&self) -> RegionSup {
        fold(&self.einstein)
    }

    pub fn reduced_max(&self) -> RegionSup {
        fold(&self.reduced)
    }
}

fn fold(v: &[(String, RegionSup)]) -> RegionSup {
    v.iter().fold(RegionSup::default(), |a, (_, s)| RegionSup {
        interior: a.interior.max(s.interior),
        collar: a.collar.max(s.collar),
        vacuum: a.vacuum.max(s.vacuum),
        axis: a.axis.max(s.axis),
    })
}

/// Everything needed to verify a solved state, kept for callers that want
/// the fields themselves.
pub struct Verification {
    pub metric: MetricBundle,
    pub lewis: LewisFields,
    pub ricci: RicciFields,
    pub stress: StressFields,
    pub einstein: Vec<ScalarField>,
    pub reduced: Vec<ScalarField>,
    pub mask: RegionMask,
    pub report: ResidualReport,
}

pub fn verify_solution(s: &PnState, bg: &Background, par: &PnParams) -> Result<Verification> {
    let tau = par.tau;
    let mb = to_static_frame(&assemble_metric(s, bg, par)?)?;
    let lf = lewis_fields(&mb)?;
    let ric = ricci_components(&lf);
    let st = stress_components(&mb, &lf, tau);
    let ein = einstein_residuals(&ric, &st, tau);
    let red = reduced_residuals(&mb, tau);
    let mask = RegionMask::new(&mb.u, bg.xi1);
    let grad = k_prime_gradient(s, bg, par)?;
    let path = path_independence(&grad, &mask.outside_collar_with_axis())?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..mb.u.values.len() {
        if mb.u.values[k] > 0.0 {
            let c = mb.f_p.values[k] / tau + mb.u.values[k];
            lo = lo.min(c);
            hi = hi.max(c);
        }
    }
    let g = mb.u.grid;
    let report = ResidualReport {
        grid_n: g.n,
        h: g.h,
        tau,
        einstein: EINSTEIN_NAMES.iter().zip(&ein).map(|(n, f)| (n.to_string(), mask.sup(f))).collect(),
        reduced: REDUCED_NAMES.iter().zip(&red).map(|(n, f)| (n.to_string(), mask.sup(f))).collect(),
        bernoulli_spread: if hi >= lo { hi - lo } else { 0.0 },
        path_defect: path,
        lewis_defects: lf.defects,
        trace_identity: st.trace_identity,
        frame_identity: st.frame_identity,
        lapse_min: mb.lapse_min,
        grad_pi_sq_min: mb.grad_pi_sq_min,
        frame_link_residual: mb.frame_link_residual,
    };
    Ok(Verification { metric: mb, lewis: lf, ricci: ric, stress: st, einstein: ein, reduced: red, mask, report })
}
