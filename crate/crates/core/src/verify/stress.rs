//! Trace-reversed stress T_mn - g_mn T/2 of the rigidly rotating fluid, in
//! the units of the Ricci tensor: c^2 rho -> 2 tau rho, P -> 2 tau^2 P.

use super::lewis::LewisFields;
use crate::grid::{Parity, ScalarField};
use crate::pn::MetricBundle;

#[derive(Clone, Copy, Debug, Default)]
pub struct StressPoint {
    pub t00: f64,
    pub t02: f64,
    pub t22: f64,
    pub t11: f64,
}

/// Components at one node; `fp` = e^{2G}.
#[allow(clippy::too_many_arguments)]
pub fn stress_point(f: f64, k: f64, l: f64, m: f64, pi: f64, fp: f64, rho: f64, pres: f64, tau: f64, oc: f64) -> StressPoint {
    let e = 2.0 * tau * rho;
    let p = 2.0 * tau * tau * pres;
    let h = 0.5 * (e + p) / fp;
    StressPoint {
        t00: h * ((f - oc * k).powi(2) + oc * oc * pi * pi) + p * f,
        t02: h * (-k * f - 2.0 * oc * f * l + oc * oc * k * l) - p * k,
        t22: h * (pi * pi + (k + oc * l).powi(2)) - p * l,
        t11: 0.5 * m.exp() * (e - p),
    }
}

#[derive(Clone, Debug)]
pub struct StressFields {
    pub t00: ScalarField,
    pub t02: ScalarField,
    pub t22: ScalarField,
    pub t11: ScalarField,
    /// worst relative defect of l T00 - 2k T02 - f T22 = 2 P Pi^2
    pub trace_identity: f64,
    /// worst relative defect of the frame identity that kills the A' source
    pub frame_identity: f64,
}

pub fn stress_components(mb: &MetricBundle, lf: &LewisFields, tau: f64) -> StressFields {
    let grid = lf.f.grid;
    let len = grid.len();
    let oc = lf.oc;
    let mut out = [vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    let (mut d37, mut d33) = (0.0f64, 0.0f64);
    for i in 0..len {
        let (f, k, l, m, pi) = (lf.f.values[i], lf.k.values[i], lf.l.values[i], lf.m.values[i], lf.pi.values[i]);
        let s = stress_point(f, k, l, m, pi, lf.fp.values[i], mb.rho.values[i], mb.pres.values[i], tau, oc);
        let p = 2.0 * tau * tau * mb.pres.values[i];
        let scale = (l * s.t00).abs() + (2.0 * k * s.t02).abs() + (f * s.t22).abs();
        if scale > 0.0 {
            d37 = d37.max((l * s.t00 - 2.0 * k * s.t02 - f * s.t22 - 2.0 * p * pi * pi).abs() / scale);
            let a = (k + oc * l) * s.t00;
            let b = (f + oc * oc * l) * s.t02;
            let c = oc * (f - oc * k) * s.t22;
            let den = a.abs() + b.abs() + c.abs();
            if den > 0.0 {
                d33 = d33.max((a + b + c).abs() / den);
            }
        }
        out[0][i] = s.t00;
        out[1][i] = s.t02;
        out[2][i] = s.t22;
        out[3][i] = s.t11;
    }
    let field = |v: &Vec<f64>| ScalarField { values: v.clone(), ..ScalarField::zeros(grid) }.with_parity(Parity::Even, Parity::Even);
    StressFields {
        t00: field(&out[0]),
        t02: field(&out[1]),
        t22: field(&out[2]),
        t11: field(&out[3]),
        trace_identity: d37,
        frame_identity: d33,
    }
}
