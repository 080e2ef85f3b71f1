//! Ricci components of the Lewis metric
//!   ds^2 = f c^2dt^2 - 2k c dt dphi - l dphi^2 - e^m (dvarpi^2 + dz^2)
//! by centred differences. Values on the axis column are extrapolated from
//! the three nearest columns.

use super::lewis::LewisFields;
use crate::grid::{Deriv, Parity, ScalarField};

#[derive(Clone, Debug)]
pub struct RicciFields {
    pub r00: ScalarField,
    pub r02: ScalarField,
    pub r22: ScalarField,
    pub r11: ScalarField,
    pub r33: ScalarField,
    pub r13: ScalarField,
}

/// d_1(d_1 q / Pi) + d_3(d_3 q / Pi) for an even field q.
fn div_over_pi(q: &ScalarField, pi: &ScalarField, pi1: &ScalarField) -> ScalarField {
    let g = q.grid;
    let q1 = q.derive(Deriv::DVarpi);
    let q3 = q.derive(Deriv::DZ);
    let q11 = q.derive(Deriv::DVarpiVarpi);
    let mut a = ScalarField::zeros(g);
    let mut b = ScalarField::zeros(g).with_parity(Parity::Odd, Parity::Odd);
    for k in 0..g.len() {
        if k / g.n == 0 {
            a.values[k] = q11.values[k] / pi1.values[k];
        } else {
            a.values[k] = q1.values[k] / pi.values[k];
            b.values[k] = q3.values[k] / pi.values[k];
        }
    }
    a.derive(Deriv::DVarpi).add(&b.derive(Deriv::DZ))
}

fn fill_axis(f: &mut ScalarField) {
    let g = f.grid;
    for j in 0..g.n {
        f.values[g.idx(0, j)] = 3.0 * f.at(1, j) - 3.0 * f.at(2, j) + f.at(3, j);
    }
}

pub fn ricci_components(lf: &LewisFields) -> RicciFields {
    let g = lf.f.grid;
    let pi = &lf.pi;
    let d = |q: &ScalarField| {
        (
            q.derive(Deriv::DVarpi),
            q.derive(Deriv::DZ),
            q.derive(Deriv::DVarpiVarpi),
            q.derive(Deriv::DZZ),
            q.derive(Deriv::DVarpiZ),
        )
    };
    let (p1, p3, p11, p33, p13) = d(pi);
    let (f1, f3, ..) = d(&lf.f);
    let (k1, k3, ..) = d(&lf.k);
    let (l1, l3, ..) = d(&lf.l);
    let (m1, m3, m11, m33, _) = d(&lf.m);
    let df = div_over_pi(&lf.f, pi, &p1);
    let dk = div_over_pi(&lf.k, pi, &p1);
    let dl = div_over_pi(&lf.l, pi, &p1);
    let mut r = [
        ScalarField::zeros(g),
        ScalarField::zeros(g),
        ScalarField::zeros(g),
        ScalarField::zeros(g),
        ScalarField::zeros(g),
        ScalarField::zeros(g).with_parity(Parity::Odd, Parity::Odd),
    ];
    for k in 0..g.len() {
        if k / g.n == 0 {
            continue;
        }
        let p = pi.values[k];
        let sigma = f1.values[k] * l1.values[k] + f3.values[k] * l3.values[k] + k1.values[k].powi(2) + k3.values[k].powi(2);
        let c = p * (-lf.m.values[k]).exp() / 2.0;
        let p3c = p * p * p;
        r[0].values[k] = c * (df.values[k] + lf.f.values[k] * sigma / p3c);
        r[1].values[k] = -c * (dk.values[k] + lf.k.values[k] * sigma / p3c);
        r[2].values[k] = -c * (dl.values[k] + lf.l.values[k] * sigma / p3c);
        let lap_m = m11.values[k] + m33.values[k];
        let cross = (m1.values[k] * p1.values[k] - m3.values[k] * p3.values[k]) / p;
        r[3].values[k] = 0.5
            * (-lap_m - 2.0 * p11.values[k] / p + cross
                + (f1.values[k] * l1.values[k] + k1.values[k].powi(2)) / (p * p));
        r[4].values[k] = 0.5
            * (-lap_m - 2.0 * p33.values[k] / p - cross
                + (f3.values[k] * l3.values[k] + k3.values[k].powi(2)) / (p * p));
        r[5].values[k] = 0.5
            * (-2.0 * p13.values[k] / p
                + (m3.values[k] * p1.values[k] + m1.values[k] * p3.values[k]) / p
                + (f1.values[k] * l3.values[k] + l1.values[k] * f3.values[k] + 2.0 * k1.values[k] * k3.values[k])
                    / (2.0 * p * p));
    }
    for f in r.iter_mut().take(5) {
        fill_axis(f);
    }
    let [r00, r02, r22, r11, r33, r13] = r;
    RicciFields { r00, r02, r22, r11, r33, r13 }
}
