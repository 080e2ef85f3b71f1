use crate::error::{Error, Result};
use crate::grid::{Parity, ScalarField};
use crate::pn::MetricBundle;
use nalgebra::Matrix3;

/// f = e^{2F}, k = -e^{2F}A, l = -e^{2F}A^2 + e^{-2F}Pi^2, m = 2(K - F), and the
/// corotating f' = e^{2F'}, k' = -e^{2F'}A'.
#[derive(Clone, Debug)]
pub struct LewisFields {
    pub f: ScalarField,
    pub k: ScalarField,
    pub l: ScalarField,
    pub m: ScalarField,
    pub fp: ScalarField,
    pub kp: ScalarField,
    pub pi: ScalarField,
    pub oc: f64,
    /// worst relative defects of Pi^2 = fl + k^2, f' = f - 2 oc k - oc^2 l, det = f'^2
    pub defects: [f64; 3],
}

#[derive(Clone, Copy, Debug)]
pub struct LewisPoint {
    pub f: f64,
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub fp: f64,
    pub kp: f64,
}

pub fn lewis_point(f_s: f64, a_s: f64, k_s: f64, fpr: f64, apr: f64, pi: f64) -> LewisPoint {
    let e2 = (2.0 * f_s).exp();
    let e2p = (2.0 * fpr).exp();
    LewisPoint {
        f: e2,
        k: -e2 * a_s,
        l: -e2 * a_s * a_s + pi * pi / e2,
        m: 2.0 * (k_s - f_s),
        fp: e2p,
        kp: -e2p * apr,
    }
}

/// The three algebraic identities at one node, as relative defects.
fn identity_defects(p: &LewisPoint, pi: f64, oc: f64) -> [f64; 3] {
    let scale = pi * pi + p.k * p.k + (p.f * p.l).abs();
    let d1 = (pi * pi - p.f * p.l - p.k * p.k).abs() / scale.max(f64::MIN_POSITIVE);
    let fp2 = p.f - 2.0 * oc * p.k - oc * oc * p.l;
    let d2 = (fp2 - p.fp).abs() / p.fp;
    let o = oc;
    let mat = Matrix3::new(
        p.l,
        -2.0 * p.k,
        -p.f,
        p.k + o * p.l,
        p.f + o * o * p.l,
        o * (p.f - o * p.k),
        1.0,
        2.0 * o,
        o * o,
    );
    let d3 = (mat.determinant() - p.fp * p.fp).abs() / (p.fp * p.fp);
    [d1, d2, d3]
}

pub fn lewis_fields(m: &MetricBundle) -> Result<LewisFields> {
    let (fs, as_, ks) = match (&m.f, &m.a, &m.k) {
        (Some(f), Some(a), Some(k)) => (f, a, k),
        _ => return Err(Error::Contract("static-frame potentials missing; run to_static_frame first".into())),
    };
    let grid = fs.grid;
    let even = |v: Vec<f64>| ScalarField { values: v, ..ScalarField::zeros(grid) };
    let len = grid.len();
    let (mut f, mut k, mut l, mut mm, mut fp, mut kp) =
        (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let mut defects = [0.0f64; 3];
    let mut worst = [0usize; 3];
    for i in 0..len {
        let pi = m.pi.values[i];
        let p = lewis_point(fs.values[i], as_.values[i], ks.values[i], m.f_p.values[i], m.a_p.values[i], pi);
        let d = identity_defects(&p, pi, m.oc);
        for c in 0..3 {
            if d[c] > defects[c] {
                defects[c] = d[c];
                worst[c] = i;
            }
        }
        f[i] = p.f;
        k[i] = p.k;
        l[i] = p.l;
        mm[i] = p.m;
        fp[i] = p.fp;
        kp[i] = p.kp;
    }
    let names = ["Pi^2 = fl + k^2", "f' = f - 2 oc k - oc^2 l", "det = f'^2"];
    for c in 0..3 {
        if !(defects[c] <= 1e-12) {
            let node = worst[c];
            return Err(Error::Data(format!(
                "Lewis identity {} fails by {:e} at node ({}, {})",
                names[c],
                defects[c],
                node / grid.n,
                node % grid.n
            )));
        }
    }
    Ok(LewisFields {
        f: even(f),
        k: even(k),
        l: even(l),
        m: even(mm),
        fp: even(fp),
        kp: even(kp),
        pi: m.pi.clone().with_parity(Parity::Odd, Parity::Even),
        oc: m.oc,
        defects,
    })
}
