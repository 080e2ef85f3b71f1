//! Direct-subtraction forms of the source terms: assemble F', A', Pi and
//! their derivatives at a node, evaluate the unexpanded field equations and
//! peel off the linear operator. Cancellation-prone by construction; only
//! meant as an independent check on the expanded remainders.
#![allow(dead_code)]

use rand::Rng;
use rotstar::pn::{PnParams, PointData};

/// Second derivatives of Y are not part of PointData; the Y oracle takes them separately.
#[derive(Clone, Copy, Debug)]
pub struct YSecond {
    pub y_vv: f64,
    pub y_zz: f64,
}

struct Metric {
    fp_v: f64,
    fp_z: f64,
    fp: f64,
    ap_v: f64,
    ap_z: f64,
    ap_vv: f64,
    ap_zz: f64,
    pi: f64,
    pi_v: f64,
    pi_z: f64,
    pi_vv: f64,
    pi_zz: f64,
    pi_vz: f64,
    s: f64,
    rho: f64,
    pres: f64,
}

fn metric(p: &PointData, ys: YSecond, par: &PnParams) -> Metric {
    let t = par.tau;
    let om2 = 0.5 * par.b_rot;
    let oc = (om2 * t).sqrt();
    let v = p.varpi;
    let phip = p.phi - 0.5 * om2 * v * v - t * p.w;
    let e = par.eos.point(p.theta + t * p.w);
    Metric {
        fp: t * phip,
        fp_v: t * (p.phi_v - om2 * v - t * p.w_v),
        fp_z: t * (p.phi_z - t * p.w_z),
        ap_v: -oc * (2.0 * v * (1.0 + t * p.y) + t * v * v * p.y_v),
        ap_z: -oc * t * v * v * p.y_z,
        ap_vv: -oc * (2.0 * (1.0 + t * p.y) + 4.0 * t * v * p.y_v + t * v * v * ys.y_vv),
        ap_zz: -oc * t * v * v * ys.y_zz,
        pi: v * (1.0 + t * t * p.x),
        pi_v: 1.0 + t * t * (p.x + v * p.x_v),
        pi_z: t * t * v * p.x_z,
        pi_vv: t * t * (2.0 * p.x_v + v * p.x_vv),
        pi_zz: t * t * v * p.x_zz,
        pi_vz: t * t * (p.x_z + v * p.x_vz),
        // 2(K' - F') with K' = tau(-Omega^2 varpi^2/2 + tau V)
        s: 2.0 * (t * (-0.5 * om2 * v * v + t * p.v) - t * phip),
        rho: e.rho,
        pres: e.pres,
    }
}

/// S_a from the F' equation: S_a = -Delta_3 w - m w.
pub fn s_a(p: &PointData, par: &PnParams) -> f64 {
    let t = par.tau;
    let om2 = 0.5 * par.b_rot;
    let m = metric(p, YSecond { y_vv: 0.0, y_zz: 0.0 }, par);
    let rhs = t * m.s.exp() * (m.rho + 3.0 * t * m.pres);
    let lap_fp = rhs
        - (m.fp_v * m.pi_v + m.fp_z * m.pi_z) / m.pi
        - (4.0 * m.fp).exp() / (2.0 * m.pi * m.pi) * (m.ap_v * m.ap_v + m.ap_z * m.ap_z);
    // Delta_2 F' = tau(Delta_2 Phi_N - Omega^2) - tau^2 Delta_2 w
    let lap2_phin = p.rho_n - p.phi_v_over_v;
    let lap2_w = (t * (lap2_phin - om2) - lap_fp) / (t * t);
    let lap3_w = lap2_w + p.w_v_over_v;
    -lap3_w - p.m * p.w
}

/// S_b from the A' equation, using the given second derivatives of Y.
pub fn s_b(p: &PointData, ys: YSecond, par: &PnParams) -> f64 {
    let t = par.tau;
    let oc = (0.5 * par.b_rot * t).sqrt();
    let v = p.varpi;
    let m = metric(p, ys, par);
    let res = m.ap_vv + m.ap_zz + (4.0 * m.fp_v - m.pi_v / m.pi) * m.ap_v + (4.0 * m.fp_z - m.pi_z / m.pi) * m.ap_z;
    let lap5_y = ys.y_vv + 3.0 * p.y_v / v + ys.y_zz;
    -res / (oc * t * v * v) - lap5_y
}

/// S_c from the Pi equation: Delta_2 Pi = tau^2 varpi Delta_4 X.
pub fn s_c(p: &PointData, par: &PnParams) -> f64 {
    let t = par.tau;
    let m = metric(p, YSecond { y_vv: 0.0, y_zz: 0.0 }, par);
    let lap2_pi = 4.0 * t * t * m.s.exp() * m.pres * m.pi;
    -lap2_pi / (t * t * p.varpi)
}

/// (V_varpi, V_z) from the solved K' gradient.
pub fn v_gradient(p: &PointData, par: &PnParams) -> (f64, f64) {
    let t = par.tau;
    let om2 = 0.5 * par.b_rot;
    let m = metric(p, YSecond { y_vv: 0.0, y_zz: 0.0 }, par);
    let e4 = (4.0 * m.fp).exp();
    let rhd = 0.5 * (m.pi_vv - m.pi_zz) + m.pi * (m.fp_v * m.fp_v - m.fp_z * m.fp_z)
        - e4 / (4.0 * m.pi) * (m.ap_v * m.ap_v - m.ap_z * m.ap_z);
    let rhe = m.pi_vz + 2.0 * m.pi * m.fp_v * m.fp_z - e4 / (2.0 * m.pi) * m.ap_v * m.ap_z;
    let d = m.pi_v * m.pi_v + m.pi_z * m.pi_z;
    let k1 = (m.pi_v * rhd + m.pi_z * rhe) / d;
    let k3 = (-m.pi_z * rhd + m.pi_v * rhe) / d;
    (om2 * p.varpi / t + k1 / (t * t), k3 / (t * t))
}

/// A random but physically sized node inside the star.
pub fn random_point<R: Rng>(rng: &mut R, n: f64) -> (PointData, YSecond) {
    let theta: f64 = rng.gen_range(0.2..1.0);
    let mut u = |a: f64| rng.gen_range(-a..a);
    let varpi = 0.3 + 2.5 * u(1.0).abs();
    let phi_v = -0.4 * varpi + u(0.2);
    let p = PointData {
        varpi,
        theta,
        rho_n: theta.powf(n),
        p_n: theta.powf(n + 1.0) / (n + 1.0),
        m: n * theta.powf(n - 1.0),
        phi: -2.0 + u(0.8),
        phi_v,
        phi_z: u(0.6),
        phi_v_over_v: phi_v / varpi,
        w: u(2.0),
        w_v: u(1.0),
        w_z: u(1.0),
        w_v_over_v: u(1.0),
        y: u(2.0),
        y_v: u(1.0),
        y_z: u(1.0),
        x: u(2.0),
        x_v: u(1.0),
        x_z: u(1.0),
        x_vv: u(1.0),
        x_zz: u(1.0),
        x_vz: u(1.0),
        x_v_over_v: 0.0,
        v: u(2.0),
    };
    let p = PointData { w_v_over_v: p.w_v / p.varpi, x_v_over_v: p.x_v / p.varpi, ..p };
    (p, YSecond { y_vv: u(1.0), y_zz: u(1.0) })
}
