//! Right-hand sides of the w, Y, X equations and the V gradient, split into
//! Newtonian leading parts and remainders. Every remainder is written so that
//! no two O(1) quantities are subtracted.

use super::{Background, PnParams, PnState};
use crate::error::{Error, Result};
use crate::grid::{Deriv, ScalarField};
use crate::lane_emden::pos_pow;
use crate::math::em1x;

/// Everything the pointwise formulas read at one node.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointData {
    pub varpi: f64,
    pub theta: f64,
    pub rho_n: f64,
    pub p_n: f64,
    pub m: f64,
    pub phi: f64,
    pub phi_v: f64,
    pub phi_z: f64,
    /// Phi_N,varpi / varpi (axis limit Phi_N,varpi varpi)
    pub phi_v_over_v: f64,
    pub w: f64,
    pub w_v: f64,
    pub w_z: f64,
    pub w_v_over_v: f64,
    pub y: f64,
    pub y_v: f64,
    pub y_z: f64,
    pub x: f64,
    pub x_v: f64,
    pub x_z: f64,
    pub x_vv: f64,
    pub x_zz: f64,
    pub x_vz: f64,
    pub x_v_over_v: f64,
    pub v: f64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SourceTerms {
    pub g_a: f64,
    pub r_a: f64,
    pub g_b: f64,
    pub r_b: f64,
    pub g_c: f64,
    pub r_c: f64,
    /// Y_1 = 2Y + varpi Y_varpi
    pub y1: f64,
}

impl SourceTerms {
    pub fn s_a(&self, omega2: f64) -> f64 {
        self.g_a - 2.0 * omega2 * self.y1 + self.r_a
    }

    pub fn s_b(&self) -> f64 {
        self.g_b + self.r_b
    }

    pub fn s_c(&self) -> f64 {
        self.g_c + self.r_c
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GradientTerms {
    pub lead1: f64,
    pub r_d: f64,
    pub lead3: f64,
    pub r_e: f64,
    /// |grad Pi|^2
    pub grad_pi2: f64,
}

impl GradientTerms {
    pub fn v1(&self) -> f64 {
        self.lead1 + self.r_d
    }

    pub fn v3(&self) -> f64 {
        self.lead3 + self.r_e
    }
}

/// ln(1+x) - x
fn log1p_mx(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let mut term = -x * x / 2.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -x * k / (k + 1.0);
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        x.ln_1p() - x
    }
}

/// f(theta + d) - f(theta) - f'(theta) d for f = (. v 0)^n.
fn second_difference(theta: f64, d: f64, n: f64) -> f64 {
    if theta > 0.0 && (d / theta).abs() < 0.5 {
        let x = d / theta;
        let y = n * x.ln_1p();
        theta.powf(n) * (em1x(y) + n * log1p_mx(x))
    } else {
        let df = if theta > 0.0 { n * theta.powf(n - 1.0) } else { 0.0 };
        pos_pow(theta + d, n) - pos_pow(theta, n) - df * d
    }
}

/// Remainders and leading terms of the three scalar equations at one node.
pub fn source_point(p: &PointData, par: &PnParams) -> Result<SourceTerms> {
    let tau = par.tau;
    let c2 = par.c2();
    let om2 = par.omega2();
    let n = par.n_index;
    let lam = par.eos.lam_rho1;
    let vp = p.varpi;

    let u = p.theta + tau * p.w;
    if !u.is_finite() {
        return Err(Error::Domain(format!("enthalpy {u} at varpi={vp}")));
    }
    let e = par.eos.point(u);
    if !(e.rho.is_finite() && e.pres.is_finite()) {
        return Err(Error::Domain(format!("equation of state undefined at u={u}")));
    }

    let phin_p = p.phi - 0.5 * om2 * vp * vp;
    let phi_p = phin_p - tau * p.w;
    let phi_p_v = p.phi_v - om2 * vp - tau * p.w_v;
    let phi_p_z = p.phi_z - tau * p.w_z;
    let phi_p_v_over_v = p.phi_v_over_v - om2 - tau * p.w_v_over_v;
    let pf = 1.0 + tau * tau * p.x;
    let l1p = (tau * tau * p.x).ln_1p();
    let s = 2.0 * tau * (-p.phi + tau * (p.v + p.w));
    let lg = 4.0 * tau * phi_p - 2.0 * l1p;
    let gexp = lg.exp();
    let y1 = 2.0 * p.y + vp * p.y_v;
    let y3 = p.y_z;
    let tx = tau * (phi_p_v * p.x_v + phi_p_z * p.x_z) / pf;

    let g_a = -8.0 * phin_p * om2 - 2.0 * p.phi * p.rho_n + lam * p.rho_n * p.theta + 3.0 * p.p_n;
    let h = second_difference(p.theta, tau * p.w, n);
    let a1 = c2 * h + lam * (e.f * u - p.rho_n * p.theta) + e.f * e.rho_corr2;
    let a2 = c2 * em1x(s) * e.rho - 2.0 * p.phi * (e.rho - p.rho_n) + 2.0 * tau * (p.v + p.w) * e.rho;
    let a3 = 3.0 * (s.exp_m1() * e.pres + (e.pres - p.p_n));
    let r_a = a1 + a2 + a3
        - tx
        - 2.0 * om2 * (c2 * em1x(lg) - 4.0 * tau * p.w - 2.0 * c2 * l1p)
        - 2.0 * om2 * lg.exp_m1() * y1
        - 2.0 * om2 * gexp * tau * (y1 * y1 + vp * vp * y3 * y3) / 4.0;

    let g_b = 8.0 * (p.phi_v_over_v - om2);
    let r_b = -8.0 * tau * p.w_v_over_v + 4.0 * tau * y1 * phi_p_v_over_v - tau * p.x_v_over_v * (2.0 + tau * y1) / pf
        + 4.0 * tau * phi_p_z * y3
        - tau * tau * p.x_z * y3 / pf;

    let g_c = -4.0 * p.p_n;
    let r_c = -4.0 * (s.exp_m1() * e.pres * pf + (e.pres - p.p_n) + tau * tau * p.x * e.pres);

    Ok(SourceTerms { g_a, r_a, g_b, r_b, g_c, r_c, y1 })
}

/// Leading terms and remainders of dV/dvarpi and dV/dz at one node.
pub fn gradient_point(p: &PointData, par: &PnParams) -> Result<GradientTerms> {
    let tau = par.tau;
    let t2 = tau * tau;
    let c2 = par.c2();
    let om2 = par.omega2();
    let vp = p.varpi;

    let phin_p = p.phi - 0.5 * om2 * vp * vp;
    let phin_v = p.phi_v - om2 * vp;
    let phin_z = p.phi_z;
    let phi_p = phin_p - tau * p.w;
    let phi_v = phin_v - tau * p.w_v;
    let phi_z = phin_z - tau * p.w_z;

    let x1 = p.x + vp * p.x_v;
    let y1 = 2.0 * p.y + vp * p.y_v;
    let y3 = p.y_z;
    let xs = 2.0 * x1 + t2 * (p.x * p.x + 2.0 * p.x * vp * p.x_v + vp * vp * (p.x_v * p.x_v + p.x_z * p.x_z));
    let d = 1.0 + t2 * xs;
    if !(d > 0.0) {
        return Err(Error::Degenerate(format!("grad Pi vanishes at varpi={vp}")));
    }
    let p1 = 1.0 + t2 * x1;
    let p3 = t2 * vp * p.x_z;
    let pf = 1.0 + t2 * p.x;
    let l1p = (t2 * p.x).ln_1p();

    let lw = 4.0 * tau * phi_p - l1p;
    let yy = tau * y1 + t2 * (y1 * y1 - vp * vp * y3 * y3) / 4.0;
    let wfac = lw.exp() * (1.0 + yy);

    let l1 = p.x_v + 0.5 * vp * (p.x_vv - p.x_zz) + vp * (phin_v * phin_v - phin_z * phin_z);
    let l3 = p.x_z + vp * p.x_vz + 2.0 * vp * phin_v * phin_z - om2 * vp * vp * y3;
    let lead1 = -4.0 * phin_p * vp * om2 + l1 - om2 * vp * y1;
    let lead3 = l3;

    let td = 0.5 * (2.0 * p.x_v + vp * (p.x_vv - p.x_zz)) + vp * pf * (phi_v * phi_v - phi_z * phi_z);
    let te = p.x_z + vp * p.x_vz + 2.0 * vp * pf * phi_v * phi_z
        - om2 * vp * vp * lw.exp() * (1.0 + 0.5 * tau * y1) * y3;

    let z = -4.0 * tau * p.w + c2 * em1x(lw) - c2 * l1p
        + c2 * lw.exp_m1() * yy
        + tau * (y1 * y1 - vp * vp * y3 * y3) / 4.0;
    let td_m_l1 = vp
        * (t2 * p.x * (phi_v * phi_v - phi_z * phi_z) - tau * p.w_v * (2.0 * phin_v - tau * p.w_v)
            + tau * p.w_z * (2.0 * phin_z - tau * p.w_z));
    let te_m_l3 = 2.0 * vp * (t2 * p.x * phi_v * phi_z - tau * (p.w_v * phin_z + p.w_z * phin_v) + t2 * p.w_v * p.w_z)
        - om2 * vp * vp * y3 * (lw.exp_m1() * (1.0 + 0.5 * tau * y1) + 0.5 * tau * y1);

    let r_d = om2 * vp * (tau * (xs - x1) * (1.0 + tau * (4.0 * phin_p + y1)) - p1 * z) / d
        + (p1 * td_m_l1 + t2 * (x1 - xs) * l1 + p3 * te) / d;
    let r_e = (-p3 * td + tau * om2 * vp * vp * p.x_z * wfac + p1 * te_m_l3 + t2 * (x1 - xs) * l3) / d;

    Ok(GradientTerms { lead1, r_d, lead3, r_e, grad_pi2: d })
}

/// Derivative fields of a state, computed once per sweep.
pub(crate) struct StateDerivs {
    w_v: ScalarField,
    w_z: ScalarField,
    w_vv: ScalarField,
    y_v: ScalarField,
    y_z: ScalarField,
    x_v: ScalarField,
    x_z: ScalarField,
    x_vv: ScalarField,
    x_zz: ScalarField,
    x_vz: ScalarField,
    x_vv_axis: ScalarField,
}

impl StateDerivs {
    pub(crate) fn new(s: &PnState) -> Self {
        StateDerivs {
            w_v: s.w.derive(Deriv::DVarpi),
            w_z: s.w.derive(Deriv::DZ),
            w_vv: s.w.over_varpi_dvarpi(),
            y_v: s.y.derive(Deriv::DVarpi),
            y_z: s.y.derive(Deriv::DZ),
            x_v: s.x.derive(Deriv::DVarpi),
            x_z: s.x.derive(Deriv::DZ),
            x_vv: s.x.derive(Deriv::DVarpiVarpi),
            x_zz: s.x.derive(Deriv::DZZ),
            x_vz: s.x.derive(Deriv::DVarpiZ),
            x_vv_axis: s.x.over_varpi_dvarpi(),
        }
    }
}

pub(crate) fn point_at(s: &PnState, d: &StateDerivs, bg: &Background, k: usize) -> PointData {
    let g = s.w.grid;
    PointData {
        varpi: g.x(k / g.n),
        theta: bg.theta.values[k],
        rho_n: bg.rho_n.values[k],
        p_n: bg.p_n.values[k],
        m: bg.m.values[k],
        phi: bg.phi_n.values[k],
        phi_v: bg.phi_v.values[k],
        phi_z: bg.phi_z.values[k],
        phi_v_over_v: bg.phi_v_over_v.values[k],
        w: s.w.values[k],
        w_v: d.w_v.values[k],
        w_z: d.w_z.values[k],
        w_v_over_v: d.w_vv.values[k],
        y: s.y.values[k],
        y_v: d.y_v.values[k],
        y_z: d.y_z.values[k],
        x: s.x.values[k],
        x_v: d.x_v.values[k],
        x_z: d.x_z.values[k],
        x_vv: d.x_vv.values[k],
        x_zz: d.x_zz.values[k],
        x_vz: d.x_vz.values[k],
        x_v_over_v: d.x_vv_axis.values[k],
        v: s.v.values[k],
    }
}

/// Node data for every grid point of a state.
pub fn point_data(s: &PnState, bg: &Background) -> Vec<PointData> {
    let d = StateDerivs::new(s);
    (0..s.w.grid.len()).map(|k| point_at(s, &d, bg, k)).collect()
}

/// Source fields S_a, S_b, S_c with their leading parts and remainders.
#[derive(Clone, Debug)]
pub struct Sources {
    pub s_a: ScalarField,
    pub s_b: ScalarField,
    pub s_c: ScalarField,
    pub g_a: ScalarField,
    pub g_b: ScalarField,
    pub g_c: ScalarField,
    pub r_a: ScalarField,
    pub r_b: ScalarField,
    pub r_c: ScalarField,
    pub y1: ScalarField,
}

pub fn compute_sources(s: &PnState, bg: &Background, par: &PnParams) -> Result<Sources> {
    let grid = s.w.grid;
    let terms: Vec<SourceTerms> =
        point_data(s, bg).iter().map(|p| source_point(p, par)).collect::<Result<_>>()?;
    let om2 = par.omega2();
    let field = |f: &dyn Fn(&SourceTerms) -> f64| ScalarField {
        values: terms.iter().map(f).collect(),
        ..ScalarField::zeros(grid)
    };
    Ok(Sources {
        s_a: field(&|t| t.s_a(om2)),
        s_b: field(&|t| t.s_b()),
        s_c: field(&|t| t.s_c()),
        g_a: field(&|t| t.g_a),
        g_b: field(&|t| t.g_b),
        g_c: field(&|t| t.g_c),
        r_a: field(&|t| t.r_a),
        r_b: field(&|t| t.r_b),
        r_c: field(&|t| t.r_c),
        y1: field(&|t| t.y1),
    })
}

/// dV/dvarpi, dV/dz and their leading/remainder split.
#[derive(Clone, Debug)]
pub struct VGradient {
    pub v1: ScalarField,
    pub v3: ScalarField,
    pub lead1: ScalarField,
    pub lead3: ScalarField,
    pub r_d: ScalarField,
    pub r_e: ScalarField,
    pub grad_pi2_min: f64,
}

pub fn k_prime_gradient(s: &PnState, bg: &Background, par: &PnParams) -> Result<VGradient> {
    use crate::grid::Parity::{Even, Odd};
    let grid = s.w.grid;
    let terms: Vec<GradientTerms> =
        point_data(s, bg).iter().map(|p| gradient_point(p, par)).collect::<Result<_>>()?;
    let field = |f: &dyn Fn(&GradientTerms) -> f64, odd_axis: bool| {
        let sf = ScalarField { values: terms.iter().map(f).collect(), ..ScalarField::zeros(grid) };
        if odd_axis {
            sf.with_parity(Odd, Even)
        } else {
            sf.with_parity(Even, Odd)
        }
    };
    Ok(VGradient {
        v1: field(&|t| t.v1(), true),
        v3: field(&|t| t.v3(), false),
        lead1: field(&|t| t.lead1, true),
        lead3: field(&|t| t.lead3, false),
        r_d: field(&|t| t.r_d, true),
        r_e: field(&|t| t.r_e, false),
        grad_pi2_min: terms.iter().map(|t| t.grad_pi2).fold(f64::INFINITY, f64::min),
    })
}
