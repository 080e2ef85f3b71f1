//! Barotropic equation of state P = A rho^gamma (1 + Lambda(A rho^{gamma-1}/c^2)),
//! its enthalpy, and the dimensionless star parameters.

use crate::error::{Error, Result};
use crate::math::{em1x, gauss_legendre, lexpm1c};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    Zero,
    LinearQuadratic,
}

/// Relativistic pressure correction Lambda(s) = l1 s + l2 s^2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaProfile {
    pub mode: LambdaMode,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl LambdaProfile {
    pub fn zero() -> Self {
        LambdaProfile { mode: LambdaMode::Zero, lambda1: 0.0, lambda2: 0.0 }
    }

    pub fn linear_quadratic(lambda1: f64, lambda2: f64) -> Self {
        LambdaProfile { mode: LambdaMode::LinearQuadratic, lambda1, lambda2 }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self.mode {
            LambdaMode::Zero => 0.0,
            LambdaMode::LinearQuadratic => s * (self.lambda1 + self.lambda2 * s),
        }
    }

    fn deriv(&self, s: f64) -> f64 {
        match self.mode {
            LambdaMode::Zero => 0.0,
            LambdaMode::LinearQuadratic => self.lambda1 + 2.0 * self.lambda2 * s,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mode == LambdaMode::Zero || (self.lambda1 == 0.0 && self.lambda2 == 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EosParams {
    pub a_poly: f64,
    pub gamma: f64,
    pub c_light: f64,
    pub g_grav: f64,
    pub lambda: LambdaProfile,
}

impl EosParams {
    pub fn polytrope(a_poly: f64, gamma: f64, c_light: f64, g_grav: f64) -> Result<Self> {
        Self::new(a_poly, gamma, c_light, g_grav, LambdaProfile::zero())
    }

    pub fn new(a_poly: f64, gamma: f64, c_light: f64, g_grav: f64, lambda: LambdaProfile) -> Result<Self> {
        let e = EosParams { a_poly, gamma, c_light, g_grav, lambda };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.2 && self.gamma < 2.0) {
            return Err(Error::Config(format!(
                "gamma = {} outside the admissible open interval (6/5, 2)",
                self.gamma
            )));
        }
        for (name, v) in [("A_poly", self.a_poly), ("c_light", self.c_light), ("G_grav", self.g_grav)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn n_index(&self) -> f64 {
        1.0 / (self.gamma - 1.0)
    }

    fn c2(&self) -> f64 {
        self.c_light * self.c_light
    }

    fn s_of_rho(&self, rho: f64) -> f64 {
        self.a_poly * rho.powf(self.gamma - 1.0) / self.c2()
    }

    pub fn pressure_of_density(&self, rho: f64) -> Result<f64> {
        check_rho(rho)?;
        if rho == 0.0 {
            return Ok(0.0);
        }
        Ok(self.a_poly * rho.powf(self.gamma) * (1.0 + self.lambda.eval(self.s_of_rho(rho))))
    }

    pub fn enthalpy_of_density(&self, rho: f64) -> Result<f64> {
        check_rho(rho)?;
        if rho == 0.0 {
            return Ok(0.0);
        }
        Ok(self.c2() * xi_of_s(self.s_of_rho(rho), self.n_index(), &self.lambda))
    }

    pub fn density_of_enthalpy(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let s = s_of_xi(u / self.c2(), self.n_index(), &self.lambda);
        (self.c2() * s / self.a_poly).powf(self.n_index())
    }

    /// Newtonian density f_rho(u) = ((gamma-1) u / (A gamma))^{1/(gamma-1)} for u > 0.
    pub fn newtonian_density(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            ((self.gamma - 1.0) * u / (self.a_poly * self.gamma)).powf(self.n_index())
        }
    }

    /// Linear coefficient of the density correction: rho = f_rho(u)(1 + lam_rho u/c^2 + ...).
    pub fn lambda_rho1(&self) -> f64 {
        let g = self.gamma;
        (g - (2.0 * g - 1.0) * self.lambda.lambda1) / (2.0 * g * g)
    }

    /// Sound-speed guard: dP/drho < c^2 sampled at 100 log-spaced densities up to rho_max.
    pub fn check_causal(&self, rho_max: f64) -> Result<()> {
        for k in 0..100 {
            let rho = rho_max * 10f64.powf(-6.0 + 6.0 * k as f64 / 99.0);
            let d = 1e-6 * rho;
            let dp = (self.pressure_of_density(rho + d)? - self.pressure_of_density(rho - d)?) / (2.0 * d);
            if !(dp > 0.0 && dp < self.c2()) {
                return Err(Error::Config(format!(
                    "sound speed condition 0 < dP/drho < c^2 fails at rho = {rho:e} (dP/drho = {dp:e})"
                )));
            }
        }
        Ok(())
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho < 0.0 || rho.is_nan() {
        Err(Error::Domain(format!("negative density {rho}")))
    } else {
        Ok(())
    }
}

/// u/c^2 as a function of s = A rho^{gamma-1}/c^2.
fn xi_of_s(s: f64, n: f64, lam: &LambdaProfile) -> f64 {
    if lam.is_zero() {
        return (n + 1.0) * s.ln_1p();
    }
    // integrand (n(1+L) + q')/(1+q) with q = s(1+L); smooth, so one GL panel of 32 is plenty
    let (x, w) = gl32();
    let half = 0.5 * s;
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(w.iter()) {
        let t = half * (1.0 + xi);
        let l = lam.eval(t);
        let q = t * (1.0 + l);
        let dq = 1.0 + l + t * lam.deriv(t);
        acc += wi * (n * (1.0 + l) + dq) / (1.0 + q);
    }
    acc * half
}

fn s_of_xi(xi: f64, n: f64, lam: &LambdaProfile) -> f64 {
    if lam.is_zero() {
        return (xi / (n + 1.0)).exp_m1();
    }
    let mut s = (xi / (n + 1.0)).exp_m1();
    for _ in 0..60 {
        let l = lam.eval(s);
        let q = s * (1.0 + l);
        let dxi = (n * (1.0 + l) + 1.0 + l + s * lam.deriv(s)) / (1.0 + q);
        let ds = (xi_of_s(s, n, lam) - xi) / dxi;
        s -= ds;
        if ds.abs() <= 1e-16 * s.abs() {
            break;
        }
    }
    s
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(32))
}

/// Parameters of the Newtonian reference star and the units it fixes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarParams {
    pub u_o: f64,
    pub tau: f64,
    pub a_len: f64,
    pub b_rot: f64,
    pub omega: f64,
    pub rho_o: f64,
    pub n_index: f64,
}

impl StarParams {
    /// Omega a / c, the dimensionless rotation speed that enters the metric.
    pub fn omega_a_over_c(&self) -> f64 {
        (0.5 * self.b_rot * self.tau).sqrt()
    }
}

pub fn newtonian_params(u_o: f64, b_rot: f64, eos: &EosParams) -> Result<StarParams> {
    eos.validate()?;
    if !(u_o > 0.0) {
        return Err(Error::Config(format!("central enthalpy must be positive, got {u_o}")));
    }
    if !(b_rot >= 0.0) {
        return Err(Error::Config(format!("rotation parameter b must be non-negative, got {b_rot}")));
    }
    let g = eos.gamma;
    let rho_o = eos.newtonian_density(u_o);
    let a_len = (eos.a_poly * g / (4.0 * std::f64::consts::PI * eos.g_grav * (g - 1.0) * rho_o.powf(2.0 - g))).sqrt();
    let omega = (b_rot * 2.0 * std::f64::consts::PI * eos.g_grav * rho_o).sqrt();
    Ok(StarParams {
        u_o,
        tau: u_o / (eos.c_light * eos.c_light),
        a_len,
        b_rot,
        omega,
        rho_o,
        n_index: eos.n_index(),
    })
}

/// H_rho(w) = f_rho(u_N + w/c^2) - f_rho(u_N) - Df_rho(u_N) w/c^2, physical units.
pub fn h_rho(w: &[f64], u_n: &[f64], eos: &EosParams) -> Vec<f64> {
    let c2 = eos.c_light * eos.c_light;
    let n = eos.n_index();
    w.iter()
        .zip(u_n)
        .map(|(&wi, &un)| {
            let du = wi / c2;
            let f1 = eos.newtonian_density(un + du);
            let f0 = eos.newtonian_density(un);
            let df = if un > 0.0 { n * f0 / un } else { 0.0 };
            f1 - f0 - df * du
        })
        .collect()
}

/// The equation of state in solver units: u in units of u_O, rho in units of
/// rho_O, P in units of rho_O u_O, with tau = u_O/c^2.
#[derive(Clone, Copy, Debug)]
pub struct DimEos {
    pub n: f64,
    pub kappa: f64,
    pub tau: f64,
    pub lambda: LambdaProfile,
    pub lam_rho1: f64,
}

/// Density and pressure at one point, split so that every relativistic
/// correction is available without cancellation.
#[derive(Clone, Copy, Debug, Default)]
pub struct EosPoint {
    /// (u v 0)^n
    pub f: f64,
    pub rho: f64,
    pub pres: f64,
    /// (rho/f - 1 - lam_rho1 tau u)/tau, the O(tau) part of the density correction
    pub rho_corr2: f64,
}

impl DimEos {
    pub fn new(eos: &EosParams, tau: f64) -> Self {
        DimEos {
            n: eos.n_index(),
            kappa: (eos.gamma - 1.0) / eos.gamma,
            tau,
            lambda: eos.lambda,
            lam_rho1: eos.lambda_rho1(),
        }
    }

    pub fn newtonian(&self, u: f64) -> (f64, f64) {
        if u <= 0.0 {
            (0.0, 0.0)
        } else {
            let f = u.powf(self.n);
            (f, f * u / (self.n + 1.0))
        }
    }

    pub fn point(&self, u: f64) -> EosPoint {
        if u <= 0.0 {
            return EosPoint::default();
        }
        let f = u.powf(self.n);
        let x = self.kappa * self.tau * u;
        if self.lambda.is_zero() {
            let l = lexpm1c(x);
            let rho = f * (self.n * l).exp();
            let pres = f * u / (self.n + 1.0) * ((self.n + 1.0) * l).exp();
            // n l - lam x with lam = n/2 equals n ln(sinh(x/2)/(x/2))
            let y = self.n * l;
            let lin = self.n * crate::math::ln_sinhc(0.5 * x);
            let rc = if self.tau > 0.0 { (em1x(y) + lin) / self.tau } else { 0.0 };
            EosPoint { f, rho, pres, rho_corr2: rc }
        } else {
            let xi = self.tau * u;
            let s = s_of_xi(xi, self.n, &self.lambda);
            let ratio = if xi > 0.0 { s / (self.kappa * xi) } else { 1.0 };
            let y = self.n * ratio.ln();
            let rho = f * y.exp();
            let pres = f * u * self.kappa * ratio.powf(self.n + 1.0) * (1.0 + self.lambda.eval(s));
            let rc = if self.tau > 0.0 { (y.exp_m1() - self.lam_rho1 * xi) / self.tau } else { 0.0 };
            EosPoint { f, rho, pres, rho_corr2: rc }
        }
    }
}
