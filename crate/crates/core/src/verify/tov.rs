//! Static spherical stars from the TOV equations, in solver units
//! (4 pi G = 1, c^2 = 1/tau, lengths in units of a):
//!   dq/dr = r^2 rho,  du/dr = -(q + tau r^3 P) / (r^2 (1 - 2 tau q / r)).
//! g00 = e^{2F} with F = -tau (u - u(R)) + ln(1 - 2 tau M / R)/2, which also
//! holds in the exterior.

use crate::eos::DimEos;
use crate::error::{Error, Result};
use crate::math::{dopri5, find_root, OdeSolution};
use crate::pn::MetricBundle;

#[derive(Clone, Debug)]
pub struct TovProfile {
    pub tau: f64,
    pub u_center: f64,
    /// areal radius of the surface
    pub radius: f64,
    /// q(R); the exterior is Schwarzschild with g00 = 1 - 2 tau q(R) / r
    pub mass: f64,
    pub proper_radius: f64,
    pub r_max: f64,
    /// F at the surface
    pub f_surface: f64,
    inner: OdeSolution,
    outer: OdeSolution,
}

const R0: f64 = 1e-6;

pub fn tov_oracle(eos: &DimEos, u_center: f64, r_max: f64) -> Result<TovProfile> {
    if !(u_center > 0.0) || !(r_max > 0.0) {
        return Err(Error::Config(format!("TOV needs u_c > 0 and r_max > 0, got {u_center}, {r_max}")));
    }
    let tau = eos.tau;
    let c = eos.point(u_center);
    let y0 = [
        u_center - (c.rho / 3.0 + tau * c.pres) * R0 * R0 / 2.0,
        c.rho * R0.powi(3) / 3.0,
        R0,
    ];
    let mut bad = false;
    let mut rhs = |r: f64, y: &[f64], dy: &mut [f64]| {
        let e = eos.point(y[0]);
        let g = 1.0 - 2.0 * tau * y[1] / r;
        if !(g > 0.0) {
            bad = true;
            dy.iter_mut().for_each(|d| *d = 0.0);
            return;
        }
        dy[0] = -(y[1] + tau * r.powi(3) * e.pres) / (r * r * g);
        dy[1] = r * r * e.rho;
        dy[2] = 1.0 / g.sqrt();
    };
    let inner = dopri5(&mut rhs, R0, &y0, r_max, 1e-11, 1e-14, |_, y| y[0] <= 0.0);
    let k = inner.y.iter().position(|y| y[0] <= 0.0).ok_or_else(|| {
        Error::Domain(format!("TOV surface lies beyond r_max = {r_max}"))
    })?;
    let (a, b) = (inner.t[k - 1], inner.t[k]);
    let radius = find_root(|r| inner.eval(r)[0], a, b, 1e-14).ok_or_else(|| Error::Data("TOV surface bracket lost".into()))?;
    let mut ys = inner.eval(radius);
    ys[0] = 0.0;
    let outer = dopri5(&mut rhs, radius, &ys, r_max.max(radius * (1.0 + 1e-12)), 1e-11, 1e-14, |_, _| false);
    if bad {
        return Err(Error::Degenerate("TOV integration met a horizon".into()));
    }
    let mass = ys[1];
    let f_surface = 0.5 * (1.0 - 2.0 * tau * mass / radius).ln();
    Ok(TovProfile {
        tau,
        u_center,
        radius,
        mass,
        proper_radius: ys[2],
        r_max,
        f_surface,
        inner,
        outer,
    })
}

impl TovProfile {
    fn y(&self, r: f64) -> Vec<f64> {
        if r <= R0 {
            let mut y = self.inner.y[0].clone();
            y[2] = r;
            return y;
        }
        if r < self.radius {
            self.inner.eval(r)
        } else {
            self.outer.eval(r.min(self.r_max))
        }
    }

    /// Enthalpy at areal radius r (negative outside, continued by the vacuum equation).
    pub fn u(&self, r: f64) -> f64 {
        self.y(r)[0]
    }

    pub fn q(&self, r: f64) -> f64 {
        self.y(r)[1]
    }

    /// Radial proper distance from the centre.
    pub fn proper(&self, r: f64) -> f64 {
        self.y(r)[2]
    }

    /// g00 = e^{2F}.
    pub fn f(&self, r: f64) -> f64 {
        -self.tau * self.u(r) + self.f_surface
    }

    /// Areal radius at proper distance s from the centre.
    pub fn r_of_proper(&self, s: f64) -> Result<f64> {
        if s <= R0 {
            return Ok(s.max(0.0));
        }
        let s_max = self.proper(self.r_max);
        if s > s_max {
            return Err(Error::Domain(format!("proper distance {s} beyond the integrated range {s_max}")));
        }
        find_root(|r| self.proper(r) - s, R0, self.r_max, 1e-13).ok_or_else(|| Error::Data("proper distance inversion failed".into()))
    }
}

/// Ray-by-ray comparison of a 2-D solution against a TOV profile.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TovComparison {
    pub sup_diff: f64,
    /// (zeta, sup |u_2d - u_tov| on that ray)
    pub rays: Vec<(f64, f64)>,
    pub r_max: f64,
}

/// Compares u along rays z = r zeta, varpi = r sqrt(1 - zeta^2), r <= r_max,
/// parametrised by radial proper distance int e^{K'-F'} dr (the TOV side uses
/// its own proper distance). Meaningful for a non-rotating solution.
pub fn tov_compare(mb: &MetricBundle, tov: &TovProfile, r_max: f64, zetas: &[f64]) -> Result<TovComparison> {
    let h = mb.u.grid.h;
    let steps = (4.0 * r_max / h).ceil() as usize;
    let dr = r_max / steps as f64;
    let mut rays = Vec::with_capacity(zetas.len());
    for &zeta in zetas {
        let sn = (1.0 - zeta * zeta).max(0.0).sqrt();
        let weight = |r: f64| {
            let (v, z) = (r * sn, r * zeta);
            (mb.k_p.interp(v, z) - mb.f_p.interp(v, z)).exp()
        };
        let mut s = 0.0;
        let mut prev = weight(0.0);
        let mut worst = (mb.u.interp(0.0, 0.0) - tov.u(0.0)).abs();
        for j in 1..=steps {
            let r = j as f64 * dr;
            let w = weight(r);
            s += 0.5 * (prev + w) * dr;
            prev = w;
            let rt = tov.r_of_proper(s)?;
            worst = worst.max((mb.u.interp(r * sn, r * zeta) - tov.u(rt)).abs());
        }
        rays.push((zeta, worst));
    }
    let sup_diff = rays.iter().fold(0.0f64, |a, r| a.max(r.1));
    Ok(TovComparison { sup_diff, rays, r_max })
}
