//! The vacuum boundary r = R(zeta) of a solved enthalpy field, zeta = z/r,
//! its monotonicity along rays and the sign of the normal derivative there.

use crate::error::{Error, Result};
use crate::grid::{Deriv, ScalarField};
use crate::lane_emden::{ray_root, zeta_nodes};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceCurve {
    /// Chebyshev nodes from the pole (1) to the equator (0)
    pub zeta: Vec<f64>,
    pub r: Vec<f64>,
    pub dr_dzeta: Vec<f64>,
    /// sqrt(1 - zeta^2) dR/dzeta = -dR/dtheta
    pub dr_dtheta: Vec<f64>,
    /// outward normal derivative of u on the surface
    pub du_dn: Vec<f64>,
}

/// u_r and (1 - zeta^2) u_zeta at (r, zeta) from the gradient fields.
fn polar_gradient(uv: &ScalarField, uz: &ScalarField, r: f64, zeta: f64) -> (f64, f64) {
    let s = (1.0 - zeta * zeta).max(0.0).sqrt();
    let (gv, gz) = (uv.interp(r * s, r * zeta), uz.interp(r * s, r * zeta));
    (s * gv + zeta * gz, r * s * (s * gz - zeta * gv))
}

/// Derivative of samples on a non-uniform grid, second order. The last node
/// is the equator, where R is even in zeta.
fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let three = |i0: usize, at: usize| {
        let (x0, x1, x2) = (x[i0], x[i0 + 1], x[i0 + 2]);
        let t = x[at];
        y[i0] * (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + y[i0 + 1] * (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
            + y[i0 + 2] * (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
    };
    let mut d = vec![0.0; n];
    d[0] = three(0, 0);
    for i in 1..n - 1 {
        d[i] = three(i - 1, i);
    }
    if x[n - 1] == 0.0 {
        d[n - 1] = 0.0;
    } else {
        d[n - 1] = three(n - 3, n - 1);
    }
    d
}

/// R(zeta) on the Chebyshev nodes, searched on (0, r_hi].
pub fn find_boundary(u: &ScalarField, r_hi: f64) -> Result<SurfaceCurve> {
    let zeta = zeta_nodes();
    let r = zeta
        .iter()
        .map(|&z| {
            ray_root(u, z, r_hi).map_err(|e| {
                Error::Data(format!("boundary not found on the ray zeta={z} within r <= {r_hi}: {e}"))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let dr_dzeta = derivative(&zeta, &r);
    let dr_dtheta = zeta.iter().zip(&dr_dzeta).map(|(z, d)| (1.0 - z * z).max(0.0).sqrt() * d).collect();
    let uv = u.derive(Deriv::DVarpi);
    let uz = u.derive(Deriv::DZ);
    let du_dn = (0..zeta.len())
        .map(|k| {
            let (ur, uzeta) = polar_gradient(&uv, &uz, r[k], zeta[k]);
            let rr = r[k];
            let w = (1.0 - zeta[k] * zeta[k]) * dr_dzeta[k] * dr_dzeta[k] / (rr * rr);
            (ur - dr_dzeta[k] * uzeta / (rr * rr)) / (1.0 + w).sqrt()
        })
        .collect();
    Ok(SurfaceCurve { zeta, r, dr_dzeta, dr_dtheta, du_dn })
}

/// min of -du/dr over rays at the Chebyshev nodes, sampled at r = h/2, h, ... <= r_max.
/// A positive value means every ray crosses zero at most once.
pub fn check_monotone(u: &ScalarField, r_max: f64) -> f64 {
    let uv = u.derive(Deriv::DVarpi);
    let uz = u.derive(Deriv::DZ);
    let step = 0.5 * u.grid.h;
    let m = (r_max / step).floor() as usize;
    let mut worst = f64::INFINITY;
    for z in zeta_nodes() {
        for k in 1..=m {
            let (ur, _) = polar_gradient(&uv, &uz, k as f64 * step, z);
            worst = worst.min(-ur);
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VacuumCheck {
    pub min: f64,
    pub max: f64,
    /// every sample finite and strictly negative
    pub pass: bool,
}

pub fn physical_vacuum_check(surface: &SurfaceCurve) -> VacuumCheck {
    let min = surface.du_dn.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = surface.du_dn.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    VacuumCheck { min, max, pass: min.is_finite() && max < 0.0 }
}

impl SurfaceCurve {
    /// max - min of the normal derivative over zeta.
    pub fn du_dn_variation(&self) -> f64 {
        let c = physical_vacuum_check(self);
        c.max - c.min
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        use std::io::Write;
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "zeta,R,dR_dzeta,dR_dtheta,du_dN")?;
        for k in 0..self.zeta.len() {
            writeln!(w, "{},{},{},{},{}", self.zeta[k], self.r[k], self.dr_dzeta[k], self.dr_dtheta[k], self.du_dn[k])?;
        }
        Ok(())
    }
}
