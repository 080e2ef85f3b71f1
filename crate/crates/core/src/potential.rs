//! Newtonian potentials of axisymmetric sources lifted to R^3, R^4, R^5.
//!
//! The potential f = (1/S_n) int g chi |x - x'|^{2-n} dx' is computed by a
//! conservative finite-volume discretisation of the n-dimensional radial
//! Laplacian on the quarter plane, with Dirichlet data on the two outer edges
//! taken from direct ring-kernel quadrature of the (compactly supported)
//! source. The interior solve diagonalises the z operator (cosine modes) and
//! runs a tridiagonal sweep in varpi per mode.

use crate::error::{Error, Result};
use crate::grid::{axi_laplacian, AxiGrid, Parity, ScalarField};
use crate::math::gauss_legendre;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Smooth step: 1 on [0, xi_in], 0 beyond xi_out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoff {
    pub xi_in: f64,
    pub xi_out: f64,
}

impl Cutoff {
    pub fn new(xi_in: f64, xi_out: f64) -> Result<Self> {
        if !(xi_in > 0.0 && xi_out > xi_in) {
            return Err(Error::Config(format!("cutoff radii must satisfy 0 < {xi_in} < {xi_out}")));
        }
        Ok(Cutoff { xi_in, xi_out })
    }

    /// Plateau at xi_in and support end halfway to the domain edge.
    pub fn for_domain(xi_in: f64, xi0: f64) -> Result<Self> {
        Self::new(xi_in, 0.5 * (xi_in + xi0))
    }

    pub fn eval(&self, eta: f64) -> f64 {
        if eta <= self.xi_in {
            return 1.0;
        }
        if eta >= self.xi_out {
            return 0.0;
        }
        let t = (self.xi_out - eta) / (self.xi_out - self.xi_in);
        let s = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
        let a = s(t);
        a / (a + s(1.0 - t))
    }
}

/// Surface-area constant S_n = 2(n-2) pi^{n/2} / Gamma(n/2).
pub fn s_n(n_dim: usize) -> f64 {
    match n_dim {
        3 => 4.0 * PI,
        4 => 4.0 * PI * PI,
        5 => 8.0 * PI * PI,
        _ => panic!("unsupported dimension {n_dim}"),
    }
}

/// Area of the unit (n-3)-sphere times the angular measure normalisation:
/// int over S^{n-2} of F(cos theta) = c_n int_0^pi F(cos t) sin^{n-3} t dt.
fn c_n(n_dim: usize) -> f64 {
    match n_dim {
        3 => 2.0,
        4 => 2.0 * PI,
        5 => 4.0 * PI,
        _ => unreachable!(),
    }
}

struct AngularRule {
    cos: Vec<f64>,
    wsin: [Vec<f64>; 3],
}

fn angular_rules() -> &'static Vec<AngularRule> {
    static RULES: OnceLock<Vec<AngularRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        [8usize, 16, 32, 64, 128, 256, 512, 1024, 2048]
            .iter()
            .map(|&m| {
                let (x, w) = gauss_legendre(m);
                let th: Vec<f64> = x.iter().map(|&t| 0.5 * PI * (t + 1.0)).collect();
                let w: Vec<f64> = w.iter().map(|&w| 0.5 * PI * w).collect();
                let cos = th.iter().map(|t| t.cos()).collect();
                let s1: Vec<f64> = th.iter().zip(&w).map(|(t, w)| w * t.sin()).collect();
                let s2: Vec<f64> = th.iter().zip(&w).map(|(t, w)| w * t.sin() * t.sin()).collect();
                AngularRule { cos, wsin: [w, s1, s2] }
            })
            .collect()
    })
}

/// J_n(A, B) = int_0^pi sin^{n-3}(t) (A - B cos t)^{-(n-2)/2} dt for A > B >= 0.
/// The Gauss-Legendre order is picked from the Bernstein-ellipse bound for
/// the pole at cos t = A/B, so the rule error sits below 1e-15 relative.
pub fn ring_kernel(n_dim: usize, a: f64, b: f64) -> f64 {
    let q = b / a;
    // 16 points carry the sin^{n-3} weight to roundoff on their own
    let k = if q < 1e-3 {
        1
    } else {
        let rho = 1.0 / q + (1.0 / (q * q) - 1.0).max(0.0).sqrt();
        let need = 1.25 * 36.0 / (2.0 * rho.ln()) + 4.0;
        let mut k = 1;
        let mut m = 16.0;
        while m < need && k < 8 {
            m *= 2.0;
            k += 1;
        }
        k
    };
    let rule = &angular_rules()[k];
    let w = &rule.wsin[n_dim - 3];
    let mut acc = 0.0;
    match n_dim {
        3 => {
            for (c, w) in rule.cos.iter().zip(w) {
                acc += w / (a - b * c).sqrt();
            }
        }
        4 => {
            for (c, w) in rule.cos.iter().zip(w) {
                acc += w / (a - b * c);
            }
        }
        _ => {
            for (c, w) in rule.cos.iter().zip(w) {
                let d = a - b * c;
                acc += w / (d * d.sqrt());
            }
        }
    }
    acc
}

/// Exact integral of varpi^{n-2} over the cell of node i.
fn cell_weight(n_dim: usize, h: f64, i: usize) -> f64 {
    let p = (n_dim - 1) as f64;
    let lo = if i == 0 { 0.0 } else { (i as f64 - 0.5) * h };
    let hi = (i as f64 + 0.5) * h;
    (hi.powf(p) - lo.powf(p)) / p
}

/// Quadrature weights in varpi' for int_0^inf varpi'^{n-2} E(varpi') dvarpi' with E
/// smooth and even. For n = 4 the plain trapezoid rule is spectrally accurate;
/// for odd powers the Euler-Maclaurin endpoint terms at the axis are cancelled
/// by corrections on the first few nodes.
fn varpi_weights(n_dim: usize, h: f64, n: usize) -> Vec<f64> {
    // B_{2k}/(2k) for k = 1..
    const B: [f64; 6] = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0];
    const M: usize = 5;
    let mut c = vec![0.0; M + 1];
    if n_dim != 4 {
        let shift = n_dim - 2;
        let a = DMatrix::from_fn(M, M, |m, i| ((i + 1) as f64).powi((2 * m + shift) as i32));
        let b = nalgebra::DVector::from_fn(M, |m, _| B[m + (shift - 1) / 2]);
        let sol = a.lu().solve(&b).expect("Vandermonde system is regular");
        for i in 0..M {
            c[i + 1] = sol[i];
        }
    }
    (0..n)
        .map(|i| {
            let x = i as f64 * h;
            let corr = if i <= M { c[i] } else { 0.0 };
            h * (1.0 + corr) * x.powi(n_dim as i32 - 2)
        })
        .collect()
}

pub struct PotentialSolver {
    pub grid: AxiGrid,
    pub n_dim: usize,
    pub cutoff: Cutoff,
    chi: Vec<f64>,
    support: Vec<usize>,
    /// support-major boundary matrix: column s holds the boundary response to a unit source at support[s]
    bmat: Vec<f64>,
    nb: usize,
    // varpi operator rows (sub, diag, super) for i = 0..M-1; super of the last row multiplies the edge value
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    lam: Vec<f64>,
    fwd: DMatrix<f64>,
    inv: DMatrix<f64>,
}

impl PotentialSolver {
    pub fn new(grid: AxiGrid, n_dim: usize, cutoff: Cutoff) -> Result<Self> {
        if !(3..=5).contains(&n_dim) {
            return Err(Error::Config(format!("potential dimension must be 3, 4 or 5, got {n_dim}")));
        }
        if cutoff.xi_out >= grid.xi0 - grid.h {
            return Err(Error::Contract(format!(
                "cutoff support ends at {} which reaches the outer edge {}",
                cutoff.xi_out, grid.xi0
            )));
        }
        let n = grid.n;
        let h = grid.h;
        let m = n - 1;
        let mut chi = vec![0.0; grid.len()];
        let mut support = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let r = grid.x(i).hypot(grid.x(j));
                let c = cutoff.eval(r);
                chi[grid.idx(i, j)] = c;
                if c > 0.0 {
                    support.push(grid.idx(i, j));
                }
            }
        }
        // boundary nodes: right edge (i = n-1, all j) then top edge (j = n-1, i < n-1)
        let bnodes: Vec<(usize, usize)> =
            (0..n).map(|j| (n - 1, j)).chain((0..n - 1).map(|i| (i, n - 1))).collect();
        let nb = bnodes.len();
        let pref = c_n(n_dim) / s_n(n_dim);
        let vw = varpi_weights(n_dim, h, n);
        let bmat: Vec<f64> = support
            .par_iter()
            .flat_map_iter(|&s| {
                let (i2, j2) = (s / n, s % n);
                let vp = grid.x(i2);
                let zp = grid.x(j2);
                let wgt = pref * vw[i2] * h;
                bnodes
                    .iter()
                    .map(move |&(i, j)| {
                        let v = grid.x(i);
                        let z = grid.x(j);
                        let a0 = v * v + vp * vp;
                        let b = 2.0 * v * vp;
                        let mut k = ring_kernel(n_dim, a0 + (z - zp) * (z - zp), b);
                        if j2 > 0 {
                            k += ring_kernel(n_dim, a0 + (z + zp) * (z + zp), b);
                        }
                        wgt * k
                    })
                    .collect::<Vec<f64>>()
            })
            .collect();

        let p = (n_dim - 2) as f64;
        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        for i in 0..m {
            let vol = cell_weight(n_dim, h, i) * h;
            let wp = ((i as f64 + 0.5) * h).powf(p);
            let wm = if i == 0 { 0.0 } else { ((i as f64 - 0.5) * h).powf(p) };
            sub[i] = wm / vol;
            sup[i] = wp / vol;
            diag[i] = -(wm + wp) / vol;
        }
        let lam: Vec<f64> = (0..m)
            .map(|k| {
                let th = (k as f64 + 0.5) * PI / m as f64;
                (2.0 * th.cos() - 2.0) / (h * h)
            })
            .collect();
        let cmat = DMatrix::from_fn(m, m, |j, k| ((k as f64 + 0.5) * PI / m as f64 * j as f64).cos());
        let fwd = cmat.clone().try_inverse().ok_or_else(|| Error::Data("cosine basis is singular".into()))?;
        Ok(PotentialSolver {
            grid,
            n_dim,
            cutoff,
            chi,
            support,
            bmat,
            nb,
            sub,
            diag,
            sup,
            lam,
            fwd: fwd.transpose(),
            inv: cmat.transpose(),
        })
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    /// Dirichlet data on the outer edges for the source g (without chi).
    pub fn boundary_values(&self, g: &ScalarField) -> Vec<f64> {
        let mut out = vec![0.0; self.nb];
        for (s, &node) in self.support.iter().enumerate() {
            let v = g.values[node] * self.chi[node];
            if v == 0.0 {
                continue;
            }
            let col = &self.bmat[s * self.nb..(s + 1) * self.nb];
            for (o, c) in out.iter_mut().zip(col) {
                *o += v * c;
            }
        }
        out
    }

    /// The operator K^(n) applied to g.
    pub fn apply(&self, g: &ScalarField) -> Result<ScalarField> {
        if g.grid != self.grid {
            return Err(Error::Contract("source lives on a different grid".into()));
        }
        if g.par_axis != Parity::Even || g.par_eq != Parity::Even {
            return Err(Error::Contract("potential sources must be even in varpi and z".into()));
        }
        let bv = self.boundary_values(g);
        Ok(self.solve_with_boundary(g, &bv))
    }

    /// Interior solve with caller-supplied edge values, ordered as in `boundary_values`:
    /// right edge bottom to top, then top edge from the axis outwards.
    pub fn solve_with_boundary(&self, g: &ScalarField, bv: &[f64]) -> ScalarField {
        let grid = self.grid;
        let n = grid.n;
        let m = n - 1;
        let h2 = grid.h * grid.h;
        let right = &bv[..n];
        let top = &bv[n..];
        let mut rhs = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let k = grid.idx(i, j);
                rhs[(i, j)] = -g.values[k] * self.chi[k];
            }
            rhs[(i, m - 1)] -= top[i] / h2;
        }
        for j in 0..m {
            rhs[(m - 1, j)] -= self.sup[m - 1] * right[j];
        }
        // rows i, columns mode k
        let rhat = &rhs * &self.fwd;
        let mut fhat = DMatrix::<f64>::zeros(m, m);
        let mut cp = vec![0.0; m];
        let mut dp = vec![0.0; m];
        for k in 0..m {
            let lk = self.lam[k];
            // Thomas sweep
            let b0 = self.diag[0] + lk;
            cp[0] = self.sup[0] / b0;
            dp[0] = rhat[(0, k)] / b0;
            for i in 1..m {
                let den = self.diag[i] + lk - self.sub[i] * cp[i - 1];
                cp[i] = if i + 1 < m { self.sup[i] / den } else { 0.0 };
                dp[i] = (rhat[(i, k)] - self.sub[i] * dp[i - 1]) / den;
            }
            fhat[(m - 1, k)] = dp[m - 1];
            for i in (0..m - 1).rev() {
                fhat[(i, k)] = dp[i] - cp[i] * fhat[(i + 1, k)];
            }
        }
        let f = &fhat * &self.inv;
        let mut out = ScalarField::zeros(grid);
        for i in 0..m {
            for j in 0..m {
                out.values[grid.idx(i, j)] = f[(i, j)];
            }
        }
        for j in 0..n {
            out.values[grid.idx(n - 1, j)] = right[j];
        }
        for i in 0..m {
            out.values[grid.idx(i, n - 1)] = top[i];
        }
        out
    }

    /// K g = K^(3) g - (K^(3) g)(O).
    pub fn apply_origin_subtracted(&self, g: &ScalarField) -> Result<ScalarField> {
        let f = self.apply(g)?;
        let f0 = f.values[0];
        Ok(f.map(|v| v - f0))
    }

    /// The source multiplied by chi, as a field.
    pub fn cut(&self, g: &ScalarField) -> ScalarField {
        ScalarField { values: g.values.iter().zip(&self.chi).map(|(a, b)| a * b).collect(), ..g.clone() }
    }
}

pub fn newtonian_potential(g: &ScalarField, solver: &PotentialSolver) -> Result<ScalarField> {
    solver.apply(g)
}

pub fn origin_subtracted_potential(g: &ScalarField, solver: &PotentialSolver) -> Result<ScalarField> {
    if solver.n_dim != 3 {
        return Err(Error::Contract("origin-subtracted potential is defined for n = 3".into()));
    }
    solver.apply_origin_subtracted(g)
}

/// sup over interior nodes of |Delta^(n) f + g chi| with the centred-difference Laplacian.
pub fn poisson_residual(f: &ScalarField, g: &ScalarField, n_dim: usize, cutoff: &Cutoff) -> Result<f64> {
    let lap = axi_laplacian(f, n_dim)?;
    let grid = f.grid;
    let mut worst = 0.0f64;
    for i in 0..grid.n - 1 {
        for j in 0..grid.n - 1 {
            let k = grid.idx(i, j);
            let r = grid.x(i).hypot(grid.x(j));
            worst = worst.max((lap.values[k] + g.values[k] * cutoff.eval(r)).abs());
        }
    }
    Ok(worst)
}
