//! Uniform quarter-plane grid in (varpi, z), fields with axis/equator parity,
//! finite differences, discrete Holder-norm estimators and gradient quadrature.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiGrid {
    pub xi0: f64,
    pub n: usize,
    pub h: f64,
}

impl AxiGrid {
    pub fn new(xi0: f64, n: usize) -> Result<Self> {
        if n < 33 {
            return Err(Error::Config(format!("grid needs at least 33 points per axis, got {n}")));
        }
        if !(xi0 > 0.0 && xi0.is_finite()) {
            return Err(Error::Config(format!("domain half-width must be positive, got {xi0}")));
        }
        Ok(AxiGrid { xi0, n, h: xi0 / (n - 1) as f64 })
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Grid with twice the resolution on the same domain.
    pub fn refined(&self) -> Self {
        AxiGrid::new(self.xi0, 2 * self.n - 1).unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn times(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deriv {
    DVarpi,
    DZ,
    DVarpiVarpi,
    DZZ,
    DVarpiZ,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub grid: AxiGrid,
    pub values: Vec<f64>,
    pub par_axis: Parity,
    pub par_eq: Parity,
}

impl ScalarField {
    pub fn zeros(grid: AxiGrid) -> Self {
        ScalarField { grid, values: vec![0.0; grid.len()], par_axis: Parity::Even, par_eq: Parity::Even }
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: AxiGrid, f: F) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..grid.n {
            for j in 0..grid.n {
                out.values[grid.idx(i, j)] = f(grid.x(i), grid.x(j));
            }
        }
        out
    }

    pub fn with_parity(mut self, axis: Parity, eq: Parity) -> Self {
        self.par_axis = axis;
        self.par_eq = eq;
        self
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// Value with parity ghosts for indices in [-n+1, n-1].
    #[inline]
    pub fn ghost(&self, i: isize, j: isize) -> f64 {
        let mut s = 1.0;
        let ii = if i < 0 {
            s *= self.par_axis.sign();
            (-i) as usize
        } else {
            i as usize
        };
        let jj = if j < 0 {
            s *= self.par_eq.sign();
            (-j) as usize
        } else {
            j as usize
        };
        s * self.values[self.grid.idx(ii, jj)]
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        ScalarField { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    pub fn zip_map<F: Fn(f64, f64) -> f64>(&self, other: &ScalarField, f: F) -> Self {
        ScalarField {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn derive(&self, which: Deriv) -> ScalarField {
        match which {
            Deriv::DVarpi => self.d1(true),
            Deriv::DZ => self.d1(false),
            Deriv::DVarpiVarpi => self.d2(true),
            Deriv::DZZ => self.d2(false),
            Deriv::DVarpiZ => self.d1(true).d1(false),
        }
    }

    /// Values along one grid line with one ghost on the inner side, so that
    /// line[k + 1] is node k.
    fn line(&self, along_varpi: bool, fixed: usize, buf: &mut Vec<f64>) {
        let g = self.grid;
        buf.clear();
        if along_varpi {
            buf.push(self.par_axis.sign() * self.at(1, fixed));
            buf.extend((0..g.n).map(|i| self.at(i, fixed)));
        } else {
            buf.push(self.par_eq.sign() * self.at(fixed, 1));
            buf.extend_from_slice(&self.values[g.idx(fixed, 0)..g.idx(fixed, 0) + g.n]);
        }
    }

    fn d1(&self, along_varpi: bool) -> ScalarField {
        let g = self.grid;
        let n = g.n;
        let inv = 1.0 / (2.0 * g.h);
        let mut out = ScalarField::zeros(g);
        let mut buf = Vec::with_capacity(n + 1);
        for fixed in 0..n {
            self.line(along_varpi, fixed, &mut buf);
            for k in 0..n {
                let v = if k == n - 1 {
                    (3.0 * buf[k + 1] - 4.0 * buf[k] + buf[k - 1]) * inv
                } else {
                    (buf[k + 2] - buf[k]) * inv
                };
                let idx = if along_varpi { g.idx(k, fixed) } else { g.idx(fixed, k) };
                out.values[idx] = v;
            }
        }
        if along_varpi {
            out.par_axis = self.par_axis.flip();
            out.par_eq = self.par_eq;
        } else {
            out.par_axis = self.par_axis;
            out.par_eq = self.par_eq.flip();
        }
        out
    }

    fn d2(&self, along_varpi: bool) -> ScalarField {
        let g = self.grid;
        let n = g.n;
        let inv = 1.0 / (g.h * g.h);
        let mut out = ScalarField::zeros(g);
        let mut buf = Vec::with_capacity(n + 1);
        for fixed in 0..n {
            self.line(along_varpi, fixed, &mut buf);
            for k in 0..n {
                let v = if k == n - 1 {
                    (2.0 * buf[k + 1] - 5.0 * buf[k] + 4.0 * buf[k - 1] - buf[k - 2]) * inv
                } else {
                    (buf[k + 2] - 2.0 * buf[k + 1] + buf[k]) * inv
                };
                let idx = if along_varpi { g.idx(k, fixed) } else { g.idx(fixed, k) };
                out.values[idx] = v;
            }
        }
        out.par_axis = self.par_axis;
        out.par_eq = self.par_eq;
        out
    }

    /// (1/varpi) dQ/dvarpi for a field even in varpi, with the axis limit Q_{varpi varpi}.
    pub fn over_varpi_dvarpi(&self) -> ScalarField {
        let d1 = self.d1(true);
        let d2 = self.d2(true);
        let g = self.grid;
        let mut out = d1.clone();
        out.par_axis = self.par_axis;
        for i in 0..g.n {
            for j in 0..g.n {
                let k = g.idx(i, j);
                out.values[k] = if i == 0 { d2.values[k] } else { d1.values[k] / g.x(i) };
            }
        }
        out
    }

    /// Bicubic (4x4 Lagrange) interpolation with parity ghosts; (varpi, z) may be
    /// negative, in which case the stored parities are used.
    pub fn interp(&self, varpi: f64, z: f64) -> f64 {
        let mut s = 1.0;
        let (vp, zz) = (varpi.abs(), z.abs());
        if varpi < 0.0 {
            s *= self.par_axis.sign();
        }
        if z < 0.0 {
            s *= self.par_eq.sign();
        }
        let g = self.grid;
        let n = g.n as isize;
        let base = |x: f64| -> (isize, f64) {
            let t = x / g.h;
            let mut i0 = t.floor() as isize - 1;
            if i0 + 3 > n - 1 {
                i0 = n - 4;
            }
            (i0, t)
        };
        let (i0, ti) = base(vp);
        let (j0, tj) = base(zz);
        let wi = lagrange4(ti - i0 as f64);
        let wj = lagrange4(tj - j0 as f64);
        let mut acc = 0.0;
        for a in 0..4 {
            let mut row = 0.0;
            for b in 0..4 {
                row += wj[b] * self.ghost(i0 + a as isize, j0 + b as isize);
            }
            acc += wi[a] * row;
        }
        s * acc
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "varpi,z,value")?;
        let g = self.grid;
        for i in 0..g.n {
            for j in 0..g.n {
                writeln!(w, "{:.17e},{:.17e},{:.17e}", g.x(i), g.x(j), self.at(i, j))?;
            }
        }
        Ok(())
    }

    /// Binary layout: b"AXF1", n as u64 LE, xi0 as f64 LE, two parity bytes, then n*n f64 LE row-major.
    pub fn write_bin(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        w.write_all(b"AXF1")?;
        w.write_all(&(self.grid.n as u64).to_le_bytes())?;
        w.write_all(&self.grid.xi0.to_le_bytes())?;
        w.write_all(&[(self.par_axis == Parity::Odd) as u8, (self.par_eq == Parity::Odd) as u8])?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_bin(path: &Path) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        if buf.len() < 22 || &buf[0..4] != b"AXF1" {
            return Err(Error::Data(format!("{} is not an AXF1 field file", path.display())));
        }
        let n = u64::from_le_bytes(buf[4..12].try_into().unwrap()) as usize;
        let xi0 = f64::from_le_bytes(buf[12..20].try_into().unwrap());
        let par = |b: u8| if b == 1 { Parity::Odd } else { Parity::Even };
        let (pa, pe) = (par(buf[20]), par(buf[21]));
        if buf.len() != 22 + 8 * n * n {
            return Err(Error::Data(format!("{} has a truncated payload", path.display())));
        }
        let values = buf[22..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Ok(ScalarField { grid: AxiGrid::new(xi0, n)?, values, par_axis: pa, par_eq: pe })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut rows = Vec::new();
        for (k, line) in text.lines().enumerate().skip(1) {
            let parts: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Data(format!("line {}: {e}", k + 1)))?;
            if parts.len() != 3 {
                return Err(Error::Data(format!("line {}: expected 3 columns", k + 1)));
            }
            rows.push(parts);
        }
        let n = (rows.len() as f64).sqrt().round() as usize;
        if n * n != rows.len() || n < 2 {
            return Err(Error::Data("csv field is not a square grid".into()));
        }
        let xi0 = rows[rows.len() - 1][0];
        let grid = AxiGrid::new(xi0, n)?;
        Ok(ScalarField { grid, values: rows.iter().map(|r| r[2]).collect(), par_axis: Parity::Even, par_eq: Parity::Even })
    }
}

fn lagrange4(t: f64) -> [f64; 4] {
    // nodes 0,1,2,3
    let (a, b, c, d) = (t, t - 1.0, t - 2.0, t - 3.0);
    [-b * c * d / 6.0, a * c * d / 2.0, -a * b * d / 2.0, a * b * c / 6.0]
}

/// Axisymmetric Laplacian of an n-dimensional lift: Q_vv + ((n-2)/v) Q_v + Q_zz.
pub fn axi_laplacian(field: &ScalarField, n_dim: usize) -> Result<ScalarField> {
    if field.par_axis != Parity::Even {
        return Err(Error::Contract("axisymmetric Laplacian needs a field even in varpi".into()));
    }
    let g = field.grid;
    let d1 = field.derive(Deriv::DVarpi);
    let dvv = field.derive(Deriv::DVarpiVarpi);
    let dzz = field.derive(Deriv::DZZ);
    let c = (n_dim - 2) as f64;
    let mut out = field.clone();
    for i in 0..g.n {
        for j in 0..g.n {
            let k = g.idx(i, j);
            out.values[k] = if i == 0 {
                (1.0 + c) * dvv.values[k] + dzz.values[k]
            } else {
                dvv.values[k] + c * d1.values[k] / g.x(i) + dzz.values[k]
            };
        }
    }
    Ok(out)
}

/// Sampled Holder seminorm: max |f(p)-f(q)|/|p-q|^alpha over node pairs at
/// separations h, 2h, 4h, ... up to xi0/4 along the axes and both diagonals.
pub fn holder_seminorm(field: &ScalarField, alpha: f64) -> f64 {
    let g = field.grid;
    let n = g.n;
    let mut best = 0.0f64;
    let mut m = 1usize;
    while (m as f64) * g.h <= g.xi0 / 4.0 + 1e-12 {
        for &(di, dj) in &[(1isize, 0isize), (0, 1), (1, 1), (1, -1)] {
            let dist = (m as f64) * g.h * ((di * di + dj * dj) as f64).sqrt();
            let inv = dist.powf(-alpha);
            for i in 0..n as isize {
                let i2 = i + di * m as isize;
                if i2 < 0 || i2 >= n as isize {
                    continue;
                }
                for j in 0..n as isize {
                    let j2 = j + dj * m as isize;
                    if j2 < 0 || j2 >= n as isize {
                        continue;
                    }
                    let d = (field.at(i as usize, j as usize) - field.at(i2 as usize, j2 as usize)).abs();
                    best = best.max(d * inv);
                }
            }
        }
        m *= 2;
    }
    best
}

/// Discrete C^{l,alpha} norm: sups of all (varpi,z) derivatives through order l
/// plus the largest order-l seminorm. alpha = 0 gives the plain C^l norm.
pub fn holder_norm(field: &ScalarField, l: usize, alpha: f64) -> f64 {
    let mut levels: Vec<Vec<ScalarField>> = vec![vec![field.clone()]];
    for k in 1..=l {
        let prev = &levels[k - 1];
        let mut next = Vec::new();
        // d_varpi of the first entry, then d_z of every entry: multi-indices without repeats
        next.push(prev[0].derive(Deriv::DVarpi));
        for f in prev {
            next.push(f.derive(Deriv::DZ));
        }
        levels.push(next);
    }
    let mut total = 0.0;
    for lev in &levels {
        for f in lev {
            total += f.sup();
        }
    }
    if alpha > 0.0 {
        total += levels[l].iter().map(|f| holder_seminorm(f, alpha)).fold(0.0, f64::max);
    }
    total
}

/// Cumulative integral along a uniformly sampled line: Simpson on even
/// nodes, a three-point partial rule on odd ones.
fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    let mut k = 0;
    while k + 2 < n {
        out[k + 1] = out[k] + h * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]) / 12.0;
        out[k + 2] = out[k] + h * (f[k] + 4.0 * f[k + 1] + f[k + 2]) / 3.0;
        k += 2;
    }
    if k + 1 < n {
        out[k + 1] = out[k] + h * (-f[k - 1] + 8.0 * f[k] + 5.0 * f[k + 1]) / 12.0;
    }
    out
}

/// F(v, z) = int_0^z g3(0, z') dz' + int_0^v g1(v', z) dv' by composite Simpson.
pub fn quadrature_from_gradient(g1: &ScalarField, g3: &ScalarField) -> Result<ScalarField> {
    if g1.grid != g3.grid {
        return Err(Error::Contract("gradient components live on different grids".into()));
    }
    let g = g1.grid;
    let n = g.n;
    let axis: Vec<f64> = (0..n).map(|j| g3.at(0, j)).collect();
    let base = cumulative_simpson(&axis, g.h);
    let mut out = ScalarField::zeros(g);
    for j in 0..n {
        let line: Vec<f64> = (0..n).map(|i| g1.at(i, j)).collect();
        let c = cumulative_simpson(&line, g.h);
        for i in 0..n {
            out.values[g.idx(i, j)] = base[j] + c[i];
        }
    }
    Ok(out)
}

/// The transposed path: int_0^v g1(v', 0) dv' + int_0^z g3(v, z') dz'.
pub fn quadrature_transposed(g1: &ScalarField, g3: &ScalarField) -> Result<ScalarField> {
    if g1.grid != g3.grid {
        return Err(Error::Contract("gradient components live on different grids".into()));
    }
    let g = g1.grid;
    let n = g.n;
    let eq: Vec<f64> = (0..n).map(|i| g1.at(i, 0)).collect();
    let base = cumulative_simpson(&eq, g.h);
    let mut out = ScalarField::zeros(g);
    for i in 0..n {
        let line: Vec<f64> = (0..n).map(|j| g3.at(i, j)).collect();
        let c = cumulative_simpson(&line, g.h);
        for j in 0..n {
            out.values[g.idx(i, j)] = base[i] + c[j];
        }
    }
    Ok(out)
}
