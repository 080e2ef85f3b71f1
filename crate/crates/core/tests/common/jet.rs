//! Second-order jets in (varpi, z) and a generic Christoffel/Ricci evaluator
//! for a metric that depends on x1 = varpi and x3 = z only. Nothing here
//! knows about the Lewis form beyond the four metric components.
#![allow(dead_code)]

use rotstar::grid::{AxiGrid, Parity, ScalarField};
use rotstar::verify::{ricci_components, LewisFields};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, first and second derivatives with respect to (x1, x3).
#[derive(Clone, Copy, Debug, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d3: f64,
    pub d11: f64,
    pub d13: f64,
    pub d33: f64,
}

impl Jet {
    pub fn cst(v: f64) -> Jet {
        Jet { v, ..Jet::default() }
    }

    pub fn var1(v: f64) -> Jet {
        Jet { v, d1: 1.0, ..Jet::default() }
    }

    pub fn var3(v: f64) -> Jet {
        Jet { v, d3: 1.0, ..Jet::default() }
    }

    /// d/dx_a for a in {1, 3}; other indices give 0.
    pub fn d(&self, a: usize) -> f64 {
        match a {
            1 => self.d1,
            3 => self.d3,
            _ => 0.0,
        }
    }

    pub fn dd(&self, a: usize, b: usize) -> f64 {
        match (a, b) {
            (1, 1) => self.d11,
            (1, 3) | (3, 1) => self.d13,
            (3, 3) => self.d33,
            _ => 0.0,
        }
    }

    pub fn exp(self) -> Jet {
        let e = self.v.exp();
        Jet {
            v: e,
            d1: e * self.d1,
            d3: e * self.d3,
            d11: e * (self.d11 + self.d1 * self.d1),
            d13: e * (self.d13 + self.d1 * self.d3),
            d33: e * (self.d33 + self.d3 * self.d3),
        }
    }

    pub fn recip(self) -> Jet {
        let f = self.v;
        let (f2, f3) = (f * f, f * f * f);
        Jet {
            v: 1.0 / f,
            d1: -self.d1 / f2,
            d3: -self.d3 / f2,
            d11: 2.0 * self.d1 * self.d1 / f3 - self.d11 / f2,
            d13: 2.0 * self.d1 * self.d3 / f3 - self.d13 / f2,
            d33: 2.0 * self.d3 * self.d3 / f3 - self.d33 / f2,
        }
    }

    pub fn sqr(self) -> Jet {
        self * self
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d3: self.d3 + o.d3,
            d11: self.d11 + o.d11,
            d13: self.d13 + o.d13,
            d33: self.d33 + o.d33,
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self * -1.0
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d3: self.d3 * o.v + self.v * o.d3,
            d11: self.d11 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d11,
            d13: self.d13 * o.v + self.d1 * o.d3 + self.d3 * o.d1 + self.v * o.d13,
            d33: self.d33 * o.v + 2.0 * self.d3 * o.d3 + self.v * o.d33,
        }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        Jet {
            v: self.v * s,
            d1: self.d1 * s,
            d3: self.d3 * s,
            d11: self.d11 * s,
            d13: self.d13 * s,
            d33: self.d33 * s,
        }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, s: f64) -> Jet {
        Jet { v: self.v + s, ..self }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

fn inv4(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let a = nalgebra::Matrix4::from_fn(|i, j| m[i][j]);
    let b = a.try_inverse().expect("singular metric");
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = b[(i, j)];
        }
    }
    out
}

/// R_mn = d_a G^a_mn - d_n G^a_ma + G^a_mn G^b_ab - G^b_ma G^a_nb for the
/// metric g (components as jets, x0 and x2 cyclic).
pub fn ricci(g: &[[Jet; 4]; 4]) -> [[f64; 4]; 4] {
    let g0: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| g[i][j].v));
    let gi = inv4(&g0);
    // d_l g^{ab} = -g^{ac} d_l g_cd g^{db}
    let dgi: [[[f64; 4]; 4]; 4] = std::array::from_fn(|l| {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut s = 0.0;
                for c in 0..4 {
                    for d in 0..4 {
                        s -= gi[a][c] * g[c][d].d(l) * gi[d][b];
                    }
                }
                s
            })
        })
    });
    // Gamma_{b mn} (lowered) and its derivatives
    let low = |b: usize, m: usize, n: usize| 0.5 * (g[b][n].d(m) + g[b][m].d(n) - g[m][n].d(b));
    let dlow = |l: usize, b: usize, m: usize, n: usize| 0.5 * (g[b][n].dd(l, m) + g[b][m].dd(l, n) - g[m][n].dd(l, b));
    let gam: [[[f64; 4]; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|m| std::array::from_fn(|n| (0..4).map(|b| gi[a][b] * low(b, m, n)).sum()))
    });
    let dgam = |l: usize, a: usize, m: usize, n: usize| -> f64 {
        (0..4).map(|b| dgi[l][a][b] * low(b, m, n) + gi[a][b] * dlow(l, b, m, n)).sum()
    };
    std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let mut r = 0.0;
            for a in 0..4 {
                r += dgam(a, a, m, n) - dgam(n, a, m, a);
                for b in 0..4 {
                    r += gam[a][m][n] * gam[b][a][b] - gam[b][m][a] * gam[a][n][b];
                }
            }
            r
        })
    })
}

/// Lewis metric ds^2 = f dx0^2 - 2k dx0 dx2 - l dx2^2 - e^m (dx1^2 + dx3^2).
pub fn lewis_metric(f: Jet, k: Jet, l: Jet, m: Jet) -> [[Jet; 4]; 4] {
    let z = Jet::default();
    let em = -m.exp();
    [[f, z, -k, z], [z, em, z, z], [-k, z, -l, z], [z, z, z, em]]
}

/// Smooth random Lewis potentials, even in varpi (apart from the factor
/// varpi in Pi) and even in z.
#[derive(Clone, Debug)]
pub struct Manufactured {
    pub c: [f64; 12],
}

impl Manufactured {
    pub fn random<R: rand::Rng>(rng: &mut R) -> Self {
        let mut c = [0.0; 12];
        for v in c.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        Manufactured { c }
    }

    /// (F, K, A, Pi) at (varpi, z).
    pub fn potentials(&self, varpi: f64, z: f64) -> (Jet, Jet, Jet, Jet) {
        let c = &self.c;
        let x = Jet::var1(varpi);
        let y = Jet::var3(z);
        let x2 = x.sqr();
        let y2 = y.sqr();
        let bump = |s: f64, q: f64| (x2 * (-1.0 / (s * s)) + y2 * (-q / (s * s))).exp();
        let f = bump(1.0 + 0.3 * c[0], 1.0 + 0.4 * c[1]) * (0.1 * c[2]) + x2 * (0.02 * c[3]) + (-0.05);
        let k = bump(1.2 + 0.3 * c[4], 1.0) * (0.1 * c[5]) + (y2 * (0.03 * c[6])) + 0.02;
        let a = x2 * (bump(1.0 + 0.2 * c[7], 1.3) * (0.1 * c[8]) + 0.05);
        let pi = x * (bump(1.1, 1.0 + 0.3 * c[9]) * (0.1 * c[10]) + y2 * (0.02 * c[11]) + 1.0);
        (f, k, a, pi)
    }

    /// Lewis fields (f, k, l, m) as jets.
    pub fn lewis(&self, varpi: f64, z: f64) -> (Jet, Jet, Jet, Jet) {
        let (ff, kk, a, pi) = self.potentials(varpi, z);
        let f = (ff * 2.0).exp();
        let k = -(f * a);
        let l = -(f * a * a) + pi * pi / f;
        let m = (kk - ff) * 2.0;
        (f, k, l, m)
    }
}

pub fn lewis_on_grid(m: &Manufactured, grid: AxiGrid) -> LewisFields {
    let mut f = ScalarField::zeros(grid);
    let (mut k, mut l, mut mm, mut pi) = (f.clone(), f.clone(), f.clone(), f.clone());
    for i in 0..grid.n {
        for j in 0..grid.n {
            let idx = grid.idx(i, j);
            let (fj, kj, lj, mj) = m.lewis(grid.x(i), grid.x(j));
            let (.., pij) = m.potentials(grid.x(i), grid.x(j));
            f.values[idx] = fj.v;
            k.values[idx] = kj.v;
            l.values[idx] = lj.v;
            mm.values[idx] = mj.v;
            pi.values[idx] = pij.v;
        }
    }
    LewisFields {
        fp: f.clone(),
        kp: k.clone(),
        f,
        k,
        l,
        m: mm,
        pi: pi.with_parity(Parity::Odd, Parity::Even),
        oc: 0.0,
        defects: [0.0; 3],
    }
}

pub fn oracle_ricci(m: &Manufactured, v: f64, z: f64) -> [f64; 6] {
    let (f, k, l, mm) = m.lewis(v, z);
    let r = ricci(&lewis_metric(f, k, l, mm));
    [r[0][0], r[0][2], r[2][2], r[1][1], r[3][3], r[1][3]]
}

/// Relative sup error of the six components over varpi in [0.25, 2.5], z in [0, 2.5].
pub fn ricci_errors(m: &Manufactured, gn: usize) -> [f64; 6] {
    let grid = AxiGrid::new(3.0, gn).unwrap();
    let rf = ricci_components(&lewis_on_grid(m, grid));
    let comps = [&rf.r00, &rf.r02, &rf.r22, &rf.r11, &rf.r33, &rf.r13];
    let mut err = [0.0f64; 6];
    let mut scale = [0.0f64; 6];
    for i in 0..gn {
        for j in 0..gn {
            let (v, z) = (grid.x(i), grid.x(j));
            if !(0.25..=2.5).contains(&v) || z > 2.5 {
                continue;
            }
            let want = oracle_ricci(m, v, z);
            for c in 0..6 {
                err[c] = err[c].max((comps[c].at(i, j) - want[c]).abs());
                scale[c] = scale[c].max(want[c].abs());
            }
        }
    }
    std::array::from_fn(|c| err[c] / scale[c])
}
