//! Small numerical kit: cancellation-free exponentials, Gauss-Legendre rules,
//! bracketed root finding and a Dormand-Prince integrator with dense output.

/// e^x - 1 - x without cancellation.
pub fn em1x(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let mut term = x * x / 2.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= x / k;
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// ln(sinh t / t), even in t.
pub fn ln_sinhc(t: f64) -> f64 {
    if t.abs() < 0.3 {
        let t2 = t * t;
        // 2^{2k} B_{2k} / (2k (2k)!)
        const C: [f64; 7] = [
            1.0 / 6.0,
            -1.0 / 180.0,
            1.0 / 2835.0,
            -1.0 / 37800.0,
            1.0 / 467775.0,
            -1.803_670_234_005_331e-7,
            1.566_139_132_276_698_3e-8,
        ];
        let mut acc = 0.0;
        for c in C.iter().rev() {
            acc = acc * t2 + c;
        }
        acc * t2
    } else {
        let a = t.abs();
        // sinh(a)/a >= 1.015 here, far enough from 1 for a plain log
        ((1.0 - (-2.0 * a).exp()) / (2.0 * a)).ln() + a
    }
}

/// ln((e^x - 1)/x), with the x -> 0 limit 0.
pub fn lexpm1c(x: f64) -> f64 {
    0.5 * x + ln_sinhc(0.5 * x)
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Root of `f` in [a, b] given a sign change. Bisection safeguarded secant
/// (Illinois variant); stops when the bracket is shorter than `tol`.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut side = 0i32;
    for _ in 0..200 {
        if (b - a).abs() < tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        let span = b - a;
        if !(c > a.min(b) + 0.01 * span.abs() && c < a.max(b) - 0.01 * span.abs()) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return Some(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Some(0.5 * (a + b))
}

/// One accepted Dormand-Prince step with the data needed for its
/// fourth-order continuous extension.
#[derive(Clone, Debug)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    y0: Vec<f64>,
    r: [Vec<f64>; 4],
}

impl DenseStep {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        (0..self.y0.len())
            .map(|i| {
                self.y0[i] + s * (self.r[0][i] + s1 * (self.r[1][i] + s * (self.r[2][i] + s1 * self.r[3][i])))
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub steps: Vec<DenseStep>,
}

impl OdeSolution {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let k = match self.steps.binary_search_by(|s| s.t0.partial_cmp(&t).unwrap()) {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) => k - 1,
        };
        self.steps[k.min(self.steps.len() - 1)].eval(t)
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().unwrap()
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Adaptive Dormand-Prince 5(4) from `t0` to `t1`. `stop` is checked after
/// every accepted step and ends the integration early when it returns true.
pub fn dopri5<F, S>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    t1: f64,
    rtol: f64,
    atol: f64,
    mut stop: S,
) -> OdeSolution
where
    F: FnMut(f64, &[f64], &mut [f64]),
    S: FnMut(f64, &[f64]) -> bool,
{
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    rhs(t, &y, &mut k[0]);
    let mut h = (t1 - t0).abs().min(1e-3) * (t1 - t0).signum();
    let mut out = OdeSolution { t: vec![t], y: vec![y.clone()], steps: Vec::new() };
    let mut err_prev: f64 = 1e-4;
    while (t1 - t) * h.signum() > 0.0 {
        if (t + h - t1) * h.signum() > 0.0 {
            h = t1 - t;
        }
        macro_rules! stage {
            ($dst:expr, $c:expr, $($a:expr, $ki:expr),*) => {{
                for i in 0..n {
                    tmp[i] = y[i] + h * (0.0 $(+ $a * k[$ki][i])*);
                }
                let (head, tail) = k.split_at_mut($dst);
                let _ = head;
                rhs(t + $c * h, &tmp, &mut tail[0]);
            }};
        }
        stage!(1, C2, A21, 0);
        stage!(2, C3, A31, 0, A32, 1);
        stage!(3, C4, A41, 0, A42, 1, A43, 2);
        stage!(4, C5, A51, 0, A52, 1, A53, 2, A54, 3);
        stage!(5, 1.0, A61, 0, A62, 1, A63, 2, A64, 3, A65, 4);
        let mut ynew = vec![0.0; n];
        for i in 0..n {
            ynew[i] = y[i] + h * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
        }
        {
            let (head, tail) = k.split_at_mut(6);
            let _ = head;
            rhs(t + h, &ynew, &mut tail[0]);
        }
        let mut err: f64 = 0.0;
        for i in 0..n {
            let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = atol + rtol * y[i].abs().max(ynew[i].abs());
            err = err.max((e / sc).abs());
        }
        if err <= 1.0 || h.abs() < 1e-14 {
            let mut r = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
            for i in 0..n {
                let dy = ynew[i] - y[i];
                let bspl = h * k[0][i] - dy;
                r[0][i] = dy;
                r[1][i] = bspl;
                r[2][i] = dy - h * k[6][i] - bspl;
                r[3][i] = h
                    * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
            }
            out.steps.push(DenseStep { t0: t, h, y0: y.clone(), r });
            t += h;
            y = ynew;
            k.swap(0, 6);
            out.t.push(t);
            out.y.push(y.clone());
            if stop(t, &y) {
                break;
            }
            // PI step-size control
            let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
            h *= fac.clamp(0.2, 5.0);
            err_prev = err.max(1e-4);
        } else {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
    }
    out
}

/// Outcome of a Krylov solve.
#[derive(Clone, Debug)]
pub struct GmresReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Restarted GMRES for A x = b with A given as a matrix-free product.
/// Stops when ||b - A x||_2 <= tol * ||b||_2.
pub fn gmres<A: FnMut(&[f64]) -> Vec<f64>>(
    mut apply: A,
    b: &[f64],
    x0: &[f64],
    restart: usize,
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, GmresReport) {
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    let mut x = x0.to_vec();
    let mut total = 0;
    loop {
        let ax = apply(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(a, c)| a - c).collect();
        let beta = norm(&r);
        if beta <= tol * bnorm || total >= max_iter {
            return (x, GmresReport { iterations: total, residual: beta / bnorm, converged: beta <= tol * bnorm });
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|a| a / beta).collect()];
        let mut hcol: Vec<Vec<f64>> = Vec::new();
        let (mut cs, mut sn): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
        let mut g = vec![beta];
        let mut k = 0;
        while k < restart && total < max_iter {
            let mut w = apply(&v[k]);
            let mut hk = vec![0.0; k + 2];
            // modified Gram-Schmidt, twice
            for _ in 0..2 {
                for (j, vj) in v.iter().enumerate() {
                    let d: f64 = w.iter().zip(vj).map(|(a, c)| a * c).sum();
                    hk[j] += d;
                    for (wi, vi) in w.iter_mut().zip(vj) {
                        *wi -= d * vi;
                    }
                }
            }
            let wn = norm(&w);
            hk[k + 1] = wn;
            for j in 0..k {
                let t = cs[j] * hk[j] + sn[j] * hk[j + 1];
                hk[j + 1] = -sn[j] * hk[j] + cs[j] * hk[j + 1];
                hk[j] = t;
            }
            let den = hk[k].hypot(hk[k + 1]);
            let (c, s) = if den == 0.0 { (1.0, 0.0) } else { (hk[k] / den, hk[k + 1] / den) };
            cs.push(c);
            sn.push(s);
            hk[k] = den;
            hk[k + 1] = 0.0;
            g.push(-s * g[k]);
            g[k] *= c;
            hcol.push(hk);
            total += 1;
            k += 1;
            if g[k].abs() <= tol * bnorm || wn == 0.0 {
                break;
            }
            v.push(w.iter().map(|a| a / wn).collect());
        }
        // back substitution
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for j in i + 1..k {
                acc -= hcol[j][i] * y[j];
            }
            y[i] = acc / hcol[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&v[j]) {
                *xi += yj * vi;
            }
        }
    }
}
