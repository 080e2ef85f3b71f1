use rotstar::grid::{AxiGrid, ScalarField};
use rotstar::math::gauss_legendre;

/// Indicator of the unit ball averaged against the bilinear hat of each node
/// with the varpi^{n-2} weight.
pub fn ball_source(grid: AxiGrid, n_dim: usize) -> ScalarField {
    let (x, w) = gauss_legendre(16);
    let h = grid.h;
    ScalarField::from_fn(grid, |v, z| {
        if v.hypot(z) + 1.5 * h <= 1.0 {
            return 1.0;
        }
        if (v - h).max(0.0).hypot((z - h).max(0.0)) >= 1.0 {
            return 0.0;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for side_v in [-1.0, 1.0] {
            for side_z in [-1.0, 1.0] {
                for (xa, wa) in x.iter().zip(&w) {
                    let t = 0.5 * (xa + 1.0);
                    let vv = v + side_v * h * t;
                    if vv < 0.0 {
                        continue;
                    }
                    let wv = wa * (1.0 - t) * vv.powi(n_dim as i32 - 2);
                    for (xb, wb) in x.iter().zip(&w) {
                        let s = 0.5 * (xb + 1.0);
                        let zz = z + side_z * h * s;
                        let ww = wv * wb * (1.0 - s);
                        den += ww;
                        if vv * vv + zz * zz < 1.0 {
                            num += ww;
                        }
                    }
                }
            }
        }
        num / den
    })
}

/// Potential of the unit ball in R^n, from the radial ODE.
pub fn ball_potential(n_dim: usize, r: f64) -> f64 {
    let n = n_dim as f64;
    if r <= 1.0 {
        0.5 / (n - 2.0) - r * r / (2.0 * n)
    } else {
        r.powf(2.0 - n) / (n * (n - 2.0))
    }
}

/// Least-squares slope of log2(error) against refinement level for grids
/// doubling in resolution.
pub fn refinement_slope(errors: &[f64]) -> f64 {
    let m = errors.len() as f64;
    let xs: Vec<f64> = (0..errors.len()).map(|k| k as f64).collect();
    let ys: Vec<f64> = errors.iter().map(|e| -e.abs().log2()).collect();
    let xb = xs.iter().sum::<f64>() / m;
    let yb = ys.iter().sum::<f64>() / m;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xb) * (y - yb)).sum();
    let den: f64 = xs.iter().map(|x| (x - xb) * (x - xb)).sum();
    num / den
}
