/// T_mn - g_mn T/2 from the four-velocity of rigid rotation in the static frame.
pub fn stress_oracle(f: f64, k: f64, l: f64, m: f64, oc: f64, e: f64, p: f64) -> [f64; 4] {
    let norm = f - 2.0 * oc * k - oc * oc * l;
    let u0 = 1.0 / norm.sqrt();
    let lo = [u0 * (f - k * oc), u0 * (-k - l * oc)];
    let trace = e - 3.0 * p;
    let g = [f, -k, -l, -m.exp()];
    let t = |a: f64, b: f64, gab: f64| (e + p) * a * b - p * gab - 0.5 * gab * trace;
    [t(lo[0], lo[0], g[0]), t(lo[0], lo[1], g[1]), t(lo[1], lo[1], g[2]), t(0.0, 0.0, g[3])]
}
