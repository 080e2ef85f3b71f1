/// Classical RK4 on the Lane-Emden system in the variable s = r^2 near the
/// centre, plain r elsewhere; returns (xi1, mu1). Independent of the library
/// integrator: fixed step, Hermite root in the crossing step.
pub fn lane_emden_rk4(n: f64, h: f64) -> (f64, f64) {
    let f = |r: f64, y: [f64; 2]| -> [f64; 2] {
        let p = if y[0] > 0.0 { y[0].powf(n) } else { 0.0 };
        [y[1], -p - 2.0 * y[1] / r]
    };
    // Taylor start
    let r0 = h;
    let mut y = [1.0 - r0 * r0 / 6.0 + n * r0.powi(4) / 120.0, -r0 / 3.0 + n * r0.powi(3) / 30.0];
    let mut r = r0;
    loop {
        let k1 = f(r, y);
        let k2 = f(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        let yn = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if yn[0] <= 0.0 {
            // cubic Hermite on [r, r+h] for theta, Newton for its zero
            let (p0, p1, m0, m1) = (y[0], yn[0], y[1] * h, yn[1] * h);
            let herm = |t: f64| {
                let t2 = t * t;
                let t3 = t2 * t;
                (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1
            };
            let dherm = |t: f64| {
                let t2 = t * t;
                (6.0 * t2 - 6.0 * t) * p0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * p1 + (3.0 * t2 - 2.0 * t) * m1
            };
            let mut t = p0 / (p0 - p1);
            for _ in 0..50 {
                t -= herm(t) / dherm(t);
            }
            let xi = r + t * h;
            let slope = dherm(t) / h;
            return (xi, -xi * xi * slope);
        }
        y = yn;
        r += h;
    }
}
