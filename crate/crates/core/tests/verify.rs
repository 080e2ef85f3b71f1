mod common;

use common::fluid::stress_oracle;
use common::jet::{lewis_on_grid, oracle_ricci, ricci_errors, Jet, Manufactured};
use common::ode::lane_emden_rk4;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotstar::eos::EosParams;
use rotstar::grid::{AxiGrid, Parity, ScalarField};
use rotstar::lane_emden::*;
use rotstar::pn::*;
use rotstar::potential::{Cutoff, PotentialSolver};
use rotstar::verify::*;
use std::sync::Arc;

#[test]
fn ricci_matches_brute_force_christoffel_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_slope = f64::INFINITY;
    for trial in 0..20 {
        let m = Manufactured::random(&mut rng);
        let coarse = ricci_errors(&m, 65);
        let fine = ricci_errors(&m, 129);
        for c in 0..6 {
            assert!(fine[c] < 5e-3, "trial {trial} {}: relative error {:e}", EINSTEIN_NAMES[c], fine[c]);
            let slope = (coarse[c] / fine[c]).log2();
            assert!(slope >= 1.7, "trial {trial} {}: slope {slope} ({:e} -> {:e})", EINSTEIN_NAMES[c], coarse[c], fine[c]);
            worst_slope = worst_slope.min(slope);
        }
    }
    assert!(worst_slope.is_finite());
}

#[test]
fn oracle_satisfies_pi_identity() {
    // (e^m/Pi)(l R00 - 2k R02 - f R22) = Pi_11 + Pi_33
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = Manufactured::random(&mut rng);
        for &(v, z) in &[(0.4, 0.1), (1.0, 0.7), (1.9, 1.3)] {
            let (f, k, l, mm) = m.lewis(v, z);
            let (.., pi) = m.potentials(v, z);
            let r = oracle_ricci(&m, v, z);
            let lhs = mm.v.exp() / pi.v * (l.v * r[0] - 2.0 * k.v * r[1] - f.v * r[2]);
            let rhs = pi.d11 + pi.d33;
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "{lhs} {rhs}");
        }
    }
}

#[test]
fn ricci_pi_identity_on_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let m = Manufactured::random(&mut rng);
    let err = |gn: usize| {
        let grid = AxiGrid::new(3.0, gn).unwrap();
        let lf = lewis_on_grid(&m, grid);
        let rf = ricci_components(&lf);
        let mut e = 0.0f64;
        for i in 0..gn {
            for j in 0..gn {
                let (v, z) = (grid.x(i), grid.x(j));
                if !(0.25..=2.5).contains(&v) || z > 2.5 {
                    continue;
                }
                let (.., pi) = m.potentials(v, z);
                let k = grid.idx(i, j);
                let lhs = lf.m.values[k].exp() / lf.pi.values[k]
                    * (lf.l.values[k] * rf.r00.values[k] - 2.0 * lf.k.values[k] * rf.r02.values[k] - lf.f.values[k] * rf.r22.values[k]);
                e = e.max((lhs - pi.d11 - pi.d33).abs());
            }
        }
        e
    };
    let (a, b) = (err(65), err(129));
    assert!((a / b).log2() >= 1.7, "{a:e} {b:e}");
}

#[test]
fn flat_space_is_ricci_flat() {
    let grid = AxiGrid::new(3.0, 33).unwrap();
    let z = ScalarField::zeros(grid);
    let pi = ScalarField::from_fn(grid, |v, _| v).with_parity(Parity::Odd, Parity::Even);
    let lf = LewisFields {
        f: z.map(|_| 1.0),
        k: z.clone(),
        l: pi.zip_map(&pi, |a, b| a * b).with_parity(Parity::Even, Parity::Even),
        m: z.clone(),
        fp: z.map(|_| 1.0),
        kp: z.clone(),
        pi,
        oc: 0.0,
        defects: [0.0; 3],
    };
    let r = ricci_components(&lf);
    for c in [&r.r00, &r.r02, &r.r22, &r.r11, &r.r33, &r.r13] {
        assert!(c.sup() <= 1e-10, "{}", c.sup());
    }
}

#[test]
fn jet_arithmetic_matches_closed_forms() {
    let x = Jet::var1(0.7);
    let y = Jet::var3(-0.4);
    let g = (x * y).exp() / (x * x + 1.0);
    let (xv, yv) = (0.7f64, -0.4f64);
    let e = (xv * yv).exp();
    let d = xv * xv + 1.0;
    let want_d13 = {
        // d/dx d/dy [e^{xy}/(1+x^2)] = e^{xy}(1 + xy)/(1+x^2) - 2x * x e^{xy}/(1+x^2)^2
        e * (1.0 + xv * yv) / d - 2.0 * xv * xv * e / (d * d)
    };
    assert!((g.v - e / d).abs() < 1e-15);
    assert!((g.d13 - want_d13).abs() < 1e-14);
    assert!((g.d33 - xv * xv * e / d).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn stress_matches_four_velocity_form(
        fp in -0.05f64..0.0, ap in -0.3f64..0.0, pi in 0.05f64..3.0, oc in 0.0f64..0.08,
        kk in -0.05f64..0.05, rho in 0.0f64..1.0, pres in 0.0f64..0.5, tau in 1e-4f64..1e-1,
    ) {
        let (fs, as_) = static_point(fp, ap, pi, oc).unwrap();
        let lp = lewis_point(fs, as_, kk, fp, ap, pi);
        let s = stress_point(lp.f, lp.k, lp.l, lp.m, pi, lp.fp, rho, pres, tau, oc);
        let want = stress_oracle(lp.f, lp.k, lp.l, lp.m, oc, 2.0 * tau * rho, 2.0 * tau * tau * pres);
        let got = [s.t00, s.t02, s.t22, s.t11];
        let scale = want.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        for c in 0..4 {
            prop_assert!((got[c] - want[c]).abs() <= 1e-12 * scale, "component {c}: {} vs {}", got[c], want[c]);
        }
        // trace identity and the frame identity
        let p = 2.0 * tau * tau * pres;
        let lhs = lp.l * s.t00 - 2.0 * lp.k * s.t02 - lp.f * s.t22;
        let sc37 = (lp.l * s.t00).abs() + (2.0 * lp.k * s.t02).abs() + (lp.f * s.t22).abs();
        prop_assert!((lhs - 2.0 * p * pi * pi).abs() <= 1e-10 * sc37.max(1e-300));
        let a = (lp.k + oc * lp.l) * s.t00;
        let b = (lp.f + oc * oc * lp.l) * s.t02;
        let c = oc * (lp.f - oc * lp.k) * s.t22;
        prop_assert!((a + b + c).abs() <= 1e-10 * (a.abs() + b.abs() + c.abs()).max(1e-300));
    }
}

struct Setup {
    bg: Background,
    sol: PnSolvers,
    eos: EosParams,
}

fn setup(b: f64, gn: usize) -> Setup {
    let n = 1.5;
    let le = solve_lane_emden(n, 20.0).unwrap();
    let xi0 = 2.5 * le.xi1;
    let grid = AxiGrid::new(xi0, gn).unwrap();
    let k3 = Arc::new(PotentialSolver::new(grid, 3, Cutoff::for_domain(2.0 * le.xi1, xi0).unwrap()).unwrap());
    let dle = solve_distorted(b, n, &k3, &DistortedOptions::default()).unwrap();
    let bg = newtonian_background(&dle, &k3).unwrap();
    let sol = PnSolvers::new(k3, &bg).unwrap();
    let eos = EosParams::polytrope(1.0, 1.0 + 1.0 / n, 1.0, 1.0).unwrap();
    Setup { bg, sol, eos }
}

#[test]
fn dust_reduces_pi_equation_to_harmonicity() {
    let s = setup(0.0, 33);
    let par = PnParams::new(&s.eos, 1e-3, 0.0).unwrap();
    let mut mb = assemble_metric(&PnState::zeros(s.bg.theta.grid), &s.bg, &par).unwrap();
    mb.pres = mb.pres.map(|_| 0.0);
    let eps = 1e-3;
    mb.pi = ScalarField::from_fn(mb.pi.grid, |v, z| v + eps * (v * v * v - 3.0 * v * z * z)).with_parity(Parity::Odd, Parity::Even);
    let red = reduced_residuals(&mb, par.tau);
    let mask = RegionMask::new(&mb.u, s.bg.xi1);
    assert!(mask.sup(&red[2]).interior <= 1e-9, "{:?}", mask.sup(&red[2]));
    // a non-harmonic Pi is detected
    mb.pi = ScalarField::from_fn(mb.pi.grid, |v, _| v + eps * v * v * v).with_parity(Parity::Odd, Parity::Even);
    let red = reduced_residuals(&mb, par.tau);
    assert!(mask.sup(&red[2]).interior > 1.0);
}

#[test]
fn zero_state_reduced_residual_is_newtonian_poisson_residual() {
    let s = setup(0.02, 33);
    let zero = PnState::zeros(s.bg.theta.grid);
    let sup_a = |tau: f64| {
        let par = PnParams::new(&s.eos, tau, 0.02).unwrap();
        let mb = assemble_metric(&zero, &s.bg, &par).unwrap();
        let red = reduced_residuals(&mb, tau);
        RegionMask::new(&mb.u, s.bg.xi1).sup(&red[0]).interior
    };
    let (a, b) = (sup_a(1e-4), sup_a(1e-5));
    let slope = (a / b).log10();
    assert!((slope - 1.0).abs() < 0.1, "{a:e} {b:e}");
    assert!(b < 1e-3);
}

#[test]
fn residuals_survive_frame_round_trip() {
    let s = setup(0.04, 33);
    let par = PnParams::new(&s.eos, 1e-2, 0.04).unwrap();
    let mut st = PnState::zeros(s.bg.theta.grid);
    st.w = s.bg.theta.map(|t| 0.3 * t);
    let mb = to_static_frame(&assemble_metric(&st, &s.bg, &par).unwrap()).unwrap();
    let (f, a) = (mb.f.clone().unwrap(), mb.a.clone().unwrap());
    let mut back = mb.clone();
    for k in 0..f.values.len() {
        let (fp, ap) = corotating_point(f.values[k], a.values[k], mb.pi.values[k], mb.oc).unwrap();
        back.f_p.values[k] = fp;
        back.a_p.values[k] = ap;
    }
    let back = to_static_frame(&back).unwrap();
    let ein = |m: &MetricBundle| {
        let lf = lewis_fields(m).unwrap();
        einstein_residuals(&ricci_components(&lf), &stress_components(m, &lf, par.tau), par.tau)
    };
    for (x, y) in ein(&mb).iter().zip(&ein(&back)) {
        assert!(x.sub(y).sup() <= 1e-8 * x.sup().max(1e-12), "{:e}", x.sub(y).sup());
    }
    for (x, y) in reduced_residuals(&mb, par.tau).iter().zip(&reduced_residuals(&back, par.tau)) {
        assert!(x.sub(y).sup() <= 1e-8 * x.sup().max(1e-12));
    }
}

fn analytic_gradient(grid: AxiGrid, bump: f64) -> VGradient {
    let v1 = ScalarField::from_fn(grid, |v, z| {
        let e = (-(v * v + z * z) / 4.0).exp();
        e * (0.6 * v - 0.5 * v * (1.0 + 0.3 * v * v)) + bump * v * (-((v - 1.0).powi(2) + z * z) / 0.2).exp()
    })
    .with_parity(Parity::Odd, Parity::Even);
    let v3 = ScalarField::from_fn(grid, |v, z| -0.5 * z * (-(v * v + z * z) / 4.0).exp() * (1.0 + 0.3 * v * v))
        .with_parity(Parity::Even, Parity::Odd);
    let zero = ScalarField::zeros(grid);
    VGradient {
        lead1: zero.clone(),
        lead3: zero.clone(),
        r_d: zero.clone(),
        r_e: zero,
        v1,
        v3,
        grad_pi2_min: 1.0,
    }
}

fn disk_mask(grid: AxiGrid, r: f64) -> Vec<bool> {
    (0..grid.len()).map(|k| grid.x(k / grid.n).hypot(grid.x(k % grid.n)) <= r).collect()
}

#[test]
fn path_defect_of_a_gradient_is_second_order() {
    let d = |gn: usize| {
        let grid = AxiGrid::new(6.0, gn).unwrap();
        path_independence(&analytic_gradient(grid, 0.0), &disk_mask(grid, 5.0)).unwrap()
    };
    let (a, b) = (d(33), d(65));
    assert!(b < 1e-3, "{b:e}");
    assert!((a / b).log2() >= 1.7, "{a:e} {b:e}");
}

#[test]
fn path_defect_grows_with_a_non_gradient_bump() {
    let grid = AxiGrid::new(6.0, 129).unwrap();
    let mask = disk_mask(grid, 5.0);
    let d = |bump: f64| path_independence(&analytic_gradient(grid, bump), &mask).unwrap();
    let (d0, d1, d2) = (d(0.0), d(1e-3), d(2e-3));
    assert!(d1 > 10.0 * d0, "{d0:e} {d1:e}");
    let ratio = (d2 - d0) / (d1 - d0);
    assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
}

#[test]
fn tov_newtonian_limit() {
    let eos = EosParams::polytrope(1.0, 5.0 / 3.0, 1.0, 1.0).unwrap();
    let (xi1, _) = lane_emden_rk4(1.5, 1e-4);
    let gap = |tau: f64| {
        let t = tov_oracle(&rotstar::eos::DimEos::new(&eos, tau), 1.0, 10.0).unwrap();
        (t.radius - xi1).abs() / xi1
    };
    let (a, b) = (gap(1e-3), gap(1e-4));
    assert!(a < 1e-2);
    assert!(((a / b).log10() - 1.0).abs() < 0.1, "{a:e} {b:e}");
}

#[test]
fn tov_pressure_decreases_to_surface() {
    let eos = EosParams::polytrope(1.0, 5.0 / 3.0, 1.0, 1.0).unwrap();
    let d = rotstar::eos::DimEos::new(&eos, 1e-2);
    let t = tov_oracle(&d, 1.0, 10.0).unwrap();
    let mut last = f64::INFINITY;
    for j in 0..400 {
        let r = t.radius * j as f64 / 400.0;
        let p = d.point(t.u(r)).pres;
        assert!(p < last, "r = {r}");
        last = p;
    }
    assert!(tov_oracle(&d, -1.0, 10.0).is_err());
    assert!(tov_oracle(&d, 1.0, 1.0).is_err());
}

#[test]
fn nonrotating_solution_matches_tov() {
    let sup = |gn: usize| {
        let s = setup(0.0, gn);
        let par = PnParams::new(&s.eos, 1e-3, 0.0).unwrap();
        let (st, _) = outer_solve(&s.bg, &par, &s.sol, &PnOptions::for_index(1.5)).unwrap();
        let mb = assemble_metric(&st, &s.bg, &par).unwrap();
        let tov = tov_oracle(&par.eos, mb.u.values[0], 2.5 * s.bg.xi1).unwrap();
        let r = 2.0 * s.bg.xi1 - 3.0 * mb.u.grid.h;
        tov_compare(&mb, &tov, r, &[0.0, 0.5, 1.0]).unwrap().sup_diff
    };
    let (a, b) = (sup(33), sup(65));
    assert!(((a / b).log2() - 2.0).abs() < 0.3, "{a:e} {b:e}");
}

#[test]
fn solution_residuals_refine() {
    let rep = |gn: usize| {
        let s = setup(0.02, gn);
        let par = PnParams::new(&s.eos, 1e-3, 0.02).unwrap();
        let (st, _) = outer_solve(&s.bg, &par, &s.sol, &PnOptions::for_index(1.5)).unwrap();
        verify_solution(&st, &s.bg, &par).unwrap().report
    };
    let (a, b) = (rep(33), rep(65));
    for r in [&a, &b] {
        assert!(r.trace_identity <= 1e-10 && r.frame_identity <= 1e-10);
        assert!(r.lewis_defects.iter().all(|d| *d <= 1e-12));
        assert!(r.bernoulli_spread <= 1e-8);
    }
    for (x, y) in a.einstein.iter().chain(&a.reduced).zip(b.einstein.iter().chain(&b.reduced)) {
        for (p, q) in [(x.1.interior, y.1.interior), (x.1.vacuum, y.1.vacuum)] {
            assert!((p / q).log2() >= 1.0, "{}: {p:e} -> {q:e}", x.0);
        }
    }
}
