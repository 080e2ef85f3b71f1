//! Orchestration behind the `rotstar` binary: build the problem from a
//! config, run a pipeline, persist fields and deterministic JSON reports.

use crate::config::{FieldFormat, RunConfig};
use crate::error::{Error, Result};
use crate::grid::{AxiGrid, Deriv, Parity, ScalarField};
use crate::lane_emden::{kernel_sigma_min, solve_distorted, solve_lane_emden, zeta_nodes, DistortedLaneEmden, DistortedOptions};
use crate::pn::{
    assemble_metric, newtonian_background, outer_solve, Background, MetricBundle, OuterReport, PnOptions, PnParams,
    PnSolvers, PnState,
};
use crate::potential::{Cutoff, PotentialSolver};
use crate::surface::{check_monotone, find_boundary, physical_vacuum_check, SurfaceCurve};
use crate::verify::{tov_compare, tov_oracle, verify_solution, ResidualReport, TovComparison, EINSTEIN_NAMES, REDUCED_NAMES};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

pub const MANIFEST: &str = "manifest.json";
const STATE_FIELDS: [&str; 4] = ["w", "y", "x", "v"];

/// Grid, operators, Newtonian background and parameters for one (tau, b).
pub struct Problem {
    pub cfg: RunConfig,
    pub grid: AxiGrid,
    pub dle: DistortedLaneEmden,
    pub bg: Background,
    pub sol: PnSolvers,
    pub par: PnParams,
    pub opts: PnOptions,
}

impl Problem {
    pub fn build(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n_index();
        let xi1 = cfg.xi1()?;
        let xi0 = cfg.xi0()?;
        let grid = AxiGrid::new(xi0, cfg.numerics.grid_n)?;
        let k3 = Arc::new(PotentialSolver::new(grid, 3, Cutoff::for_domain(2.0 * xi1, xi0)?)?);
        let dopts = DistortedOptions { b_max: cfg.star.b_max, ..DistortedOptions::default() };
        let dle = solve_distorted(cfg.star.b, n, &k3, &dopts)?;
        let bg = newtonian_background(&dle, &k3)?;
        let sol = PnSolvers::new(k3, &bg)?;
        let par = PnParams::new(&cfg.eos_params()?, cfg.star.tau, cfg.star.b)?;
        Ok(Problem { cfg: cfg.clone(), grid, dle, bg, sol, par, opts: cfg.pn_options() })
    }

    /// Same background, different tau.
    pub fn with_tau(&self, tau: f64) -> Result<PnParams> {
        PnParams::new(&self.cfg.eos_params()?, tau, self.cfg.star.b)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub build_id: String,
    pub subcommand: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub outputs: Vec<String>,
}

fn build_id() -> String {
    option_env!("ROTSTAR_BUILD_ID").unwrap_or(concat!("v", env!("CARGO_PKG_VERSION"))).to_string()
}

/// Collects the files written by one subcommand.
pub struct Output {
    pub dir: PathBuf,
    pub format: FieldFormat,
    files: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path, format: FieldFormat) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Output { dir: dir.to_path_buf(), format, files: Vec::new() })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        std::fs::write(self.dir.join(name), s)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        std::fs::write(self.dir.join(name), body)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn field(&mut self, name: &str, f: &ScalarField) -> Result<()> {
        let file = field_file(name, self.format);
        match self.format {
            FieldFormat::Csv => f.write_csv(&self.dir.join(&file))?,
            FieldFormat::Bin => f.write_bin(&self.dir.join(&file))?,
        }
        self.files.push(file);
        Ok(())
    }

    pub fn finish(mut self, subcommand: &str, cfg: &RunConfig) -> Result<Vec<String>> {
        let m = Manifest {
            tool: "rotstar".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            build_id: build_id(),
            subcommand: subcommand.into(),
            config_hash: cfg.hash(),
            config: cfg.clone(),
            outputs: self.files.clone(),
        };
        self.json(MANIFEST, &m)?;
        Ok(self.files)
    }
}

fn field_file(name: &str, format: FieldFormat) -> String {
    match format {
        FieldFormat::Csv => format!("{name}.csv"),
        FieldFormat::Bin => format!("{name}.axf"),
    }
}

fn read_field(dir: &Path, name: &str, format: FieldFormat, axis: Parity, eq: Parity) -> Result<ScalarField> {
    let path = dir.join(field_file(name, format));
    let f = match format {
        FieldFormat::Csv => ScalarField::read_csv(&path)?,
        FieldFormat::Bin => ScalarField::read_bin(&path)?,
    };
    Ok(f.with_parity(axis, eq))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(dir.join(MANIFEST))?;
    Ok(serde_json::from_str(&text)?)
}

// ---------------------------------------------------------------- lane-emden

#[derive(Clone, Debug, Serialize)]
pub struct LaneEmdenReport {
    pub n_index: f64,
    pub xi1: f64,
    pub mu1: f64,
}

/// `n_index` overrides the configured gamma; the spherical problem is
/// meaningful for any 0 <= n < 5, not only the rotating-star range.
pub fn run_lane_emden(cfg: &RunConfig, n_index: Option<f64>, out: &mut Output) -> Result<LaneEmdenReport> {
    let n = match n_index {
        Some(n) if (0.0..5.0).contains(&n) => n,
        Some(n) => return Err(Error::Config(format!("n = {n}: the Lane-Emden surface is finite only for 0 <= n < 5"))),
        None => {
            cfg.validate()?;
            cfg.n_index()
        }
    };
    let le = solve_lane_emden(n, 40.0)?;
    let rep = LaneEmdenReport { n_index: n, xi1: le.xi1, mu1: le.mu1 };
    let mut csv = String::from("r,theta,dtheta_dr\n");
    for k in 0..=400 {
        let r = 2.0 * le.xi1 * k as f64 / 400.0;
        let (t, d) = le.eval(r);
        csv.push_str(&format!("{r:.17e},{t:.17e},{d:.17e}\n"));
    }
    out.text("lane_emden_profile.csv", &csv)?;
    out.json("lane_emden.json", &rep)?;
    Ok(rep)
}

// ---------------------------------------------------------------- distorted

#[derive(Clone, Debug, Serialize)]
pub struct DistortedReport {
    pub b: f64,
    pub n_index: f64,
    pub grid_n: usize,
    pub xi1: f64,
    pub iterations: usize,
    pub residual: f64,
    /// (zeta, Xi1(zeta)), pole to equator
    pub xi1_curve: Vec<(f64, f64)>,
    pub oblateness: f64,
    pub monotone_min: f64,
    pub kernel_sigma_min: f64,
    pub kernel_grid_n: usize,
}

pub fn run_distorted(cfg: &RunConfig, out: &mut Output) -> Result<DistortedReport> {
    cfg.validate()?;
    let n = cfg.n_index();
    let xi1 = cfg.xi1()?;
    let xi0 = cfg.xi0()?;
    let grid = AxiGrid::new(xi0, cfg.numerics.grid_n)?;
    let k3 = PotentialSolver::new(grid, 3, Cutoff::for_domain(2.0 * xi1, xi0)?)?;
    let dopts = DistortedOptions { b_max: cfg.star.b_max, ..DistortedOptions::default() };
    let dle = solve_distorted(cfg.star.b, n, &k3, &dopts)?;
    let kp = kernel_sigma_min(cfg.star.b, n, xi0, 33)?;
    let c = &dle.xi1_curve;
    let rep = DistortedReport {
        b: cfg.star.b,
        n_index: n,
        grid_n: grid.n,
        xi1,
        iterations: dle.iterations,
        residual: dle.residual,
        xi1_curve: c.clone(),
        oblateness: c[c.len() - 1].1 / c[0].1 - 1.0,
        monotone_min: check_monotone(&dle.theta, xi0),
        kernel_sigma_min: kp.sigma_min,
        kernel_grid_n: kp.grid_n,
    };
    out.field("theta", &dle.theta)?;
    out.json("distorted.json", &rep)?;
    Ok(rep)
}

// ---------------------------------------------------------------- solve

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub r_equator: f64,
    pub r_pole: f64,
    pub du_dn_min: f64,
    pub du_dn_max: f64,
    pub vacuum_pass: bool,
    pub monotone_min: f64,
    /// max |R(zeta) - Xi1(zeta)|
    pub newtonian_gap: f64,
    pub r_equator_physical: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub status: String,
    pub error: Option<String>,
    pub history: Vec<f64>,
    pub config_hash: String,
    pub grid_n: usize,
    pub h: f64,
    pub tau: f64,
    pub b: f64,
    pub n_index: f64,
    pub xi1: f64,
    pub distorted_iterations: usize,
    pub outer: Option<OuterReport>,
    pub inner_ratio_max: Option<f64>,
    pub sup_w: Option<f64>,
    pub sup_y: Option<f64>,
    pub sup_x: Option<f64>,
    pub lapse_min: Option<f64>,
    pub grad_pi_sq_min: Option<f64>,
    pub residuals: Option<ResidualReport>,
    pub surface: Option<SurfaceSummary>,
}

pub struct Solved {
    pub state: PnState,
    pub outer: OuterReport,
    pub metric: MetricBundle,
    pub surface: SurfaceCurve,
    pub summary: SurfaceSummary,
}

pub fn surface_summary(p: &Problem, u: &ScalarField) -> Result<(SurfaceCurve, SurfaceSummary)> {
    let r_hi = 2.0 * p.bg.xi1;
    let s = find_boundary(u, r_hi)?;
    let newton = find_boundary(&p.bg.theta, r_hi)?;
    let vc = physical_vacuum_check(&s);
    let r_eq = *s.r.last().unwrap();
    let summary = SurfaceSummary {
        r_equator: r_eq,
        r_pole: s.r[0],
        du_dn_min: vc.min,
        du_dn_max: vc.max,
        vacuum_pass: vc.pass,
        monotone_min: check_monotone(u, p.grid.xi0),
        newtonian_gap: s.r.iter().zip(&newton.r).fold(0.0f64, |a, (x, y)| a.max((x - y).abs())),
        r_equator_physical: p.cfg.units.as_ref().map(|un| un.a * r_eq),
    };
    Ok((s, summary))
}

pub fn solve_at(p: &Problem, par: &PnParams) -> Result<Solved> {
    let (state, outer) = outer_solve(&p.bg, par, &p.sol, &p.opts)?;
    let metric = assemble_metric(&state, &p.bg, par)?;
    let (surface, summary) = surface_summary(p, &metric.u)?;
    Ok(Solved { state, outer, metric, surface, summary })
}

fn base_report(p: &Problem, par: &PnParams) -> SolveReport {
    SolveReport {
        status: "converged".into(),
        error: None,
        history: Vec::new(),
        config_hash: p.cfg.hash(),
        grid_n: p.grid.n,
        h: p.grid.h,
        tau: par.tau,
        b: par.b_rot,
        n_index: par.n_index,
        xi1: p.bg.xi1,
        distorted_iterations: p.dle.iterations,
        outer: None,
        inner_ratio_max: None,
        sup_w: None,
        sup_y: None,
        sup_x: None,
        lapse_min: None,
        grad_pi_sq_min: None,
        residuals: None,
        surface: None,
    }
}

fn inner_ratio_max(o: &OuterReport) -> f64 {
    o.inner.iter().flat_map(|r| r.ratios.iter().skip(1)).cloned().fold(0.0, f64::max)
}

/// Full solve; on a convergence failure the report is still written before
/// the error is returned.
pub fn run_solve(cfg: &RunConfig, out: &mut Output) -> Result<SolveReport> {
    let t0 = Instant::now();
    let p = Problem::build(cfg)?;
    let t_bg = t0.elapsed().as_secs_f64();
    let mut rep = base_report(&p, &p.par);
    let solved = match solve_at(&p, &p.par) {
        Ok(s) => s,
        Err(e) => {
            rep.status = "failed".into();
            rep.error = Some(e.to_string());
            if let Error::Diverged { history, .. } = &e {
                rep.history = history.clone();
            }
            out.json("solve_report.json", &rep)?;
            return Err(e);
        }
    };
    let t_solve = t0.elapsed().as_secs_f64();
    let ver = verify_solution(&solved.state, &p.bg, &p.par)?;
    let s = &solved.state;
    rep.inner_ratio_max = Some(inner_ratio_max(&solved.outer));
    rep.sup_w = Some(s.w.sup());
    rep.sup_y = Some(s.y.sup());
    rep.sup_x = Some(s.x.sup());
    rep.lapse_min = Some(solved.metric.lapse_min);
    rep.grad_pi_sq_min = Some(solved.metric.grad_pi_sq_min);
    rep.outer = Some(solved.outer.clone());
    rep.residuals = Some(ver.report.clone());
    rep.surface = Some(solved.summary.clone());
    for (name, f) in STATE_FIELDS.iter().zip([&s.w, &s.y, &s.x, &s.v]) {
        out.field(name, f)?;
    }
    let m = &solved.metric;
    for (name, f) in [("f_prime", &m.f_p), ("k_prime", &m.k_p), ("a_prime", &m.a_p), ("pi", &m.pi), ("u", &m.u), ("theta", &p.bg.theta)] {
        out.field(name, f)?;
    }
    out.json("surface.json", &solved.surface)?;
    solved.surface.write_csv(&out.dir.join("surface.csv"))?;
    out.files.push("surface.csv".into());
    out.json("solve_report.json", &rep)?;
    let timings = serde_json::json!({
        "background_s": t_bg,
        "solve_s": t_solve - t_bg,
        "verify_s": t0.elapsed().as_secs_f64() - t_solve,
    });
    // wall-clock data kept apart so the report is reproducible byte for byte
    std::fs::write(out.dir.join("timings.json"), serde_json::to_string_pretty(&timings)? + "\n")?;
    Ok(rep)
}

// ---------------------------------------------------------------- verify

pub fn load_state(dir: &Path, manifest: &Manifest) -> Result<PnState> {
    let fmt = manifest.config.io.format;
    let [w, y, x, v] = STATE_FIELDS.map(|n| read_field(dir, n, fmt, Parity::Even, Parity::Even));
    Ok(PnState { w: w?, y: y?, x: x?, v: v? })
}

pub fn run_verify(solve_dir: &Path, out: &mut Output) -> Result<ResidualReport> {
    let manifest = read_manifest(solve_dir)?;
    if manifest.subcommand != "solve" {
        return Err(Error::Data(format!("{} holds a '{}' run, not a solve", solve_dir.display(), manifest.subcommand)));
    }
    let p = Problem::build(&manifest.config)?;
    let state = load_state(solve_dir, &manifest)?;
    if state.w.grid != p.grid {
        return Err(Error::Data("stored fields do not match the configured grid".into()));
    }
    let ver = verify_solution(&state, &p.bg, &p.par)?;
    for (name, f) in EINSTEIN_NAMES.iter().zip(&ver.einstein) {
        out.field(&format!("residual_{name}"), f)?;
    }
    for (name, f) in REDUCED_NAMES.iter().zip(&ver.reduced) {
        out.field(&format!("residual_reduced_{name}"), f)?;
    }
    out.json("residual_report.json", &ver.report)?;
    Ok(ver.report)
}

// ---------------------------------------------------------------- tov-compare

#[derive(Clone, Debug, Serialize)]
pub struct TovReport {
    pub tau: f64,
    pub grid_n: usize,
    pub h: f64,
    pub tov_radius: f64,
    pub tov_mass: f64,
    pub comparison: TovComparison,
}

pub fn run_tov_compare(cfg: &RunConfig, out: &mut Output) -> Result<TovReport> {
    let mut cfg = cfg.clone();
    cfg.star.b = 0.0;
    let p = Problem::build(&cfg)?;
    let (state, _) = outer_solve(&p.bg, &p.par, &p.sol, &p.opts)?;
    let mb = assemble_metric(&state, &p.bg, &p.par)?;
    let tov = tov_oracle(&p.par.eos, mb.u.values[0], p.grid.xi0)?;
    let r_max = 2.0 * p.bg.xi1 - 3.0 * p.grid.h;
    let zetas: Vec<f64> = zeta_nodes().into_iter().step_by(16).collect();
    let comparison = tov_compare(&mb, &tov, r_max, &zetas)?;
    let mut csv = String::from("r,proper_distance,u,F\n");
    for k in 0..=400 {
        let r = r_max * k as f64 / 400.0;
        csv.push_str(&format!("{r:.17e},{:.17e},{:.17e},{:.17e}\n", tov.proper(r), tov.u(r), tov.f(r)));
    }
    out.text("tov_profile.csv", &csv)?;
    let rep = TovReport { tau: p.par.tau, grid_n: p.grid.n, h: p.grid.h, tov_radius: tov.radius, tov_mass: tov.mass, comparison };
    out.json("tov_compare.json", &rep)?;
    Ok(rep)
}

// ---------------------------------------------------------------- sweep

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub tau: f64,
    pub sup_w: f64,
    pub sup_x: f64,
    pub sup_y: f64,
    pub v_norm: f64,
    pub lapse_deviation: f64,
    pub surface_gap: f64,
    pub outer_ratio: f64,
    pub inner_ratio_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub b: f64,
    pub grid_n: usize,
    pub rows: Vec<SweepRow>,
    /// least-squares slopes of log(quantity) against log(tau)
    pub slopes: Vec<(String, f64)>,
    /// max/min across tau of the quantities that should stay bounded
    pub spreads: Vec<(String, f64)>,
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn sweep_rows(p: &Problem, taus: &[f64]) -> Result<Vec<SweepRow>> {
    taus.iter()
        .map(|&tau| {
            let par = p.with_tau(tau)?;
            let s = solve_at(p, &par)?;
            Ok(SweepRow {
                tau,
                sup_w: s.state.w.sup(),
                sup_x: s.state.x.sup(),
                sup_y: s.state.y.sup(),
                v_norm: s.outer.v_norm,
                lapse_deviation: (1.0 - s.metric.lapse_min).abs(),
                surface_gap: s.summary.newtonian_gap,
                outer_ratio: s.outer.ratios.first().cloned().unwrap_or(f64::NAN),
                inner_ratio_max: inner_ratio_max(&s.outer),
            })
        })
        .collect()
}

pub fn run_sweep(cfg: &RunConfig, out: &mut Output) -> Result<SweepReport> {
    let p = Problem::build(cfg)?;
    let rows = sweep_rows(&p, &cfg.sweep.taus)?;
    let taus: Vec<f64> = rows.iter().map(|r| r.tau).collect();
    let col = |f: &dyn Fn(&SweepRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let spread = |v: Vec<f64>| {
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    };
    let slopes = vec![
        ("lapse_deviation".to_string(), loglog_slope(&taus, &col(&|r| r.lapse_deviation))),
        ("surface_gap".to_string(), loglog_slope(&taus, &col(&|r| r.surface_gap))),
        ("outer_ratio".to_string(), loglog_slope(&taus, &col(&|r| r.outer_ratio))),
    ];
    let spreads = vec![
        ("sup_w".to_string(), spread(col(&|r| r.sup_w))),
        ("sup_x".to_string(), spread(col(&|r| r.sup_x))),
        ("sup_y".to_string(), spread(col(&|r| r.sup_y))),
        ("v_norm".to_string(), spread(col(&|r| r.v_norm))),
    ];
    let rep = SweepReport { b: cfg.star.b, grid_n: p.grid.n, rows, slopes, spreads };
    let mut csv = String::from("tau,sup_w,sup_x,sup_y,v_norm,lapse_deviation,surface_gap,outer_ratio,inner_ratio_max\n");
    for r in &rep.rows {
        csv.push_str(&format!(
            "{:e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}\n",
            r.tau, r.sup_w, r.sup_x, r.sup_y, r.v_norm, r.lapse_deviation, r.surface_gap, r.outer_ratio, r.inner_ratio_max
        ));
    }
    out.text("sweep.csv", &csv)?;
    out.json("sweep.json", &rep)?;
    Ok(rep)
}

// ---------------------------------------------------------------- export

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Line {
    Rays,
    Equator,
    Axis,
}

pub fn run_export(solve_dir: &Path, lines: &[Line], out: &mut Output) -> Result<Vec<String>> {
    use Parity::{Even, Odd};
    let manifest = read_manifest(solve_dir)?;
    let fmt = manifest.config.io.format;
    let rd = |n: &str, a: Parity| read_field(solve_dir, n, fmt, a, Even);
    let (u, fp, kp, ap, pi) = (rd("u", Even)?, rd("f_prime", Even)?, rd("k_prime", Even)?, rd("a_prime", Even)?, rd("pi", Odd)?);
    let g = u.grid;
    let a_vv = ap.derive(Deriv::DVarpiVarpi);
    let pi_v = pi.derive(Deriv::DVarpi);
    let header = "r,varpi,z,u,F_prime,K_prime,A_prime,A_prime_over_varpi2,Pi_over_varpi\n";
    let mut written = Vec::new();
    let row = |csv: &mut String, r: f64, v: f64, z: f64| {
        let (aq, pq) = if v == 0.0 {
            (0.5 * a_vv.interp(0.0, z), pi_v.interp(0.0, z))
        } else {
            (ap.interp(v, z) / (v * v), pi.interp(v, z) / v)
        };
        csv.push_str(&format!(
            "{r:.17e},{v:.17e},{z:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{aq:.17e},{pq:.17e}\n",
            u.interp(v, z),
            fp.interp(v, z),
            kp.interp(v, z),
            ap.interp(v, z)
        ));
    };
    for line in lines {
        let mut csv = String::from(header);
        let name = match line {
            Line::Equator => {
                for i in 0..g.n {
                    row(&mut csv, g.x(i), g.x(i), 0.0);
                }
                "profile_equator.csv".to_string()
            }
            Line::Axis => {
                for j in 0..g.n {
                    row(&mut csv, g.x(j), 0.0, g.x(j));
                }
                "profile_axis.csv".to_string()
            }
            Line::Rays => {
                csv = format!("zeta,{header}");
                for zeta in zeta_nodes().into_iter().step_by(16) {
                    let s = (1.0 - zeta * zeta).max(0.0).sqrt();
                    for k in 0..g.n {
                        let mut line = String::new();
                        let r = g.x(k);
                        row(&mut line, r, r * s, r * zeta);
                        csv.push_str(&format!("{zeta:.17e},{line}"));
                    }
                }
                "profile_rays.csv".to_string()
            }
        };
        out.text(&name, &csv)?;
        written.push(name);
    }
    Ok(written)
}
