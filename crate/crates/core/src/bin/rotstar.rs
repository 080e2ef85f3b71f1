use clap::{Parser, Subcommand};
use rotstar::config::{FieldFormat, RunConfig};
use rotstar::error::{Error, Result};
use rotstar::runner::{self, Line, Output};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "rotstar", version, about = "Slowly rotating relativistic polytropes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// TOML config (JSON when the extension is .json)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory, overrides io.output_dir
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    #[arg(long, global = true)]
    tau: Option<f64>,
    #[arg(long, global = true)]
    b: Option<f64>,
    #[arg(long, global = true, env = "ROTSTAR_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<FieldFormat>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spherical Lane-Emden function for the configured index
    LaneEmden {
        /// polytropic index, overriding eos.gamma
        #[arg(long)]
        n: Option<f64>,
    },
    /// Rotating Newtonian polytrope
    Distorted,
    /// Full relativistic solve with fields, surface and reports
    Solve,
    /// Field-equation residuals for a finished solve
    Verify {
        /// directory written by `solve`
        solve_dir: PathBuf,
    },
    /// Non-rotating solve against the spherical relativistic profile
    TovCompare,
    /// Repeat the solve over sweep.taus and fit scaling slopes
    Sweep,
    /// 1-D slices of a finished solve
    Export {
        solve_dir: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "rays,equator,axis")]
        lines: Vec<Line>,
    },
}

impl Cli {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(n) = self.grid_n {
            cfg.numerics.grid_n = n;
        }
        if let Some(t) = self.tau {
            cfg.star.tau = t;
        }
        if let Some(b) = self.b {
            cfg.star.b = b;
        }
        if let Some(w) = self.workers {
            cfg.numerics.workers = Some(w);
        }
        if let Some(f) = self.format {
            cfg.io.format = f;
        }
        if let Some(o) = &self.out {
            cfg.io.output_dir = o.display().to_string();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = cli.config()?;
    if let Some(w) = cfg.numerics.workers {
        // a pool may already exist in embedded use; that is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let name = match &cli.cmd {
        Cmd::LaneEmden { .. } => "lane-emden",
        Cmd::Distorted => "distorted",
        Cmd::Solve => "solve",
        Cmd::Verify { .. } => "verify",
        Cmd::TovCompare => "tov-compare",
        Cmd::Sweep => "sweep",
        Cmd::Export { .. } => "export",
    };
    if let Cmd::Verify { solve_dir } | Cmd::Export { solve_dir, .. } = &cli.cmd {
        // physics comes from the stored run; only io settings are taken from the command line
        let stored = runner::read_manifest(solve_dir)?.config;
        let io = cfg.io.clone();
        cfg = stored;
        cfg.io = io;
    }
    let mut out = Output::new(&PathBuf::from(&cfg.io.output_dir), cfg.io.format)?;
    let outcome = match &cli.cmd {
        Cmd::LaneEmden { n } => runner::run_lane_emden(&cfg, *n, &mut out).map(|r| {
            println!("n = {}  xi1 = {:.15}  mu1 = {:.15}", r.n_index, r.xi1, r.mu1);
        }),
        Cmd::Distorted => runner::run_distorted(&cfg, &mut out).map(|r| {
            println!(
                "b = {}  iterations = {}  residual = {:.3e}  oblateness = {:.6e}  kernel sigma_min = {:.3e}",
                r.b, r.iterations, r.residual, r.oblateness, r.kernel_sigma_min
            );
        }),
        Cmd::Solve => runner::run_solve(&cfg, &mut out).map(|r| {
            let o = r.outer.as_ref().expect("converged report");
            let res = r.residuals.as_ref().expect("converged report");
            println!(
                "outer iterations = {}  off-collar einstein max = {:.3e}  reduced max = {:.3e}  path defect = {:.3e}",
                o.iterations,
                res.einstein_max().outside_collar(),
                res.reduced_max().outside_collar(),
                res.path_defect
            );
        }),
        Cmd::Verify { solve_dir } => runner::run_verify(solve_dir, &mut out).map(|r| {
            println!("off-collar einstein max = {:.3e}  reduced max = {:.3e}", r.einstein_max().outside_collar(), r.reduced_max().outside_collar());
        }),
        Cmd::TovCompare => runner::run_tov_compare(&cfg, &mut out).map(|r| {
            println!("grid_n = {}  sup |u_2d - u_tov| = {:.3e}", r.grid_n, r.comparison.sup_diff);
        }),
        Cmd::Sweep => runner::run_sweep(&cfg, &mut out).map(|r| {
            for (k, v) in r.slopes.iter().chain(&r.spreads) {
                println!("{k:>14} {v:.4}");
            }
        }),
        Cmd::Export { solve_dir, lines } => runner::run_export(solve_dir, lines, &mut out).map(|_| ()),
    };
    match outcome {
        Ok(()) => {
            out.finish(name, &cfg)?;
            Ok(())
        }
        Err(e @ (Error::Diverged { .. } | Error::Degenerate(_))) => {
            // keep whatever was written, including the failure report
            out.finish(name, &cfg)?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("rotstar: {e}");
        std::process::exit(e.exit_code());
    }
}
