//! Python module `rotstar`: thin wrappers over the runner. Reports come back
//! as plain dicts; fields stay on disk in the output directory.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rotstar::config::RunConfig;
use rotstar::error::Error;
use rotstar::runner::{self, Output};
use std::path::PathBuf;

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        2 => PyValueError::new_err(e.to_string()),
        4 => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_dict<T: serde::Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn config(path: Option<PathBuf>, grid_n: Option<usize>, tau: Option<f64>, b: Option<f64>) -> Result<RunConfig, Error> {
    let mut c = match path {
        Some(p) => RunConfig::load(&p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = grid_n {
        c.numerics.grid_n = n;
    }
    if let Some(t) = tau {
        c.star.tau = t;
    }
    if let Some(b) = b {
        c.star.b = b;
    }
    c.validate()?;
    Ok(c)
}

/// xi1 and mu1 of the Lane-Emden function of index n.
#[pyfunction]
fn lane_emden(py: Python<'_>, n: f64) -> PyResult<Py<PyAny>> {
    let s = rotstar::lane_emden::solve_lane_emden(n, 40.0).map_err(to_py)?;
    to_dict(py, &serde_json::json!({ "n_index": n, "xi1": s.xi1, "mu1": s.mu1 }))
}

/// Full solve into `out`; returns the solve report.
#[pyfunction]
#[pyo3(signature = (out, config=None, grid_n=None, tau=None, b=None))]
fn solve(py: Python<'_>, out: PathBuf, config: Option<PathBuf>, grid_n: Option<usize>, tau: Option<f64>, b: Option<f64>) -> PyResult<Py<PyAny>> {
    let rep = py
        .detach(|| -> Result<_, Error> {
            let mut cfg = self::config(config, grid_n, tau, b)?;
            cfg.io.output_dir = out.display().to_string();
            let mut o = Output::new(&out, cfg.io.format)?;
            let rep = runner::run_solve(&cfg, &mut o)?;
            o.finish("solve", &cfg)?;
            Ok(rep)
        })
        .map_err(to_py)?;
    to_dict(py, &rep)
}

/// Residual report for a directory written by `solve`.
#[pyfunction]
fn verify(py: Python<'_>, solve_dir: PathBuf, out: PathBuf) -> PyResult<Py<PyAny>> {
    let rep = py
        .detach(|| -> Result<_, Error> {
            let mut cfg = runner::read_manifest(&solve_dir)?.config;
            cfg.io.output_dir = out.display().to_string();
            let mut o = Output::new(&out, cfg.io.format)?;
            let rep = runner::run_verify(&solve_dir, &mut o)?;
            o.finish("verify", &cfg)?;
            Ok(rep)
        })
        .map_err(to_py)?;
    to_dict(py, &rep)
}

#[pymodule(name = "rotstar")]
fn rotstar_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lane_emden, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
