//! Run configuration: TOML (or JSON, by extension) with four blocks. Every
//! guard is checked before any compute.

use crate::eos::{EosParams, LambdaProfile};
use crate::error::{Error, Result};
use crate::lane_emden::solve_lane_emden;
use crate::pn::PnOptions;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct EosBlock {
    pub gamma: f64,
    pub a_poly: f64,
    /// Lambda(s) = lambda1 s + lambda2 s^2
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Default for EosBlock {
    fn default() -> Self {
        EosBlock { gamma: 5.0 / 3.0, a_poly: 1.0, lambda1: 0.0, lambda2: 0.0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct StarBlock {
    pub tau: f64,
    pub b: f64,
    /// domain half-width; 2.5 xi1 when absent
    pub xi0: Option<f64>,
    pub b_max: f64,
}

impl Default for StarBlock {
    fn default() -> Self {
        StarBlock { tau: 1e-3, b: 0.02, xi0: None, b_max: 0.05 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsBlock {
    pub grid_n: usize,
    /// Hoelder exponent; min(0.25, (n-1)/2) when absent
    pub alpha: Option<f64>,
    pub tol_inner: f64,
    pub tol_outer: f64,
    pub max_iter_inner: usize,
    pub max_iter_outer: usize,
    pub damping: f64,
    pub workers: Option<usize>,
}

impl Default for NumericsBlock {
    fn default() -> Self {
        let o = PnOptions::default();
        NumericsBlock {
            grid_n: 65,
            alpha: None,
            tol_inner: o.tol_inner,
            tol_outer: o.tol_outer,
            max_iter_inner: o.max_iter_inner,
            max_iter_outer: o.max_iter_outer,
            damping: o.damping,
            workers: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldFormat {
    Csv,
    Bin,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct IoBlock {
    pub output_dir: String,
    pub format: FieldFormat,
}

impl Default for IoBlock {
    fn default() -> Self {
        IoBlock { output_dir: "rotstar-out".into(), format: FieldFormat::Csv }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SweepBlock {
    pub taus: Vec<f64>,
}

impl Default for SweepBlock {
    fn default() -> Self {
        SweepBlock { taus: vec![1e-2, 1e-3, 1e-4] }
    }
}

/// Optional physical scales: lengths in units of `a`, enthalpy in units of `u_o`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct UnitsBlock {
    pub a: f64,
    pub u_o: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub eos: EosBlock,
    pub star: StarBlock,
    pub numerics: NumericsBlock,
    pub io: IoBlock,
    pub sweep: SweepBlock,
    pub units: Option<UnitsBlock>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn eos_params(&self) -> Result<EosParams> {
        let e = &self.eos;
        let lam = if e.lambda1 == 0.0 && e.lambda2 == 0.0 {
            LambdaProfile::zero()
        } else {
            LambdaProfile::linear_quadratic(e.lambda1, e.lambda2)
        };
        // c and G drop out of the dimensionless problem
        EosParams::new(e.a_poly, e.gamma, 1.0, 1.0, lam)
    }

    pub fn n_index(&self) -> f64 {
        1.0 / (self.eos.gamma - 1.0)
    }

    /// xi1 of the spherical Lane-Emden function for this gamma.
    pub fn xi1(&self) -> Result<f64> {
        Ok(solve_lane_emden(self.n_index(), 40.0)?.xi1)
    }

    pub fn xi0(&self) -> Result<f64> {
        match self.star.xi0 {
            Some(x) => Ok(x),
            None => Ok(2.5 * self.xi1()?),
        }
    }

    pub fn pn_options(&self) -> PnOptions {
        let m = &self.numerics;
        let mut o = PnOptions::for_index(self.n_index());
        if let Some(a) = m.alpha {
            o.alpha = a;
        }
        o.tol_inner = m.tol_inner;
        o.tol_outer = m.tol_outer;
        o.max_iter_inner = m.max_iter_inner;
        o.max_iter_outer = m.max_iter_outer;
        o.damping = m.damping;
        o
    }

    /// All guards, each failure naming the rule it enforces.
    pub fn validate(&self) -> Result<()> {
        let g = self.eos.gamma;
        if !(g > 1.2 && g < 2.0) {
            return Err(Error::Config(format!(
                "eos.gamma = {g}: need 6/5 < gamma < 2 so that the polytropic index 1/(gamma-1) lies in (1, 5)"
            )));
        }
        self.eos_params()?;
        let s = &self.star;
        if !(s.tau > 0.0 && s.tau < 1.0) {
            return Err(Error::Config(format!("star.tau = {}: the expansion parameter must satisfy 0 < tau < 1", s.tau)));
        }
        if !(s.b_max > 0.0) {
            return Err(Error::Config(format!("star.b_max = {} must be positive", s.b_max)));
        }
        if !(s.b >= 0.0 && s.b <= s.b_max) {
            return Err(Error::Config(format!("star.b = {}: slow rotation requires 0 <= b <= b_max = {}", s.b, s.b_max)));
        }
        let xi1 = self.xi1()?;
        if let Some(x) = s.xi0 {
            if !(x >= 2.5 * xi1) {
                return Err(Error::Config(format!(
                    "star.xi0 = {x}: the domain must hold the cutoff annulus, xi0 >= 1.25 * 2 xi1 = {}",
                    2.5 * xi1
                )));
            }
        }
        let m = &self.numerics;
        if m.grid_n < 33 {
            return Err(Error::Config(format!("numerics.grid_n = {} is below the minimum of 33", m.grid_n)));
        }
        if let Some(a) = m.alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::Config(format!("numerics.alpha = {a}: the Hoelder exponent must lie in (0, 1)")));
            }
        }
        if !(m.tol_inner > 0.0 && m.tol_outer > 0.0) {
            return Err(Error::Config("numerics tolerances must be positive".into()));
        }
        if m.max_iter_inner == 0 || m.max_iter_outer == 0 {
            return Err(Error::Config("numerics iteration limits must be positive".into()));
        }
        if !(m.damping > 0.0 && m.damping <= 1.0) {
            return Err(Error::Config(format!("numerics.damping = {} must lie in (0, 1]", m.damping)));
        }
        if m.workers == Some(0) {
            return Err(Error::Config("numerics.workers must be at least 1".into()));
        }
        if self.sweep.taus.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
            return Err(Error::Config("every sweep.taus entry must lie in (0, 1)".into()));
        }
        if let Some(u) = &self.units {
            if !(u.a > 0.0 && u.u_o > 0.0) {
                return Err(Error::Config("units.a and units.u_o must be positive".into()));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, output location excluded.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.io.output_dir.clear();
        let json = serde_json::to_string(&c).expect("config serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let t = toml::to_string(&c).unwrap();
        let back: RunConfig = toml::from_str(&t).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
    }

    #[test]
    fn guards_name_the_rule() {
        let mut c = RunConfig::default();
        c.star.b = 0.2;
        let e = c.validate().unwrap_err().to_string();
        assert!(e.contains("b_max"), "{e}");
        let mut c = RunConfig::default();
        c.eos.gamma = 2.5;
        assert!(c.validate().unwrap_err().to_string().contains("polytropic index"));
        let mut c = RunConfig::default();
        c.star.xi0 = Some(5.0);
        assert!(c.validate().unwrap_err().to_string().contains("cutoff annulus"));
        let bad: std::result::Result<RunConfig, _> = toml::from_str("[star]\nspin = 1.0\n");
        assert!(bad.is_err());
    }
}
