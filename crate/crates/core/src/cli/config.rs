//! Sweep configuration, read from a flat TOML document.
//!
//! ```toml
//! r_sq = { min = 0.05, max = 4.0, points = 80 }   # or: lambda = ...
//! n_th = [0.0, 0.5]                               # or: kappa = ...
//! tau = 0.9
//! phi = 0.01
//! pairs = [[0, 1], [1, 1]]
//! out = "sweep.csv"
//! format = "csv"
//! workers = 4
//! verify = true
//! verify_every = 10
//! cutoff = 60
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ngstate::NgParams;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Scalar(f64),
    Values(Vec<f64>),
    Range { min: f64, max: f64, points: usize },
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Axis::Scalar(x) => Ok(vec![*x]),
            Axis::Values(v) if v.is_empty() => Err(Error::Config("empty value list".into())),
            Axis::Values(v) => Ok(v.clone()),
            Axis::Range { points, .. } if *points < 2 => {
                Err(Error::Config(format!("range needs at least 2 points, got {points}")))
            }
            Axis::Range { min, max, points } => {
                let step = (max - min) / (*points - 1) as f64;
                Ok((0..*points).map(|i| if i + 1 == *points { *max } else { min + step * i as f64 }).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub r_sq: Option<Axis>,
    pub lambda: Option<Axis>,
    pub n_th: Option<Axis>,
    pub kappa: Option<Axis>,
    pub tau: Axis,
    pub phi: Axis,
    pub pairs: Vec<(usize, usize)>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    pub workers: Option<usize>,
    #[serde(default)]
    pub verify: bool,
    /// Oracle check on every k-th grid point (1 = all).
    #[serde(default = "default_verify_every")]
    pub verify_every: usize,
    /// Fixed oracle cutoff; automatic escalation when absent.
    pub cutoff: Option<usize>,
}

fn default_verify_every() -> usize {
    1
}

/// One grid point: squeezing given as (r_sq, λ) and thermal part as (n_th, κ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub r_sq: f64,
    pub n_th: f64,
    pub params: NgParams,
    pub phi: f64,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r_sq.is_some() == self.lambda.is_some() {
            return Err(Error::Config("specify exactly one of r_sq and lambda".into()));
        }
        if self.n_th.is_some() == self.kappa.is_some() {
            return Err(Error::Config("specify exactly one of n_th and kappa".into()));
        }
        if self.pairs.is_empty() {
            return Err(Error::Config("pairs must list at least one (m, n)".into()));
        }
        if self.verify_every == 0 {
            return Err(Error::Config("verify_every must be at least 1".into()));
        }
        if let Some(c) = self.cutoff {
            if c < 20 {
                return Err(Error::Config(format!("oracle cutoff {c} < 20")));
            }
        }
        self.grid().map(|_| ())
    }

    /// Cartesian grid, row-major in the order pairs, thermal, tau, squeezing, phi.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        let squeeze: Vec<(f64, f64)> = match (&self.r_sq, &self.lambda) {
            (Some(a), None) => a.values()?.into_iter().map(|r| (r, r.tanh())).collect(),
            (None, Some(a)) => a.values()?.into_iter().map(|l| (l.atanh(), l)).collect(),
            _ => return Err(Error::Config("specify exactly one of r_sq and lambda".into())),
        };
        let thermal: Vec<(f64, f64)> = match (&self.n_th, &self.kappa) {
            (Some(a), None) => a.values()?.into_iter().map(|n| (n, n + 0.5)).collect(),
            (None, Some(a)) => a.values()?.into_iter().map(|k| (k - 0.5, k)).collect(),
            _ => return Err(Error::Config("specify exactly one of n_th and kappa".into())),
        };
        let taus = self.tau.values()?;
        let phis = self.phi.values()?;
        if let Some(bad) = phis.iter().find(|p| !p.is_finite()) {
            return Err(Error::Config(format!("phase {bad} is not finite")));
        }
        let mut out = Vec::new();
        for &(m, n) in &self.pairs {
            for &(n_th, kappa) in &thermal {
                for &tau in &taus {
                    for &(r_sq, lambda) in &squeeze {
                        let params =
                            NgParams::new(lambda, kappa, tau, m, n).map_err(|e| Error::Config(e.to_string()))?;
                        for &phi in &phis {
                            out.push(GridPoint { index: out.len(), r_sq, n_th, params, phi });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}
