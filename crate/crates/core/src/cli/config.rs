use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::proofcheck::{linspace, logspace, DEFAULT_DELTA, DEFAULT_GRID};
use crate::quotients::K_MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "log" => Ok(Spacing::Log),
            "linear" | "lin" => Ok(Spacing::Linear),
            other => Err(Error::Config(format!("unknown spacing `{other}` (expected log or linear)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl TGrid {
    pub fn points(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Log => logspace(self.lo, self.hi, self.count),
            Spacing::Linear => linspace(self.lo, self.hi, self.count),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub t_grid: TGrid,
    pub uv_pairs: Vec<(f64, f64)>,
    pub x_grid_n: usize,
    pub delta: f64,
    pub tol: f64,
    /// Highest derivative order of the monotonicity scan.
    pub order_k: usize,
    /// Fixed t values of the edge scans.
    pub scan_ts: Vec<f64>,
    /// t used by the edge figures.
    pub figure_t: f64,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    /// Record wall-clock times in reports (makes them nondeterministic).
    #[serde(skip)]
    pub timings: bool,
}

pub const STANDARD_UV: [(f64, f64); 4] = [(0.1, 0.3), (0.2, 0.8), (0.45, 0.9), (0.05, 0.95)];

impl Default for RunConfig {
    fn default() -> Self {
        Self::verify_default()
    }
}

impl RunConfig {
    pub fn verify_default() -> Self {
        RunConfig {
            t_grid: TGrid { lo: 0.05, hi: 5.0, count: 50, spacing: Spacing::Log },
            uv_pairs: STANDARD_UV.to_vec(),
            x_grid_n: DEFAULT_GRID,
            delta: DEFAULT_DELTA,
            tol: 1e-10,
            order_k: 6,
            scan_ts: vec![0.05, 0.5, 5.0],
            figure_t: 0.5,
            output_dir: PathBuf::from("."),
            formats: vec![Format::Json],
            timings: false,
        }
    }

    pub fn figures_default() -> Self {
        RunConfig {
            t_grid: TGrid { lo: 0.05, hi: 5.0, count: 200, spacing: Spacing::Log },
            uv_pairs: vec![(0.2, 0.8)],
            formats: vec![Format::Csv],
            ..Self::verify_default()
        }
    }

    pub fn conjecture_default() -> Self {
        Self::verify_default()
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.t_grid;
        if !(g.lo > 0.0 && g.lo.is_finite() && g.hi.is_finite() && g.hi >= g.lo) {
            return Err(Error::Config(format!("t grid needs 0 < lo <= hi, got [{}, {}]", g.lo, g.hi)));
        }
        if g.count == 0 || (g.count == 1 && g.lo != g.hi) {
            return Err(Error::Config(format!("t grid count {} does not fit [{}, {}]", g.count, g.lo, g.hi)));
        }
        if self.uv_pairs.is_empty() {
            return Err(Error::Config("at least one (u, v) pair is required".into()));
        }
        for &(u, v) in &self.uv_pairs {
            if !(0.0 <= u && u < v && v < 1.0) {
                return Err(Error::Config(format!("(u, v) = ({u}, {v}) violates 0 <= u < v < 1")));
            }
        }
        if self.x_grid_n < 2 {
            return Err(Error::Config(format!("x grid needs at least 2 points, got {}", self.x_grid_n)));
        }
        if !(self.delta > 0.0 && self.delta < 0.125) {
            return Err(Error::Config(format!("delta must lie in (0, 1/8), got {}", self.delta)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.order_k > K_MAX {
            return Err(Error::Config(format!("order {} exceeds the cap {K_MAX}", self.order_k)));
        }
        if let Some(t) = self.scan_ts.iter().chain([&self.figure_t]).find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::Config(format!("scan time {t} must be positive")));
        }
        Ok(())
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

/// Parses "u,v" or "u:v".
pub fn parse_uv(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split([',', ':']).map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!("expected u,v but got `{s}`")));
    }
    let num = |p: &str| p.parse::<f64>().map_err(|_| Error::Config(format!("bad number `{p}` in `{s}`")));
    Ok((num(parts[0])?, num(parts[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::verify_default().validate().unwrap();
        RunConfig::figures_default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = RunConfig::verify_default();
        c.uv_pairs = vec![(0.4, 0.4)];
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = RunConfig::verify_default();
        c.t_grid.lo = 0.0;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        assert!(parse_uv("0.1;0.2").is_err());
        assert_eq!(parse_uv("0.1, 0.2").unwrap(), (0.1, 0.2));
    }
}
