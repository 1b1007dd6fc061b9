//! Job configuration shared by all subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schottky::{parse_number, SurfaceDescriptor};

/// Everything a run needs. Read from JSON, then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub surface: Option<String>,
    /// Maximal word length of the cycle expansion.
    pub order: usize,
    /// Newton / cluster tolerance for located zeros.
    pub tol: f64,
    pub delta_tol: f64,
    /// Segment tolerance of the winding quadrature.
    pub seg_tol: f64,
    /// Evaluation points `[re, im]` for `zeta-eval`.
    pub s_points: Vec<[f64; 2]>,
    /// `Re λ` window for `resonances`.
    pub window: Option<[f64; 2]>,
    pub beta_tilde: Vec<f64>,
    /// Absolute strip width, used instead of `beta_tilde` when set.
    pub beta: Option<f64>,
    pub im_top: f64,
    pub r_start: f64,
    pub r_grid: Option<String>,
    pub local_window: Option<f64>,
    pub pressure_grid: String,
    pub fit_range: Option<[f64; 2]>,
    pub envelope_interval: Option<[f64; 2]>,
    pub mollifier_window: f64,
    pub delta: Option<f64>,
    pub dimension: usize,
    pub beta_tilde_grid: String,
    pub beta_grid: Option<String>,
    pub input: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            surface: None,
            order: 12,
            tol: 1e-10,
            delta_tol: 1e-12,
            seg_tol: 1e-3,
            s_points: Vec::new(),
            window: None,
            beta_tilde: Vec::new(),
            beta: None,
            im_top: 0.1,
            r_start: 0.0,
            r_grid: None,
            local_window: None,
            pressure_grid: "0:1:0.05".into(),
            fit_range: None,
            envelope_interval: None,
            mollifier_window: 0.05,
            delta: None,
            dimension: 2,
            beta_tilde_grid: "0:1:0.05".into(),
            beta_grid: None,
            input: None,
            out_dir: PathBuf::from("out"),
            cache_dir: None,
        }
    }
}

impl JobConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn surface_descriptor(&self) -> Result<SurfaceDescriptor> {
        self.surface
            .as_deref()
            .ok_or_else(|| Error::Config("a surface is required (e.g. --surface three_funnel:7,7,7)".into()))?
            .parse()
    }

    /// Checks tolerances, orders and grids, and that the output directory is writable.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol", self.tol),
            ("delta_tol", self.delta_tol),
            ("seg_tol", self.seg_tol),
            ("mollifier_window", self.mollifier_window),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(1..=24).contains(&self.order) {
            return Err(Error::Config(format!("order must lie in 1..=24, got {}", self.order)));
        }
        if self.dimension < 2 {
            return Err(Error::Config(format!("dimension must be at least 2, got {}", self.dimension)));
        }
        if !self.im_top.is_finite() || !self.r_start.is_finite() {
            return Err(Error::Config("im_top and r_start must be finite".into()));
        }
        parse_grid(&self.pressure_grid)?;
        parse_grid(&self.beta_tilde_grid)?;
        if let Some(g) = &self.r_grid {
            parse_grid(g)?;
        }
        if let Some(g) = &self.beta_grid {
            parse_grid(g)?;
        }
        fs::create_dir_all(&self.out_dir).map_err(|e| Error::io(&self.out_dir, e))?;
        let probe = self.out_dir.join(".write_probe");
        fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
        fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
    }
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::Config(format!("bad grid `{text}`: {why}"));
    let values: Vec<f64> = if text.contains(':') {
        let parts = text.split(':').map(parse_number).collect::<Result<Vec<f64>>>().map_err(|_| bad("not a number"))?;
        let [a, b, h] = parts[..] else { return Err(bad("expected start:stop:step")) };
        if !(h > 0.0) || !(b >= a) {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        if n > 10_000_000 {
            return Err(bad("too many points"));
        }
        (0..=n).map(|k| a + k as f64 * h).collect()
    } else {
        text.split(',').map(|t| parse_number(t.trim())).collect::<Result<_>>().map_err(|_| bad("not a number"))?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("empty or non-finite"));
    }
    Ok(values)
}

/// Parses `a,b`.
pub fn parse_pair(text: &str) -> Result<[f64; 2]> {
    let v = text.split(',').map(|t| parse_number(t.trim())).collect::<Result<Vec<f64>>>();
    match v.as_deref() {
        Ok([a, b]) => Ok([*a, *b]),
        _ => Err(Error::Config(format!("expected two comma-separated numbers, got `{text}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0:1:0.05").unwrap().len(), 21);
        assert_eq!(parse_grid("0.4, 0.7").unwrap(), vec![0.4, 0.7]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert_eq!(parse_pair("0,50").unwrap(), [0.0, 50.0]);
        assert!(parse_pair("1").is_err());
    }

    #[test]
    fn config_json() {
        let c: JobConfig = serde_json::from_str(r#"{"surface": "three_funnel:7,7,7", "order": 10}"#).unwrap();
        assert_eq!(c.order, 10);
        assert_eq!(c.tol, 1e-10);
        assert!(serde_json::from_str::<JobConfig>(r#"{"ordr": 10}"#).is_err());
        let dir = tempfile::tempdir().unwrap();
        let mut c = c;
        c.out_dir = dir.path().join("o");
        c.validate().unwrap();
        c.tol = 0.0;
        assert!(c.validate().is_err());
    }
}
