//! `--config` JSON file; command-line flags take precedence over its fields.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use spinsqueeze::bargmann::{ComplexMatrixJson, SqueezeMatrix};
use spinsqueeze::io::{complex_from_json, vector_from_json};
use spinsqueeze::numerics::ComplexVector;
use spinsqueeze::propagation::HamiltonianSpec;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub k: Option<u32>,
    #[serde(rename = "A")]
    pub matrix: Option<ComplexMatrixJson>,
    pub w: Option<Vec<[f64; 2]>>,
    pub z: Option<Vec<[f64; 2]>>,
    pub eta: Option<Vec<[f64; 2]>>,
    pub mu: Option<[f64; 2]>,
    pub hamiltonian: Option<HamiltonianSpec>,
    pub t: Option<f64>,
    pub step: Option<f64>,
    pub grid: Option<String>,
    pub k_list: Option<Vec<u32>>,
    pub tol: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub normalize: Option<bool>,
    pub suite: Option<String>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// `flag`, else `config`, else an error naming the option.
pub fn pick<T>(flag: Option<T>, config: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(config).ok_or_else(|| CliError::Config(format!("missing required option {name}")))
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, name: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad JSON for {name}: {e}")))
}

pub fn matrix(flag: Option<&str>, config: Option<ComplexMatrixJson>) -> Result<SqueezeMatrix, CliError> {
    let raw = match flag {
        Some(text) => parse_json::<ComplexMatrixJson>(text, "--matrix")?,
        None => pick(None, config, "--matrix / A")?,
    };
    Ok(SqueezeMatrix::try_from(raw)?)
}

pub fn vector(flag: Option<&str>, config: Option<Vec<[f64; 2]>>, name: &str) -> Result<Option<ComplexVector>, CliError> {
    let raw = match flag {
        Some(text) => Some(parse_json::<Vec<[f64; 2]>>(text, name)?),
        None => config,
    };
    Ok(raw.map(|v| vector_from_json(&v)))
}

pub fn mu(flag: Option<&str>, config: Option<[f64; 2]>) -> Result<Complex64, CliError> {
    match flag {
        Some(text) => Ok(spinsqueeze::io::parse_complex(text)?),
        None => Ok(config.map(complex_from_json).unwrap_or_default()),
    }
}

/// One axis of a grid: `min:max:steps`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.min + h * i as f64).collect()
    }
}

fn parse_axis(s: &str) -> Result<Axis, CliError> {
    let bad = || CliError::Config(format!("grid axis must be min:max:steps, got {s:?}"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let min: f64 = lo.parse().map_err(|_| bad())?;
    let max: f64 = hi.parse().map_err(|_| bad())?;
    let steps: usize = n.parse().map_err(|_| bad())?;
    if steps == 0 || !min.is_finite() || !max.is_finite() || max < min {
        return Err(bad());
    }
    Ok(Axis { min, max, steps })
}

/// `re_axis[,im_axis]`; a single axis is used for both.
pub fn grid(spec: &str) -> Result<(Axis, Axis), CliError> {
    match spec.split_once(',') {
        Some((re, im)) => Ok((parse_axis(re)?, parse_axis(im)?)),
        None => {
            let axis = parse_axis(spec)?;
            Ok((axis, axis))
        }
    }
}

pub fn k_list(spec: &str) -> Result<Vec<u32>, CliError> {
    spec.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| CliError::Config(format!("bad k in list: {p:?}"))))
        .collect()
}
