//! Flag/file/environment resolution and CLI error classification.
//!
//! The config file is TOML with optional top-level keys mirroring the long
//! flags (`alpha = "5/2"`, `enn = 4`, `example = 1`, `q_min = 0.5`,
//! `format = "json"`, `stages = ["models"]`, ...). Flags override the file;
//! the file overrides built-in defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use x2susy::exactalg::rational::{int, parse_rational};
use x2susy::models::{ExampleId, Grid};
use x2susy::{Error, Rational};

use crate::{write_out, Format, GridArgs, OutputArgs, ParamArgs};

pub const OUTPUT_DIR_ENV: &str = "X2SUSY_OUTPUT_DIR";
pub const PRECISION_ENV: &str = "X2SUSY_PRECISION";

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// Malformed or missing input detected by the front end.
    Input(String),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    /// 2 for invalid input, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(Error::Domain(_) | Error::Parse(_) | Error::UnsupportedBranch(_)) => 2,
            CliError::Core(_) | CliError::Io(..) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Io(p, e) => write!(f, "cannot write {}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub fn rational(s: &str) -> Result<Rational, CliError> {
    Ok(parse_rational(s)?)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<String>,
    pub enn: Option<u32>,
    pub a1: Option<String>,
    pub a2: Option<String>,
    pub a3: Option<String>,
    pub a4: Option<String>,
    pub c0: Option<String>,
    pub example: Option<u32>,
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub thorough: Option<bool>,
    pub stages: Option<Vec<String>>,
    pub n_max: Option<u32>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub precision: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }
}

pub struct ResolvedParams {
    pub alpha: Rational,
    pub enn: u32,
    pub weights: [Rational; 4],
    pub c0: Rational,
    pub example: Option<u32>,
}

pub struct ResolvedOutput {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub precision: Option<usize>,
}

impl ResolvedOutput {
    pub fn emit(&self, text: &str) -> Result<(), CliError> {
        write_out(self.path.as_ref(), text)
    }
}

pub struct Resolved;

impl Resolved {
    /// Without an example or explicit weights, `a1 = 2` and the rest zero.
    pub fn params(a: &ParamArgs, file: &FileConfig) -> Result<ResolvedParams, CliError> {
        let alpha = a
            .alpha
            .as_ref()
            .or(file.alpha.as_ref())
            .ok_or_else(|| CliError::Input("--alpha is required".into()))?;
        let enn = a
            .enn
            .or(file.enn)
            .ok_or_else(|| CliError::Input("--enn is required".into()))?;
        let flags = [&a.a1, &a.a2, &a.a3, &a.a4];
        let from_file = [&file.a1, &file.a2, &file.a3, &file.a4];
        let any_weight = flags.iter().chain(from_file.iter()).any(|w| w.is_some());
        let example = a.example.or(file.example);
        if example.is_some() && any_weight {
            return Err(CliError::Input("--example fixes a1..a4; do not pass weights with it".into()));
        }
        let mut weights: [Rational; 4] = [int(2), int(0), int(0), int(0)];
        if any_weight {
            for i in 0..4 {
                weights[i] = match flags[i].as_ref().or(from_file[i].as_ref()) {
                    Some(s) => rational(s)?,
                    None => int(0),
                };
            }
        }
        let c0 = match a.c0.as_ref().or(file.c0.as_ref()) {
            Some(s) => rational(s)?,
            None => int(0),
        };
        Ok(ResolvedParams {
            alpha: rational(alpha)?,
            enn,
            weights,
            c0,
            example,
        })
    }

    /// Defaults: `[0.1, 5]` for the rational example, `[-5, 5]` for the
    /// hyperbolic one; 100 points.
    pub fn grid(a: &GridArgs, file: &FileConfig, ex: ExampleId) -> Result<Grid, CliError> {
        let (lo, hi) = match ex {
            ExampleId::Rational => (0.1, 5.0),
            ExampleId::Hyperbolic => (-5.0, 5.0),
        };
        let q_min = a.q_min.or(file.q_min).unwrap_or(lo);
        let q_max = a.q_max.or(file.q_max).unwrap_or(hi);
        let steps = a.steps.or(file.steps).unwrap_or(100);
        Ok(Grid::new(q_min, q_max, steps)?)
    }

    pub fn output(a: &OutputArgs, file: &FileConfig, default: Format) -> Result<ResolvedOutput, CliError> {
        let precision = match a.precision.or(file.precision) {
            Some(p) => Some(p),
            None => match std::env::var(PRECISION_ENV) {
                Ok(v) if !v.trim().is_empty() => Some(v.trim().parse().map_err(|_| {
                    CliError::Input(format!("{PRECISION_ENV} must be a non-negative integer (got {v:?})"))
                })?),
                _ => None,
            },
        };
        let path = a.output.clone().or_else(|| file.output.clone()).map(|p| {
            match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if p.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(p),
                _ => p,
            }
        });
        Ok(ResolvedOutput {
            format: a.format.or(file.format).unwrap_or(default),
            path,
            precision,
        })
    }
}
