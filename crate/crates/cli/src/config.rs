//! Resolved run configuration, echoed into every JSON summary so any
//! artifact can be reproduced from its own header.

use std::path::PathBuf;

use serde::Serialize;
use sturmian_core::contfrac::{parse_digit_spec, ContinuedFraction};

use crate::error::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Fully resolved configuration of a run: defaults applied, list flags
/// parsed, thread cap read. Serialized verbatim as the reproducibility
/// header of JSON outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub alpha: String,
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    pub resolution: f64,
    pub rho: f64,
    pub max_steps: usize,
    pub escape_threshold: f64,
    pub beta: f64,
    pub grid: usize,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub threads: usize,
}

impl RunConfig {
    /// Parses the digit specification; a bad string is a usage error.
    pub fn digits(&self) -> Result<ContinuedFraction, AppError> {
        parse_digit_spec(&self.alpha)
            .map_err(|e| AppError::Usage(format!("--alpha {:?}: {e}", self.alpha)))
    }

    /// Validates the numeric fields every command relies on.
    pub fn validate(&self) -> Result<(), AppError> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(AppError::Usage("--lambda must be finite and >= 0".into()));
        }
        if !(self.resolution > 0.0) || !self.resolution.is_finite() {
            return Err(AppError::Usage("--resolution must be positive".into()));
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(AppError::Usage("--rho must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(AppError::Usage("--max-steps must be at least 1".into()));
        }
        if !(self.escape_threshold > 2.0) || !self.escape_threshold.is_finite() {
            return Err(AppError::Usage(
                "--escape-threshold must be finite and > 2".into(),
            ));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(AppError::Usage("--beta must be positive".into()));
        }
        if self.grid < 2 {
            return Err(AppError::Usage("--grid must be at least 2".into()));
        }
        if let Some(list) = &self.lambda_list {
            if list.is_empty() {
                return Err(AppError::Usage("--lambda-list must not be empty".into()));
            }
            for &l in list {
                if !(l >= 0.0) || !l.is_finite() {
                    return Err(AppError::Usage(
                        "--lambda-list entries must be finite and >= 0".into(),
                    ));
                }
            }
            if list.windows(2).any(|w| w[1] > w[0]) {
                return Err(AppError::Usage(
                    "--lambda-list must be sorted in descending order".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Parses a comma-separated coupling list.
pub fn parse_lambda_list(s: &str) -> Result<Vec<f64>, AppError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| AppError::Usage(format!("bad coupling value {tok:?} in --lambda-list")))
        })
        .collect()
}
