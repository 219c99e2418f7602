//! Command-line front-end: JSON/CSV formats, fixtures, the verify suites
//! and the subcommand runners behind the `nonent` binary.

pub mod commands;
pub mod fixtures;
pub mod formats;
pub mod output;
pub mod suites;

use std::fmt;

use nonent_core::{Error, RngSeed, Tolerance};
use serde::Serialize;

pub const TOOL: &str = "nonent";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_UNITARY: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Exit-code mapping shared by all commands: non-unitary couplings exit 3,
/// hypothesis and POVM violations exit 4, everything else is bad input.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotUnitary { .. } => EXIT_NOT_UNITARY,
            Error::SliceHypothesis { .. } | Error::InvalidPovm(_) => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        };
        let message = match &e {
            Error::NotUnitary { deviation } => format!("coupling is not unitary (unitarity defect {deviation:e})"),
            Error::SliceHypothesis {
                input,
                index,
                second_coefficient,
            } => format!(
                "slice hypothesis violated at basis index {index}: image of {input} is entangled \
                 (second Schmidt coefficient {second_coefficient:e})"
            ),
            other => other.to_string(),
        };
        Self { code, message }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Global options shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: Tolerance,
    pub seed: RngSeed,
    pub dims: Option<(usize, usize)>,
    pub steps: usize,
    pub samples: Option<usize>,
    pub format: Format,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            seed: RngSeed::DEFAULT,
            dims: None,
            steps: nonent_core::dynamics::DEFAULT_STEPS,
            samples: None,
            format: Format::Json,
        }
    }
}

/// Fields every report starts with.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub claim: &'static str,
    pub tol: f64,
    pub seed: u64,
}

impl Meta {
    pub fn new(claim: &'static str, settings: &Settings) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            claim,
            tol: settings.tol.eps,
            seed: settings.seed.0,
        }
    }
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}
