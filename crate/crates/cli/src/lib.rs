//! The `crystal` command-line front end.
//!
//! [`execute`] takes an argument vector and returns the exit code together
//! with the rendered report, so the binary and the tests share one code path.

mod commands;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use crystal_core::{CrystalDatum, Error};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub use report::{Check, Report, Status};

#[derive(Debug, Parser)]
#[command(
    name = "crystal",
    version,
    about = "Exact computation with crystalline graded rings"
)]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Master seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of trials for randomized commands.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    /// Largest |A| that exhaustive searches may enumerate.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_size: u128,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Cyclic,
    Skew,
    Mixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the cocycle, normalization and commutation laws of a datum.
    Validate { datum: PathBuf },
    /// Decide the four torsion-freeness conditions separately.
    Torsion { datum: PathBuf },
    /// Multiply two graded elements given as [[g, value], ...].
    Mul {
        datum: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Inverse of the basis element u_g.
    Inverse { datum: PathBuf, g: usize },
    /// Check the inverse identities over the fraction field.
    Lemma14 {
        datum: PathBuf,
        /// Extra coefficient literal to test (repeatable).
        #[arg(long = "sample", allow_hyphen_values = true)]
        samples: Vec<String>,
    },
    /// Ore witness (r', s') with s'·r = r'·s.
    Ore {
        datum: PathBuf,
        #[arg(allow_hyphen_values = true)]
        r: String,
        #[arg(allow_hyphen_values = true)]
        s: String,
        /// Produce the right witness r·s' = s·r' instead.
        #[arg(long)]
        right: bool,
    },
    /// Split a submodule off an A-module by averaging a projection.
    Maschke {
        datum: PathBuf,
        module: PathBuf,
        /// Row vectors spanning the submodule (literal or file).
        submodule: String,
        /// R-linear projection onto the submodule to average (literal or file).
        #[arg(long)]
        projection: Option<String>,
    },
    /// Exhaustive semiprimeness test of a finite graded ring.
    Semiprime { datum: PathBuf },
    /// Validate randomly drawn data from families that satisfy the cocycle law.
    Fuzz {
        /// Supplies the coefficient ring and the group.
        datum: PathBuf,
        #[arg(long, value_enum, default_value_t = FamilyArg::Mixed)]
        family: FamilyArg,
    },
}

/// What a run produced: exit code and the text that goes to stdout.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    /// Usage errors belong on stderr; reports always go to stdout.
    pub to_stderr: bool,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Input(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Core(e) => match e {
                Error::Internal(_) => "internal",
                Error::Parse(_)
                | Error::Shape(_)
                | Error::KindMismatch { .. }
                | Error::IndexOutOfRange { .. } => "malformed",
                Error::InvalidRing(_)
                | Error::InvalidGroup(_)
                | Error::IncompatibleAutomorphism { .. } => "malformed",
                _ => "precondition",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Input(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) struct LoadedDatum {
    pub datum: CrystalDatum,
    pub fingerprint: String,
}

pub(crate) fn load_datum(path: &Path) -> CliResult<LoadedDatum> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let fingerprint = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let v: Value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))?;
    Ok(LoadedDatum {
        datum: CrystalDatum::from_json(&v)?,
        fingerprint,
    })
}

pub(crate) fn read_json_file(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))
}

/// An inline JSON literal, or the contents of a file when the argument names one.
pub(crate) fn json_arg(arg: &str) -> CliResult<Value> {
    match serde_json::from_str(arg) {
        Ok(v) => Ok(v),
        Err(e) => {
            let p = Path::new(arg);
            if p.is_file() {
                read_json_file(p)
            } else {
                Err(CliError::Input(format!(
                    "{arg:?} is neither a JSON literal nor a file: {e}"
                )))
            }
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                output: e.render().to_string(),
                to_stderr: code != 0,
            };
        }
    };
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut report = Report::new(echo);
    if let Err(e) = commands::run(&cli, &mut report) {
        report.exit = e.exit_code();
        report.error = Some(report::ErrorInfo {
            kind: e.kind(),
            message: e.message(),
        });
    }
    let output = if cli.json {
        report.to_json()
    } else {
        report.to_text()
    };
    Outcome {
        code: report.exit,
        output,
        to_stderr: false,
    }
}
