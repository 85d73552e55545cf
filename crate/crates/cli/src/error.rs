use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

/// Failures of a run, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error(transparent)]
    Compute(#[from] bifree::Error),
}

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_SCHEMA: i32 = 4;
pub const EXIT_NO_CONVERGENCE: i32 = 5;
pub const EXIT_DEGENERATE: i32 = 6;
pub const EXIT_INCONSISTENT: i32 = 7;

pub const EXIT_CODE_HELP: &str = "\
Exit codes:
  0  success
  2  usage error or numeric flag out of range
  3  file could not be read or written
  4  input file is not valid JSON or not a valid measure
  5  fixed-point iteration failed (no convergence or half-plane escape)
  6  degenerate evaluation (pole, vanishing denominator, unsupported region)
  7  internal inconsistency (atom check, series inversion, truncation cap)

Errors are reported on stderr as one JSON object:
  {\"error\":{\"kind\":...,\"code\":...,\"message\":...}}";

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self.code() {
            EXIT_USAGE => "usage",
            EXIT_IO => "io",
            EXIT_SCHEMA => "schema",
            EXIT_NO_CONVERGENCE => "no-convergence",
            EXIT_DEGENERATE => "degenerate",
            _ => "inconsistent",
        }
    }

    pub fn code(&self) -> i32 {
        use bifree::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Schema { .. } => EXIT_SCHEMA,
            CliError::Compute(e) => match e {
                E::InvalidMeasure(_) => EXIT_SCHEMA,
                E::InvalidArgument(_) | E::InvalidTime(_) => EXIT_USAGE,
                E::NoConvergence { .. } | E::LeftHalfPlaneEscape { .. } => EXIT_NO_CONVERGENCE,
                E::PoleAtArgument { .. }
                | E::DenominatorNearZero { .. }
                | E::RegionNotSupported { .. } => EXIT_DEGENERATE,
                E::InconsistentAtom { .. } | E::NonInvertible(_) | E::CapExceeded { .. } => {
                    EXIT_INCONSISTENT
                }
            },
        }
    }

    /// Single-line JSON report for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            code: i32,
            message: String,
        }
        #[derive(Serialize)]
        struct Report<'a> {
            error: Body<'a>,
        }
        serde_json::to_string(&Report {
            error: Body {
                kind: self.kind(),
                code: self.code(),
                message: self.to_string(),
            },
        })
        .expect("error report serializes")
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_distinct_per_category() {
        let errs = [
            usage("x"),
            CliError::Io {
                path: "a".into(),
                source: std::io::Error::other("gone"),
            },
            CliError::Schema {
                path: "a".into(),
                message: "bad".into(),
            },
            bifree::Error::NoConvergence {
                iterations: 1,
                residual: 1.0,
            }
            .into(),
            bifree::Error::RegionNotSupported {
                failed: 1,
                total: 1,
            }
            .into(),
            bifree::Error::NonInvertible("x").into(),
        ];
        let codes: Vec<i32> = errs.iter().map(CliError::code).collect();
        assert_eq!(codes, [2, 3, 4, 5, 6, 7]);
        let v: serde_json::Value = serde_json::from_str(&errs[2].to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "schema");
        assert_eq!(v["error"]["code"], 4);
    }
}
