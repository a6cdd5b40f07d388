//! Library side of the `fuzzmark` command: input parsing, report documents
//! and SVG rendering.

// `!(x >= 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod input;
pub mod report;
pub mod svg;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Bad data or a failed check; exit status 1.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }
}

impl From<fuzzmark_core::Error> for CliError {
    fn from(e: fuzzmark_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
