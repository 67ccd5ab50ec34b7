//! Command-line front end for `waug-core`: file formats, canonical reports and
//! subcommand dispatch.
//!
//! Exit codes: `0` when every certified check in the report passed, `1` when a
//! property or certificate failed (the report records why), `2` for input,
//! resource and IO errors (no report is written).

pub mod cli;
pub mod io;
pub mod report;

/// Environment override for the ball-size cap.
pub const BALL_CAP_ENV: &str = "WAUG_BALL_CAP";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Exit 2.
    #[error("{0}")]
    Input(String),
    /// Exit 1, with a report.
    #[error("{0}")]
    Failure(String),
}

impl From<waug_core::Error> for CliError {
    fn from(e: waug_core::Error) -> Self {
        match e {
            waug_core::Error::Certificate(_) | waug_core::Error::NonZeroAugmentation(_) => {
                CliError::Failure(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
