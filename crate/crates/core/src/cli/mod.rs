//! Verification, figure and conjecture commands behind the `thetakit` binary.

mod config;
mod conjecture;
mod figures;
mod report;
mod verify;

pub use config::*;
pub use conjecture::cmd_conjecture;
pub use figures::*;
pub use report::*;
pub use verify::*;

use crate::error::Error;

/// Exit status of a command: 0 pass, 1 verification failure, 2 bad
/// configuration, 3 internal or precision error.
pub fn exit_code(result: &Result<bool, Error>) -> i32 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Error::Config(_)) => 2,
        Err(_) => 3,
    }
}
