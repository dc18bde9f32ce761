pub mod error;
pub mod real;
pub mod theta;
pub mod elliptic;
pub mod quotients;
pub mod proofcheck;
pub mod cli;

pub use error::{Error, Result};
pub use real::{PrecisionMode, Real};
