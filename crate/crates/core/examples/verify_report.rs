//! Runs the full verification and prints the summary.
use thetakit::cli::{cmd_verify, RunConfig};

fn main() -> thetakit::Result<()> {
    let report = cmd_verify(&RunConfig::verify_default())?;
    println!("{}", report.summary());
    Ok(())
}
