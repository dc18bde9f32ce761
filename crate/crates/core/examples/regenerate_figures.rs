//! Writes the six figure tables as CSV into the directory given (default: figures).
use thetakit::cli::{cmd_figures, RunConfig};

fn main() -> thetakit::Result<()> {
    let mut cfg = RunConfig::figures_default();
    cfg.output_dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into()).into();
    for path in cmd_figures(&cfg)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
