//! Extrapolated endpoint limits of the edge functions.
use thetakit::proofcheck::{limit_estimate, Endpoint, FunctionId, ProofContext};

fn main() -> thetakit::Result<()> {
    let ctx = ProofContext::new(0.5)?;
    for (f, end) in [
        (FunctionId::F2, Endpoint::Half),
        (FunctionId::G2, Endpoint::Zero),
        (FunctionId::G2, Endpoint::Half),
        (FunctionId::F3, Endpoint::Half),
        (FunctionId::G3, Endpoint::Zero),
        (FunctionId::G3, Endpoint::Half),
    ] {
        let est = limit_estimate(f, end, &ctx)?;
        println!("{f} at {end}: {:+.3e} (error estimate {:.1e})", est.value.to_f64(), est.error_estimate);
    }
    Ok(())
}
