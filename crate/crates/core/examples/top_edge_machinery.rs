//! The top edge: F3, F3', G3 and the root x0.
use thetakit::proofcheck::{f3_at_half, root_x0, sign_scan, ClaimedSign, FunctionId, ProofContext};

fn main() -> thetakit::Result<()> {
    for t in [0.05, 0.5, 5.0] {
        let ctx = ProofContext::new(t)?;
        println!("t = {t}: x0 = {:.12}, F3(1/2) = {:.6e}", root_x0(&ctx, 1e-15)?, f3_at_half(&ctx.ed).to_f64());
        for (f, sign) in [
            (FunctionId::F3, ClaimedSign::Positive),
            (FunctionId::F3Prime, ClaimedSign::Negative),
            (FunctionId::G3, ClaimedSign::Negative),
        ] {
            let r = sign_scan(f, &ctx, sign, (0.0, 0.5), 512, 1e-3)?;
            println!("  {f:<10} {:?}, worst margin {:.3e}", r.status, r.worst_margin);
        }
    }
    Ok(())
}
