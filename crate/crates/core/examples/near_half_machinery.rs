//! Signs of F2, F2', G2 on the near-half edge and the roots a1 < a2.
use thetakit::proofcheck::{roots, root_residuals, sign_scan, ClaimedSign, FunctionId, ProofContext};

fn main() -> thetakit::Result<()> {
    let ctx = ProofContext::new(0.5)?;
    let rd = roots(&ctx, 1e-15)?;
    let res = root_residuals(&ctx, &rd)?;
    println!("a1 = {:.15}, a2 = {:.15}, residuals {:.1e} {:.1e}", rd.a1, rd.a2, res.a1, res.a2);
    let scans = [
        (FunctionId::F2, ClaimedSign::Negative, (0.0, 0.5)),
        (FunctionId::F2Prime, ClaimedSign::Positive, (0.0, 0.5)),
        (FunctionId::G2, ClaimedSign::Negative, (0.0, rd.a1)),
        (FunctionId::G2, ClaimedSign::Positive, (rd.a2, 0.5)),
        (FunctionId::Nu1, ClaimedSign::Negative, (0.0, 0.5)),
    ];
    for (f, sign, iv) in scans {
        let r = sign_scan(f, &ctx, sign, iv, 512, 1e-3)?;
        println!("{f:<10} {sign:?} on ({:.4}, {:.4}): {:?}, worst margin {:.3e}", iv.0, iv.1, r.status, r.worst_margin);
    }
    Ok(())
}
