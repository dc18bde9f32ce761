//! Signs of higher t-derivatives of the four quotients. Evidence only.
use thetakit::proofcheck::{cm_scan, logspace};
use thetakit::quotients::QuotientSpec;
use thetakit::theta::ThetaIndex;

fn main() -> thetakit::Result<()> {
    let ts = logspace(0.05, 5.0, 50);
    for j in 1..=4 {
        for (u, v) in [(0.1, 0.3), (0.2, 0.8)] {
            let spec = QuotientSpec::strict(ThetaIndex::from_index(j)?, u, v)?;
            let r = cm_scan(&spec, &ts, 6);
            let first = r.violations.first().map(|v| format!(" first at t={:.4} order {}", v.at, v.order.unwrap_or_default())).unwrap_or_default();
            println!("{:<28} {:?} ({} violations){first}", r.function_id, r.status, r.violations.len());
        }
    }
    Ok(())
}
