use serde_json::json;

use crate::error::Result;
use crate::proofcheck::{cm_scan, CM_BAND};
use crate::quotients::QuotientSpec;
use crate::theta::ThetaIndex;

use super::config::RunConfig;
use super::report::{run_check, Outcome, VerificationReport};

/// Complete-monotonicity scan for all four quotients. The report is
/// numerical evidence, not a proof.
pub fn cmd_conjecture(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let ts = cfg.t_grid.points();
    let mut checks = Vec::new();
    for j in ThetaIndex::ALL {
        for &(u, v) in &cfg.uv_pairs {
            let Ok(spec) = QuotientSpec::strict(j, u, v) else { continue };
            let target = if matches!(j, ThetaIndex::One | ThetaIndex::Four) { "dS/dt" } else { "S" };
            let claim = format!("EVIDENCE: {target} for S{} completely monotonic up to order {}", j.index(), cfg.order_k);
            let params = json!({ "j": j.index(), "u": u, "v": v, "t_grid": cfg.t_grid, "order_k": cfg.order_k, "band": CM_BAND });
            checks.push(run_check(&format!("cm_s{}_{u}_{v}", j.index()), &claim, params, cfg.timings, || {
                let r = cm_scan(&spec, &ts, cfg.order_k);
                let detail = r
                    .violations
                    .first()
                    .map(|v| format!("first violation: order {} at t = {} value {:e}", v.order.unwrap_or(0), v.at, v.value))
                    .or_else(|| r.errors.first().map(|(t, e)| format!("not evaluated at t = {t}: {e}")));
                Ok(Outcome {
                    worst_margin: Some(r.worst_margin),
                    violations: r.violations.len(),
                    detail,
                })
            }));
        }
    }
    Ok(VerificationReport::new("evidence", cfg.echo(), checks))
}
