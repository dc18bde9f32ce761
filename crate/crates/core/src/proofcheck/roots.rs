use crate::elliptic::{invert_wp, wp_value, EdgeId};
use crate::error::{Error, Result};
use crate::real::Real;

use super::functions::{a1, a2, a2_scale};
use super::ProofContext;

/// Bisection tolerance used for the interior roots.
pub const ROOT_TOL: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct RootData {
    pub a1: f64,
    pub a2: f64,
    pub x0: f64,
    pub wp_target_a1: f64,
    pub wp_target_a2: f64,
    pub wp_target_x0: f64,
}

/// Where a root sits and how well it back-substitutes.
#[derive(Clone, Debug)]
pub struct RootResiduals {
    /// |A1(P(a1 - 1/2))| over the size of its terms
    pub a1: f64,
    pub a2: f64,
}

fn range_to_verification(claim: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Range { value, range } => Error::verification(claim, format!("target {value} outside {range}")),
        other => other,
    }
}

/// a1 = root of A1, a2 = root of A2 on the NearHalf edge.
pub fn roots_a1_a2(ctx: &ProofContext, tol: f64) -> Result<(f64, f64)> {
    let (mp, ed, dc) = (&ctx.mp, &ctx.ed, &ctx.dc);
    let target1 = -&dc.r1;
    let x1 = invert_wp(EdgeId::NearHalf, &target1, mp, ed, tol)
        .map_err(range_to_verification("A1 has a unique zero a1 in (0, 1/2)"))?;
    let x2 = invert_wp(EdgeId::NearHalf, &dc.p2, mp, ed, tol)
        .map_err(range_to_verification("A2 has a unique zero a2 in (0, 1/2)"))?;
    if !(0.0 < x1 && x1 < x2 && x2 < 0.5) {
        return Err(Error::verification("0 < a1 < a2 < 1/2", format!("a1 = {x1}, a2 = {x2}")));
    }
    Ok((x1, x2))
}

/// x0 = the TopEdge point where 2 P m + C = 0.
pub fn root_x0(ctx: &ProofContext, tol: f64) -> Result<f64> {
    let dc = &ctx.dc;
    if dc.mcoef.signum_i() >= 0 {
        return Err(Error::verification(
            "(g3 + g2 c0 - 4 c0^3) / (g2 - 12 c0^2) < 0",
            format!("m = {:?}", dc.mcoef),
        ));
    }
    let target = x0_target(ctx);
    invert_wp(EdgeId::TopEdge, &target, &ctx.mp, &ctx.ed, tol)
        .map_err(range_to_verification("G3' has exactly one zero x0 in (0, 1/2)"))
}

fn x0_target(ctx: &ProofContext) -> Real {
    -&ctx.dc.cconst / (&ctx.dc.mcoef * 2.0)
}

pub fn roots(ctx: &ProofContext, tol: f64) -> Result<RootData> {
    let (a1x, a2x) = roots_a1_a2(ctx, tol)?;
    let x0 = root_x0(ctx, tol)?;
    Ok(RootData {
        a1: a1x,
        a2: a2x,
        x0,
        wp_target_a1: (-&ctx.dc.r1).to_f64(),
        wp_target_a2: ctx.dc.p2.to_f64(),
        wp_target_x0: x0_target(ctx).to_f64(),
    })
}

/// Relative back-substitution residuals of A1 at a1 and A2 at a2.
pub fn root_residuals(ctx: &ProofContext, rd: &RootData) -> Result<RootResiduals> {
    let ed = &ctx.ed;
    let p1 = wp_value(EdgeId::NearHalf, rd.a1, &ctx.mp, ed)?;
    let scale1 = ed.denom().abs() / 2.0 * (p1.abs() + ctx.dc.r1.abs());
    let p2 = wp_value(EdgeId::NearHalf, rd.a2, &ctx.mp, ed)?;
    Ok(RootResiduals {
        a1: (a1(&p1, ed).abs() / scale1).to_f64(),
        a2: (a2(&p2, ed).abs() / a2_scale(&p2, ed)).to_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::PrecisionMode;

    #[test]
    fn roots_are_ordered_and_bracketed() {
        let ctx = ProofContext::with_mode(0.5, PrecisionMode::Extended).unwrap();
        let rd = roots(&ctx, ROOT_TOL).unwrap();
        assert!(0.0 < rd.a1 && rd.a1 < rd.a2 && rd.a2 < 0.5);
        assert!(0.0 < rd.x0 && rd.x0 < 0.5);
        let res = root_residuals(&ctx, &rd).unwrap();
        assert!(res.a1 < 1e-8 && res.a2 < 1e-8, "{res:?}");
        let at = |x: f64| a2(&wp_value(EdgeId::NearHalf, x, &ctx.mp, &ctx.ed).unwrap(), &ctx.ed).signum_i();
        assert_eq!(at(rd.a2 - 1e-4) * at(rd.a2 + 1e-4), -1);
        let at1 = |x: f64| a1(&wp_value(EdgeId::NearHalf, x, &ctx.mp, &ctx.ed).unwrap(), &ctx.ed).signum_i();
        assert_eq!(at1(rd.a1 - 1e-4) * at1(rd.a1 + 1e-4), -1);
    }
}
