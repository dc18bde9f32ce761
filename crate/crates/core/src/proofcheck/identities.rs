use std::f64::consts::LN_2;

use crate::elliptic::EllipticData;
use crate::error::Result;
use crate::real::Real;
use crate::theta::{theta_jet, theta_null_real, ModularPoint, ThetaIndex};

use super::ProofContext;

/// Relative residuals of classical identities at one t.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// theta3 theta4 = theta4(0 | 2 tau)^2
    pub th4: f64,
    /// theta4^4 = 1 + 8 sum (-1)^n q^n / (1 + q^n)^2
    pub four_p: f64,
    /// e1 - c0 = pi^2 + 8 pi^2 sum q^{2n} / (1 + q^{2n})^2
    pub bf2: f64,
    /// theta2^4 + theta4^4 = theta3^4
    pub quartic: f64,
    pub parity: f64,
    pub periodicity: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        [self.th4, self.four_p, self.bf2, self.quartic, self.parity, self.periodicity]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// sum_{n>=1} sign^n x^n / (1 + x^n)^2 with x = q^step, summed until the
/// terms drop below 2^-(bits+8) * `scale`.
fn lambert_square_sum(mp: &ModularPoint, step: u32, alternating: bool, scale: f64) -> Real {
    let bits = mp.bits();
    let x = mp.q_real().powi(step as i32);
    let ln_x = step as f64 * mp.ln_q();
    let ln_stop = scale.abs().max(f64::MIN_POSITIVE).ln() - (bits as f64 + 8.0) * LN_2 - (-ln_x.exp_m1()).ln();
    let mut sum = Real::zero(bits + 32);
    let mut xn = Real::one(bits);
    let mut n = 1u32;
    loop {
        xn *= &x;
        let term = &xn / (1.0 + &xn).square();
        if alternating && n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        if n as f64 * ln_x < ln_stop {
            break;
        }
        n += 1;
    }
    sum.with_prec(bits)
}

pub fn th4_residual(mp: &ModularPoint) -> Result<f64> {
    let th3 = theta_null_real(ThetaIndex::Three, mp)?;
    let th4 = theta_null_real(ThetaIndex::Four, mp)?;
    let th4_2 = theta_null_real(ThetaIndex::Four, &mp.doubled()?)?.with_prec(mp.bits());
    Ok(Real::rel_diff(&(th3 * th4), &th4_2.square()))
}

pub fn four_p_residual(mp: &ModularPoint) -> Result<f64> {
    let lhs = theta_null_real(ThetaIndex::Four, mp)?.powi(4);
    let rhs = 1.0 + lambert_square_sum(mp, 1, true, lhs.to_f64()) * 8.0;
    Ok(Real::rel_diff(&lhs, &rhs))
}

pub fn bf2_residual(mp: &ModularPoint, ed: &EllipticData) -> f64 {
    let lhs = &ed.e1 - &ed.c0;
    let pi2 = mp.pi().square();
    let rhs = &pi2 * (1.0 + lambert_square_sum(mp, 2, false, 1.0) * 8.0);
    Real::rel_diff(&lhs, &rhs)
}

/// e1 - c0 - pi^2 theta3^2 theta4^2, positive.
pub fn bf_margin(mp: &ModularPoint, ed: &EllipticData) -> Real {
    &ed.e1 - &ed.c0 - mp.pi().square() * ed.theta3_null.square() * ed.theta4_null.square()
}

pub fn quartic_residual(mp: &ModularPoint) -> Result<f64> {
    let p = |j| theta_null_real(j, mp).map(|v| v.powi(4));
    let lhs = p(ThetaIndex::Two)? + p(ThetaIndex::Four)?;
    Ok(Real::rel_diff(&lhs, &p(ThetaIndex::Three)?))
}

// dyadic, so that z + 1 and -z are exact
const PROBES: [f64; 3] = [0.125, 0.375, 0.6875];

fn value(j: ThetaIndex, z: f64, mp: &ModularPoint) -> Result<Real> {
    Ok(theta_jet(j, &mp.real(z), mp, 0)?.values.swap_remove(0))
}

/// Largest relative defect of theta_j(-z) = +-theta_j(z) (odd only for j = 1).
pub fn parity_residual(mp: &ModularPoint) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in ThetaIndex::ALL {
        for z in PROBES {
            let a = value(j, z, mp)?;
            let b = value(j, -z, mp)?;
            let b = if j == ThetaIndex::One { -b } else { b };
            worst = worst.max(Real::rel_diff(&a, &b));
        }
    }
    Ok(worst)
}

/// Largest relative defect of theta_j(z + 1) = +-theta_j(z)
/// (antiperiodic for j = 1, 2).
pub fn periodicity_residual(mp: &ModularPoint) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in ThetaIndex::ALL {
        for z in PROBES {
            let a = value(j, z, mp)?;
            let b = value(j, z + 1.0, mp)?;
            let b = if matches!(j, ThetaIndex::One | ThetaIndex::Two) { -b } else { b };
            worst = worst.max(Real::rel_diff(&a, &b));
        }
    }
    Ok(worst)
}

pub fn identity_residuals(ctx: &ProofContext) -> Result<IdentityResiduals> {
    let mp = &ctx.mp;
    Ok(IdentityResiduals {
        th4: th4_residual(mp)?,
        four_p: four_p_residual(mp)?,
        bf2: bf2_residual(mp, &ctx.ed),
        quartic: quartic_residual(mp)?,
        parity: parity_residual(mp)?,
        periodicity: periodicity_residual(mp)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::PrecisionMode;

    #[test]
    fn identities_hold_across_scales() {
        for t in [0.05, 0.5, 5.0] {
            let ctx = ProofContext::with_mode(t, PrecisionMode::Extended).unwrap();
            let r = identity_residuals(&ctx).unwrap();
            assert!(r.max() < 1e-25, "t = {t}: {r:?}");
            assert!(bf_margin(&ctx.mp, &ctx.ed).signum_i() > 0);
        }
    }
}
