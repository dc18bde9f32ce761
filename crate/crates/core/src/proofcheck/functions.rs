use crate::elliptic::{edge_sample, DerivedConstants, EdgeId, EdgeSample, EllipticData};
use crate::error::{Error, Result};
use crate::real::Real;

use super::ProofContext;

/// A1 as a function of the value p = P(x - 1/2):
/// p (g2/2 - 6 c0^2) + g3 + 2 c0^3 + g2 c0 / 2.
pub fn a1(p: &Real, ed: &EllipticData) -> Real {
    let (c0, g2, g3) = (&ed.c0, &ed.g2, &ed.g3);
    p * (g2 / 2.0 - c0.square() * 6.0) + g3 + c0.powi(3) * 2.0 + g2 * c0 / 2.0
}

/// A2(p) = p^2 (g2 - 12 c0^2) + p (6 g3 + 4 g2 c0) + (6 g3 c0 + g2 c0^2 + g2^2 / 4).
pub fn a2(p: &Real, ed: &EllipticData) -> Real {
    let (c0, g2, g3) = (&ed.c0, &ed.g2, &ed.g3);
    p.square() * ed.denom() + p * (g3 * 6.0 + g2 * c0 * 4.0) + (g3 * c0 * 6.0 + g2 * c0.square() + g2.square() / 4.0)
}

/// Rough magnitude of the terms of A2(p), for relative residuals.
pub fn a2_scale(p: &Real, ed: &EllipticData) -> Real {
    let (c0, g2, g3) = (&ed.c0, &ed.g2, &ed.g3);
    p.square() * ed.denom().abs()
        + p.abs() * (g3 * 6.0 + g2 * c0 * 4.0).abs()
        + (g3 * c0 * 6.0 + g2 * c0.square() + g2.square() / 4.0).abs()
}

/// A direct evaluation and an independently factorized one.
#[derive(Clone, Debug)]
pub struct LemmaPair {
    pub direct: Real,
    pub factorized: Real,
}

impl LemmaPair {
    pub fn rel_diff(&self) -> f64 {
        Real::rel_diff(&self.direct, &self.factorized)
    }
}

/// A2(e1) and -4(e1-e2)(e1-e3)(c0-e1-pi^2 th3^2 th4^2)(c0-e1+pi^2 th3^2 th4^2).
pub fn lemma_t(ed: &EllipticData) -> LemmaPair {
    let direct = a2(&ed.e1, ed);
    let pi = Real::pi(ed.e1.prec());
    let w = &pi * &pi * ed.theta3_null.square() * ed.theta4_null.square();
    let base = &ed.c0 - &ed.e1;
    let factorized = -((&ed.e1 - &ed.e2) * (&ed.e1 - &ed.e3)) * 4.0 * (&base - &w) * (&base + &w);
    LemmaPair { direct, factorized }
}

/// A2(e2) and 4(e1-e2)(e2-e3)((c0-e2)^2 + (e1-e2)(e2-e3)).
pub fn lemma_u(ed: &EllipticData) -> LemmaPair {
    let direct = a2(&ed.e2, ed);
    let a = &ed.e1 - &ed.e2;
    let b = &ed.e2 - &ed.e3;
    let factorized = &a * &b * 4.0 * ((&ed.c0 - &ed.e2).square() + &a * &b);
    LemmaPair { direct, factorized }
}

/// 8 l1 (p-c0)^2/p' - 4 l1^2 + 8 (p-c0) - 4 l1 p''/p' - p'''/p'.
/// This is F2 on the NearHalf edge and F3 on the TopEdge.
pub fn f_block(s: &EdgeSample, ed: &EllipticData) -> Real {
    let j = &s.jet;
    let l1 = &s.l1;
    let pc = &j.p - &ed.c0;
    (l1 * pc.square() * 8.0 - &j.p2 * l1 * 4.0 - &j.p3) / &j.p1 - l1.square() * 4.0 + pc * 8.0
}

/// 4 (l1 A2(p) / p'^2 + A1(p) / p').
pub fn f_prime_block(s: &EdgeSample, ed: &EllipticData) -> Real {
    let j = &s.jet;
    (&s.l1 * a2(&j.p, ed) / j.p1.square() + a1(&j.p, ed) / &j.p1) * 4.0
}

/// l1 + p'(p + r1) / (2 (p^2 + s1 p + s0)), G2 or G3 depending on the edge.
pub fn g_block(s: &EdgeSample, dc: &DerivedConstants) -> Real {
    let j = &s.jet;
    &s.l1 + &j.p1 * (&j.p + &dc.r1) / (quad(&j.p, dc) * 2.0)
}

/// p^2 + s1 p + s0 (= A2(p) / (g2 - 12 c0^2)).
pub fn quad(p: &Real, dc: &DerivedConstants) -> Real {
    (p + &dc.s1) * p + &dc.s0
}

fn near(x: f64, ctx: &ProofContext) -> Result<EdgeSample> {
    edge_sample(EdgeId::NearHalf, x, &ctx.mp, &ctx.ed)
}

fn top(x: f64, ctx: &ProofContext) -> Result<EdgeSample> {
    edge_sample(EdgeId::TopEdge, x, &ctx.mp, &ctx.ed)
}

pub fn f2(x: f64, ctx: &ProofContext) -> Result<Real> {
    Ok(f_block(&near(x, ctx)?, &ctx.ed))
}

pub fn f2_prime(x: f64, ctx: &ProofContext) -> Result<Real> {
    Ok(f_prime_block(&near(x, ctx)?, &ctx.ed))
}

pub fn g2(x: f64, ctx: &ProofContext) -> Result<Real> {
    Ok(g_block(&near(x, ctx)?, &ctx.dc))
}

/// F2'(x) P'^2 / (4 A2), the defining quotient of G2. Refuses points where
/// A2 is within `band` (relative to its term scale) of zero.
pub fn g2_quotient(x: f64, ctx: &ProofContext, band: f64) -> Result<Real> {
    let s = near(x, ctx)?;
    let a = a2(&s.jet.p, &ctx.ed);
    if (a.abs() / a2_scale(&s.jet.p, &ctx.ed)).to_f64() < band {
        return Err(Error::Pole(format!("A2 nearly vanishes at x = {x}")));
    }
    Ok(f_prime_block(&s, &ctx.ed) * s.jet.p1.square() / (a * 4.0))
}

/// (p + r1)(2p + s1) / (2 (p^2 + s1 p + s0)).
pub fn q_fun(p: &Real, dc: &DerivedConstants) -> Result<Real> {
    let den = quad(p, dc) * 2.0;
    if den.is_zero() {
        return Err(Error::Pole(format!("Q is singular at p = {p}")));
    }
    Ok((p + &dc.r1) * (p * 2.0 + &dc.s1) / den)
}

/// 1 - Q(p) written as (2 p m + C) / (2 (p^2 + s1 p + s0)).
pub fn one_minus_q(p: &Real, dc: &DerivedConstants) -> Result<Real> {
    let den = quad(p, dc) * 2.0;
    if den.is_zero() {
        return Err(Error::Pole(format!("Q is singular at p = {p}")));
    }
    Ok((p * &dc.mcoef * 2.0 + &dc.cconst) / den)
}

pub fn f3(x: f64, ctx: &ProofContext) -> Result<Real> {
    Ok(f_block(&top(x, ctx)?, &ctx.ed))
}

pub fn f3_prime(x: f64, ctx: &ProofContext) -> Result<Real> {
    Ok(f_prime_block(&top(x, ctx)?, &ctx.ed))
}

pub fn g3(x: f64, ctx: &ProofContext) -> Result<Real> {
    Ok(g_block(&top(x, ctx)?, &ctx.dc))
}

/// 16 (e3 - c0)^3 / (g2 - 12 e3^2) - 12 c0.
pub fn f3_at_half(ed: &EllipticData) -> Real {
    (&ed.e3 - &ed.c0).powi(3) * 16.0 / (&ed.g2 - ed.e3.square() * 12.0) - &ed.c0 * 12.0
}

/// (g2 - 12 e3^2, 4 (e3 - e1)(e2 - e3)).
pub fn g2_minus_12e3sq(ed: &EllipticData) -> LemmaPair {
    LemmaPair {
        direct: &ed.g2 - ed.e3.square() * 12.0,
        factorized: (&ed.e3 - &ed.e1) * (&ed.e2 - &ed.e3) * 4.0,
    }
}

/// ((2e1+e2) + (e1+2e2) + 3c0)^3 / 27 - 3 c0 (2e1+e2)(e1+2e2), nonnegative
/// by the arithmetic-geometric mean inequality when c0 > 0.
pub fn am_gm_surrogate(ed: &EllipticData) -> Real {
    let a = &ed.e1 * 2.0 + &ed.e2;
    let b = &ed.e1 + &ed.e2 * 2.0;
    let c = &ed.c0 * 3.0;
    (&a + &b + &c).powi(3) / 27.0 - &c * &a * &b
}

/// 2 theta2'/theta2 + P'(x - 1/2) / (P(x - 1/2) - c0).
pub fn nu1_check(x: f64, ctx: &ProofContext) -> Result<Real> {
    let s = near(x, ctx)?;
    Ok(&s.l1 * 2.0 + &s.jet.p1 / (&s.jet.p - &ctx.ed.c0))
}

/// Sign facts on parts of the NearHalf edge, evaluated at one point.
#[derive(Clone, Debug)]
pub struct RegionFacts {
    /// p + r1
    pub p_plus_r1: Real,
    /// p^2 + s1 p + s0
    pub quad: Real,
    /// 2p + s1
    pub two_p_plus_s1: Real,
    /// 2p + s1 - sqrt(Delta) / (g2 - 12 c0^2)
    pub root_gap: Real,
    /// (p + r1) - (p + s1/2)
    pub shift_gap: Real,
}

pub fn region_facts(p: &Real, dc: &DerivedConstants) -> RegionFacts {
    let two_p_plus_s1 = p * 2.0 + &dc.s1;
    RegionFacts {
        p_plus_r1: p + &dc.r1,
        quad: quad(p, dc),
        root_gap: &two_p_plus_s1 - dc.delta.sqrt() / &dc.denom,
        two_p_plus_s1,
        shift_gap: &dc.r1 - &dc.s1 / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::PrecisionMode;

    fn ctx(t: f64) -> ProofContext {
        ProofContext::with_mode(t, PrecisionMode::Extended).unwrap()
    }

    #[test]
    fn linear_and_quadratic_roots() {
        let c = ctx(0.5);
        let root = -&c.dc.r1;
        assert!(a1(&root, &c.ed).abs().to_f64() < 1e-30);
        assert!(a1(&c.ed.e1, &c.ed).signum_i() < 0);
        let far = root.abs() * 2.0 + c.ed.e1.abs();
        assert!(a1(&far, &c.ed).signum_i() > 0);
        let at_p2 = a2(&c.dc.p2, &c.ed);
        assert!((at_p2 / a2_scale(&c.dc.p2, &c.ed)).abs().to_f64() < 1e-30);
    }

    #[test]
    fn lemma_pairs_at_half() {
        let c = ctx(0.5);
        let t = lemma_t(&c.ed);
        let u = lemma_u(&c.ed);
        assert!(t.direct.signum_i() < 0 && t.factorized.signum_i() < 0);
        assert!(u.direct.signum_i() > 0 && u.factorized.signum_i() > 0);
        assert!(t.rel_diff() < 1e-9 && u.rel_diff() < 1e-9);
    }

    #[test]
    fn q_forms_agree_and_tend_to_one() {
        let c = ctx(0.5);
        for p in [-3.0, 0.5, 7.0, 40.0] {
            let p = c.mp.real(p);
            let q = q_fun(&p, &c.dc).unwrap();
            let alt = one_minus_q(&p, &c.dc).unwrap();
            assert!((1.0 - &q - &alt).abs().to_f64() < 1e-25);
        }
        let big = c.mp.real(1e30);
        assert!((q_fun(&big, &c.dc).unwrap() - 1.0).abs().to_f64() < 1e-25);
    }

    #[test]
    fn pointwise_signs() {
        let c = ctx(0.5);
        assert!(f2(0.25, &c).unwrap().signum_i() < 0);
        for x in [0.05, 0.25, 0.45] {
            assert!(f2_prime(x, &c).unwrap().signum_i() > 0);
        }
        assert!(f3(0.25, &c).unwrap().signum_i() > 0);
        for x in [0.1, 0.25, 0.4] {
            assert!(f3_prime(x, &c).unwrap().signum_i() < 0);
            assert!(g3(x, &c).unwrap().signum_i() < 0);
        }
        for x in [0.01, 0.25, 0.49] {
            assert!(nu1_check(x, &c).unwrap().signum_i() < 0);
        }
        assert!(f3_at_half(&c.ed).signum_i() > 0);
        assert!(g2_minus_12e3sq(&c.ed).rel_diff() < 1e-12);
    }

    #[test]
    fn g2_quotient_matches_closed_form() {
        let c = ctx(0.5);
        for x in [0.05, 0.2, 0.45] {
            let closed = g2(x, &c).unwrap();
            let quot = g2_quotient(x, &c, 1e-12).unwrap();
            assert!(Real::rel_diff(&closed, &quot) < 1e-20);
        }
    }
}
