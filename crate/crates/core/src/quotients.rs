//! The quotients S_j(u, v; t) = theta_j(u/2 | i pi t) / theta_j(v/2 | i pi t)
//! and their t-derivatives.
//!
//! With f(x, t) = theta_j(x/2 | i pi t) the heat equation gives
//! d^k f / dt^k = 4^{-k} theta_j^{(2k)}(x/2), so t-derivatives of any order
//! come from z-derivatives of the series without differencing.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::theta::{theta_jet, ModularPoint, ThetaIndex};

/// Highest derivative order accepted in double mode.
pub const K_MAX: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuotientSpec {
    pub j: ThetaIndex,
    pub u: f64,
    pub v: f64,
}

impl QuotientSpec {
    /// Requires 0 <= u <= v < 1, and v > 0 when j = 1.
    pub fn new(j: ThetaIndex, u: f64, v: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite()) || !(0.0 <= u && u <= v && v < 1.0) {
            return Err(Error::Domain(format!("need 0 <= u <= v < 1, got u = {u}, v = {v}")));
        }
        if j == ThetaIndex::One && v == 0.0 {
            return Err(Error::Pole("theta1 vanishes at v = 0".into()));
        }
        Ok(QuotientSpec { j, u, v })
    }

    /// Same as `new` but with u < v strictly (u > 0 for j = 1), as the
    /// monotonicity and convexity statements need.
    pub fn strict(j: ThetaIndex, u: f64, v: f64) -> Result<Self> {
        let spec = Self::new(j, u, v)?;
        if u >= v {
            return Err(Error::Domain(format!("need u < v, got u = {u}, v = {v}")));
        }
        if j == ThetaIndex::One && u == 0.0 {
            return Err(Error::Domain("j = 1 needs u > 0".into()));
        }
        Ok(spec)
    }

    pub fn is_trivial(&self) -> bool {
        self.u == self.v
    }
}

/// S and its t-derivatives up to `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivSeries {
    pub order: usize,
    pub values: Vec<f64>,
}

impl DerivSeries {
    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }
}

/// Extra bits so that the largest term (2 pi n)^{2k} q^{n^2} of a 2k-th
/// derivative series does not swamp an O(1) sum.
fn growth_bits(mp: &ModularPoint, k: usize) -> u32 {
    if k == 0 {
        return 0;
    }
    let a = -mp.ln_q();
    let two_k = 2.0 * k as f64;
    // d/dn [2k ln(2 pi n) - a n^2] = 0 at n^2 = k / a
    let n = (k as f64 / a).sqrt().max(1.0);
    let ln_max = two_k * (2.0 * PI * n).ln() - a * n * n;
    (ln_max.max(0.0) / LN_2).ceil() as u32 + 16
}

fn half(mp: &ModularPoint, x: f64) -> Real {
    // x/2 is exact in binary
    mp.real(x / 2.0)
}

/// S at working precision.
pub fn quotient_real(spec: &QuotientSpec, mp: &ModularPoint) -> Result<Real> {
    if spec.is_trivial() {
        return Ok(Real::one(mp.bits()));
    }
    let num = theta_jet(spec.j, &half(mp, spec.u), mp, 0)?.values.swap_remove(0);
    let den = theta_jet(spec.j, &half(mp, spec.v), mp, 0)?.values.swap_remove(0);
    if den.is_zero() {
        return Err(Error::Pole(format!("{} vanishes at v/2 = {}", spec.j, spec.v / 2.0)));
    }
    Ok(num / den)
}

pub fn s_value(spec: &QuotientSpec, t: f64, tol: f64) -> Result<f64> {
    let mp = ModularPoint::new(t)?;
    let s = quotient_real(spec, &mp)?;
    mp.check_tol(tol, s.to_f64().abs().max(1.0))?;
    Ok(s.to_f64())
}

/// S^{(0..=k)} in t at working precision (raised internally for large k).
pub fn quotient_t_derivs_real(spec: &QuotientSpec, mp: &ModularPoint, k: usize) -> Result<Vec<Real>> {
    if k > K_MAX && mp.mode() == crate::real::PrecisionMode::Double {
        return Err(Error::Domain(format!(
            "derivative order {k} exceeds {K_MAX}; switch to extended precision"
        )));
    }
    if spec.is_trivial() {
        let mut out = vec![Real::zero(mp.bits()); k + 1];
        out[0] = Real::one(mp.bits());
        return Ok(out);
    }
    let wide = mp.with_extra_bits(growth_bits(mp, k));
    let dmax = 2 * k as u32;
    let nj = theta_jet(spec.j, &half(&wide, spec.u), &wide, dmax)?.values;
    let dj = theta_jet(spec.j, &half(&wide, spec.v), &wide, dmax)?.values;
    let den = &dj[0];
    if den.is_zero() {
        return Err(Error::Pole(format!("{} vanishes at v/2 = {}", spec.j, spec.v / 2.0)));
    }
    // N^{(i)}, D^{(i)} with the 4^{-i} factor applied here and nowhere else
    let scale = |v: &[Real], i: usize| &v[2 * i] / 4f64.powi(i as i32);
    let nk: Vec<Real> = (0..=k).map(|i| scale(&nj, i)).collect();
    let dk: Vec<Real> = (0..=k).map(|i| scale(&dj, i)).collect();
    let mut s: Vec<Real> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut acc = nk[n].clone();
        let mut binom = 1.0f64;
        for i in 0..n {
            acc -= &s[i] * &dk[n - i] * binom;
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        s.push(acc / den);
    }
    Ok(s.into_iter().map(|v| v.with_prec(mp.bits())).collect())
}

pub fn s_t_derivs(spec: &QuotientSpec, t: f64, k: usize, tol: f64) -> Result<DerivSeries> {
    let mp = ModularPoint::new(t)?;
    let vals = quotient_t_derivs_real(spec, &mp, k)?;
    let scale = vals.iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
    mp.check_tol(tol, scale)?;
    Ok(DerivSeries { order: k, values: vals.iter().map(Real::to_f64).collect() })
}

/// dL/dt for L = log S, j in {2, 3}.
pub fn log_first_t_real(spec: &QuotientSpec, mp: &ModularPoint) -> Result<Real> {
    let (a, b) = log_brackets(spec, mp)?;
    Ok((a.0 - b.0) / 4.0)
}

/// d^2 L/dt^2 for L = log S, j in {2, 3}:
/// [theta''''/theta - (theta''/theta)^2](u/2) / 16 minus the same at v/2.
pub fn log_second_t_real(spec: &QuotientSpec, mp: &ModularPoint) -> Result<Real> {
    let (a, b) = log_brackets(spec, mp)?;
    Ok((a.1 - b.1) / 16.0)
}

pub fn log_second_t(spec: &QuotientSpec, t: f64, tol: f64) -> Result<f64> {
    let mp = ModularPoint::new(t)?;
    let v = log_second_t_real(spec, &mp)?;
    mp.check_tol(tol, v.to_f64().abs().max(1.0))?;
    Ok(v.to_f64())
}

type Bracket = (Real, Real);

fn log_brackets(spec: &QuotientSpec, mp: &ModularPoint) -> Result<(Bracket, Bracket)> {
    if !matches!(spec.j, ThetaIndex::Two | ThetaIndex::Three) {
        return Err(Error::Domain(format!("log-quotient derivatives are defined for theta2 and theta3, not {}", spec.j)));
    }
    let at = |x: f64| -> Result<Bracket> {
        let jet = theta_jet(spec.j, &half(mp, x), mp, 4)?.values;
        let r2 = &jet[2] / &jet[0];
        let r4 = &jet[4] / &jet[0];
        let second = &r4 - r2.square();
        Ok((r2, second))
    };
    Ok((at(spec.u)?, at(spec.v)?))
}

/// S(t2) - S(t1) without cancellation, at the precision of the larger t.
pub fn s_increment(spec: &QuotientSpec, t1: f64, t2: f64) -> Result<Real> {
    let m1 = ModularPoint::new(t1)?;
    let m2 = ModularPoint::new(t2)?;
    let (m1, m2) = if m1.bits() < m2.bits() {
        (m1.with_extra_bits(m2.bits() - m1.bits()), m2)
    } else {
        let extra = m1.bits() - m2.bits();
        (m1, m2.with_extra_bits(extra))
    };
    Ok(quotient_real(spec, &m2)? - quotient_real(spec, &m1)?)
}

/// Central finite difference of S in t, k in {1, 2}.
pub fn fd_oracle(spec: &QuotientSpec, t: f64, k: u32, h: f64) -> Result<f64> {
    fd_oracle_real(spec, t, k, h).map(|v| v.to_f64())
}

pub fn fd_oracle_real(spec: &QuotientSpec, t: f64, k: u32, h: f64) -> Result<Real> {
    if !(k == 1 || k == 2) {
        return Err(Error::Domain(format!("finite-difference order must be 1 or 2, got {k}")));
    }
    if !(h > 0.0 && h.is_finite()) || !(t - k as f64 * h > 0.0) {
        return Err(Error::Domain(format!("need h > 0 and t - k h > 0, got t = {t}, h = {h}")));
    }
    let (tm, tp) = (t - h, t + h);
    if tm == t || tp == t {
        return Err(Error::OraclePrecision(format!("step {h:e} vanishes next to t = {t}")));
    }
    let top = ModularPoint::new(tp)?;
    let eps = top.unit_roundoff();
    let amplification = 4.0 * eps / h.powi(k as i32);
    if amplification > 1e-3 {
        return Err(Error::OraclePrecision(format!(
            "rounding amplified to {amplification:e} by step {h:e} at {} bits",
            top.bits()
        )));
    }
    let at = |tt: f64| -> Result<Real> {
        let m = ModularPoint::new(tt)?;
        let m = m.with_extra_bits(top.bits().saturating_sub(m.bits()));
        quotient_real(spec, &m)
    };
    let (sm, sp) = (at(tm)?, at(tp)?);
    Ok(match k {
        1 => (sp - sm) / (2.0 * h),
        _ => (sp + sm - at(t)? * 2.0) / (h * h),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn trivial_cases() {
        for j in ThetaIndex::ALL {
            let s = QuotientSpec::new(j, 0.4, 0.4).unwrap();
            assert_eq!(s_value(&s, 0.7, TOL).unwrap(), 1.0);
        }
        let s1 = QuotientSpec::new(ThetaIndex::One, 0.0, 0.5).unwrap();
        assert_eq!(s_value(&s1, 0.7, TOL).unwrap(), 0.0);
        assert!(matches!(QuotientSpec::new(ThetaIndex::One, 0.0, 0.0), Err(Error::Pole(_))));
        assert!(QuotientSpec::new(ThetaIndex::Two, 0.5, 0.3).is_err());
        assert!(QuotientSpec::new(ThetaIndex::Two, 0.2, 1.0).is_err());
        assert!(QuotientSpec::strict(ThetaIndex::Two, 0.3, 0.3).is_err());
    }

    #[test]
    fn recursion_base_is_the_quotient() {
        let spec = QuotientSpec::new(ThetaIndex::Three, 0.2, 0.8).unwrap();
        let d = s_t_derivs(&spec, 0.6, 3, TOL).unwrap();
        assert_eq!(d.order, 3);
        assert!((d.get(0) - s_value(&spec, 0.6, TOL).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn log_second_vanishes_on_diagonal() {
        let spec = QuotientSpec::new(ThetaIndex::Two, 0.3, 0.3).unwrap();
        assert_eq!(log_second_t(&spec, 0.6, TOL).unwrap(), 0.0);
        let bad = QuotientSpec::new(ThetaIndex::Four, 0.2, 0.8).unwrap();
        assert!(log_second_t(&bad, 0.6, TOL).is_err());
    }

    #[test]
    fn limit_at_large_t() {
        let mp = ModularPoint::new(50.0).unwrap();
        for j in [ThetaIndex::Three, ThetaIndex::Four] {
            let spec = QuotientSpec::new(j, 0.1, 0.9).unwrap();
            let s = quotient_real(&spec, &mp).unwrap();
            assert!((s - 1.0).abs().to_f64() < 1e-20);
        }
        // theta2 keeps its leading cosine
        let spec = QuotientSpec::new(ThetaIndex::Two, 0.1, 0.9).unwrap();
        let s = quotient_real(&spec, &mp).unwrap().to_f64();
        let lead = (PI * 0.05).cos() / (PI * 0.45).cos();
        assert!((s - lead).abs() < 1e-14 * lead);
    }

    #[test]
    fn oracle_guards() {
        let spec = QuotientSpec::new(ThetaIndex::Two, 0.2, 0.8).unwrap();
        assert!(matches!(fd_oracle(&spec, 0.6, 2, 1e-300), Err(Error::OraclePrecision(_))));
        assert!(matches!(fd_oracle(&spec, 0.1, 1, 0.2), Err(Error::Domain(_))));
        let flat = QuotientSpec::new(ThetaIndex::Two, 0.5, 0.5).unwrap();
        assert_eq!(fd_oracle(&flat, 0.6, 1, 1e-4).unwrap(), 0.0);
    }
}
