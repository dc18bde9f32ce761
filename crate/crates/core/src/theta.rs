//! Jacobi theta functions on the imaginary axis, tau = i*pi*t.
//!
//! All four functions are evaluated by direct summation of their
//! trigonometric q-series. Derivatives in z are taken termwise, and the
//! truncation index is chosen from a certified bound on the remaining tail:
//! the term bounds `2 w_n^d q^{e_n}` have ratios that decrease in n, so once a
//! ratio drops below one the tail is dominated by a geometric series.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::real::{PrecisionMode, Real};

/// Points closer than this to a real zero of a theta function are refused by
/// the logarithmic-derivative evaluators.
pub const ZERO_EXCLUSION: f64 = 1e-8;

const MAX_TERMS: usize = 1 << 20;

/// The time parameter t > 0 together with its nome q = exp(-pi^2 t).
#[derive(Clone, Debug)]
pub struct ModularPoint {
    t: f64,
    q: f64,
    mode: PrecisionMode,
    bits: u32,
    q_real: Real,
    pi: Real,
}

impl ModularPoint {
    /// Builds the point with the precision mode taken from the environment.
    pub fn new(t: f64) -> Result<Self> {
        let mode = PrecisionMode::from_env().map_err(Error::Config)?;
        Self::with_mode(t, mode)
    }

    pub fn with_mode(t: f64, mode: PrecisionMode) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Domain(format!("time parameter must be finite and positive, got {t}")));
        }
        let bits = mode.bits_for(t);
        let pi = Real::pi(bits);
        let q_real = (-(&pi * &pi) * t).exp();
        Ok(ModularPoint { t, q: q_real.to_f64(), mode, bits, q_real, pi })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The nome rounded to `f64`. Underflows to 0 for t beyond roughly 72.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// ln q = -pi^2 t, exact to `f64` rounding even when q underflows.
    pub fn ln_q(&self) -> f64 {
        -PI * PI * self.t
    }

    pub fn q_real(&self) -> &Real {
        &self.q_real
    }

    pub fn pi(&self) -> &Real {
        &self.pi
    }

    pub fn mode(&self) -> PrecisionMode {
        self.mode
    }

    /// Working precision in bits.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `x` as a working-precision real (exact conversion).
    pub fn real(&self, x: f64) -> Real {
        Real::from_f64(x, self.bits)
    }

    /// Same t, with twice the modular parameter (tau -> 2 tau).
    pub fn doubled(&self) -> Result<Self> {
        Self::with_mode(2.0 * self.t, self.mode)
    }

    /// Same t with `extra` more working bits. Double mode is left unchanged.
    pub fn with_extra_bits(&self, extra: u32) -> Self {
        if self.mode == PrecisionMode::Double || extra == 0 {
            return self.clone();
        }
        let bits = self.bits + extra;
        let pi = Real::pi(bits);
        let q_real = (-(&pi * &pi) * self.t).exp();
        ModularPoint { t: self.t, q: self.q, mode: self.mode, bits, q_real, pi }
    }

    /// Relative size of one rounding error at working precision.
    pub fn unit_roundoff(&self) -> f64 {
        (-(self.bits as f64) * LN_2).exp()
    }

    /// Fails when `tol` is finer than rounding noise on a quantity of size `scale`.
    pub(crate) fn check_tol(&self, tol: f64, scale: f64) -> Result<()> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::Domain(format!("tolerance must be positive and finite, got {tol}")));
        }
        let rounding = 16.0 * scale.abs().max(f64::MIN_POSITIVE) * self.unit_roundoff();
        if tol < rounding {
            return Err(Error::PrecisionExhausted { tol, rounding });
        }
        Ok(())
    }
}

pub fn nome_from_time(t: f64) -> Result<ModularPoint> {
    ModularPoint::new(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaIndex {
    One,
    Two,
    Three,
    Four,
}

impl ThetaIndex {
    pub const ALL: [ThetaIndex; 4] = [ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three, ThetaIndex::Four];

    pub fn from_index(j: u8) -> Result<Self> {
        match j {
            1 => Ok(ThetaIndex::One),
            2 => Ok(ThetaIndex::Two),
            3 => Ok(ThetaIndex::Three),
            4 => Ok(ThetaIndex::Four),
            _ => Err(Error::Domain(format!("theta index must be 1..=4, got {j}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            ThetaIndex::One => 1,
            ThetaIndex::Two => 2,
            ThetaIndex::Three => 3,
            ThetaIndex::Four => 4,
        }
    }

    /// Odd multiples (2n+1) pi z with exponent (n+1/2)^2.
    fn half_integer(self) -> bool {
        matches!(self, ThetaIndex::One | ThetaIndex::Two)
    }

    fn alternating(self) -> bool {
        matches!(self, ThetaIndex::One | ThetaIndex::Four)
    }

    fn sine(self) -> bool {
        self == ThetaIndex::One
    }

    fn has_constant(self) -> bool {
        matches!(self, ThetaIndex::Three | ThetaIndex::Four)
    }

    /// Distance from `z` to the nearest real zero, if the function has any.
    pub fn distance_to_zero(self, z: f64) -> Option<f64> {
        match self {
            ThetaIndex::One => Some((z - z.round()).abs()),
            ThetaIndex::Two => {
                let s = z - 0.5;
                Some((s - s.round()).abs())
            }
            _ => None,
        }
    }
}

impl fmt::Display for ThetaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta{}", self.index())
    }
}

/// A theta value or z-derivative with its certified truncation bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaEval {
    pub value: f64,
    pub deriv_order: u32,
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// Derivatives of orders `0..=dmax` at one point, at working precision.
#[derive(Clone, Debug)]
pub struct ThetaJet {
    pub values: Vec<Real>,
    /// Per-order truncation bounds (natural log; `-inf` when exact).
    pub ln_tail_bounds: Vec<f64>,
    /// Non-constant series terms summed.
    pub terms: usize,
}

impl ThetaJet {
    pub fn tail_bound(&self, d: usize) -> f64 {
        self.ln_tail_bounds[d].exp()
    }
}

#[derive(Clone, Copy, Debug)]
enum Target {
    /// Absolute tolerance, natural log.
    Absolute(f64),
    /// Tail below working-precision rounding relative to the largest term.
    Working(u32),
}

/// Term index k (from 0) -> multiplier m (argument m*pi*z) and exponent of q.
fn term_shape(j: ThetaIndex, k: usize) -> (f64, f64) {
    let k = k as f64;
    if j.half_integer() {
        (2.0 * k + 1.0, (k + 0.5) * (k + 0.5))
    } else {
        (2.0 * (k + 1.0), (k + 1.0) * (k + 1.0))
    }
}

fn ln_term_bound(j: ThetaIndex, k: usize, d: u32, ln_q: f64) -> f64 {
    let (m, e) = term_shape(j, k);
    LN_2 + d as f64 * (m * PI).ln() + e * ln_q
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

struct Plan {
    terms: usize,
    ln_tails: Vec<f64>,
    /// ln of the sum of all term bounds, per order (for rounding estimates).
    ln_abs_sums: Vec<f64>,
}

fn plan(j: ThetaIndex, ln_q: f64, dmax: u32, target: Target) -> Result<Plan> {
    let orders = dmax as usize + 1;
    let constant = |d: usize| if j.has_constant() && d == 0 { 0.0 } else { f64::NEG_INFINITY };
    let mut ln_max: Vec<f64> = (0..orders).map(constant).collect();
    let mut ln_sums: Vec<f64> = ln_max.clone();
    let mut n = 0usize;
    loop {
        if n > MAX_TERMS {
            return Err(Error::PrecisionExhausted { tol: f64::NAN, rounding: f64::NAN });
        }
        // Candidate: sum terms 0..n, tail starts at term n.
        let mut done = n >= 1;
        let mut tails = Vec::with_capacity(orders);
        for d in 0..orders {
            let b_n = ln_term_bound(j, n, d as u32, ln_q);
            let b_next = ln_term_bound(j, n + 1, d as u32, ln_q);
            let ratio = (b_next - b_n).exp();
            let ln_tail = if ratio < 1.0 { b_n - (1.0 - ratio).ln() } else { f64::INFINITY };
            let ln_target = match target {
                Target::Absolute(ln_tol) => ln_tol,
                Target::Working(bits) => ln_max[d].max(b_n) - (bits as f64 + 8.0) * LN_2,
            };
            if !(ln_tail <= ln_target) {
                done = false;
            }
            tails.push(ln_tail);
        }
        if done {
            return Ok(Plan { terms: n, ln_tails: tails, ln_abs_sums: ln_sums });
        }
        for d in 0..orders {
            let b = ln_term_bound(j, n, d as u32, ln_q);
            ln_max[d] = ln_max[d].max(b);
            ln_sums[d] = log_add(ln_sums[d], b);
        }
        n += 1;
    }
}

/// Sums the first `terms` non-constant terms for all orders `0..=dmax`.
fn sum_terms(j: ThetaIndex, z: &Real, mp: &ModularPoint, dmax: u32, terms: usize) -> Vec<Real> {
    let mode = mp.mode();
    let bits = mp.bits();
    let term_bits = match mode {
        PrecisionMode::Double => bits,
        PrecisionMode::Extended => bits + 16,
    };
    let acc_bits = mode.accumulator_bits(bits);
    let orders = dmax as usize + 1;
    let mut acc: Vec<Real> = (0..orders).map(|_| Real::zero(acc_bits)).collect();
    if j.has_constant() {
        acc[0] += 1.0;
    }
    if terms > 0 {
        let pi = Real::pi(term_bits);
        let minus_pi2 = -(&pi * &pi);
        let q = (&minus_pi2 * mp.t()).exp();
        let z = z.with_prec(term_bits);
        let (base, step) = if j.half_integer() {
            let a = &pi * &z;
            let s = &a * 2.0;
            (a, s)
        } else {
            let a = &pi * &z * 2.0;
            (a.clone(), a)
        };
        let (mut s, mut c) = base.sin_cos();
        let (ss, cs) = step.sin_cos();
        let q2 = q.square();
        // q^{e_k} and the ratio q^{e_{k+1} - e_k}.
        let (mut qpow, mut qstep) = if j.half_integer() {
            ((&minus_pi2 * (mp.t() / 4.0)).exp(), q2.clone())
        } else {
            (q.clone(), &q2 * &q)
        };
        for k in 0..terms {
            let (m, _) = term_shape(j, k);
            let n = if j.half_integer() { k } else { k + 1 };
            let negative = j.alternating() && n % 2 == 1;
            let mut amp = &qpow * 2.0;
            if negative {
                amp = -amp;
            }
            let w = &pi * m;
            let mut wpow = Real::one(term_bits);
            for (d, slot) in acc.iter_mut().enumerate() {
                // d-th derivative of sin(wz) / cos(wz), without the w^d factor.
                let trig = match (j.sine(), d % 4) {
                    (true, 0) => s.clone(),
                    (true, 1) => c.clone(),
                    (true, 2) => -&s,
                    (true, _) => -&c,
                    (false, 0) => c.clone(),
                    (false, 1) => -&s,
                    (false, 2) => -&c,
                    (false, _) => s.clone(),
                };
                *slot += &amp * &wpow * trig;
                wpow *= &w;
            }
            let s_next = &s * &cs + &c * &ss;
            c = &c * &cs - &s * &ss;
            s = s_next;
            qpow *= &qstep;
            qstep *= &q2;
        }
    }
    acc.into_iter().map(|v| v.with_prec(bits)).collect()
}

fn jet_with_target(j: ThetaIndex, z: &Real, mp: &ModularPoint, dmax: u32, target: Target) -> Result<(ThetaJet, Plan)> {
    if !z.is_finite() {
        return Err(Error::Domain("theta argument must be finite".into()));
    }
    let plan = plan(j, mp.ln_q(), dmax, target)?;
    let values = sum_terms(j, z, mp, dmax, plan.terms);
    let jet = ThetaJet { values, ln_tail_bounds: plan.ln_tails.clone(), terms: plan.terms };
    Ok((jet, plan))
}

/// theta_j^{(d)}(z) for d in `0..=dmax`, truncated at working precision.
pub fn theta_jet(j: ThetaIndex, z: &Real, mp: &ModularPoint, dmax: u32) -> Result<ThetaJet> {
    jet_with_target(j, z, mp, dmax, Target::Working(mp.bits())).map(|(jet, _)| jet)
}

/// The d-th z-derivative of theta_j(z | i pi t) with truncation error at most `tol`.
pub fn theta_deriv(j: ThetaIndex, z: f64, mp: &ModularPoint, d: u32, tol: f64) -> Result<ThetaEval> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tolerance must be positive and finite, got {tol}")));
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!("theta argument must be finite, got {z}")));
    }
    let target = Target::Absolute((tol / 2.0).ln());
    let (jet, plan) = jet_with_target(j, &mp.real(z), mp, d, target)?;
    let d_us = d as usize;
    let terms = plan.terms + usize::from(j.has_constant());
    let ln_rounding = plan.ln_abs_sums[d_us] + ((terms + 4) as f64).ln() - mp.bits() as f64 * LN_2;
    if ln_rounding > (tol / 2.0).ln() {
        return Err(Error::PrecisionExhausted { tol, rounding: ln_rounding.exp() });
    }
    Ok(ThetaEval {
        value: jet.values[d_us].to_f64(),
        deriv_order: d,
        tail_bound: jet.ln_tail_bounds[d_us].exp(),
        terms_used: terms,
    })
}

/// Partial sum with exactly `terms` non-constant terms (no truncation control).
pub fn theta_partial_sum(j: ThetaIndex, z: f64, mp: &ModularPoint, d: u32, terms: usize) -> Real {
    sum_terms(j, &mp.real(z), mp, d, terms).swap_remove(d as usize)
}

/// theta_j(0 | i pi t) for j in {2, 3, 4}.
pub fn theta_null(j: ThetaIndex, mp: &ModularPoint, tol: f64) -> Result<ThetaEval> {
    if j == ThetaIndex::One {
        return Err(Error::Domain("theta1 vanishes identically at z = 0".into()));
    }
    theta_deriv(j, 0.0, mp, 0, tol)
}

/// Working-precision theta null value.
pub fn theta_null_real(j: ThetaIndex, mp: &ModularPoint) -> Result<Real> {
    if j == ThetaIndex::One {
        return Err(Error::Domain("theta1 vanishes identically at z = 0".into()));
    }
    Ok(theta_jet(j, &mp.real(0.0), mp, 0)?.values.swap_remove(0))
}

/// Derivatives 1..=m of log theta_j at `z`, from a jet of theta derivatives.
pub fn log_derivs_real(j: ThetaIndex, z: &Real, mp: &ModularPoint, m: u32) -> Result<Vec<Real>> {
    if let Some(dist) = j.distance_to_zero(z.to_f64()) {
        if dist < ZERO_EXCLUSION {
            return Err(Error::Pole(format!("{j} has a zero within {dist:e} of z = {}", z.to_f64())));
        }
    }
    let jet = theta_jet(j, z, mp, m)?;
    log_derivs_from_jet(&jet.values)
}

/// f = log(theta): theta^{(n)} = sum_{k<n} C(n-1,k) theta^{(k)} f^{(n-k)}.
pub(crate) fn log_derivs_from_jet(values: &[Real]) -> Result<Vec<Real>> {
    let th0 = &values[0];
    if th0.is_zero() {
        return Err(Error::Pole("theta value is exactly zero".into()));
    }
    let m = values.len() - 1;
    // logd[i] holds f^{(i)} for i >= 1.
    let mut logd: Vec<Real> = vec![Real::zero(th0.prec()); m + 1];
    for n in 1..=m {
        let mut acc = values[n].clone();
        let mut binom = 1.0f64;
        for k in 1..n {
            binom = binom * (n - k) as f64 / k as f64;
            acc -= &values[k] * &logd[n - k] * binom;
        }
        logd[n] = acc / th0;
    }
    logd.remove(0);
    Ok(logd)
}

pub fn log_theta_derivs(j: ThetaIndex, z: f64, mp: &ModularPoint, m: u32, tol: f64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::Domain("at least one derivative must be requested".into()));
    }
    let zr = mp.real(z);
    let derivs = log_derivs_real(j, &zr, mp, m)?;
    let th = theta_jet(j, &zr, mp, 0)?;
    let scale = derivs.iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max) / th.values[0].abs().to_f64().max(f64::MIN_POSITIVE);
    mp.check_tol(tol, scale)?;
    Ok(derivs.iter().map(Real::to_f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(t: f64) -> ModularPoint {
        ModularPoint::with_mode(t, PrecisionMode::Extended).unwrap()
    }

    #[test]
    fn nome_matches_exponential() {
        let p = mp(1.0 / PI);
        // exp(-pi), independently rounded
        assert!((p.q() - 0.043213918263772250).abs() < 1e-17);
        assert!(ModularPoint::new(0.0).is_err());
        assert!(ModularPoint::new(-1.0).is_err());
        assert!(ModularPoint::new(f64::NAN).is_err());
        assert!(ModularPoint::new(f64::INFINITY).is_err());
    }

    #[test]
    fn huge_t_collapses_to_constant_term() {
        let p = mp(100.0);
        assert_eq!(p.q(), 0.0);
        assert!(p.ln_q() < -900.0);
        let th3 = theta_deriv(ThetaIndex::Three, 0.0, &p, 0, 1e-15).unwrap();
        assert_eq!(th3.value, 1.0);
        let th4 = theta_null(ThetaIndex::Four, &p, 1e-15).unwrap();
        assert_eq!(th4.value, 1.0);
    }

    #[test]
    fn trivial_zeros() {
        for t in [0.05, 0.5, 3.0] {
            let p = mp(t);
            let v = theta_deriv(ThetaIndex::One, 0.0, &p, 0, 1e-14).unwrap();
            assert_eq!(v.value, 0.0);
            let v = theta_deriv(ThetaIndex::Two, 0.5, &p, 0, 1e-14).unwrap();
            assert!(v.value.abs() < 1e-30, "{}", v.value);
        }
    }

    #[test]
    fn theta1_null_is_rejected() {
        assert!(matches!(theta_null(ThetaIndex::One, &mp(0.5), 1e-12), Err(Error::Domain(_))));
    }

    #[test]
    fn log_derivative_symmetry_points() {
        let p = mp(0.5);
        let l = log_theta_derivs(ThetaIndex::Three, 0.5, &p, 1, 1e-12).unwrap();
        assert!(l[0].abs() < 1e-30);
        let l = log_theta_derivs(ThetaIndex::Two, 1e-7, &p, 1, 1e-12).unwrap();
        assert!(l[0].abs() < 1e-5);
        assert!(matches!(log_theta_derivs(ThetaIndex::Two, 0.5, &p, 1, 1e-12), Err(Error::Pole(_))));
        assert!(matches!(log_theta_derivs(ThetaIndex::One, 1.0 + 1e-9, &p, 2, 1e-12), Err(Error::Pole(_))));
    }

    #[test]
    fn double_mode_refuses_unreachable_tolerance() {
        let p = ModularPoint::with_mode(0.5, PrecisionMode::Double).unwrap();
        let r = theta_deriv(ThetaIndex::Three, 0.3, &p, 2, 1e-25);
        assert!(matches!(r, Err(Error::PrecisionExhausted { .. })), "{r:?}");
        assert!(theta_deriv(ThetaIndex::Three, 0.3, &p, 2, 1e-10).is_ok());
    }

    #[test]
    fn tail_bound_respects_tolerance() {
        let p = mp(0.05);
        for tol in [1e-3, 1e-8, 1e-14] {
            let v = theta_deriv(ThetaIndex::Four, 0.2, &p, 3, tol).unwrap();
            assert!(v.tail_bound <= tol);
        }
    }
}
