//! Weierstrass data for the lattice with periods 1 and tau = i*pi*t.
//!
//! Everything is derived from theta series: the half-period values come from
//! the theta nulls, and the function itself along the two boundary edges
//! used by the convexity argument comes from second logarithmic derivatives
//!
//! ```text
//! (log theta2)''(x) = -(P(x - 1/2) - c0)          NearHalf, P in (e1, inf)
//! (log theta3)''(x) = -(P(x + (tau - 1)/2) - c0)  TopEdge,  P in (e3, e2)
//! ```

use std::f64::consts::LN_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::theta::{log_derivs_real, theta_null_real, ModularPoint, ThetaIndex};

/// Default exclusion radius around the pole of the NearHalf edge at x = 1/2.
pub const EDGE_POLE_MARGIN: f64 = 1e-3;

/// Maximum accepted relative residual of the first-order differential equation.
pub const ODE_RESIDUAL_LIMIT: f64 = 1e-9;

const BISECTION_CAP: usize = 200;

#[derive(Clone, Debug)]
pub struct EllipticData {
    pub c0: Real,
    pub e1: Real,
    pub e2: Real,
    pub e3: Real,
    pub g2: Real,
    pub g3: Real,
    /// theta3(0) and theta4(0), kept for the factorized lemma forms.
    pub theta3_null: Real,
    pub theta4_null: Real,
}

#[derive(Clone, Debug)]
pub struct DerivedConstants {
    /// g2 - 12 c0^2
    pub denom: Real,
    pub delta: Real,
    pub p1: Real,
    pub p2: Real,
    pub r1: Real,
    pub s1: Real,
    pub s0: Real,
    pub cconst: Real,
    pub mcoef: Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeId {
    /// Arguments x - 1/2, values in (e1, inf), increasing in x.
    NearHalf,
    /// Arguments x + (tau - 1)/2, values in (e3, e2), decreasing in x.
    TopEdge,
}

impl EdgeId {
    pub fn theta(self) -> ThetaIndex {
        match self {
            EdgeId::NearHalf => ThetaIndex::Two,
            EdgeId::TopEdge => ThetaIndex::Three,
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeId::NearHalf => f.write_str("near-half"),
            EdgeId::TopEdge => f.write_str("top-edge"),
        }
    }
}

/// P, P', P'', P''' at one edge point.
#[derive(Clone, Debug)]
pub struct WpJet {
    pub p: Real,
    pub p1: Real,
    pub p2: Real,
    pub p3: Real,
}

impl WpJet {
    /// |P'^2 - (4P^3 - g2 P - g3)| / max(1, P'^2)
    pub fn ode_residual(&self, ed: &EllipticData) -> f64 {
        let lhs = self.p1.square();
        let rhs = self.p.powi(3) * 4.0 - &ed.g2 * &self.p - &ed.g3;
        let scale = lhs.abs().max(Real::one(lhs.prec()));
        ((&lhs - &rhs).abs() / scale).to_f64()
    }
}

/// An edge point with the first log-derivative of the edge's theta function.
#[derive(Clone, Debug)]
pub struct EdgeSample {
    pub x: f64,
    pub l1: Real,
    pub jet: WpJet,
}

/// c0 = -(pi^2/3) (1 - 24 sum_{n>=1} n q^{2n} / (1 - q^{2n})).
pub fn eisenstein_c0(mp: &ModularPoint, tol: f64) -> Result<Real> {
    let c0 = c0_series(mp);
    mp.check_tol(tol, c0.to_f64().abs().max(1.0))?;
    Ok(c0)
}

fn c0_series(mp: &ModularPoint) -> Real {
    let bits = mp.bits();
    let ln_q2 = 2.0 * mp.ln_q();
    let q2 = mp.q_real().square();
    let ln_inv_gap = -(-ln_q2.exp_m1()).ln();
    let mut sum = Real::zero(bits + 32);
    let mut q2n = Real::one(bits);
    let mut n = 1usize;
    loop {
        q2n *= &q2;
        let term = &q2n * n as f64 / (1.0 - &q2n);
        sum += term;
        // tail bound for n' > n: geometric with ratio (n+2)/(n+1) q^2
        let next = n + 1;
        let ln_b = (next as f64).ln() + next as f64 * ln_q2 + ln_inv_gap;
        let ratio = (next as f64 + 1.0) / next as f64 * ln_q2.exp();
        let ln_scale = (24.0 * sum.to_f64().abs()).max(1.0).ln();
        if ratio < 1.0 && ln_b - (1.0 - ratio).ln() < ln_scale - (bits as f64 + 8.0) * LN_2 {
            break;
        }
        n += 1;
    }
    let pi = mp.pi();
    -(pi * pi) / 3.0 * (1.0 - sum * 24.0).with_prec(bits)
}

/// Half-period values, invariants and c0 at `mp`, with the ordering and
/// positivity invariants enforced.
pub fn half_periods_and_invariants(mp: &ModularPoint, tol: f64) -> Result<EllipticData> {
    let ed = elliptic_data_unchecked(mp, tol)?;
    ed.check_invariants()?;
    Ok(ed)
}

/// Same values without the invariant checks, for reporting on them.
pub fn elliptic_data_unchecked(mp: &ModularPoint, tol: f64) -> Result<EllipticData> {
    let th3 = theta_null_real(ThetaIndex::Three, mp)?;
    let th4 = theta_null_real(ThetaIndex::Four, mp)?;
    let pi = mp.pi();
    let pi2 = pi * pi;
    let a = &pi2 * th3.powi(4); // e1 - e3
    let b = &pi2 * th4.powi(4); // e1 - e2
    let e1 = (&a + &b) / 3.0;
    let e3 = &e1 - &a;
    let e2 = &e1 - &b;
    let g2 = -(&e1 * &e2 + &e2 * &e3 + &e3 * &e1) * 4.0;
    let g3 = &e1 * &e2 * &e3 * 4.0;
    let c0 = eisenstein_c0(mp, tol)?;
    mp.check_tol(tol, e1.to_f64().max(1.0))?;
    Ok(EllipticData { c0, e1, e2, e3, g2, g3, theta3_null: th3, theta4_null: th4 })
}

impl EllipticData {
    /// e3 < c0 < e2 < e1 and g2 - 12 c0^2 > 0.
    pub fn check_invariants(&self) -> Result<()> {
        if !(self.e3 < self.c0 && self.c0 < self.e2 && self.e2 < self.e1) {
            return Err(Error::invariant(
                "e3 < c0 < e2 < e1",
                format!("e3={:?} c0={:?} e2={:?} e1={:?}", self.e3, self.c0, self.e2, self.e1),
            ));
        }
        let denom = self.denom();
        if denom.signum_i() <= 0 {
            return Err(Error::invariant("g2 - 12 c0^2 > 0", format!("g2 - 12 c0^2 = {denom:?}")));
        }
        Ok(())
    }

    pub fn denom(&self) -> Real {
        &self.g2 - self.c0.square() * 12.0
    }

    pub fn derived_constants(&self) -> Result<DerivedConstants> {
        derived_constants(self)
    }
}

pub fn derived_constants(ed: &EllipticData) -> Result<DerivedConstants> {
    let (c0, g2, g3) = (&ed.c0, &ed.g2, &ed.g3);
    let denom = ed.denom();
    if denom.signum_i() <= 0 {
        return Err(Error::invariant("g2 - 12 c0^2 > 0", format!("g2 - 12 c0^2 = {denom:?}")));
    }
    let c0sq = c0.square();
    let c0cube = &c0sq * c0;
    let lin = g3 * 6.0 + g2 * c0 * 4.0; // 6 g3 + 4 g2 c0
    let cst = g3 * c0 * 6.0 + g2 * &c0sq + g2.square() / 4.0; // 6 g3 c0 + g2 c0^2 + g2^2/4
    let delta = lin.square() - &denom * &cst * 4.0;
    if delta.signum_i() <= 0 {
        return Err(Error::invariant("Delta > 0", format!("Delta = {delta:?}")));
    }
    let sqrt_delta = delta.sqrt();
    let two_denom = &denom * 2.0;
    let p1 = (-&lin - &sqrt_delta) / &two_denom;
    let p2 = (-&lin + &sqrt_delta) / &two_denom;
    let r1 = (g3 * 2.0 + &c0cube * 4.0 + g2 * c0) / &denom;
    let s1 = &lin / &denom;
    let s0 = &cst / &denom;
    let cconst = &s0 * 2.0 - &s1 * &r1;
    let mcoef = (g3 + g2 * c0 - &c0cube * 4.0) / &denom;
    Ok(DerivedConstants { denom, delta, p1, p2, r1, s1, s0, cconst, mcoef })
}

/// Edge value, first theta log-derivative and full jet at `x`, with the
/// differential-equation cross-check. Only refuses points within
/// `ZERO_EXCLUSION` of the theta zero at x = 1/2.
pub fn edge_sample(edge: EdgeId, x: f64, mp: &ModularPoint, ed: &EllipticData) -> Result<EdgeSample> {
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::Domain(format!("edge parameter must lie in (0, 1/2), got {x}")));
    }
    let l = log_derivs_real(edge.theta(), &mp.real(x), mp, 3)?;
    let p = &ed.c0 - &l[1];
    let p1 = -&l[2];
    let p2 = p.square() * 6.0 - &ed.g2 / 2.0;
    let p3 = &p * &p1 * 12.0;
    let jet = WpJet { p, p1, p2, p3 };
    let resid = jet.ode_residual(ed);
    if !(resid <= ODE_RESIDUAL_LIMIT) {
        return Err(Error::CrossValidation(format!(
            "{edge} jet at x = {x}: differential-equation residual {resid:e} exceeds {ODE_RESIDUAL_LIMIT:e}"
        )));
    }
    let mut l = l;
    Ok(EdgeSample { x, l1: l.swap_remove(0), jet })
}

/// P, P', P'', P''' on `edge` at `x`, refusing the NearHalf pole band.
pub fn wp_jet(edge: EdgeId, x: f64, mp: &ModularPoint, ed: &EllipticData, tol: f64) -> Result<WpJet> {
    if edge == EdgeId::NearHalf && 0.5 - x < EDGE_POLE_MARGIN {
        return Err(Error::Pole(format!("x = {x} is within {EDGE_POLE_MARGIN:e} of the pole at 1/2")));
    }
    let s = edge_sample(edge, x, mp, ed)?;
    mp.check_tol(tol, s.jet.p.to_f64().abs().max(1.0))?;
    Ok(s.jet)
}

/// P alone (second log-derivative only), used by bisection.
pub fn wp_value(edge: EdgeId, x: f64, mp: &ModularPoint, ed: &EllipticData) -> Result<Real> {
    let l = log_derivs_real(edge.theta(), &mp.real(x), mp, 2)?;
    Ok(&ed.c0 - &l[1])
}

/// Solves P(edge point of x) = target for x in (0, 1/2) by bisection.
pub fn invert_wp(edge: EdgeId, target: &Real, mp: &ModularPoint, ed: &EllipticData, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("bisection tolerance must be positive, got {tol}")));
    }
    let in_range = match edge {
        EdgeId::NearHalf => *target > ed.e1,
        EdgeId::TopEdge => *target > ed.e3 && *target < ed.e2,
    };
    if !in_range {
        let range = match edge {
            EdgeId::NearHalf => format!("(e1, inf) = ({}, inf)", ed.e1),
            EdgeId::TopEdge => format!("(e3, e2) = ({}, {})", ed.e3, ed.e2),
        };
        return Err(Error::Range { value: target.to_f64(), range });
    }
    let increasing = edge == EdgeId::NearHalf;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..BISECTION_CAP {
        if hi - lo <= tol * lo.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = wp_value(edge, mid, mp, ed)?;
        let below = if increasing { p < *target } else { p > *target };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Four-term Laurent expansion of P and P' about the NearHalf pole, at
/// distance `d = 1/2 - x`.
pub fn laurent_near_half(d: &Real, ed: &EllipticData) -> (Real, Real) {
    let w = -d;
    let w2 = w.square();
    let p = 1.0 / &w2 + &ed.g2 * &w2 / 20.0 + &ed.g3 * w2.powi(2) / 28.0 + ed.g2.square() * w2.powi(3) / 1200.0;
    let p1 = -2.0 / (&w2 * &w) + &ed.g2 * &w / 10.0 + &ed.g3 * (&w2 * &w) / 7.0 + ed.g2.square() * w2.powi(2) * &w / 200.0;
    (p, p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::PrecisionMode;
    use std::f64::consts::PI;

    fn setup(t: f64) -> (ModularPoint, EllipticData) {
        let mp = ModularPoint::with_mode(t, PrecisionMode::Extended).unwrap();
        let ed = half_periods_and_invariants(&mp, 1e-12).unwrap();
        (mp, ed)
    }

    #[test]
    fn small_nome_limits() {
        let (_, ed) = setup(100.0);
        let pi2 = PI * PI;
        assert!((ed.c0.to_f64() + pi2 / 3.0).abs() < 1e-14);
        assert!((ed.e1.to_f64() - 2.0 * pi2 / 3.0).abs() < 1e-14);
        assert!((ed.e2.to_f64() + pi2 / 3.0).abs() < 1e-14);
        assert!((ed.e3.to_f64() + pi2 / 3.0).abs() < 1e-14);
        assert!((ed.g2.to_f64() - 4.0 * pi2 * pi2 / 3.0).abs() < 1e-11);
        assert!((ed.g3.to_f64() - 8.0 * pi2 * pi2 * pi2 / 27.0).abs() < 1e-10);
    }

    #[test]
    fn half_periods_sum_to_zero() {
        for t in [0.05, 0.5, 5.0] {
            let (_, ed) = setup(t);
            let s = &ed.e1 + &ed.e2 + &ed.e3;
            assert!(s.abs().to_f64() < 1e-14 * ed.e1.to_f64());
        }
    }

    #[test]
    fn derived_identities() {
        for t in [0.05, 0.5, 5.0] {
            let (_, ed) = setup(t);
            let dc = ed.derived_constants().unwrap();
            assert!(dc.p1 < ed.e1 && ed.e1 < dc.p2);
            let lhs = dc.s1.square() - &dc.s0 * 4.0;
            let rhs = &dc.delta / dc.denom.square();
            assert!(Real::rel_diff(&lhs, &rhs) < 1e-12);
        }
    }

    #[test]
    fn derived_constants_reject_bad_data() {
        let (_, ed) = setup(0.5);
        let mut bad = ed.clone();
        bad.c0 = ed.g2.sqrt();
        assert!(matches!(derived_constants(&bad), Err(Error::InvariantViolation { .. })));
        let mut unordered = ed;
        unordered.c0 = &unordered.e1 + 1.0;
        assert!(unordered.check_invariants().is_err());
    }

    #[test]
    fn near_half_pole_is_refused() {
        let (mp, ed) = setup(0.5);
        assert!(matches!(wp_jet(EdgeId::NearHalf, 0.4995, &mp, &ed, 1e-10), Err(Error::Pole(_))));
        assert!(wp_jet(EdgeId::TopEdge, 0.4995, &mp, &ed, 1e-10).is_ok());
    }

    #[test]
    fn inversion_range_checks() {
        let (mp, ed) = setup(0.5);
        assert!(matches!(invert_wp(EdgeId::TopEdge, &ed.e1, &mp, &ed, 1e-12), Err(Error::Range { .. })));
        assert!(matches!(invert_wp(EdgeId::NearHalf, &ed.e2, &mp, &ed, 1e-12), Err(Error::Range { .. })));
        let target = &ed.e1 * (1.0 + 1e-9);
        let x = invert_wp(EdgeId::NearHalf, &target, &mp, &ed, 1e-14).unwrap();
        assert!(x > 0.0 && x < 1e-3, "{x}");
    }
}
