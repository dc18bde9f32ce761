use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::elliptic::{edge_sample, EdgeId};
use crate::error::{Error, Result};
use crate::quotients::{quotient_t_derivs_real, QuotientSpec};
use crate::real::Real;
use crate::theta::{log_derivs_real, ModularPoint, ThetaIndex};

use super::functions::{self as fun, region_facts};
use super::ProofContext;

/// Relative band within which a non-strict claim still counts as satisfied.
pub const CM_BAND: f64 = 1e-14;

/// Functions of the edge parameter x in (0, 1/2) that can be scanned by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionId {
    F2,
    F2Prime,
    G2,
    /// Q(P(x - 1/2)) - 1
    QMinusOne,
    F3,
    F3Prime,
    G3,
    Nu1,
    A1Near,
    A2Near,
    A1Top,
    A2Top,
    /// theta2'/theta2
    Theta2LogDeriv,
    /// P + r1 on the NearHalf edge
    PPlusR1,
    /// P^2 + s1 P + s0 on the NearHalf edge
    Quad,
    /// 2P + s1 on the NearHalf edge
    TwoPPlusS1,
    /// 2P + s1 - sqrt(Delta)/(g2 - 12 c0^2) on the NearHalf edge
    RootGap,
}

impl FunctionId {
    pub const ALL: [FunctionId; 17] = [
        FunctionId::F2,
        FunctionId::F2Prime,
        FunctionId::G2,
        FunctionId::QMinusOne,
        FunctionId::F3,
        FunctionId::F3Prime,
        FunctionId::G3,
        FunctionId::Nu1,
        FunctionId::A1Near,
        FunctionId::A2Near,
        FunctionId::A1Top,
        FunctionId::A2Top,
        FunctionId::Theta2LogDeriv,
        FunctionId::PPlusR1,
        FunctionId::Quad,
        FunctionId::TwoPPlusS1,
        FunctionId::RootGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::F2 => "F2",
            FunctionId::F2Prime => "F2_prime",
            FunctionId::G2 => "G2",
            FunctionId::QMinusOne => "Q_minus_1",
            FunctionId::F3 => "F3",
            FunctionId::F3Prime => "F3_prime",
            FunctionId::G3 => "G3",
            FunctionId::Nu1 => "nu1",
            FunctionId::A1Near => "A1_near",
            FunctionId::A2Near => "A2_near",
            FunctionId::A1Top => "A1_top",
            FunctionId::A2Top => "A2_top",
            FunctionId::Theta2LogDeriv => "theta2_logderiv",
            FunctionId::PPlusR1 => "p_plus_r1",
            FunctionId::Quad => "quad",
            FunctionId::TwoPPlusS1 => "two_p_plus_s1",
            FunctionId::RootGap => "root_gap",
        }
    }

    pub fn eval(self, x: f64, ctx: &ProofContext) -> Result<Real> {
        let (mp, ed, dc) = (&ctx.mp, &ctx.ed, &ctx.dc);
        let near = || edge_sample(EdgeId::NearHalf, x, mp, ed);
        let top = || edge_sample(EdgeId::TopEdge, x, mp, ed);
        Ok(match self {
            FunctionId::F2 => fun::f2(x, ctx)?,
            FunctionId::F2Prime => fun::f2_prime(x, ctx)?,
            FunctionId::G2 => fun::g2(x, ctx)?,
            FunctionId::QMinusOne => fun::q_fun(&near()?.jet.p, dc)? - 1.0,
            FunctionId::F3 => fun::f3(x, ctx)?,
            FunctionId::F3Prime => fun::f3_prime(x, ctx)?,
            FunctionId::G3 => fun::g3(x, ctx)?,
            FunctionId::Nu1 => fun::nu1_check(x, ctx)?,
            FunctionId::A1Near => fun::a1(&near()?.jet.p, ed),
            FunctionId::A2Near => fun::a2(&near()?.jet.p, ed),
            FunctionId::A1Top => fun::a1(&top()?.jet.p, ed),
            FunctionId::A2Top => fun::a2(&top()?.jet.p, ed),
            FunctionId::Theta2LogDeriv => log_derivs_real(ThetaIndex::Two, &mp.real(x), mp, 1)?.swap_remove(0),
            FunctionId::PPlusR1 => region_facts(&near()?.jet.p, dc).p_plus_r1,
            FunctionId::Quad => region_facts(&near()?.jet.p, dc).quad,
            FunctionId::TwoPPlusS1 => region_facts(&near()?.jet.p, dc).two_p_plus_s1,
            FunctionId::RootGap => region_facts(&near()?.jet.p, dc).root_gap,
        })
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClaimedSign {
    Positive,
    Negative,
    Nonnegative,
    Nonpositive,
}

impl ClaimedSign {
    /// +1 for positive claims, -1 for negative ones.
    pub fn direction(self) -> i32 {
        match self {
            ClaimedSign::Positive | ClaimedSign::Nonnegative => 1,
            ClaimedSign::Negative | ClaimedSign::Nonpositive => -1,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, ClaimedSign::Positive | ClaimedSign::Negative)
    }

    /// Strict claims need direction * value > 0 with no floor; non-strict
    /// ones accept direction * value >= -band.
    pub fn holds(self, value: &Real, band: f64) -> bool {
        let signed = value.signum_i() * self.direction();
        if self.is_strict() {
            signed > 0
        } else {
            signed >= 0 || value.abs().to_f64() <= band
        }
    }
}

impl fmt::Display for ClaimedSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimedSign::Positive => "positive",
            ClaimedSign::Negative => "negative",
            ClaimedSign::Nonnegative => "nonnegative",
            ClaimedSign::Nonpositive => "nonpositive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// x for edge scans, t for scans in t.
    pub at: f64,
    /// Derivative order for monotonicity scans.
    pub order: Option<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignScanReport {
    pub function_id: String,
    pub claimed_sign: ClaimedSign,
    pub interval: (f64, f64),
    pub delta: f64,
    pub grid_points: usize,
    /// Smallest direction * value seen.
    pub worst_margin: f64,
    pub violations: Vec<Violation>,
    /// Points that could not be evaluated, with the reason.
    pub errors: Vec<(f64, String)>,
    pub status: ScanStatus,
}

impl SignScanReport {
    pub fn passed(&self) -> bool {
        self.status == ScanStatus::Pass
    }
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect();
    if let Some(last) = v.last_mut() {
        *last = hi;
    }
    if let Some(first) = v.first_mut() {
        *first = lo;
    }
    v
}

/// Scans an arbitrary function over `points`, in parallel, reporting in order.
pub fn scan_points<F>(
    label: &str,
    claimed: ClaimedSign,
    interval: (f64, f64),
    delta: f64,
    points: &[f64],
    f: F,
) -> Result<SignScanReport>
where
    F: Fn(f64) -> Result<Real> + Sync,
{
    let values: Vec<Result<Real>> = points.par_iter().map(|&x| f(x)).collect();
    let mut worst = f64::INFINITY;
    let mut violations = Vec::new();
    for (&x, v) in points.iter().zip(values) {
        let v = v?;
        let margin = v.to_f64() * claimed.direction() as f64;
        worst = worst.min(margin);
        if !claimed.holds(&v, 0.0) {
            violations.push(Violation { at: x, order: None, value: v.to_f64() });
        }
    }
    let status = if violations.is_empty() { ScanStatus::Pass } else { ScanStatus::Fail };
    Ok(SignScanReport {
        function_id: label.to_string(),
        claimed_sign: claimed,
        interval,
        delta,
        grid_points: points.len(),
        worst_margin: worst,
        violations,
        errors: Vec::new(),
        status,
    })
}

/// Evaluates `function` on `grid_n` uniform points of [lo + delta, hi - delta].
pub fn sign_scan(
    function: FunctionId,
    ctx: &ProofContext,
    claimed: ClaimedSign,
    interval: (f64, f64),
    grid_n: usize,
    delta: f64,
) -> Result<SignScanReport> {
    let (lo, hi) = interval;
    if grid_n < 2 || !(0.0 <= lo && lo + delta < hi - delta && hi <= 0.5) {
        return Err(Error::Domain(format!(
            "scan needs grid_n >= 2 and a nonempty [lo + delta, hi - delta] inside [0, 1/2], got ({lo}, {hi}), delta {delta}, n {grid_n}"
        )));
    }
    let points = linspace(lo + delta, hi - delta, grid_n);
    scan_points(function.name(), claimed, interval, delta, &points, |x| function.eval(x, ctx))
}

/// Sign scan of the k-th t-derivative of a quotient over a t grid.
pub fn quotient_sign_scan(spec: &QuotientSpec, k: usize, t_grid: &[f64], claimed: ClaimedSign) -> Result<SignScanReport> {
    let label = format!("d^{k}S{}/dt^{k}(u={}, v={})", spec.j.index(), spec.u, spec.v);
    let lo = t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    scan_points(&label, claimed, (lo, hi), 0.0, t_grid, |t| {
        let mp = ModularPoint::new(t)?;
        Ok(quotient_t_derivs_real(spec, &mp, k)?.swap_remove(k))
    })
}

/// Conjectured complete monotonicity: (-1)^k S^{(k)} >= 0 for j in {2, 3}
/// and (-1)^k S^{(k+1)} >= 0 for j in {1, 4}, k = 0..=K, within
/// `CM_BAND` times the largest derivative magnitude at that t.
pub fn cm_scan(spec: &QuotientSpec, t_grid: &[f64], k_max: usize) -> SignScanReport {
    let shift = usize::from(matches!(spec.j, ThetaIndex::One | ThetaIndex::Four));
    let label = if shift == 1 {
        format!("cm:dS{}/dt(u={}, v={})", spec.j.index(), spec.u, spec.v)
    } else {
        format!("cm:S{}(u={}, v={})", spec.j.index(), spec.u, spec.v)
    };
    let rows: Vec<Result<Vec<Real>>> = t_grid
        .par_iter()
        .map(|&t| {
            let mp = ModularPoint::new(t)?;
            quotient_t_derivs_real(spec, &mp, k_max + shift)
        })
        .collect();
    let mut worst = f64::INFINITY;
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    for (&t, row) in t_grid.iter().zip(rows) {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                errors.push((t, e.to_string()));
                continue;
            }
        };
        let scale = row.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
        for k in 0..=k_max {
            let claimed = if k % 2 == 0 { ClaimedSign::Nonnegative } else { ClaimedSign::Nonpositive };
            let v = &row[k + shift];
            worst = worst.min(v.to_f64() * claimed.direction() as f64);
            if !claimed.holds(v, CM_BAND * scale) {
                violations.push(Violation { at: t, order: Some(k), value: v.to_f64() });
            }
        }
    }
    let lo = t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    SignScanReport {
        function_id: label,
        claimed_sign: ClaimedSign::Nonnegative,
        interval: (lo, hi),
        delta: 0.0,
        grid_points: t_grid.len(),
        worst_margin: worst,
        status: if violations.is_empty() { ScanStatus::Pass } else { ScanStatus::Fail },
        violations,
        errors,
    }
}

/// Midpoints where the forward differences of `values` change sign.
pub fn difference_sign_changes(points: &[f64], values: &[Real]) -> Vec<f64> {
    let diffs: Vec<(f64, i32)> = points
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| (0.5 * (x[0] + x[1]), (&v[1] - &v[0]).signum_i()))
        .collect();
    diffs.windows(2).filter(|w| w[0].1 * w[1].1 < 0).map(|w| 0.5 * (w[0].0 + w[1].0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::PrecisionMode;

    #[test]
    fn names_round_trip() {
        for f in FunctionId::ALL {
            assert_eq!(f.name().parse::<FunctionId>().unwrap(), f);
        }
        assert!(matches!("F9".parse::<FunctionId>(), Err(Error::UnknownFunction(_))));
    }

    #[test]
    fn zero_function_fails_a_strict_claim() {
        let spec = QuotientSpec::new(ThetaIndex::Two, 0.3, 0.3).unwrap();
        let grid = logspace(0.1, 1.0, 5);
        let r = quotient_sign_scan(&spec, 1, &grid, ClaimedSign::Negative).unwrap();
        assert_eq!(r.status, ScanStatus::Fail);
        assert_eq!(r.violations.len(), 5);
    }

    #[test]
    fn f2_scan_passes() {
        let ctx = ProofContext::with_mode(0.5, PrecisionMode::Extended).unwrap();
        let r = sign_scan(FunctionId::F2, &ctx, ClaimedSign::Negative, (0.0, 0.5), 64, 1e-3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.worst_margin > 0.0);
    }

    #[test]
    fn low_order_cm_holds_for_theta2() {
        let spec = QuotientSpec::strict(ThetaIndex::Two, 0.2, 0.8).unwrap();
        let r = cm_scan(&spec, &logspace(0.05, 5.0, 8), 2);
        assert!(r.passed() && r.errors.is_empty(), "{r:?}");
    }

    #[test]
    fn sign_change_locator() {
        let xs = linspace(0.0, 1.0, 11);
        let vs: Vec<Real> = xs.iter().map(|x| Real::from_f64((x - 0.42) * (x - 0.42), 64)).collect();
        let c = difference_sign_changes(&xs, &vs);
        assert_eq!(c.len(), 1);
        assert!((c[0] - 0.42).abs() <= 0.1);
    }
}
