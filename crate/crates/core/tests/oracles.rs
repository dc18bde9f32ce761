//! Independent reference computations checked against the library.
//!
//! Theta values come from the Poisson-summed (Gaussian) form of each
//! series, which shares no code or truncation logic with the q-series
//! evaluator. Invariants come from Eisenstein series.

use rug::float::Constant;
use rug::Float;

use thetakit::elliptic::{edge_sample, half_periods_and_invariants, EdgeId};
use thetakit::proofcheck::{f2, f3, ProofContext};
use thetakit::theta::{theta_deriv, theta_jet, ModularPoint, ThetaIndex};
use thetakit::{PrecisionMode, Real};

const PREC: u32 = 256;

fn fl(x: f64) -> Float {
    Float::with_val(PREC, x)
}

/// k-th z-derivative of theta_j(z | i pi t) from
/// theta3(z) = (pi t)^{-1/2} sum_n exp(-(z - n)^2 / t) and its relatives.
fn poisson(j: u8, z: f64, t: f64, k: usize) -> Float {
    let (shift, alternating, sign) = match j {
        1 => (-0.5, true, -1.0),
        2 => (0.0, true, 1.0),
        3 => (0.0, false, 1.0),
        4 => (0.5, false, 1.0),
        _ => unreachable!(),
    };
    let tt = fl(t);
    let st = Float::with_val(PREC, tt.sqrt_ref());
    let reach = (t * (PREC as f64 * 0.7 + 60.0)).sqrt() as i64 + 3;
    let mut sum = fl(0.0);
    for n in -reach..=reach {
        // y = z - n - shift, computed exactly in MP
        let y = fl(z) - fl(n as f64) - fl(shift);
        let x = Float::with_val(PREC, &y / &st);
        let g = Float::with_val(PREC, -(Float::with_val(PREC, &x * &x))).exp();
        // physicists' Hermite H_k(x)
        let (mut h0, mut h1) = (fl(1.0), Float::with_val(PREC, &x * 2u32));
        let hk = if k == 0 {
            h0
        } else {
            for m in 1..k {
                let h2 = Float::with_val(PREC, &x * &h1) * 2u32 - Float::with_val(PREC, &h0 * (2 * m) as u32);
                h0 = h1;
                h1 = h2;
            }
            h1
        };
        let mut term = Float::with_val(PREC, &hk * &g);
        // d^k/dz^k exp(-y^2/t) = (-1/sqrt t)^k H_k(y/sqrt t) exp(-y^2/t)
        for _ in 0..k {
            term = -term / &st;
        }
        if alternating && n.rem_euclid(2) == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    let pi = Float::with_val(PREC, Constant::Pi);
    let norm = Float::with_val(PREC, &pi * &tt).sqrt();
    sum / norm * sign
}

fn rel(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(PREC, a - b).abs();
    let s = Float::with_val(PREC, a.abs_ref()).max(&Float::with_val(PREC, b.abs_ref()));
    if s.is_zero() {
        0.0
    } else {
        (d / s).to_f64()
    }
}

fn mp(t: f64) -> ModularPoint {
    ModularPoint::with_mode(t, PrecisionMode::Extended).unwrap()
}

#[test]
fn theta_jets_match_gaussian_sums() {
    for t in [0.05, 0.3, 1.7] {
        let m = mp(t);
        for j in ThetaIndex::ALL {
            for z in [0.0625, 0.17, 0.4, 0.83] {
                let jet = theta_jet(j, &m.real(z), &m, 6).unwrap();
                for k in 0..=6 {
                    let oracle = poisson(j.index(), z, t, k);
                    let scale = Float::with_val(PREC, jet.values[0].as_float().abs_ref()).max(&fl(1e-30));
                    let diff = Float::with_val(PREC, jet.values[k].as_float() - &oracle).abs() / scale;
                    // relative to the derivative, or to theta itself when the derivative nearly vanishes
                    let ok = rel(jet.values[k].as_float(), &oracle) < 1e-30 || diff.to_f64() < 1e-30;
                    assert!(ok, "j={} t={t} z={z} k={k}: {:?} vs {}", j.index(), jet.values[k], oracle.to_f64());
                }
            }
        }
    }
}

#[test]
fn theta_deriv_meets_requested_tolerance() {
    for (t, tol) in [(0.05, 1e-12), (0.5, 1e-14), (4.0, 1e-15)] {
        let m = mp(t);
        for j in ThetaIndex::ALL {
            for d in 0..4 {
                let e = theta_deriv(j, 0.21, &m, d, tol).unwrap();
                let oracle = poisson(j.index(), 0.21, t, d as usize).to_f64();
                assert!((e.value - oracle).abs() <= tol + 4.0 * f64::EPSILON * oracle.abs(), "j={} d={d} t={t}", j.index());
                assert!(e.tail_bound <= tol / 2.0);
            }
        }
    }
}

fn divisor_power_sum(n: u64, k: u32) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum()
}

/// (4 pi^4/3) E4 and (8 pi^6/27) E6 with nome q^2.
fn eisenstein_invariants(t: f64) -> (Float, Float) {
    let pi = Float::with_val(PREC, Constant::Pi);
    let q2 = Float::with_val(PREC, -(Float::with_val(PREC, &pi * &pi)) * (2.0 * t)).exp();
    let (mut s4, mut s6) = (fl(0.0), fl(0.0));
    let mut qn = fl(1.0);
    for n in 1..400u64 {
        qn *= &q2;
        if qn.to_f64() < 1e-80 {
            break;
        }
        s4 += Float::with_val(PREC, &qn * divisor_power_sum(n, 3));
        s6 += Float::with_val(PREC, &qn * divisor_power_sum(n, 5));
    }
    let pi2 = Float::with_val(PREC, &pi * &pi);
    let pi4 = Float::with_val(PREC, &pi2 * &pi2);
    let pi6 = Float::with_val(PREC, &pi4 * &pi2);
    let g2 = pi4 * 4u32 / 3u32 * (s4 * 240u32 + 1u32);
    let g3 = pi6 * 8u32 / 27u32 * (1u32 - s6 * 504u32);
    (g2, g3)
}

#[test]
fn invariants_match_eisenstein_series() {
    for t in [0.05, 0.3, 1.0, 3.0] {
        let ed = half_periods_and_invariants(&mp(t), 1e-12).unwrap();
        let (g2, g3) = eisenstein_invariants(t);
        assert!(rel(ed.g2.as_float(), &g2) < 1e-30, "t={t}");
        assert!(rel(ed.g3.as_float(), &g3) < 1e-30, "t={t}");
    }
}

#[test]
fn c0_is_a_theta1_derivative_ratio() {
    for t in [0.05, 0.5, 5.0] {
        let ed = half_periods_and_invariants(&mp(t), 1e-12).unwrap();
        let c0 = poisson(1, 0.0, t, 3) / (poisson(1, 0.0, t, 1) * 3u32);
        let err = Float::with_val(PREC, ed.c0.as_float() - &c0).abs().to_f64();
        assert!(err < 1e-30, "t={t}: {err:e}");
    }
}

#[test]
fn edge_values_at_the_corners_are_half_period_values() {
    for t in [0.05, 0.5, 5.0] {
        let m = mp(t);
        let ed = half_periods_and_invariants(&m, 1e-12).unwrap();
        let near = edge_sample(EdgeId::NearHalf, 1e-9, &m, &ed).unwrap().jet.p;
        let top0 = edge_sample(EdgeId::TopEdge, 1e-9, &m, &ed).unwrap().jet.p;
        let top_half = edge_sample(EdgeId::TopEdge, 0.5 - 1e-9, &m, &ed).unwrap().jet.p;
        let close = |a: &Real, b: &Real| (a - b).abs().to_f64() < 1e-12 * b.abs().to_f64().max(1.0);
        assert!(close(&near, &ed.e1), "t={t}");
        assert!(close(&top0, &ed.e2), "t={t}");
        assert!(close(&top_half, &ed.e3), "t={t}");
    }
}

/// 8 l (p-c)^2/p' - 4 l^2 + 8 (p-c) - 4 l p''/p' - p'''/p' rebuilt from
/// Gaussian sums. Edge theta is theta2 (NearHalf) or theta3 (TopEdge).
fn f_from_scratch(j: u8, x: f64, t: f64) -> Float {
    let th: Vec<Float> = (0..=4).map(|k| poisson(j, x, t, k)).collect();
    let l1 = Float::with_val(PREC, &th[1] / &th[0]);
    let r2 = Float::with_val(PREC, &th[2] / &th[0]);
    let r3 = Float::with_val(PREC, &th[3] / &th[0]);
    let l2 = Float::with_val(PREC, &r2 - Float::with_val(PREC, &l1 * &l1));
    let l1sq = Float::with_val(PREC, &l1 * &l1);
    let l3 = Float::with_val(PREC, &r3 - Float::with_val(PREC, &l1 * &r2) * 3u32) + Float::with_val(PREC, &l1sq * &l1) * 2u32;
    let c0 = poisson(1, 0.0, t, 3) / (poisson(1, 0.0, t, 1) * 3u32);
    let (g2, _) = eisenstein_invariants(t);
    let p = Float::with_val(PREC, &c0 - &l2);
    let p1 = Float::with_val(PREC, -&l3);
    let p2 = Float::with_val(PREC, &p * &p) * 6u32 - Float::with_val(PREC, &g2 / 2u32);
    let p3 = Float::with_val(PREC, &p * &p1) * 12u32;
    let pc = Float::with_val(PREC, &p - &c0);
    let pcsq = Float::with_val(PREC, &pc * &pc);
    let a = Float::with_val(PREC, &l1 * &pcsq) * 8u32 / &p1;
    let b = Float::with_val(PREC, &l1 * &l1) * 4u32;
    let c = Float::with_val(PREC, &pc * 8u32);
    let d = Float::with_val(PREC, &l1 * &p2) * 4u32 / &p1;
    let e = Float::with_val(PREC, &p3 / &p1);
    a - b + c - d - e
}

#[test]
fn f2_and_f3_match_gaussian_reconstruction() {
    let t = 0.5;
    let ctx = ProofContext::with_mode(t, PrecisionMode::Extended).unwrap();
    for x in [0.1, 0.3] {
        let lib = f2(x, &ctx).unwrap();
        assert!(rel(lib.as_float(), &f_from_scratch(2, x, t)) < 1e-25, "F2 at {x}");
        let lib = f3(x, &ctx).unwrap();
        assert!(rel(lib.as_float(), &f_from_scratch(3, x, t)) < 1e-25, "F3 at {x}");
    }
}
