//! Edge functions against finite differences and alternative forms.

use thetakit::elliptic::half_periods_and_invariants;
use thetakit::proofcheck::{
    f2, f2_prime, f3, f3_prime, g2, g2_quotient, lemma_t, lemma_u, sign_scan, ClaimedSign, FunctionId, ProofContext,
    ScanStatus,
};
use thetakit::theta::ModularPoint;
use thetakit::{Real, Result};

fn central(f: impl Fn(f64) -> Result<Real>, x: f64, h: f64) -> f64 {
    let up = f(x + h).unwrap();
    let down = f(x - h).unwrap();
    ((up - down) / (2.0 * h)).to_f64()
}

fn assert_rel(a: f64, b: f64, rel: f64, what: &str) {
    assert!((a - b).abs() <= rel * a.abs().max(b.abs()), "{what}: {a} vs {b}");
}

#[test]
fn f2_prime_is_the_x_derivative_of_f2() {
    for t in [0.1, 0.5, 2.0] {
        let ctx = ProofContext::new(t).unwrap();
        for x in [0.1, 0.25, 0.4] {
            let fd = central(|x| f2(x, &ctx), x, 1e-5);
            let exact = f2_prime(x, &ctx).unwrap().to_f64();
            assert_rel(fd, exact, 1e-6, &format!("F2' at t={t}, x={x}"));
        }
    }
}

#[test]
fn f3_prime_is_the_x_derivative_of_f3() {
    for t in [0.1, 0.5, 2.0] {
        let ctx = ProofContext::new(t).unwrap();
        for x in [0.1, 0.25, 0.4] {
            let fd = central(|x| f3(x, &ctx), x, 1e-5);
            let exact = f3_prime(x, &ctx).unwrap().to_f64();
            assert_rel(fd, exact, 1e-6, &format!("F3' at t={t}, x={x}"));
        }
    }
}

#[test]
fn g2_closed_form_matches_defining_quotient() {
    let ctx = ProofContext::new(0.5).unwrap();
    for x in [0.05, 0.1, 0.2, 0.4, 0.45] {
        let q = g2_quotient(x, &ctx, 1e-8).unwrap();
        let g = g2(x, &ctx).unwrap();
        assert!(Real::rel_diff(&q, &g) < 1e-25, "x={x}: {q} vs {g}");
    }
}

#[test]
fn lemma_forms_agree_at_extreme_t() {
    for t in [0.02, 0.05, 5.0, 20.0] {
        let ed = half_periods_and_invariants(&ModularPoint::new(t).unwrap(), 1e-10).unwrap();
        let (at_e1, at_e2) = (lemma_t(&ed), lemma_u(&ed));
        assert!(at_e1.direct.signum_i() < 0 && at_e1.factorized.signum_i() < 0, "t={t}");
        assert!(at_e2.direct.signum_i() > 0 && at_e2.factorized.signum_i() > 0, "t={t}");
        assert!(at_e1.rel_diff() < 1e-20 && at_e2.rel_diff() < 1e-20, "t={t}");
    }
}

#[test]
fn sign_scan_rejects_a_false_claim() {
    let ctx = ProofContext::new(0.5).unwrap();
    let ok = sign_scan(FunctionId::F2, &ctx, ClaimedSign::Negative, (0.0, 0.5), 64, 1e-3).unwrap();
    assert_eq!(ok.status, ScanStatus::Pass);
    assert!(ok.worst_margin > 0.0 && ok.violations.is_empty());
    let bad = sign_scan(FunctionId::F2, &ctx, ClaimedSign::Positive, (0.0, 0.5), 64, 1e-3).unwrap();
    assert_eq!(bad.status, ScanStatus::Fail);
    assert_eq!(bad.violations.len(), 64);
    assert!(bad.worst_margin < 0.0);
}
