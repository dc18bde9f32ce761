use proptest::prelude::*;

use thetakit::elliptic::{half_periods_and_invariants, invert_wp, wp_value, EdgeId};
use thetakit::proofcheck::{one_minus_q, q_fun, ProofContext};
use thetakit::quotients::{fd_oracle, quotient_t_derivs_real, QuotientSpec};
use thetakit::theta::{theta_jet, theta_partial_sum, ModularPoint, ThetaIndex};
use thetakit::{PrecisionMode, Real};

fn mp(t: f64) -> ModularPoint {
    ModularPoint::with_mode(t, PrecisionMode::Extended).unwrap()
}

fn value(j: ThetaIndex, z: f64, m: &ModularPoint, d: u32) -> Real {
    theta_jet(j, &m.real(z), m, d).unwrap().values.swap_remove(d as usize)
}

fn theta() -> impl Strategy<Value = ThetaIndex> {
    (1u8..=4).prop_map(|j| ThetaIndex::from_index(j).unwrap())
}

fn close(a: &Real, b: &Real, scale: f64, rel: f64) -> bool {
    (a - b).abs().to_f64() <= rel * scale.max(a.abs().to_f64()).max(b.abs().to_f64())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parity(j in theta(), z in -2.0f64..2.0, t in 0.05f64..5.0) {
        let m = mp(t);
        let a = value(j, z, &m, 0);
        let b = value(j, -z, &m, 0);
        let b = if j == ThetaIndex::One { -b } else { b };
        prop_assert!(close(&a, &b, 1e-30, 1e-30));
    }

    #[test]
    fn periodicity(j in theta(), k in -64i32..64, t in 0.05f64..5.0) {
        // dyadic z keeps z + 1 exact
        let z = k as f64 / 128.0;
        let m = mp(t);
        let a = value(j, z, &m, 1);
        let b = value(j, z + 1.0, &m, 1);
        let b = if matches!(j, ThetaIndex::One | ThetaIndex::Two) { -b } else { b };
        prop_assert!(close(&a, &b, 1e-30, 1e-30));
    }

    #[test]
    fn jacobi_quartic(t in 0.02f64..20.0) {
        let m = mp(t);
        let p = |j| value(j, 0.0, &m, 0).powi(4);
        let lhs = p(ThetaIndex::Two) + p(ThetaIndex::Four);
        prop_assert!(Real::rel_diff(&lhs, &p(ThetaIndex::Three)) < 1e-30);
    }

    /// d/dt theta(z | i pi t) = theta''(z) / 4, checked with a central
    /// difference in t at high precision.
    #[test]
    fn heat_identity(j in theta(), z in 0.0f64..1.0, t in 0.05f64..3.0) {
        let h = 1e-6;
        let up = value(j, z, &mp(t + h), 0).with_prec(200);
        let down = value(j, z, &mp(t - h), 0).with_prec(200);
        let fd = (up - down) / (2.0 * h);
        let exact = value(j, z, &mp(t), 2) / 4.0;
        let scale = value(j, z, &mp(t), 0).abs().to_f64().max(1.0) * 100.0;
        prop_assert!((fd - exact).abs().to_f64() < 1e-9 * scale);
    }

    /// The certified tail bound dominates the actual remainder.
    #[test]
    fn tail_bound_is_sound(j in theta(), z in 0.0f64..1.0, t in 0.05f64..2.0, d in 0u32..4) {
        let m = mp(t);
        let jet = theta_jet(j, &m.real(z), &m, d).unwrap();
        let long = theta_partial_sum(j, z, &m, d, jet.terms + 40);
        let remainder = (&jet.values[d as usize] - &long).abs().to_f64();
        let rounding = 1e-30 * long.abs().to_f64().max(1.0);
        prop_assert!(remainder <= jet.tail_bound(d as usize) + rounding);
    }

    #[test]
    fn half_periods_are_ordered(t in 0.02f64..10.0) {
        let ed = half_periods_and_invariants(&mp(t), 1e-10).unwrap();
        prop_assert!(ed.e3 < ed.c0 && ed.c0 < ed.e2 && ed.e2 < ed.e1);
        let s = &ed.e1 + &ed.e2 + &ed.e3;
        prop_assert!(s.abs().to_f64() < 1e-30 * ed.e1.to_f64());
        prop_assert!(ed.denom().signum_i() > 0);
    }

    #[test]
    fn inversion_round_trips(t in 0.05f64..5.0, x in 0.01f64..0.49, top in any::<bool>()) {
        let m = mp(t);
        let ed = half_periods_and_invariants(&m, 1e-10).unwrap();
        let edge = if top { EdgeId::TopEdge } else { EdgeId::NearHalf };
        let target = wp_value(edge, x, &m, &ed).unwrap();
        let back = invert_wp(edge, &target, &m, &ed, 1e-15).unwrap();
        prop_assert!((back - x).abs() < 1e-12, "{x} -> {back}");
    }

    #[test]
    fn q_forms_agree(t in 0.05f64..5.0, p in -50.0f64..50.0) {
        let ctx = ProofContext::with_mode(t, PrecisionMode::Extended).unwrap();
        let p = ctx.mp.real(p);
        if let (Ok(q), Ok(alt)) = (q_fun(&p, &ctx.dc), one_minus_q(&p, &ctx.dc)) {
            let lhs = 1.0 - &q;
            prop_assert!(close(&lhs, &alt, 1.0, 1e-25));
        }
    }

    /// Exact derivatives agree with the finite-difference oracle to O(h^2).
    #[test]
    fn quotient_derivatives_match_differences(
        j in 2u8..=3,
        u in 0.0f64..0.45,
        gap in 0.05f64..0.5,
        t in 0.2f64..2.0,
    ) {
        let spec = QuotientSpec::strict(ThetaIndex::from_index(j).unwrap(), u, u + gap).unwrap();
        let d = quotient_t_derivs_real(&spec, &mp(t), 2).unwrap();
        for k in 1..=2u32 {
            let exact = d[k as usize].to_f64();
            let fd = fd_oracle(&spec, t, k, 1e-3).unwrap();
            prop_assert!((fd - exact).abs() <= 1e-3 * exact.abs(), "k={k}: {fd} vs {exact}");
        }
    }
}
