use rayon::prelude::*;
use serde_json::json;

use crate::elliptic::{derived_constants, edge_sample, elliptic_data_unchecked, laurent_near_half, EdgeId, ODE_RESIDUAL_LIMIT};
use crate::error::Result;
use crate::proofcheck::{
    am_gm_surrogate, bf_margin, difference_sign_changes, endpoint_limit, f3_at_half, g2_minus_12e3sq,
    identity_residuals, lemma_t, lemma_u, limit_estimate, linspace, root_residuals, root_x0, roots_a1_a2,
    sign_scan, ClaimedSign, Endpoint, FunctionId, IdentityResiduals, ProofContext, SignScanReport, ROOT_TOL,
};
use crate::quotients::{fd_oracle_real, quotient_real, quotient_t_derivs_real, s_increment, QuotientSpec};
use crate::real::Real;
use crate::theta::{ModularPoint, ThetaIndex};

use super::config::RunConfig;
use super::report::{run_check, CheckRecord, Outcome, VerificationReport};

/// Relative agreement required between two evaluations of one quantity.
pub const FACTORIZED_REL: f64 = 1e-9;
pub const IDENTITY_REL: f64 = 1e-12;
pub const ENDPOINT_TOL: f64 = 1e-6;
pub const ROOT_RESIDUAL: f64 = 1e-8;
pub const LAURENT_REL: f64 = 1e-6;
pub const FD_STEP: f64 = 1e-4;
pub const FD_REL: f64 = 1e-6;
/// t at which the finite-difference agreement is measured.
pub const FD_REFERENCE_T: f64 = 0.6;
pub const FD_ORDER_RANGE: (f64, f64) = (1.8, 2.2);

/// The verification checks, grouped by the statement they exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckGroup {
    /// A2(e1) < 0 and its factorization.
    A2AtE1,
    /// A2(e2) > 0 and its factorization.
    A2AtE2,
    /// Ordering of e3, c0, e2, e1 and the derived-constant signs.
    Constants,
    /// Signs of the first two t-derivatives of S2, S3 and the FD oracle.
    Convexity,
    /// Monotonicity of all four quotients in t.
    Monotonicity,
    /// Sign scans, roots and limits on the NearHalf edge.
    NearHalf,
    /// Sign scans, roots and limits on the TopEdge.
    TopEdge,
    /// Differential equation and Laurent cross-checks of P.
    WpCrossCheck,
    /// Classical theta identities.
    Identities,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 9] = [
        CheckGroup::A2AtE1,
        CheckGroup::A2AtE2,
        CheckGroup::Constants,
        CheckGroup::Convexity,
        CheckGroup::Monotonicity,
        CheckGroup::NearHalf,
        CheckGroup::TopEdge,
        CheckGroup::WpCrossCheck,
        CheckGroup::Identities,
    ];

    pub fn run(self, cfg: &RunConfig) -> Vec<CheckRecord> {
        match self {
            CheckGroup::A2AtE1 => a2_at_e1(cfg),
            CheckGroup::A2AtE2 => a2_at_e2(cfg),
            CheckGroup::Constants => constants(cfg),
            CheckGroup::Convexity => convexity(cfg),
            CheckGroup::Monotonicity => monotonicity(cfg),
            CheckGroup::NearHalf => near_half(cfg),
            CheckGroup::TopEdge => top_edge(cfg),
            CheckGroup::WpCrossCheck => wp_cross_check(cfg),
            CheckGroup::Identities => identities(cfg),
        }
    }
}

/// Runs every check group; the report passes iff every check does.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let checks: Vec<CheckRecord> = CheckGroup::ALL.iter().flat_map(|g| g.run(cfg)).collect();
    Ok(VerificationReport::new("verification", cfg.echo(), checks))
}

fn contexts(ts: &[f64]) -> Vec<(f64, Result<ProofContext>)> {
    ts.par_iter().map(|&t| (t, ProofContext::new(t))).collect()
}

fn f(v: &Real) -> f64 {
    v.to_f64()
}

fn grid_params(cfg: &RunConfig) -> serde_json::Value {
    json!({ "t_grid": cfg.t_grid })
}

fn scan_params(cfg: &RunConfig) -> serde_json::Value {
    json!({ "t": cfg.scan_ts, "x_grid": cfg.x_grid_n, "delta": cfg.delta })
}

/// Folds one closure over every grid t, with per-t failures counted.
fn over_ts<F>(ctxs: &[(f64, Result<ProofContext>)], body: F) -> Result<Outcome>
where
    F: Fn(f64, &ProofContext) -> Result<Outcome> + Sync,
{
    let parts: Vec<Outcome> = ctxs
        .par_iter()
        .map(|(t, c)| {
            let failed = |e: &dyn std::fmt::Display| Outcome {
                worst_margin: None,
                violations: 1,
                detail: Some(format!("t = {t}: {e}")),
            };
            match c {
                Ok(c) => body(*t, c).unwrap_or_else(|e| failed(&e)),
                Err(e) => failed(e),
            }
        })
        .collect();
    let mut out = Outcome::default();
    for p in parts {
        out.merge(p);
    }
    Ok(out)
}

fn from_scan(r: &SignScanReport, t: f64) -> Outcome {
    Outcome {
        worst_margin: Some(r.worst_margin),
        violations: r.violations.len(),
        detail: r
            .violations
            .first()
            .map(|v| format!("t = {t}: {} = {:e} at x = {}", r.function_id, v.value, v.at)),
    }
}

fn a2_at_e1(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ctxs = contexts(&cfg.t_grid.points());
    vec![
        run_check("a2_at_e1_negative", "A2(e1) = T(q) < 0 in both forms", grid_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let p = lemma_t(&c.ed);
                let mut o = Outcome::default();
                let ok = p.direct.signum_i() < 0 && p.factorized.signum_i() < 0;
                o.observe(ok, -f(&p.direct), || format!("t = {t}: T = {:?}, factorized {:?}", p.direct, p.factorized));
                Ok(o)
            })
        }),
        run_check("a2_at_e1_factorized", "A2(e1) matches its factorized form", grid_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let rel = lemma_t(&c.ed).rel_diff();
                let mut o = Outcome::default();
                o.observe(rel < FACTORIZED_REL, FACTORIZED_REL - rel, || format!("t = {t}: relative difference {rel:e}"));
                Ok(o)
            })
        }),
    ]
}

fn a2_at_e2(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ctxs = contexts(&cfg.t_grid.points());
    vec![
        run_check("a2_at_e2_positive", "A2(e2) = U(q) > 0 in both forms", grid_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let p = lemma_u(&c.ed);
                let mut o = Outcome::default();
                let ok = p.direct.signum_i() > 0 && p.factorized.signum_i() > 0;
                o.observe(ok, f(&p.direct), || format!("t = {t}: U = {:?}, factorized {:?}", p.direct, p.factorized));
                Ok(o)
            })
        }),
        run_check("a2_at_e2_factorized", "A2(e2) matches its factorized form", grid_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let rel = lemma_u(&c.ed).rel_diff();
                let mut o = Outcome::default();
                o.observe(rel < FACTORIZED_REL, FACTORIZED_REL - rel, || format!("t = {t}: relative difference {rel:e}"));
                Ok(o)
            })
        }),
    ]
}

fn constants(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ts = cfg.t_grid.points();
    // raw data, so that a broken invariant is reported rather than aborting
    let raw: Vec<(f64, Result<crate::elliptic::EllipticData>)> = ts
        .par_iter()
        .map(|&t| (t, ModularPoint::new(t).and_then(|mp| elliptic_data_unchecked(&mp, cfg.tol))))
        .collect();
    let each = |check: &dyn Fn(f64, &crate::elliptic::EllipticData, &mut Outcome) -> Result<()>| -> Result<Outcome> {
        let mut o = Outcome::default();
        for (t, ed) in &raw {
            match ed {
                Ok(ed) => {
                    if let Err(e) = check(*t, ed, &mut o) {
                        o.observe(false, f64::NAN, || format!("t = {t}: {e}"));
                    }
                }
                Err(e) => o.observe(false, f64::NAN, || format!("t = {t}: {e}")),
            }
        }
        Ok(o)
    };
    vec![
        run_check("half_period_order", "e3 < c0 < e2 < e1", grid_params(cfg), cfg.timings, || {
            each(&|t, ed, o| {
                let gaps = [&ed.c0 - &ed.e3, &ed.e2 - &ed.c0, &ed.e1 - &ed.e2];
                let ok = gaps.iter().all(|g| g.signum_i() > 0);
                let m = gaps.iter().map(f).fold(f64::INFINITY, f64::min);
                o.observe(ok, m, || format!("t = {t}: e3={:?} c0={:?} e2={:?} e1={:?}", ed.e3, ed.c0, ed.e2, ed.e1));
                Ok(())
            })
        }),
        run_check("denominator_positive", "g2 - 12 c0^2 > 0", grid_params(cfg), cfg.timings, || {
            each(&|t, ed, o| {
                let d = ed.denom();
                o.observe(d.signum_i() > 0, f(&d), || format!("t = {t}: g2 - 12 c0^2 = {d:?}"));
                Ok(())
            })
        }),
        run_check("e1_below_a1_root", "e1 < -(2 g3 + 4 c0^3 + g2 c0) / (g2 - 12 c0^2)", grid_params(cfg), cfg.timings, || {
            each(&|t, ed, o| {
                let dc = derived_constants(ed)?;
                let gap = -&dc.r1 - &ed.e1;
                o.observe(gap.signum_i() > 0, f(&gap), || format!("t = {t}: -r1 - e1 = {gap:?}"));
                Ok(())
            })
        }),
        run_check("discriminant_positive", "Delta > 0", grid_params(cfg), cfg.timings, || {
            each(&|t, ed, o| {
                let dc = derived_constants(ed)?;
                o.observe(dc.delta.signum_i() > 0, f(&dc.delta), || format!("t = {t}: Delta = {:?}", dc.delta));
                Ok(())
            })
        }),
        run_check("quadratic_roots_straddle_e1", "P1 < e1 < P2", grid_params(cfg), cfg.timings, || {
            each(&|t, ed, o| {
                let dc = derived_constants(ed)?;
                let lo = &ed.e1 - &dc.p1;
                let hi = &dc.p2 - &ed.e1;
                let ok = lo.signum_i() > 0 && hi.signum_i() > 0;
                o.observe(ok, f(&lo).min(f(&hi)), || format!("t = {t}: P1={:?} e1={:?} P2={:?}", dc.p1, ed.e1, dc.p2));
                Ok(())
            })
        }),
    ]
}

fn theorem_specs(cfg: &RunConfig) -> Vec<QuotientSpec> {
    let mut out = Vec::new();
    for j in [ThetaIndex::Two, ThetaIndex::Three] {
        for &(u, v) in &cfg.uv_pairs {
            if let Ok(s) = QuotientSpec::strict(j, u, v) {
                out.push(s);
            }
        }
    }
    out
}

fn uv_params(cfg: &RunConfig) -> serde_json::Value {
    json!({ "t_grid": cfg.t_grid, "uv": cfg.uv_pairs })
}

fn over_specs_ts<F>(specs: &[QuotientSpec], ts: &[f64], body: F) -> Outcome
where
    F: Fn(&QuotientSpec, f64) -> Result<Outcome> + Sync,
{
    let jobs: Vec<(QuotientSpec, f64)> = specs.iter().flat_map(|s| ts.iter().map(move |&t| (*s, t))).collect();
    let parts: Vec<Outcome> = jobs
        .par_iter()
        .map(|(s, t)| {
            body(s, *t).unwrap_or_else(|e| Outcome {
                worst_margin: None,
                violations: 1,
                detail: Some(format!("S{}({}, {}) at t = {t}: {e}", s.j.index(), s.u, s.v)),
            })
        })
        .collect();
    let mut out = Outcome::default();
    for p in parts {
        out.merge(p);
    }
    out
}

fn convexity(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ts = cfg.t_grid.points();
    let specs = theorem_specs(cfg);
    vec![
        run_check(
            "theta_quotients_convex",
            "dS/dt < 0 and d2S/dt2 > 0 for S2, S3 (exact derivatives)",
            uv_params(cfg),
            cfg.timings,
            || {
                Ok(over_specs_ts(&specs, &ts, |s, t| {
                    let mp = ModularPoint::new(t)?;
                    let d = quotient_t_derivs_real(s, &mp, 2)?;
                    let mut o = Outcome::default();
                    let ok = d[1].signum_i() < 0 && d[2].signum_i() > 0;
                    o.observe(ok, (-f(&d[1])).min(f(&d[2])), || {
                        format!("S{}({}, {}) at t = {t}: S' = {:?}, S'' = {:?}", s.j.index(), s.u, s.v, d[1], d[2])
                    });
                    Ok(o)
                }))
            },
        ),
        run_check(
            "fd_agreement",
            "central differences (h = 1e-4) match exact derivatives to relative 1e-6",
            json!({ "t": FD_REFERENCE_T, "h": FD_STEP, "uv": cfg.uv_pairs }),
            cfg.timings,
            || {
                Ok(over_specs_ts(&specs, &[FD_REFERENCE_T], |s, t| {
                    let mp = ModularPoint::new(t)?;
                    let d = quotient_t_derivs_real(s, &mp, 2)?;
                    let mut o = Outcome::default();
                    for k in 1..=2u32 {
                        let fd = fd_oracle_real(s, t, k, FD_STEP)?;
                        let rel = Real::rel_diff(&fd, &d[k as usize]);
                        o.observe(rel < FD_REL, FD_REL - rel, || {
                            format!("S{}({}, {}) k = {k} at t = {t}: relative error {rel:e}", s.j.index(), s.u, s.v)
                        });
                    }
                    Ok(o)
                }))
            },
        ),
        run_check(
            "fd_convergence_order",
            "finite-difference error shrinks at order 2 in h",
            json!({ "t_grid": cfg.t_grid, "h": [FD_STEP, FD_STEP / 2.0], "uv": cfg.uv_pairs }),
            cfg.timings,
            || {
                Ok(over_specs_ts(&specs, &ts, |s, t| {
                    let mut o = Outcome::default();
                    for k in 1..=2u32 {
                        let order = fd_order(s, t, k, FD_STEP)?;
                        let (lo, hi) = FD_ORDER_RANGE;
                        let ok = order >= lo && order <= hi;
                        o.observe(ok, (order - lo).min(hi - order), || {
                            format!("S{}({}, {}) k = {k} at t = {t}: order {order:.3}", s.j.index(), s.u, s.v)
                        });
                    }
                    Ok(o)
                }))
            },
        ),
    ]
}

/// log2 of the ratio of finite-difference errors at steps h and h/2.
pub fn fd_order(spec: &QuotientSpec, t: f64, k: u32, h: f64) -> Result<f64> {
    let mp = ModularPoint::new(t)?;
    let exact = quotient_t_derivs_real(spec, &mp, k as usize)?.swap_remove(k as usize);
    let e1 = (fd_oracle_real(spec, t, k, h)? - &exact).abs();
    let e2 = (fd_oracle_real(spec, t, k, h / 2.0)? - &exact).abs();
    Ok((e1.ln_abs_f64() - e2.ln_abs_f64()) / std::f64::consts::LN_2)
}

fn monotonicity(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ts = cfg.t_grid.points();
    ThetaIndex::ALL
        .iter()
        .map(|&j| {
            let increasing = matches!(j, ThetaIndex::One | ThetaIndex::Four);
            let claim = format!(
                "S{} positive and strictly {} in t",
                j.index(),
                if increasing { "increasing" } else { "decreasing" }
            );
            let specs: Vec<QuotientSpec> = cfg.uv_pairs.iter().filter_map(|&(u, v)| QuotientSpec::strict(j, u, v).ok()).collect();
            run_check(&format!("monotone_s{}", j.index()), &claim, uv_params(cfg), cfg.timings, || {
                let pairs: Vec<usize> = (0..ts.len()).collect();
                let jobs: Vec<(QuotientSpec, usize)> = specs.iter().flat_map(|s| pairs.iter().map(move |&i| (*s, i))).collect();
                let parts: Vec<Outcome> = jobs
                    .par_iter()
                    .map(|(s, i)| {
                        let body = || -> Result<Outcome> {
                            let t = ts[*i];
                            let mut o = Outcome::default();
                            let val = quotient_real(s, &ModularPoint::new(t)?)?;
                            o.observe(val.signum_i() > 0, f(&val), || format!("S{} = {val:?} at t = {t}", s.j.index()));
                            if let Some(&t2) = ts.get(i + 1) {
                                let inc = s_increment(s, t, t2)?;
                                let signed = if increasing { inc.clone() } else { -&inc };
                                o.observe(signed.signum_i() > 0, f(&(&signed / &val)), || {
                                    format!("S{}({}, {}) from t = {t} to {t2}: increment {inc:?}", s.j.index(), s.u, s.v)
                                });
                            }
                            Ok(o)
                        };
                        body().unwrap_or_else(|e| Outcome { worst_margin: None, violations: 1, detail: Some(e.to_string()) })
                    })
                    .collect();
                let mut out = Outcome::default();
                for p in parts {
                    out.merge(p);
                }
                Ok(out)
            })
        })
        .collect()
}

fn scan_check(
    cfg: &RunConfig,
    ctxs: &[(f64, Result<ProofContext>)],
    id: &str,
    claim: &str,
    function: FunctionId,
    sign: ClaimedSign,
    interval: impl Fn(&ProofContext) -> Result<(f64, f64)> + Sync,
) -> CheckRecord {
    run_check(id, claim, scan_params(cfg), cfg.timings, || {
        over_ts(ctxs, |t, c| {
            let r = sign_scan(function, c, sign, interval(c)?, cfg.x_grid_n, cfg.delta)?;
            Ok(from_scan(&r, t))
        })
    })
}

fn limit_check(t: f64, c: &ProofContext, function: FunctionId, at: Endpoint, o: &mut Outcome) -> Result<()> {
    let est = endpoint_limit(function, at, c, ENDPOINT_TOL)?;
    let v = est.value.abs().to_f64();
    o.observe(v < ENDPOINT_TOL, ENDPOINT_TOL - v, || format!("t = {t}: {function}({at}) = {v:e}"));
    Ok(())
}

fn near_half(cfg: &RunConfig) -> Vec<CheckRecord> {
    use ClaimedSign::*;
    use FunctionId::*;
    let ctxs = contexts(&cfg.scan_ts);
    let whole = |_: &ProofContext| Ok((0.0, 0.5));
    let below_a1 = |c: &ProofContext| roots_a1_a2(c, ROOT_TOL).map(|(a1, _)| (0.0, a1));
    let above_a2 = |c: &ProofContext| roots_a1_a2(c, ROOT_TOL).map(|(_, a2)| (a2, 0.5));
    vec![
        scan_check(cfg, &ctxs, "f2_negative", "F2 < 0 on (0, 1/2)", F2, Negative, whole),
        scan_check(cfg, &ctxs, "f2_prime_positive", "F2' > 0 on (0, 1/2)", F2Prime, Positive, whole),
        run_check("f2_limit_at_half", "F2(1/2) = 0", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let mut o = Outcome::default();
                limit_check(t, c, F2, Endpoint::Half, &mut o)?;
                Ok(o)
            })
        }),
        run_check("roots_a1_a2", "0 < a1 < a2 < 1/2, back-substitution residuals below 1e-8", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let (a1, a2) = roots_a1_a2(c, ROOT_TOL)?;
                let rd = crate::proofcheck::RootData {
                    a1,
                    a2,
                    x0: f64::NAN,
                    wp_target_a1: f64::NAN,
                    wp_target_a2: f64::NAN,
                    wp_target_x0: f64::NAN,
                };
                let res = root_residuals(c, &rd)?;
                let worst = res.a1.max(res.a2);
                let mut o = Outcome::default();
                o.observe(worst < ROOT_RESIDUAL, a1.min(a2 - a1).min(0.5 - a2), || format!("t = {t}: residuals {res:?}"));
                Ok(o)
            })
        }),
        scan_check(cfg, &ctxs, "g2_negative_below_a1", "G2 < 0 on (0, a1)", G2, Negative, below_a1),
        scan_check(cfg, &ctxs, "g2_positive_above_a2", "G2 > 0 on (a2, 1/2)", G2, Positive, above_a2),
        run_check("g2_endpoint_limits", "G2(0) = 0 = G2(1/2)", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let mut o = Outcome::default();
                limit_check(t, c, G2, Endpoint::Zero, &mut o)?;
                limit_check(t, c, G2, Endpoint::Half, &mut o)?;
                Ok(o)
            })
        }),
        scan_check(cfg, &ctxs, "q_above_one", "Q > 1 on (a2, 1/2)", QMinusOne, Positive, above_a2),
        scan_check(cfg, &ctxs, "nu1_negative", "2 theta2'/theta2 + P'/(P - c0) < 0", Nu1, Negative, whole),
        scan_check(cfg, &ctxs, "theta2_logderiv_negative", "theta2'/theta2 < 0 on (0, 1/2)", Theta2LogDeriv, Negative, whole),
        scan_check(cfg, &ctxs, "p_plus_r1_below_a1", "P + r1 < 0 on (0, a1)", PPlusR1, Negative, below_a1),
        scan_check(cfg, &ctxs, "quad_below_a1", "P^2 + s1 P + s0 < 0 on (0, a1)", Quad, Negative, below_a1),
        scan_check(cfg, &ctxs, "two_p_plus_s1_below_a1", "2P + s1 < 0 on (0, a1)", TwoPPlusS1, Negative, below_a1),
        scan_check(cfg, &ctxs, "p_plus_r1_above_a2", "P + r1 > 0 on (a2, 1/2)", PPlusR1, Positive, above_a2),
        scan_check(cfg, &ctxs, "quad_above_a2", "P^2 + s1 P + s0 > 0 on (a2, 1/2)", Quad, Positive, above_a2),
        scan_check(cfg, &ctxs, "root_gap_above_a2", "2P + s1 > sqrt(Delta)/(g2 - 12 c0^2) on (a2, 1/2)", RootGap, Positive, above_a2),
        run_check("r1_above_half_s1", "P + r1 > P + s1/2", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let gap = &c.dc.r1 - &c.dc.s1 / 2.0;
                let mut o = Outcome::default();
                o.observe(gap.signum_i() > 0, f(&gap), || format!("t = {t}: r1 - s1/2 = {gap:?}"));
                Ok(o)
            })
        }),
    ]
}

fn top_edge(cfg: &RunConfig) -> Vec<CheckRecord> {
    use ClaimedSign::*;
    use FunctionId::*;
    let ctxs = contexts(&cfg.scan_ts);
    let whole = |_: &ProofContext| Ok((0.0, 0.5));
    vec![
        scan_check(cfg, &ctxs, "f3_positive", "F3 > 0 on (0, 1/2)", F3, Positive, whole),
        scan_check(cfg, &ctxs, "f3_prime_negative", "F3' < 0 on (0, 1/2)", F3Prime, Negative, whole),
        run_check("f3_at_half", "F3(1/2) closed form is positive and equals the limit", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let closed = f3_at_half(&c.ed);
                let est = limit_estimate(F3, Endpoint::Half, c)?;
                let rel = Real::rel_diff(&closed, &est.value);
                let mut o = Outcome::default();
                o.observe(closed.signum_i() > 0, f(&closed), || format!("t = {t}: F3(1/2) = {closed:?}"));
                o.observe(rel < ENDPOINT_TOL, ENDPOINT_TOL - rel, || format!("t = {t}: limit differs by {rel:e}"));
                Ok(o)
            })
        }),
        run_check("g2_minus_12e3sq", "g2 - 12 e3^2 = 4 (e3 - e1)(e2 - e3) < 0", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let p = g2_minus_12e3sq(&c.ed);
                let rel = p.rel_diff();
                let mut o = Outcome::default();
                o.observe(rel < IDENTITY_REL, IDENTITY_REL - rel, || format!("t = {t}: relative difference {rel:e}"));
                o.observe(p.direct.signum_i() < 0, -f(&p.direct), || format!("t = {t}: g2 - 12 e3^2 = {:?}", p.direct));
                Ok(o)
            })
        }),
        run_check("am_gm_surrogate", "AM-GM bound used when c0 > 0", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let mut o = Outcome::default();
                if c.ed.c0.signum_i() > 0 {
                    let v = am_gm_surrogate(&c.ed);
                    o.observe(v.signum_i() >= 0, f(&v), || format!("t = {t}: surrogate {v:?}"));
                }
                Ok(o)
            })
        }),
        scan_check(cfg, &ctxs, "g3_negative", "G3 < 0 on (0, 1/2)", G3, Negative, whole),
        run_check("g3_endpoint_limits", "G3(0) = 0 = G3(1/2)", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let mut o = Outcome::default();
                limit_check(t, c, G3, Endpoint::Zero, &mut o)?;
                limit_check(t, c, G3, Endpoint::Half, &mut o)?;
                Ok(o)
            })
        }),
        scan_check(cfg, &ctxs, "a2_top_positive", "A2 > 0 along the top edge", A2Top, Positive, whole),
        run_check("x0_unique", "G3' has exactly one zero x0 in (0, 1/2)", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let x0 = root_x0(c, ROOT_TOL)?;
                let xs = linspace(cfg.delta, 0.5 - cfg.delta, cfg.x_grid_n);
                let vals: Vec<Real> = xs.par_iter().map(|&x| FunctionId::G3.eval(x, c)).collect::<Result<_>>()?;
                let changes = difference_sign_changes(&xs, &vals);
                let h = xs[1] - xs[0];
                let mut o = Outcome::default();
                let ok = changes.len() == 1 && (changes[0] - x0).abs() <= h;
                let miss = changes.first().map_or(f64::NAN, |c| h - (c - x0).abs());
                o.observe(ok, miss, || format!("t = {t}: x0 = {x0}, difference sign changes at {changes:?}"));
                Ok(o)
            })
        }),
    ]
}

fn wp_cross_check(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ctxs = contexts(&cfg.scan_ts);
    vec![
        run_check(
            "wp_ode_residual",
            "P'^2 = 4P^3 - g2 P - g3 on both edges",
            scan_params(cfg),
            cfg.timings,
            || {
                over_ts(&ctxs, |t, c| {
                    let xs = linspace(cfg.delta, 0.5 - cfg.delta, cfg.x_grid_n);
                    let mut o = Outcome::default();
                    for edge in [EdgeId::NearHalf, EdgeId::TopEdge] {
                        let res: Vec<f64> = xs
                            .par_iter()
                            .map(|&x| edge_sample(edge, x, &c.mp, &c.ed).map(|s| s.jet.ode_residual(&c.ed)))
                            .collect::<Result<_>>()?;
                        let worst = res.iter().copied().fold(0.0, f64::max);
                        o.observe(worst <= ODE_RESIDUAL_LIMIT, ODE_RESIDUAL_LIMIT - worst, || {
                            format!("t = {t}: {edge} residual {worst:e}")
                        });
                    }
                    Ok(o)
                })
            },
        ),
        run_check("wp_laurent", "theta route matches the Laurent expansion at the pole", scan_params(cfg), cfg.timings, || {
            over_ts(&ctxs, |t, c| {
                let mut o = Outcome::default();
                for d in [1e-2, 5e-3, 2e-3, 1e-3] {
                    let x = 0.5 - d;
                    let s = edge_sample(EdgeId::NearHalf, x, &c.mp, &c.ed)?;
                    let (p, p1) = laurent_near_half(&c.mp.real(0.5 - x), &c.ed);
                    let rel = Real::rel_diff(&s.jet.p, &p).max(Real::rel_diff(&s.jet.p1, &p1));
                    o.observe(rel < LAURENT_REL, LAURENT_REL - rel, || format!("t = {t}, d = {d}: relative difference {rel:e}"));
                }
                Ok(o)
            })
        }),
    ]
}

fn identities(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ctxs = contexts(&cfg.t_grid.points());
    let residuals: Vec<(f64, std::result::Result<IdentityResiduals, String>)> = ctxs
        .par_iter()
        .map(|(t, c)| {
            let r = match c {
                Ok(c) => identity_residuals(c).map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            (*t, r)
        })
        .collect();
    type Pick = fn(&IdentityResiduals) -> f64;
    let items: [(&str, &str, Pick); 6] = [
        ("identity_th4", "theta3 theta4 = theta4(0 | 2 tau)^2", |r| r.th4),
        ("identity_theta4_fourth", "theta4^4 = 1 + 8 sum (-1)^n q^n / (1 + q^n)^2", |r| r.four_p),
        ("identity_e1_minus_c0", "e1 - c0 = pi^2 + 8 pi^2 sum q^2n / (1 + q^2n)^2", |r| r.bf2),
        ("identity_jacobi_quartic", "theta2^4 + theta4^4 = theta3^4", |r| r.quartic),
        ("identity_parity", "theta1 odd, theta2..4 even", |r| r.parity),
        ("identity_periodicity", "theta1, theta2 antiperiodic and theta3, theta4 periodic under z -> z + 1", |r| r.periodicity),
    ];
    let mut out: Vec<CheckRecord> = items
        .iter()
        .map(|(id, claim, pick)| {
            run_check(id, claim, grid_params(cfg), cfg.timings, || {
                let mut o = Outcome::default();
                for (t, r) in &residuals {
                    match r {
                        Ok(r) => {
                            let v = pick(r);
                            o.observe(v < IDENTITY_REL, IDENTITY_REL - v, || format!("t = {t}: residual {v:e}"));
                        }
                        Err(e) => o.observe(false, f64::NAN, || format!("t = {t}: {e}")),
                    }
                }
                Ok(o)
            })
        })
        .collect();
    out.push(run_check("e1_minus_c0_margin", "e1 - c0 > pi^2 theta3^2 theta4^2", grid_params(cfg), cfg.timings, || {
        over_ts(&ctxs, |t, c| {
            let m = bf_margin(&c.mp, &c.ed);
            let mut o = Outcome::default();
            o.observe(m.signum_i() > 0, f(&m), || format!("t = {t}: margin {m:?}"));
            Ok(o)
        })
    }));
    out
}
