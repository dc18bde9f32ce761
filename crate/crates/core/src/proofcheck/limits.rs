use std::fmt;

use crate::error::{Error, Result};
use crate::real::Real;

use super::scan::FunctionId;
use super::ProofContext;

/// Number of approach distances.
pub const LIMIT_LEVELS: usize = 6;
/// First approach distance; each further one is half the previous.
pub const LIMIT_START: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    Half,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Zero => "0",
            Endpoint::Half => "1/2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LimitEstimate {
    pub value: Real,
    /// |T_{n,n} - T_{n-1,n-1}| of the extrapolation table.
    pub error_estimate: f64,
    pub distances: Vec<f64>,
}

/// Polynomial extrapolation to d = 0 of samples taken at distances d.
pub fn extrapolate_to_zero(distances: &[f64], samples: &[Real]) -> (Real, f64) {
    let n = samples.len();
    let mut row: Vec<Real> = samples.to_vec();
    let mut diag = vec![row[n - 1].clone()];
    // Neville: after pass m, row[i] holds the degree-m value through nodes i-m..=i
    for m in 1..n {
        for i in (m..n).rev() {
            let (di, dim) = (distances[i], distances[i - m]);
            let gap = Real::from_f64(dim, row[i].prec()) - di;
            row[i] = (&row[i] * dim - &row[i - 1] * di) / gap;
        }
        diag.push(row[n - 1].clone());
    }
    let err = (&diag[n - 1] - &diag[n - 2]).abs().to_f64();
    (diag.swap_remove(n - 1), err)
}

/// Richardson-style limit of `function` at `endpoint`, failing when the
/// error estimate exceeds `tol`.
pub fn endpoint_limit(function: FunctionId, endpoint: Endpoint, ctx: &ProofContext, tol: f64) -> Result<LimitEstimate> {
    let est = limit_estimate(function, endpoint, ctx)?;
    if !(est.error_estimate <= tol) {
        return Err(Error::Limit(format!(
            "{function} at {endpoint}: extrapolation error {:e} exceeds {tol:e}",
            est.error_estimate
        )));
    }
    Ok(est)
}

/// The extrapolated value regardless of its error estimate.
pub fn limit_estimate(function: FunctionId, endpoint: Endpoint, ctx: &ProofContext) -> Result<LimitEstimate> {
    let mut distances = Vec::with_capacity(LIMIT_LEVELS);
    let mut samples = Vec::with_capacity(LIMIT_LEVELS);
    for k in 0..LIMIT_LEVELS {
        let d = LIMIT_START * 0.5f64.powi(k as i32);
        let (x, dist) = match endpoint {
            Endpoint::Zero => (d, d),
            // 0.5 - x is exact for x in [1/4, 1/2]
            Endpoint::Half => {
                let x = 0.5 - d;
                (x, 0.5 - x)
            }
        };
        samples.push(function.eval(x, ctx)?);
        distances.push(dist);
    }
    let (value, error_estimate) = extrapolate_to_zero(&distances, &samples);
    Ok(LimitEstimate { value, error_estimate, distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::PrecisionMode;

    #[test]
    fn extrapolates_polynomials_exactly() {
        let d: Vec<f64> = (0..6).map(|k| 0.01 * 0.5f64.powi(k)).collect();
        let s: Vec<Real> = d
            .iter()
            .map(|&x| {
                let x = Real::from_f64(x, 128);
                3.0 - &x * 2.0 + x.powi(3) * 7.0
            })
            .collect();
        let (v, err) = extrapolate_to_zero(&d, &s);
        assert!((&v - 3.0).abs().to_f64() < 1e-30, "{v:?} {s:?}");
        assert!(err < 1e-30, "{err}");
    }

    #[test]
    fn f2_vanishes_at_half() {
        let ctx = ProofContext::with_mode(0.5, PrecisionMode::Extended).unwrap();
        let est = endpoint_limit(FunctionId::F2, Endpoint::Half, &ctx, 1e-6).unwrap();
        assert!(est.value.abs().to_f64() < 1e-6, "{:?}", est.value);
        let g3 = endpoint_limit(FunctionId::G3, Endpoint::Zero, &ctx, 1e-6).unwrap();
        assert!(g3.value.abs().to_f64() < 1e-6);
    }
}
