//! Numerical checks of the inequalities, sign patterns, roots and endpoint
//! limits behind the convexity theorem, plus the complete-monotonicity scan.

mod functions;
mod identities;
mod limits;
mod roots;
mod scan;

pub use functions::*;
pub use identities::*;
pub use limits::*;
pub use roots::*;
pub use scan::*;

use crate::elliptic::{derived_constants, half_periods_and_invariants, DerivedConstants, EllipticData};
use crate::error::Result;
use crate::real::PrecisionMode;
use crate::theta::ModularPoint;

/// Default distance kept from interval endpoints in scans.
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Default number of points per scanned interval.
pub const DEFAULT_GRID: usize = 512;

/// Everything that depends on t alone.
#[derive(Clone, Debug)]
pub struct ProofContext {
    pub mp: ModularPoint,
    pub ed: EllipticData,
    pub dc: DerivedConstants,
}

impl ProofContext {
    pub fn new(t: f64) -> Result<Self> {
        Self::from_point(ModularPoint::new(t)?)
    }

    pub fn with_mode(t: f64, mode: PrecisionMode) -> Result<Self> {
        Self::from_point(ModularPoint::with_mode(t, mode)?)
    }

    pub fn from_point(mp: ModularPoint) -> Result<Self> {
        let tol = 1e-10;
        let ed = half_periods_and_invariants(&mp, tol)?;
        let dc = derived_constants(&ed)?;
        Ok(ProofContext { mp, ed, dc })
    }

    pub fn t(&self) -> f64 {
        self.mp.t()
    }
}
