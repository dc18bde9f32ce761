//! Arbitrary-precision real scalar used by every evaluator in the crate.
//!
//! `Real` is a thin wrapper over an MPFR float. Each value carries its own
//! precision; binary operations produce a result at the larger of the two
//! operand precisions, and mixed operations with `f64` keep the precision of
//! the `Real` operand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Smallest precision handed to MPFR. Double mode runs at exactly this.
pub const DOUBLE_BITS: u32 = 53;

/// Accumulation mode, selected by the `THETAKIT_PRECISION` environment
/// variable (`double` or `extended`, default `extended`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrecisionMode {
    /// 53-bit terms with a 106-bit (compensated) accumulator.
    Double,
    /// Precision grows with t so that quantities of size q^6 keep full
    /// double accuracy after cancellation.
    #[default]
    Extended,
}

pub const PRECISION_ENV: &str = "THETAKIT_PRECISION";

const MAX_BITS: u32 = 1 << 16;

impl PrecisionMode {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(PRECISION_ENV) {
            Err(_) => Ok(Self::Extended),
            Ok(v) => v.parse(),
        }
    }

    /// Working precision in bits for the nome q = exp(-pi^2 t).
    pub fn bits_for(self, t: f64) -> u32 {
        match self {
            PrecisionMode::Double => DOUBLE_BITS,
            PrecisionMode::Extended => {
                let large = 6.0 * std::f64::consts::PI.powi(2) * t / std::f64::consts::LN_2;
                // e1 - e2 shrinks like exp(-1/t) relative to e1 as t -> 0
                let small = 2.0 / (t * std::f64::consts::LN_2);
                (128.0 + (large + small).ceil().max(0.0)).min(MAX_BITS as f64) as u32
            }
        }
    }

    /// Precision of series accumulators given the term precision.
    pub fn accumulator_bits(self, bits: u32) -> u32 {
        match self {
            PrecisionMode::Double => 2 * bits,
            PrecisionMode::Extended => bits + 32,
        }
    }
}

impl std::str::FromStr for PrecisionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" => Ok(Self::Double),
            "extended" => Ok(Self::Extended),
            other => Err(format!("unknown precision mode `{other}` (expected double or extended)")),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Real(Float);

impl Real {
    pub fn from_f64(x: f64, prec: u32) -> Self {
        Real(Float::with_val(prec, x))
    }

    pub fn zero(prec: u32) -> Self {
        Real(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }

    pub fn pi(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Pi))
    }

    /// Exact rational `num / den` rounded once to `prec` bits.
    pub fn ratio(num: i64, den: i64, prec: u32) -> Self {
        let mut f = Float::with_val(prec, num);
        f /= den;
        Real(f)
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Copy of `self` re-rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Real(Float::with_val(prec, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    /// -1, 0 or +1.
    pub fn signum_i(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.clone().sqrt())
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn exp_m1(&self) -> Self {
        Real(self.0.clone().exp_m1())
    }

    pub fn ln(&self) -> Self {
        Real(self.0.clone().ln())
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.prec()));
        (Real(s), Real(c))
    }

    pub fn tan(&self) -> Self {
        Real(self.0.clone().tan())
    }

    pub fn powi(&self, n: i32) -> Self {
        Real(self.0.clone().pow(n))
    }

    pub fn square(&self) -> Self {
        Real(self.0.clone().square())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Base-2 exponent e with 2^(e-1) <= |x| < 2^e, or `None` for zero and non-finite values.
    pub fn exponent2(&self) -> Option<i32> {
        self.0.get_exp()
    }

    /// Natural log of |x| as an `f64`, valid far outside the `f64` exponent range.
    pub fn ln_abs_f64(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.0.to_f64_exp();
        m.abs().ln() + e as f64 * std::f64::consts::LN_2
    }

    /// Relative difference |a - b| / max(|a|, |b|), 0 when both vanish.
    pub fn rel_diff(a: &Real, b: &Real) -> f64 {
        let scale = a.abs().max(b.abs());
        if scale.is_zero() {
            return 0.0;
        }
        ((a - b).abs() / scale).to_f64()
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.20e}", self.0)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

fn joint(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $op:tt) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(Float::with_val(joint(&self.0, &rhs.0), &self.0 $op &rhs.0))
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                &self $op rhs
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                &self $op &rhs
            }
        }
        impl $tr<f64> for &Real {
            type Output = Real;
            fn $m(self, rhs: f64) -> Real {
                Real(Float::with_val(self.0.prec(), &self.0 $op rhs))
            }
        }
        impl $tr<f64> for Real {
            type Output = Real;
            fn $m(self, rhs: f64) -> Real {
                &self $op rhs
            }
        }
        impl $tr<&Real> for f64 {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(Float::with_val(rhs.0.prec(), self $op &rhs.0))
            }
        }
        impl $tr<Real> for f64 {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
        impl $atr<&Real> for Real {
            fn $am(&mut self, rhs: &Real) {
                *self = &*self $op rhs;
            }
        }
        impl $atr<Real> for Real {
            fn $am(&mut self, rhs: Real) {
                *self = &*self $op &rhs;
            }
        }
        impl $atr<f64> for Real {
            fn $am(&mut self, rhs: f64) {
                *self = &*self $op rhs;
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign, +);
real_binop!(Sub, sub, SubAssign, sub_assign, -);
real_binop!(Mul, mul, MulAssign, mul_assign, *);
real_binop!(Div, div, DivAssign, div_assign, /);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.0.prec(), -&self.0))
    }
}
