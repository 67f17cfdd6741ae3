//! Scalar backends: exact rationals for reference computations and `f64` for
//! floating-point evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};

/// Exact rational scalar, always stored in lowest terms.
pub type Rat = BigRational;

/// Number field the whole crate is generic over.
///
/// Two backends implement it: [`Rat`] for exact reference arithmetic and
/// `f64` for fast evaluation. The backend is a type parameter everywhere, so
/// mixing the two in one expression is rejected at compile time.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Display + 'static {
    /// True on the exact rational backend.
    const EXACT: bool;

    fn from_i64(value: i64) -> Self;

    /// Conversion from an exact rational; lossy on the float backend.
    fn from_rat(value: &Rat) -> Self;

    /// Best-effort `f64` image of the value, for diagnostics and tolerances.
    fn to_f64_lossy(&self) -> f64;

    /// True when the value is an integer <= -1. Those are the degenerate
    /// Laguerre parameters.
    fn is_negative_integer(&self) -> bool;

    /// Backend-aware zero test for residuals: exact zero on the rational
    /// backend, small relative to `scale` (never below 1) on the float one.
    fn is_negligible(&self, scale: f64) -> bool;
}

/// Relative tolerance used by the float backend's residual checks.
pub const FLOAT_RESIDUAL_TOL: f64 = 1e-9;

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_i64(value: i64) -> Self {
        Rat::from_integer(BigInt::from(value))
    }

    fn from_rat(value: &Rat) -> Self {
        value.clone()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_negative_integer(&self) -> bool {
        self.is_integer() && self.is_negative()
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn from_rat(value: &Rat) -> Self {
        value.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn is_negative_integer(&self) -> bool {
        *self < 0.0 && self.fract() == 0.0
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_RESIDUAL_TOL * scale.abs().max(1.0)
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with the empty product 1
/// at `n = 0`.
pub fn pochhammer<S: Scalar>(a: &S, n: usize) -> S {
    let mut product = S::one();
    let mut factor = a.clone();
    for _ in 0..n {
        product = product * factor.clone();
        factor = factor + S::one();
    }
    product
}

/// `n!` in the scalar backend.
pub fn factorial<S: Scalar>(n: usize) -> S {
    pochhammer(&S::one(), n)
}

/// Convenience constructor for exact fractions in tests and examples.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}
