//! Dense univariate polynomials over a [`Scalar`] backend.
//!
//! Coefficients are stored in the monomial basis, lowest degree first, with
//! trailing zeros trimmed so that equal polynomials compare equal.

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense polynomial; `coeffs()[k]` multiplies `x^k`.
#[derive(Clone, PartialEq)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let mut poly = Poly { coeffs };
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(value: S) -> Self {
        Poly::from_coeffs(vec![value])
    }

    /// The monomial `coeff * x^degree`.
    pub fn monomial(coeff: S, degree: usize) -> Self {
        if coeff.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![S::zero(); degree + 1];
        coeffs[degree] = coeff;
        Poly { coeffs }
    }

    /// The linear factor `x - root`.
    pub fn linear_factor(root: &S) -> Self {
        Poly::from_coeffs(vec![-root.clone(), S::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading_coeff(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: &S) -> S {
        let mut value = S::zero();
        for c in self.coeffs.iter().rev() {
            value = value * x.clone() + c.clone();
        }
        value
    }

    /// First derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_i64(k as i64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Derivative of the given order; order 0 is the polynomial itself.
    pub fn derivative_n(&self, order: usize) -> Self {
        let mut poly = self.clone();
        for _ in 0..order {
            if poly.is_zero() {
                break;
            }
            poly = poly.derivative();
        }
        poly
    }

    /// The polynomial scaled by a constant.
    pub fn scale(&self, factor: &S) -> Self {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        )
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, exponent: usize) -> Self {
        let mut result = Poly::one();
        for _ in 0..exponent {
            result = &result * self;
        }
        result
    }

    /// Taylor expansion around `center` truncated after the `(x - center)^order`
    /// term. With `order >= deg` this reproduces the polynomial.
    pub fn taylor_truncate(&self, center: &S, order: usize) -> Self {
        let shift = Poly::linear_factor(center);
        let mut result = Poly::zero();
        let mut deriv = self.clone();
        let mut power = Poly::one();
        let mut k_factorial = S::one();
        for k in 0..=order {
            if deriv.is_zero() {
                break;
            }
            let coefficient = deriv.eval(center) / k_factorial.clone();
            result = &result + &power.scale(&coefficient);
            deriv = deriv.derivative();
            power = &power * &shift;
            k_factorial = k_factorial * S::from_i64(k as i64 + 1);
        }
        result
    }

    /// Euclidean division, returning `(quotient, remainder)` with
    /// `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(d_deg) = divisor.degree() else {
            return Err(Error::DivisionByZeroPoly);
        };
        let d_lead = divisor.leading_coeff().expect("nonzero divisor").clone();
        let mut remainder = self.coeffs.clone();
        if remainder.len() <= d_deg {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quotient = vec![S::zero(); remainder.len() - d_deg];
        for k in (0..quotient.len()).rev() {
            let q = remainder[k + d_deg].clone() / d_lead.clone();
            if !q.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    let update = remainder[k + i].clone() - q.clone() * dc.clone();
                    remainder[k + i] = update;
                }
            }
            quotient[k] = q;
        }
        remainder.truncate(d_deg);
        Ok((Poly::from_coeffs(quotient), Poly::from_coeffs(remainder)))
    }

    /// Division that must leave no remainder. On the float backend "no
    /// remainder" means negligible relative to the dividend's magnitude.
    pub fn div_exact(&self, divisor: &Self, context: &'static str) -> Result<Self> {
        let (quotient, remainder) = self.div_rem(divisor)?;
        if !remainder.is_negligible(self.max_abs_coeff_f64()) {
            return Err(Error::NonzeroRemainder { context });
        }
        Ok(quotient)
    }

    /// True when every coefficient is negligible at the given scale (exact
    /// zero on the rational backend).
    pub fn is_negligible(&self, scale: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(scale))
    }

    /// Largest coefficient magnitude as `f64`, or 0 for the zero polynomial.
    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.to_f64_lossy().abs())
            .fold(0.0, f64::max)
    }

    /// Coefficient-wise conversion into another backend.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Image of the polynomial on the float backend.
    pub fn to_float(&self) -> Poly<f64> {
        self.map(|c| c.to_f64_lossy())
    }
}

impl Poly<Rat> {
    /// Exact polynomial read back as floats, for tolerance comparisons.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_float().eval(&x)
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*x", c)?,
                _ => write!(f, "({})*x^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl<'a, S: Scalar> Add for &'a Poly<S> {
    type Output = Poly<S>;

    fn add(self, other: &'a Poly<S>) -> Poly<S> {
        let (longer, shorter) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = longer.coeffs.clone();
        for (k, c) in shorter.coeffs.iter().enumerate() {
            let sum = coeffs[k].clone() + c.clone();
            coeffs[k] = sum;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<'a, S: Scalar> Sub for &'a Poly<S> {
    type Output = Poly<S>;

    fn sub(self, other: &'a Poly<S>) -> Poly<S> {
        self + &(-other)
    }
}

impl<'a, S: Scalar> Mul for &'a Poly<S> {
    type Output = Poly<S>;

    fn mul(self, other: &'a Poly<S>) -> Poly<S> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let term = a.clone() * b.clone();
                let sum = coeffs[i + j].clone() + term;
                coeffs[i + j] = sum;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;

    fn neg(self) -> Poly<S> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl<S: Scalar> $trait for Poly<S> {
            type Output = Poly<S>;
            fn $method(self, other: Poly<S>) -> Poly<S> {
                (&self).$method(&other)
            }
        }

        impl<'a, S: Scalar> $trait<&'a Poly<S>> for Poly<S> {
            type Output = Poly<S>;
            fn $method(self, other: &'a Poly<S>) -> Poly<S> {
                (&self).$method(other)
            }
        }

        impl<'a, S: Scalar> $trait<Poly<S>> for &'a Poly<S> {
            type Output = Poly<S>;
            fn $method(self, other: Poly<S>) -> Poly<S> {
                self.$method(&other)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;

    fn neg(self) -> Poly<S> {
        -&self
    }
}

/// Truncation of the confluent hypergeometric series `1F1(a; b; x)` after the
/// `x^terms` coefficient: `sum_{k=0}^{terms} (a)_k / ((b)_k k!) x^k`.
///
/// Fails when a denominator factor `(b)_k` vanishes inside the truncation
/// range, which happens exactly when `b` is zero or a negative integer
/// greater than `-terms`.
pub fn hyp1f1_truncated<S: Scalar>(a: &S, b: &S, terms: usize) -> Result<Poly<S>> {
    let mut coeffs = Vec::with_capacity(terms + 1);
    let mut term = S::one();
    coeffs.push(term.clone());
    for k in 0..terms {
        let denominator_factor = b.clone() + S::from_i64(k as i64);
        if denominator_factor.is_zero() {
            return Err(Error::HypergeometricPole {
                b: b.to_string(),
                term: k + 1,
            });
        }
        let numerator_factor = a.clone() + S::from_i64(k as i64);
        term = term * numerator_factor / (denominator_factor * S::from_i64(k as i64 + 1));
        coeffs.push(term.clone());
    }
    Ok(Poly::from_coeffs(coeffs))
}
