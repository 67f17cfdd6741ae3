//! Classical Laguerre polynomials, their moment functional, structure
//! relations, and Gauss-Laguerre quadrature.
//!
//! The moment functional is normalized so that the zeroth moment is 1; with
//! that choice the squared norm of the degree-n polynomial is `(a+1)_n / n!`
//! for parameter `a`.

use crate::error::{Error, Result};
use crate::poly::{hyp1f1_truncated, Poly};
use crate::scalar::{factorial, pochhammer, Scalar};
use nalgebra::{DMatrix, SymmetricEigen};
use std::sync::RwLock;

/// The Laguerre polynomial of degree `n` by the three-term recurrence, for an
/// arbitrary parameter.
///
/// The polynomials themselves are defined for every `alpha`; only the
/// orthogonality degenerates at negative integers, which is why
/// [`LaguerreFamily`] guards its constructor while this function does not.
/// The parameter-shift identities need that freedom: checking them at
/// `alpha = 0` touches the `alpha = -1` polynomial family.
pub fn laguerre_polynomial_raw<S: Scalar>(alpha: &S, n: usize) -> Poly<S> {
    let mut cache = Vec::with_capacity(n + 1);
    extend_laguerre_cache(alpha, &mut cache, n);
    cache.swap_remove(n)
}

fn extend_laguerre_cache<S: Scalar>(alpha: &S, cache: &mut Vec<Poly<S>>, n: usize) {
    if cache.is_empty() {
        cache.push(Poly::one());
    }
    if cache.len() == 1 && n >= 1 {
        cache.push(Poly::from_coeffs(vec![alpha.clone() + S::one(), -S::one()]));
    }
    while cache.len() <= n {
        let k = cache.len() - 1;
        let linear = Poly::from_coeffs(vec![
            S::from_i64(2 * k as i64 + 1) + alpha.clone(),
            -S::one(),
        ]);
        let lower = cache[k - 1].scale(&(S::from_i64(k as i64) + alpha.clone()));
        let next = (&(&linear * &cache[k]) - &lower).scale(&(S::one() / S::from_i64(k as i64 + 1)));
        cache.push(next);
    }
}

/// The Laguerre family for one parameter value, with a shared polynomial
/// cache.
pub struct LaguerreFamily<S: Scalar> {
    alpha: S,
    cache: RwLock<Vec<Poly<S>>>,
}

impl<S: Scalar> LaguerreFamily<S> {
    /// Builds the family, rejecting parameters at which the moment
    /// functional is not quasi-definite.
    pub fn new(alpha: S) -> Result<Self> {
        if alpha.is_negative_integer() {
            return Err(Error::DegenerateAlpha {
                alpha: alpha.to_string(),
            });
        }
        Ok(LaguerreFamily {
            alpha,
            cache: RwLock::new(Vec::new()),
        })
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    /// The degree-`n` polynomial of the family, from the cached recurrence.
    pub fn poly(&self, n: usize) -> Poly<S> {
        {
            let cache = self.cache.read().expect("cache lock");
            if let Some(p) = cache.get(n) {
                return p.clone();
            }
        }
        let mut cache = self.cache.write().expect("cache lock");
        extend_laguerre_cache(&self.alpha, &mut cache, n);
        cache[n].clone()
    }

    /// Values `L_0(x), ..., L_n(x)` by running the recurrence at the point.
    /// On the float backend this is far better conditioned than evaluating
    /// monomial coefficients, whose terms cancel heavily for moderate `x`.
    pub fn evals_up_to(&self, n: usize, x: &S) -> Vec<S> {
        let mut values = Vec::with_capacity(n + 1);
        values.push(S::one());
        if n == 0 {
            return values;
        }
        values.push(S::one() + self.alpha.clone() - x.clone());
        for k in 1..n {
            let k_s = S::from_i64(k as i64);
            let middle = (k_s.clone() + k_s.clone() + self.alpha.clone() + S::one() - x.clone())
                * values[k].clone();
            let lower = (k_s.clone() + self.alpha.clone()) * values[k - 1].clone();
            values.push((middle - lower) / (k_s + S::one()));
        }
        values
    }

    /// `L_n(x)` by the recurrence at the point.
    pub fn eval_at(&self, n: usize, x: &S) -> S {
        self.evals_up_to(n, x).pop().expect("nonempty")
    }

    /// The same polynomial through its terminating confluent series,
    /// `((a+1)_n / n!) 1F1(-n; a+1; x)`. Serves as an independent cross-check
    /// of the recurrence.
    pub fn hypergeometric(&self, n: usize) -> Result<Poly<S>> {
        let a_plus_one = self.alpha.clone() + S::one();
        let series = hyp1f1_truncated(&S::from_i64(-(n as i64)), &a_plus_one, n)?;
        let prefactor = pochhammer(&a_plus_one, n) / factorial::<S>(n);
        Ok(series.scale(&prefactor))
    }

    /// Squared norm of the degree-`n` polynomial under the unit-mass moment
    /// functional: `(a+1)_n / n!`.
    pub fn squared_norm(&self, n: usize) -> S {
        pochhammer(&(self.alpha.clone() + S::one()), n) / factorial::<S>(n)
    }

    /// Leading coefficient `(-1)^n / n!`.
    pub fn leading_coeff(&self, n: usize) -> S {
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        S::from_i64(sign) / factorial::<S>(n)
    }

    /// The moment functional the family is orthogonal to.
    pub fn functional(&self) -> MomentFunctional<S> {
        MomentFunctional {
            alpha: self.alpha.clone(),
        }
    }
}

/// The Laguerre moment functional, normalized to unit total mass.
#[derive(Clone)]
pub struct MomentFunctional<S: Scalar> {
    alpha: S,
}

impl<S: Scalar> MomentFunctional<S> {
    /// Builds the functional, rejecting degenerate parameters.
    pub fn new(alpha: S) -> Result<Self> {
        if alpha.is_negative_integer() {
            return Err(Error::DegenerateAlpha {
                alpha: alpha.to_string(),
            });
        }
        Ok(MomentFunctional { alpha })
    }

    /// Builds the functional for a parameter already validated elsewhere.
    pub(crate) fn new_unchecked(alpha: S) -> Self {
        MomentFunctional { alpha }
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    /// The `n`-th canonical moment `(a+1)_n`.
    pub fn moment(&self, n: usize) -> S {
        pochhammer(&(self.alpha.clone() + S::one()), n)
    }

    /// The functional applied to a polynomial, termwise through the moments.
    pub fn apply(&self, p: &Poly<S>) -> S {
        p.coeffs()
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (k, c)| acc + c.clone() * self.moment(k))
    }
}

/// Pass/fail record for the classical identities at one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureChecks {
    /// `x (L_n)' = n L_n - (n+a) L_{n-1}`
    pub first_structure: bool,
    /// `L_n = (L_n)' - (L_{n+1})'`
    pub second_structure: bool,
    /// `(L_n)' = -L_{n-1}` at parameter `a+1`
    pub ladder_lowering: bool,
    /// `x (L_n)' + (a-x) L_n = (n+1) L_{n+1}` at parameter `a-1`
    pub ladder_raising: bool,
}

impl StructureChecks {
    pub fn all_pass(&self) -> bool {
        self.first_structure && self.second_structure && self.ladder_lowering && self.ladder_raising
    }
}

/// Verifies the structure relations and ladder identities at degree `n` by
/// polynomial identity, with the degree `-1` polynomial read as zero.
pub fn structure_checks<S: Scalar>(fam: &LaguerreFamily<S>, n: usize) -> StructureChecks {
    let alpha = fam.alpha().clone();
    let l_n = fam.poly(n);
    let l_n1 = fam.poly(n + 1);
    let l_prev = if n >= 1 {
        fam.poly(n - 1)
    } else {
        Poly::zero()
    };
    let x = Poly::monomial(S::one(), 1);
    let identity_holds = |lhs: &Poly<S>, rhs: &Poly<S>| {
        let scale = lhs.max_abs_coeff_f64().max(rhs.max_abs_coeff_f64());
        (lhs - rhs).is_negligible(scale)
    };

    let d_l_n = l_n.derivative();
    let first_lhs = &x * &d_l_n;
    let first_rhs = &l_n.scale(&S::from_i64(n as i64))
        - &l_prev.scale(&(S::from_i64(n as i64) + alpha.clone()));

    let second_rhs = &d_l_n - &l_n1.derivative();

    let lowering_rhs = if n >= 1 {
        -laguerre_polynomial_raw(&(alpha.clone() + S::one()), n - 1)
    } else {
        Poly::zero()
    };

    let raising_lhs = &(&x * &d_l_n) + &(&Poly::from_coeffs(vec![alpha.clone(), -S::one()]) * &l_n);
    let raising_rhs = laguerre_polynomial_raw(&(alpha.clone() - S::one()), n + 1)
        .scale(&S::from_i64(n as i64 + 1));

    StructureChecks {
        first_structure: identity_holds(&first_lhs, &first_rhs),
        second_structure: identity_holds(&l_n, &second_rhs),
        ladder_lowering: identity_holds(&d_l_n, &lowering_rhs),
        ladder_raising: identity_holds(&raising_lhs, &raising_rhs),
    }
}

/// Nodes and weights of a Gauss rule, sorted by node.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// The weighted sum `sum_i w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}

/// Gauss-Laguerre rule for the unit-mass weight `x^alpha e^{-x} / Gamma(alpha+1)`
/// on `(0, inf)`, by diagonalizing the Jacobi matrix of the recurrence
/// (diagonal `2k + alpha + 1`, off-diagonal `sqrt(k (k + alpha))`).
///
/// The rule integrates polynomials of degree `<= 2 n_nodes - 1` exactly up to
/// rounding, and its weights sum to 1.
pub fn gauss_laguerre(alpha: f64, n_nodes: usize) -> Result<QuadratureRule> {
    if alpha.partial_cmp(&-1.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::QuadratureAlphaOutOfRange { alpha });
    }
    if n_nodes == 0 {
        return Err(Error::QuadratureEmpty);
    }
    let mut jacobi = DMatrix::<f64>::zeros(n_nodes, n_nodes);
    for k in 0..n_nodes {
        jacobi[(k, k)] = 2.0 * k as f64 + alpha + 1.0;
        if k + 1 < n_nodes {
            let coupling = ((k + 1) as f64 * ((k + 1) as f64 + alpha)).sqrt();
            jacobi[(k, k + 1)] = coupling;
            jacobi[(k + 1, k)] = coupling;
        }
    }
    let eigen = SymmetricEigen::try_new(jacobi, f64::EPSILON, 10_000)
        .ok_or(Error::EigenDidNotConverge { nodes: n_nodes })?;
    let mut pairs: Vec<(f64, f64)> = (0..n_nodes)
        .map(|i| {
            let first_component = eigen.eigenvectors[(0, i)];
            (eigen.eigenvalues[i], first_component * first_component)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use num_traits::{One, Zero};

    fn family(alpha: Rat) -> LaguerreFamily<Rat> {
        LaguerreFamily::new(alpha).unwrap()
    }

    #[test]
    fn degenerate_alpha_is_rejected() {
        assert!(LaguerreFamily::new(Rat::from_i64(-1)).is_err());
        assert!(LaguerreFamily::new(Rat::from_i64(-7)).is_err());
        assert!(LaguerreFamily::new(rat(-1, 2)).is_ok());
        assert!(MomentFunctional::new(Rat::from_i64(-2)).is_err());
    }

    #[test]
    fn initial_polynomials() {
        let fam = family(rat(3, 4));
        assert_eq!(fam.poly(0), Poly::one());
        assert_eq!(fam.poly(1), Poly::from_coeffs(vec![rat(7, 4), rat(-1, 1)]));
    }

    #[test]
    fn degree_two_at_alpha_zero() {
        let fam = family(Rat::from_i64(0));
        let expected = Poly::from_coeffs(vec![rat(1, 1), rat(-2, 1), rat(1, 2)]);
        assert_eq!(fam.poly(2), expected);
    }

    #[test]
    fn cache_entries_have_expected_degree_and_leading_coeff() {
        let fam = family(rat(1, 2));
        for n in 0..10 {
            let p = fam.poly(n);
            assert_eq!(p.degree(), Some(n));
            assert_eq!(*p.leading_coeff().unwrap(), fam.leading_coeff(n));
        }
    }

    #[test]
    fn hypergeometric_matches_recurrence() {
        for alpha in [Rat::from_i64(0), rat(1, 2), rat(-1, 2), Rat::from_i64(3)] {
            let fam = family(alpha);
            for n in 0..=8 {
                assert_eq!(fam.hypergeometric(n).unwrap(), fam.poly(n));
            }
        }
    }

    #[test]
    fn pointwise_recurrence_matches_coefficient_evaluation() {
        for alpha in [Rat::from_i64(0), rat(1, 2), Rat::from_i64(2)] {
            let fam = family(alpha);
            for num in -5..=9 {
                let x = rat(num, 2);
                let values = fam.evals_up_to(10, &x);
                assert_eq!(values.len(), 11);
                for (n, value) in values.iter().enumerate() {
                    assert_eq!(*value, fam.poly(n).eval(&x));
                }
                assert_eq!(fam.eval_at(10, &x), values[10]);
            }
        }
    }

    #[test]
    fn hypergeometric_degree_one_at_alpha_zero() {
        let fam = family(Rat::from_i64(0));
        let expected = Poly::from_coeffs(vec![rat(1, 1), rat(-1, 1)]);
        assert_eq!(fam.hypergeometric(1).unwrap(), expected);
    }

    #[test]
    fn squared_norm_examples() {
        assert_eq!(family(Rat::from_i64(0)).squared_norm(0), Rat::one());
        assert_eq!(family(Rat::from_i64(0)).squared_norm(2), Rat::one());
        assert_eq!(family(Rat::from_i64(1)).squared_norm(3), Rat::from_i64(4));
    }

    #[test]
    fn moments_and_normalization() {
        let fun = MomentFunctional::new(Rat::from_i64(0)).unwrap();
        assert_eq!(fun.moment(0), Rat::one());
        assert_eq!(fun.moment(2), Rat::from_i64(2));
        let fun_half = MomentFunctional::new(rat(1, 2)).unwrap();
        assert_eq!(fun_half.moment(1), rat(3, 2));
    }

    #[test]
    fn functional_orthogonality_small_degrees() {
        for alpha in [Rat::from_i64(0), rat(1, 2), Rat::from_i64(2)] {
            let fam = family(alpha);
            let fun = fam.functional();
            for n in 0..=5usize {
                for m in 0..=n {
                    let value = fun.apply(&(&fam.poly(n) * &fam.poly(m)));
                    if m == n {
                        assert_eq!(value, fam.squared_norm(n));
                    } else {
                        assert_eq!(value, Rat::zero());
                    }
                }
            }
        }
    }

    #[test]
    fn structure_checks_pass_on_small_sweep() {
        for alpha in [Rat::from_i64(0), rat(1, 2)] {
            let fam = family(alpha);
            for n in 0..=6 {
                let checks = structure_checks(&fam, n);
                assert!(checks.all_pass(), "failed at n = {}: {:?}", n, checks);
            }
        }
    }

    #[test]
    fn raw_polynomials_allow_degenerate_parameters() {
        let p = laguerre_polynomial_raw(&Rat::from_i64(-1), 1);
        assert_eq!(p, Poly::from_coeffs(vec![Rat::zero(), Rat::from_i64(-1)]));
    }

    #[test]
    fn single_node_rule_at_alpha_zero() {
        let rule = gauss_laguerre(0.0, 1).unwrap();
        assert_eq!(rule.nodes.len(), 1);
        assert!((rule.nodes[0] - 1.0).abs() < 1e-12);
        assert!((rule.weights[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_node_rule_integrates_square() {
        let rule = gauss_laguerre(0.0, 2).unwrap();
        assert!((rule.integrate(|x| x * x) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn weights_sum_to_one() {
        for alpha in [0.0, 0.5, 2.0] {
            let rule = gauss_laguerre(alpha, 12).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-13, "alpha = {}: {}", alpha, total);
        }
    }

    #[test]
    fn quadrature_matches_moments() {
        let fun = MomentFunctional::new(rat(1, 2)).unwrap();
        let rule = gauss_laguerre(0.5, 8).unwrap();
        for degree in 0..=15usize {
            let numeric = rule.integrate(|x| x.powi(degree as i32));
            let exact = fun.moment(degree).to_f64_lossy();
            assert!(
                (numeric - exact).abs() <= 1e-10 * exact.abs().max(1.0),
                "degree {}: {} vs {}",
                degree,
                numeric,
                exact
            );
        }
    }

    #[test]
    fn quadrature_rejects_bad_parameters() {
        assert!(matches!(
            gauss_laguerre(-1.0, 4),
            Err(Error::QuadratureAlphaOutOfRange { .. })
        ));
        assert!(matches!(
            gauss_laguerre(0.0, 0),
            Err(Error::QuadratureEmpty)
        ));
    }
}
