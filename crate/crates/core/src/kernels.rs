//! Reproducing kernels of the Laguerre family.
//!
//! The term-by-term sums are the reference oracles; the Christoffel-Darboux
//! closed forms are the optimized paths and are checked against the sums.
//! The kernel matrix and kernel vector feed the Sobolev construction.

use crate::error::Result;
use crate::laguerre::LaguerreFamily;
use crate::poly::Poly;
use crate::scalar::{factorial, Scalar};
use crate::sobolev::MassPoint;

/// Derivative orders requested of a kernel: `K_n^{(j,k)}`, `j` in the first
/// argument, `k` in the second. Orders beyond `n` are allowed and give zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelRequest {
    pub n: usize,
    pub j: usize,
    pub k: usize,
}

impl KernelRequest {
    /// Term-by-term value of `K_n^{(j,k)}(x, y)`, the reference oracle.
    pub fn evaluate_sum<S: Scalar>(&self, fam: &LaguerreFamily<S>, x: &S, y: &S) -> S {
        kernel_partial(fam, self.n, self.j, self.k, x, y)
    }

    /// The same value through the Christoffel-Darboux quotient: the closed
    /// form for `K_n^{(0,k)}(x, y)` as a polynomial in the first argument,
    /// differentiated `j` times and evaluated.
    pub fn evaluate_closed_form<S: Scalar>(
        &self,
        fam: &LaguerreFamily<S>,
        x: &S,
        y: &S,
    ) -> Result<S> {
        let section = kernel_partial_cd_poly(fam, self.n, self.k, y)?;
        Ok(section.derivative_n(self.j).eval(x))
    }
}

fn cd_prefactor<S: Scalar>(fam: &LaguerreFamily<S>, n: usize) -> S {
    fam.leading_coeff(n) / (fam.leading_coeff(n + 1) * fam.squared_norm(n))
}

/// The reproducing kernel `K_n(x,y) = sum_{k<=n} P_k(x) P_k(y) / d_k^2` by
/// its definition. Reference oracle for the closed forms.
pub fn kernel_sum<S: Scalar>(fam: &LaguerreFamily<S>, n: usize, x: &S, y: &S) -> S {
    kernel_partial(fam, n, 0, 0, x, y)
}

/// The kernel through the Christoffel-Darboux identity, with the confluent
/// derivative form on the diagonal `x = y`.
pub fn kernel_cd<S: Scalar>(fam: &LaguerreFamily<S>, n: usize, x: &S, y: &S) -> S {
    let prefactor = cd_prefactor(fam, n);
    let p_n1 = fam.poly(n + 1);
    let p_n = fam.poly(n);
    if x == y {
        let numerator =
            p_n1.derivative().eval(x) * p_n.eval(x) - p_n.derivative().eval(x) * p_n1.eval(x);
        prefactor * numerator
    } else {
        let numerator = p_n1.eval(x) * p_n.eval(y) - p_n.eval(x) * p_n1.eval(y);
        prefactor * numerator / (x.clone() - y.clone())
    }
}

/// Partial derivative `K_n^{(j,k)}(x,y)` by differentiating the defining sum
/// term by term: `sum_{r<=n} P_r^{(j)}(x) P_r^{(k)}(y) / d_r^2`. Reference
/// oracle.
pub fn kernel_partial<S: Scalar>(
    fam: &LaguerreFamily<S>,
    n: usize,
    j: usize,
    k: usize,
    x: &S,
    y: &S,
) -> S {
    let mut total = S::zero();
    for r in 0..=n {
        let p = fam.poly(r);
        let left = p.derivative_n(j).eval(x);
        if left.is_zero() {
            continue;
        }
        let right = p.derivative_n(k).eval(y);
        total = total + left * right / fam.squared_norm(r);
    }
    total
}

/// `K_n^{(0,k)}(x, y)` as a polynomial in `x`, by the defining sum. Used for
/// the kernel vector of the Sobolev construction and as the oracle for the
/// closed-form section below.
pub fn kernel_section<S: Scalar>(fam: &LaguerreFamily<S>, n: usize, k: usize, y: &S) -> Poly<S> {
    let mut total = Poly::zero();
    for r in 0..=n {
        let p = fam.poly(r);
        let weight = p.derivative_n(k).eval(y) / fam.squared_norm(r);
        if !weight.is_zero() {
            total = &total + &p.scale(&weight);
        }
    }
    total
}

/// `K_n^{(0,j)}(x, y)` as a polynomial in `x` through the Christoffel-Darboux
/// quotient: `(k_n j! / (k_{n+1} d_n^2)) * N_j(x) / (x-y)^{j+1}`, where
/// `N_j(x) = P_{n+1}(x) T_j[P_n](x) - P_n(x) T_j[P_{n+1}](x)` and `T_j[P]` is
/// the degree-`j` Taylor truncation of `P` about `y`.
///
/// The divisor carries exponent `j + 1`: differentiating the kernel quotient
/// `j` times in the second argument by the product rule gives
/// `j! [G(x;y)]_j / (x-y)^{j+1}` for `G` the cross-product numerator, and
/// only that exponent reproduces the term-by-term sum. The division must be
/// exact, which is asserted, not assumed.
pub fn kernel_partial_cd_poly<S: Scalar>(
    fam: &LaguerreFamily<S>,
    n: usize,
    j: usize,
    y: &S,
) -> Result<Poly<S>> {
    let p_n1 = fam.poly(n + 1);
    let p_n = fam.poly(n);
    let truncated_n = p_n.taylor_truncate(y, j);
    let truncated_n1 = p_n1.taylor_truncate(y, j);
    let numerator = &(&p_n1 * &truncated_n) - &(&p_n * &truncated_n1);
    let divisor = Poly::linear_factor(y).pow(j + 1);
    let quotient = numerator.div_exact(&divisor, "Christoffel-Darboux kernel derivative")?;
    let prefactor = cd_prefactor(fam, n) * factorial::<S>(j);
    Ok(quotient.scale(&prefactor))
}

/// `K_n^{(0,j)}(x, y)` through the Christoffel-Darboux quotient. The
/// coincident case `x = y` is routed to the term-by-term oracle.
pub fn kernel_partial_cd<S: Scalar>(
    fam: &LaguerreFamily<S>,
    n: usize,
    j: usize,
    x: &S,
    y: &S,
) -> Result<S> {
    if x == y {
        return Ok(kernel_partial(fam, n, 0, j, x, y));
    }
    Ok(kernel_partial_cd_poly(fam, n, j, y)?.eval(x))
}

/// Verifies `(P_n^{(j)}(c))^2 / d_n^2 = K_n^{(j,j)}(c,c) - K_{n-1}^{(j,j)}(c,c)`,
/// the telescoping consequence of the kernel definition, with the index `-1`
/// kernel read as zero.
pub fn telescoping_identity_check<S: Scalar>(
    fam: &LaguerreFamily<S>,
    n: usize,
    j: usize,
    c: &S,
) -> bool {
    let value = fam.poly(n).derivative_n(j).eval(c);
    let lhs = value.clone() * value / fam.squared_norm(n);
    let upper = kernel_partial(fam, n, j, j, c, c);
    let lower = if n >= 1 {
        kernel_partial(fam, n - 1, j, j, c, c)
    } else {
        S::zero()
    };
    let rhs = upper.clone() - lower;
    let scale = lhs.to_f64_lossy().abs().max(upper.to_f64_lossy().abs());
    (lhs - rhs).is_negligible(scale)
}

/// The matrix of kernel values coupling the mass conditions of a Sobolev
/// product: entry `(i, l)` is `K_n^{(nu_i, nu_l)}(c_i, c_l)`.
#[derive(Debug, Clone)]
pub struct KernelMatrix<S: Scalar> {
    n: usize,
    masses: Vec<MassPoint<S>>,
    entries: Vec<Vec<S>>,
}

impl<S: Scalar> KernelMatrix<S> {
    /// Kernel index the matrix was built at.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn masses(&self) -> &[MassPoint<S>] {
        &self.masses
    }

    pub fn entries(&self) -> &[Vec<S>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, l: usize) -> &S {
        &self.entries[i][l]
    }

    /// Symmetry holds by the symmetry of the kernel in its two arguments.
    pub fn is_symmetric(&self) -> bool {
        let scale = self
            .entries
            .iter()
            .flatten()
            .map(|e| e.to_f64_lossy().abs())
            .fold(0.0, f64::max);
        (0..self.size()).all(|i| {
            (0..i).all(|l| {
                (self.entries[i][l].clone() - self.entries[l][i].clone()).is_negligible(scale)
            })
        })
    }
}

/// Builds the kernel matrix of index `n` for the given mass conditions, by
/// the term-by-term oracle.
pub fn kernel_matrix<S: Scalar>(
    fam: &LaguerreFamily<S>,
    masses: &[MassPoint<S>],
    n: usize,
) -> KernelMatrix<S> {
    let entries = masses
        .iter()
        .map(|row| {
            masses
                .iter()
                .map(|col| {
                    kernel_partial(fam, n, row.order, col.order, &row.location, &col.location)
                })
                .collect()
        })
        .collect();
    KernelMatrix {
        n,
        masses: masses.to_vec(),
        entries,
    }
}

/// The kernel vector of the Sobolev construction: entry `i` is the
/// polynomial `x -> K_n^{(0, nu_i)}(x, c_i)` with exact coefficients.
pub fn kernel_vector<S: Scalar>(
    fam: &LaguerreFamily<S>,
    masses: &[MassPoint<S>],
    n: usize,
) -> Vec<Poly<S>> {
    masses
        .iter()
        .map(|m| kernel_section(fam, n, m.order, &m.location))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use num_traits::{One, Zero};

    fn family(alpha: Rat) -> LaguerreFamily<Rat> {
        LaguerreFamily::new(alpha).unwrap()
    }

    fn sample_points() -> Vec<Rat> {
        vec![
            Rat::zero(),
            Rat::one(),
            rat(1, 2),
            rat(-3, 2),
            Rat::from_i64(7),
            rat(-1, 3),
        ]
    }

    #[test]
    fn kernel_sum_index_zero_is_one() {
        let fam = family(rat(1, 2));
        for x in sample_points() {
            for y in sample_points() {
                assert_eq!(kernel_sum(&fam, 0, &x, &y), Rat::one());
            }
        }
    }

    #[test]
    fn kernel_sum_hand_value() {
        let fam = family(Rat::zero());
        let zero = Rat::zero();
        assert_eq!(kernel_sum(&fam, 1, &zero, &zero), Rat::from_i64(2));
    }

    #[test]
    fn kernel_cd_matches_sum_off_diagonal() {
        for alpha in [Rat::zero(), Rat::one(), rat(1, 2)] {
            let fam = family(alpha);
            for n in 0..=6 {
                for x in sample_points() {
                    for y in sample_points() {
                        if x == y {
                            continue;
                        }
                        assert_eq!(kernel_cd(&fam, n, &x, &y), kernel_sum(&fam, n, &x, &y));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_cd_confluent_branch_matches_sum() {
        let fam = family(rat(1, 2));
        for n in 0..=6 {
            for x in sample_points() {
                assert_eq!(kernel_cd(&fam, n, &x, &x), kernel_sum(&fam, n, &x, &x));
            }
        }
    }

    #[test]
    fn kernel_partial_order_zero_is_kernel_sum() {
        let fam = family(Rat::one());
        let x = rat(5, 3);
        let y = rat(-1, 2);
        for n in 0..=5 {
            assert_eq!(
                kernel_partial(&fam, n, 0, 0, &x, &y),
                kernel_sum(&fam, n, &x, &y)
            );
        }
    }

    #[test]
    fn kernel_partial_hand_value() {
        let fam = family(Rat::zero());
        let x = rat(9, 4);
        assert_eq!(
            kernel_partial(&fam, 1, 1, 0, &x, &Rat::zero()),
            Rat::from_i64(-1)
        );
    }

    #[test]
    fn kernel_partial_vanishes_beyond_degree() {
        let fam = family(rat(3, 4));
        let x = rat(2, 5);
        let y = rat(-7, 3);
        assert_eq!(kernel_partial(&fam, 3, 4, 0, &x, &y), Rat::zero());
        assert_eq!(kernel_partial(&fam, 3, 5, 2, &x, &y), Rat::zero());
    }

    #[test]
    fn kernel_partial_cd_order_zero_is_kernel_cd() {
        let fam = family(rat(1, 2));
        let x = rat(7, 2);
        let y = rat(1, 3);
        for n in 0..=5 {
            assert_eq!(
                kernel_partial_cd(&fam, n, 0, &x, &y).unwrap(),
                kernel_cd(&fam, n, &x, &y)
            );
        }
    }

    #[test]
    fn kernel_partial_cd_hand_value() {
        let fam = family(Rat::zero());
        let x = Rat::from_i64(5);
        let y = Rat::from_i64(2);
        assert_eq!(
            kernel_partial_cd(&fam, 1, 1, &x, &y).unwrap(),
            Rat::from_i64(4)
        );
    }

    #[test]
    fn kernel_partial_cd_matches_oracle() {
        for alpha in [Rat::zero(), rat(1, 2)] {
            let fam = family(alpha);
            for n in 0..=6 {
                for j in 0..=3 {
                    for x in [rat(5, 2), rat(-1, 3)] {
                        for y in [rat(1, 4), Rat::from_i64(3)] {
                            assert_eq!(
                                kernel_partial_cd(&fam, n, j, &x, &y).unwrap(),
                                kernel_partial(&fam, n, 0, j, &x, &y),
                                "n={} j={}",
                                n,
                                j
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_partial_cd_routes_diagonal_to_oracle() {
        let fam = family(Rat::one());
        let c = rat(3, 2);
        for n in 0..=5 {
            for j in 0..=3 {
                assert_eq!(
                    kernel_partial_cd(&fam, n, j, &c, &c).unwrap(),
                    kernel_partial(&fam, n, 0, j, &c, &c)
                );
            }
        }
    }

    #[test]
    fn closed_form_section_matches_sum_section() {
        let fam = family(rat(-1, 2));
        for n in 0..=5 {
            for j in 0..=3 {
                for y in [Rat::zero(), rat(5, 4)] {
                    assert_eq!(
                        kernel_partial_cd_poly(&fam, n, j, &y).unwrap(),
                        kernel_section(&fam, n, j, &y),
                        "n={} j={}",
                        n,
                        j
                    );
                }
            }
        }
    }

    #[test]
    fn general_request_closed_form_matches_oracle() {
        let fam = family(rat(1, 2));
        let x = rat(11, 3);
        let y = rat(-2, 5);
        for n in 0..=5 {
            for j in 0..=2 {
                for k in 0..=2 {
                    let request = KernelRequest { n, j, k };
                    assert_eq!(
                        request.evaluate_closed_form(&fam, &x, &y).unwrap(),
                        request.evaluate_sum(&fam, &x, &y)
                    );
                }
            }
        }
    }

    #[test]
    fn reproducing_property_on_monomials() {
        let fam = family(rat(1, 2));
        let fun = fam.functional();
        for n in 0..=6usize {
            for m in 0..=n {
                for y in [rat(2, 3), Rat::from_i64(-1)] {
                    let monomial = Poly::monomial(Rat::one(), m);
                    let section = kernel_section(&fam, n, 0, &y);
                    let reproduced = fun.apply(&(&section * &monomial));
                    assert_eq!(reproduced, monomial.eval(&y), "n={} m={}", n, m);
                }
            }
        }
    }

    #[test]
    fn telescoping_identity_hand_value() {
        let fam = family(Rat::zero());
        assert!(telescoping_identity_check(&fam, 1, 0, &Rat::zero()));
    }

    #[test]
    fn telescoping_identity_sweep() {
        for alpha in [Rat::zero(), rat(1, 2)] {
            let fam = family(alpha);
            for n in 0..=8 {
                for j in 0..=3 {
                    for c in [Rat::zero(), Rat::one(), Rat::from_i64(-2)] {
                        assert!(
                            telescoping_identity_check(&fam, n, j, &c),
                            "n={} j={} c={}",
                            n,
                            j,
                            c
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn telescoping_beyond_degree_is_trivial() {
        let fam = family(rat(1, 2));
        assert!(telescoping_identity_check(&fam, 2, 5, &rat(1, 3)));
    }

    #[test]
    fn kernel_matrix_single_mass_at_origin() {
        let fam = family(Rat::zero());
        let masses = vec![MassPoint {
            location: Rat::zero(),
            order: 0,
            mass: Rat::one(),
        }];
        let matrix = kernel_matrix(&fam, &masses, 0);
        assert_eq!(matrix.size(), 1);
        assert_eq!(*matrix.entry(0, 0), Rat::one());
    }

    #[test]
    fn kernel_matrix_is_symmetric_and_matches_oracle() {
        let fam = family(Rat::one());
        let masses = vec![
            MassPoint {
                location: Rat::zero(),
                order: 0,
                mass: Rat::one(),
            },
            MassPoint {
                location: Rat::from_i64(2),
                order: 1,
                mass: rat(1, 3),
            },
        ];
        for n in 0..=5 {
            let matrix = kernel_matrix(&fam, &masses, n);
            assert!(matrix.is_symmetric());
            for (i, row) in masses.iter().enumerate() {
                for (l, col) in masses.iter().enumerate() {
                    assert_eq!(
                        *matrix.entry(i, l),
                        kernel_partial(&fam, n, row.order, col.order, &row.location, &col.location)
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_vector_entries_are_kernel_sections() {
        let fam = family(rat(1, 2));
        let masses = vec![
            MassPoint {
                location: Rat::zero(),
                order: 0,
                mass: Rat::one(),
            },
            MassPoint {
                location: Rat::one(),
                order: 2,
                mass: Rat::one(),
            },
        ];
        let vector = kernel_vector(&fam, &masses, 4);
        assert_eq!(vector.len(), 2);
        for (entry, mass) in vector.iter().zip(&masses) {
            assert_eq!(*entry, kernel_section(&fam, 4, mass.order, &mass.location));
            assert_eq!(entry.degree(), Some(4));
        }
    }
}
