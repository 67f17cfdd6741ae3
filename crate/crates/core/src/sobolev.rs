//! The discrete Sobolev inner product and the polynomials orthogonal to it.
//!
//! The product adds point masses on derivative values to the Laguerre moment
//! functional. The orthogonal family is built from the classical one through
//! a linear system driven by the kernel matrix; a Gram-Schmidt solve over
//! monomial moments serves as the independent reference construction.

use crate::error::{Error, Result};
use crate::kernels::{kernel_matrix, kernel_vector, KernelMatrix};
use crate::laguerre::{LaguerreFamily, MomentFunctional};
use crate::linalg::{determinant, identity, invert, solve};
use crate::poly::Poly;
use crate::scalar::{factorial, Scalar};
use std::collections::BTreeMap;
use std::sync::RwLock;

/// One mass condition of the inner product: the term
/// `mass * f^(order)(location) * g^(order)(location)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassPoint<S: Scalar> {
    pub location: S,
    pub order: usize,
    pub mass: S,
}

impl<S: Scalar> MassPoint<S> {
    pub fn new(location: S, order: usize, mass: S) -> Self {
        MassPoint {
            location,
            order,
            mass,
        }
    }
}

/// A validated inner-product description: the Laguerre parameter and the
/// normalized list of mass conditions.
///
/// The constructor sorts conditions by derivative order, then location;
/// merges duplicates at the same (location, order) by summing their masses;
/// and drops conditions whose mass is (or sums to) zero. The result is the
/// canonical form every construction works on.
#[derive(Debug, Clone)]
pub struct SobolevSpec<S: Scalar> {
    alpha: S,
    masses: Vec<MassPoint<S>>,
    merged_from: Vec<Vec<usize>>,
    dropped: Vec<usize>,
}

impl<S: Scalar> SobolevSpec<S> {
    pub fn new(alpha: S, input: Vec<MassPoint<S>>) -> Result<Self> {
        if alpha.is_negative_integer() {
            return Err(Error::DegenerateAlpha {
                alpha: alpha.to_string(),
            });
        }
        let mut groups: Vec<(MassPoint<S>, Vec<usize>)> = Vec::new();
        let mut dropped = Vec::new();
        for (index, point) in input.into_iter().enumerate() {
            if point.mass.is_zero() {
                dropped.push(index);
                continue;
            }
            match groups.iter_mut().find(|(existing, _)| {
                existing.location == point.location && existing.order == point.order
            }) {
                Some((existing, indices)) => {
                    existing.mass = existing.mass.clone() + point.mass;
                    indices.push(index);
                }
                None => groups.push((point, vec![index])),
            }
        }
        for (point, indices) in std::mem::take(&mut groups) {
            if point.mass.is_zero() {
                dropped.extend(indices);
            } else {
                groups.push((point, indices));
            }
        }
        groups.sort_by(|(a, _), (b, _)| {
            a.order.cmp(&b.order).then_with(|| {
                a.location
                    .partial_cmp(&b.location)
                    .expect("mass locations must be comparable")
            })
        });
        let (masses, merged_from) = groups.into_iter().unzip();
        Ok(SobolevSpec {
            alpha,
            masses,
            merged_from,
            dropped,
        })
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    /// The normalized mass conditions, sorted by (order, location).
    pub fn masses(&self) -> &[MassPoint<S>] {
        &self.masses
    }

    pub fn mass_count(&self) -> usize {
        self.masses.len()
    }

    /// For each retained condition, the input indices merged into it.
    pub fn merged_from(&self) -> &[Vec<usize>] {
        &self.merged_from
    }

    /// Input indices whose mass was (or summed to) zero.
    pub fn dropped_zero_masses(&self) -> &[usize] {
        &self.dropped
    }

    /// The smallest derivative order among the conditions.
    pub fn min_order(&self) -> Option<usize> {
        self.masses.first().map(|m| m.order)
    }

    /// The vector of derivative values `(p^(nu_1)(c_1), ..., p^(nu_M)(c_M))`.
    pub fn derivative_values(&self, p: &Poly<S>) -> Vec<S> {
        self.masses
            .iter()
            .map(|m| p.derivative_n(m.order).eval(&m.location))
            .collect()
    }

    /// The underlying moment functional.
    pub fn functional(&self) -> MomentFunctional<S> {
        MomentFunctional::new_unchecked(self.alpha.clone())
    }

    /// The full inner product: functional part plus weighted derivative
    /// values.
    pub fn inner_product(&self, f: &Poly<S>, g: &Poly<S>) -> S {
        let mut total = self.functional().apply(&(f * g));
        for m in &self.masses {
            let left = f.derivative_n(m.order).eval(&m.location);
            let right = g.derivative_n(m.order).eval(&m.location);
            total = total + m.mass.clone() * left * right;
        }
        total
    }

    /// The same description on the float backend.
    pub fn to_float(&self) -> SobolevSpec<f64> {
        SobolevSpec {
            alpha: self.alpha.to_f64_lossy(),
            masses: self
                .masses
                .iter()
                .map(|m| MassPoint {
                    location: m.location.to_f64_lossy(),
                    order: m.order,
                    mass: m.mass.to_f64_lossy(),
                })
                .collect(),
            merged_from: self.merged_from.clone(),
            dropped: self.dropped.clone(),
        }
    }
}

/// Everything recorded about one degree of the Sobolev family.
#[derive(Debug, Clone)]
pub struct DegreeRecord<S: Scalar> {
    pub degree: usize,
    /// Determinant of the deformation matrix `I + D*K` at this degree.
    pub determinant: S,
    pub invertible: bool,
    /// The orthogonal polynomial, absent when the matrix is singular.
    pub polynomial: Option<Poly<S>>,
    matrix_display: Option<String>,
}

/// One line of the regularity report: degree, invertibility, determinant.
#[derive(Debug, Clone)]
pub struct RegularityEntry<S: Scalar> {
    pub degree: usize,
    pub invertible: bool,
    pub determinant: S,
}

/// The Sobolev orthogonal family for one inner-product description, with a
/// per-degree cache of polynomials and regularity data.
///
/// A singular degree is recorded, reported on request, and does not block
/// higher degrees from being attempted.
pub struct SobolevFamily<S: Scalar> {
    spec: SobolevSpec<S>,
    laguerre: LaguerreFamily<S>,
    records: RwLock<BTreeMap<usize, DegreeRecord<S>>>,
}

impl<S: Scalar> SobolevFamily<S> {
    pub fn new(spec: SobolevSpec<S>) -> Result<Self> {
        let laguerre = LaguerreFamily::new(spec.alpha().clone())?;
        Ok(SobolevFamily {
            spec,
            laguerre,
            records: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn spec(&self) -> &SobolevSpec<S> {
        &self.spec
    }

    pub fn laguerre(&self) -> &LaguerreFamily<S> {
        &self.laguerre
    }

    pub fn functional(&self) -> MomentFunctional<S> {
        self.spec.functional()
    }

    /// The inner product the family is orthogonal under.
    pub fn inner(&self, f: &Poly<S>, g: &Poly<S>) -> S {
        self.spec.inner_product(f, g)
    }

    /// Kernel matrix of index `n` for this product's mass conditions.
    pub fn kernel_matrix(&self, n: usize) -> KernelMatrix<S> {
        kernel_matrix(&self.laguerre, self.spec.masses(), n)
    }

    /// Degrees where the classical polynomial is returned untouched: degree
    /// zero, mass-free products, and degrees below the smallest derivative
    /// order, where every mass condition annihilates all polynomials in play.
    fn is_classical_degree(&self, n: usize) -> bool {
        n == 0 || self.spec.masses().is_empty() || self.spec.min_order().is_some_and(|nu| n < nu)
    }

    /// The cached record for degree `n`, computing it if needed. Concurrent
    /// fills recompute the same exact value, so racing is benign.
    pub fn record(&self, n: usize) -> DegreeRecord<S> {
        {
            let records = self.records.read().expect("record lock");
            if let Some(record) = records.get(&n) {
                return record.clone();
            }
        }
        let record = self.compute_record(n);
        let mut records = self.records.write().expect("record lock");
        records.entry(n).or_insert(record).clone()
    }

    fn compute_record(&self, n: usize) -> DegreeRecord<S> {
        if self.is_classical_degree(n) {
            return DegreeRecord {
                degree: n,
                determinant: S::one(),
                invertible: true,
                polynomial: Some(self.laguerre.poly(n)),
                matrix_display: None,
            };
        }
        let masses = self.spec.masses();
        let size = masses.len();
        let kernel = self.kernel_matrix(n - 1);
        let mut system = identity::<S>(size);
        for (i, mass) in masses.iter().enumerate() {
            for (l, slot) in system[i].iter_mut().enumerate() {
                let entry = slot.clone() + mass.mass.clone() * kernel.entry(i, l).clone();
                *slot = entry;
            }
        }
        let det = determinant(&system);
        let inverse = match invert(&system, "Sobolev deformation matrix") {
            Ok(inverse) => inverse,
            Err(_) => {
                return DegreeRecord {
                    degree: n,
                    determinant: det,
                    invertible: false,
                    polynomial: None,
                    matrix_display: Some(render_matrix(&system)),
                };
            }
        };
        let classical_values = self.spec.derivative_values(&self.laguerre.poly(n));
        let weights: Vec<S> = (0..size)
            .map(|l| {
                (0..size).fold(S::zero(), |acc, i| {
                    acc + classical_values[i].clone() * inverse[i][l].clone()
                })
            })
            .collect();
        let sections = kernel_vector(&self.laguerre, masses, n - 1);
        let mut result = self.laguerre.poly(n);
        for (l, section) in sections.iter().enumerate() {
            let coefficient = weights[l].clone() * masses[l].mass.clone();
            result = &result - &section.scale(&coefficient);
        }
        DegreeRecord {
            degree: n,
            determinant: det,
            invertible: true,
            polynomial: Some(result),
            matrix_display: None,
        }
    }

    fn degree_error(&self, record: DegreeRecord<S>) -> Error {
        Error::DegreeDoesNotExist {
            degree: record.degree,
            determinant: record.determinant.to_string(),
            matrix: record.matrix_display.unwrap_or_default(),
        }
    }

    /// The degree-`n` Sobolev orthogonal polynomial, through the deformation
    /// of the classical polynomial by inverted kernel data.
    pub fn polynomial(&self, n: usize) -> Result<Poly<S>> {
        let record = self.record(n);
        match record.polynomial {
            Some(p) => Ok(p),
            None => Err(self.degree_error(record)),
        }
    }

    /// The derivative values `(S_n^(nu_1)(c_1), ..., S_n^(nu_M)(c_M))` of the
    /// degree-`n` Sobolev polynomial, from the transposed linear system
    /// rather than from the polynomial itself.
    pub(crate) fn fourier_derivative_values(&self, n: usize) -> Result<Vec<S>> {
        if self.is_classical_degree(n) {
            return Ok(self.spec.derivative_values(&self.laguerre.poly(n)));
        }
        let record = self.record(n);
        if !record.invertible {
            return Err(self.degree_error(record));
        }
        let masses = self.spec.masses();
        let size = masses.len();
        let kernel = self.kernel_matrix(n - 1);
        let mut system = identity::<S>(size);
        for (i, row) in system.iter_mut().enumerate() {
            for (l, mass) in masses.iter().enumerate() {
                let entry = row[l].clone() + kernel.entry(l, i).clone() * mass.mass.clone();
                row[l] = entry;
            }
        }
        let classical_values = self.spec.derivative_values(&self.laguerre.poly(n));
        solve(&system, &classical_values, "Sobolev derivative values")
    }

    /// The same polynomial through its expansion over the classical family:
    /// the classical polynomial minus mass-weighted kernel sections, with the
    /// derivative values obtained from the transposed system. Must agree with
    /// [`SobolevFamily::polynomial`] on every degree.
    pub fn polynomial_via_fourier(&self, n: usize) -> Result<Poly<S>> {
        if self.is_classical_degree(n) {
            return Ok(self.laguerre.poly(n));
        }
        let values = self.fourier_derivative_values(n)?;
        let masses = self.spec.masses();
        let sections = kernel_vector(&self.laguerre, masses, n - 1);
        let mut result = self.laguerre.poly(n);
        for (l, section) in sections.iter().enumerate() {
            let coefficient = masses[l].mass.clone() * values[l].clone();
            result = &result - &section.scale(&coefficient);
        }
        Ok(result)
    }

    /// Coefficients of the degree-`n` polynomial over the classical family
    /// `L_0, ..., L_n`, from the derivative values of the transposed system.
    /// The top coefficient is exactly one.
    pub fn laguerre_coefficients(&self, n: usize) -> Result<Vec<S>> {
        if self.is_classical_degree(n) {
            let mut coeffs = vec![S::zero(); n + 1];
            coeffs[n] = S::one();
            return Ok(coeffs);
        }
        let values = self.fourier_derivative_values(n)?;
        let masses = self.spec.masses();
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..n {
            let basis = self.laguerre.poly(k);
            let mut numerator = S::zero();
            for (j, mass) in masses.iter().enumerate() {
                let derivative = basis.derivative_n(mass.order).eval(&mass.location);
                numerator = numerator - mass.mass.clone() * values[j].clone() * derivative;
            }
            coeffs.push(numerator / self.laguerre.squared_norm(k));
        }
        coeffs.push(S::one());
        Ok(coeffs)
    }

    /// `S_n(x)` through the classical expansion, with the classical values
    /// taken from the recurrence at the point. On the float backend this
    /// avoids the cancellation that monomial-coefficient evaluation suffers
    /// away from the origin.
    pub fn evaluate(&self, n: usize, x: &S) -> Result<S> {
        if self.is_classical_degree(n) {
            return Ok(self.laguerre.eval_at(n, x));
        }
        let coeffs = self.laguerre_coefficients(n)?;
        let values = self.laguerre.evals_up_to(n, x);
        let mut total = S::zero();
        for (c, v) in coeffs.into_iter().zip(values) {
            if !c.is_zero() {
                total = total + c * v;
            }
        }
        Ok(total)
    }

    /// Regularity of the deformation matrix for every degree up to the bound.
    pub fn regularity_report(&self, up_to: usize) -> Vec<RegularityEntry<S>> {
        (0..=up_to)
            .map(|n| {
                let record = self.record(n);
                RegularityEntry {
                    degree: n,
                    invertible: record.invertible,
                    determinant: record.determinant,
                }
            })
            .collect()
    }
}

fn render_matrix<S: Scalar>(matrix: &[Vec<S>]) -> String {
    let rows: Vec<String> = matrix
        .iter()
        .map(|row| {
            let entries: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Degree-`n` polynomial orthogonal to all lower monomials under the inner
/// product, by solving the moment Gram system directly in the requested
/// backend. Independent reference construction for the kernel-based paths,
/// normalized to the classical leading coefficient `(-1)^n / n!`.
pub fn gram_schmidt_oracle<S: Scalar>(spec: &SobolevSpec<S>, n: usize) -> Result<Poly<S>> {
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let lead = S::from_i64(sign) / factorial::<S>(n);
    if n == 0 {
        return Ok(Poly::constant(lead));
    }
    let monomials: Vec<Poly<S>> = (0..=n).map(|k| Poly::monomial(S::one(), k)).collect();
    let matrix: Vec<Vec<S>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|k| spec.inner_product(&monomials[m], &monomials[k]))
                .collect()
        })
        .collect();
    let rhs: Vec<S> = (0..n)
        .map(|m| -(lead.clone() * spec.inner_product(&monomials[m], &monomials[n])))
        .collect();
    let mut coeffs = solve(&matrix, &rhs, "Sobolev moment Gram system")
        .map_err(|_| Error::GramSingular { degree: n })?;
    coeffs.push(lead);
    Ok(Poly::from_coeffs(coeffs))
}
