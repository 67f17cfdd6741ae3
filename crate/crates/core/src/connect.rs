//! Connection formulas expressing a Sobolev orthogonal polynomial over other
//! polynomial bases.
//!
//! The zeta annihilator is the minimal monic polynomial whose multiples have
//! vanishing derivative values at every mass condition. Its ladder of partial
//! products induces families orthogonal under polynomially modified moment
//! functionals, and the Sobolev polynomial expands over three bases: the
//! zeta ladder, Laguerre polynomials with shifted parameter, and the
//! classical Laguerre family itself. Each expansion is found by linear
//! coefficient matching and certified by an identically zero residual.

use crate::error::{Error, Result};
use crate::laguerre::{laguerre_polynomial_raw, MomentFunctional};
use crate::linalg::solve;
use crate::poly::Poly;
use crate::scalar::{factorial, Scalar};
use crate::sobolev::{SobolevFamily, SobolevSpec};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::RwLock;

/// The annihilator polynomial together with its ladder of partial products.
///
/// Mass conditions are grouped by location; a location whose highest
/// derivative order is `m` contributes the factor `(x - c)^(m+1)`. The
/// ladder accumulates one linear factor at a time, locations in ascending
/// order with repeated factors consecutive, so rung `k` is the unique monic
/// divisor of the annihilator with degree `k` along that ordering.
pub struct ZetaLadder<S: Scalar> {
    roots: Vec<S>,
    rungs: Vec<Poly<S>>,
}

impl<S: Scalar> ZetaLadder<S> {
    pub fn build(spec: &SobolevSpec<S>) -> Self {
        let mut groups: Vec<(S, usize)> = Vec::new();
        for mass in spec.masses() {
            match groups.iter_mut().find(|(c, _)| *c == mass.location) {
                Some((_, max_order)) => *max_order = (*max_order).max(mass.order),
                None => groups.push((mass.location.clone(), mass.order)),
            }
        }
        groups
            .sort_by(|(a, _), (b, _)| a.partial_cmp(b).expect("mass locations must be comparable"));
        let mut roots = Vec::new();
        for (location, max_order) in groups {
            for _ in 0..=max_order {
                roots.push(location.clone());
            }
        }
        let mut rungs = vec![Poly::one()];
        for root in &roots {
            let next = rungs.last().unwrap() * &Poly::linear_factor(root);
            rungs.push(next);
        }
        ZetaLadder { roots, rungs }
    }

    /// Degree of the annihilator.
    pub fn nu(&self) -> usize {
        self.roots.len()
    }

    /// Roots of the annihilator, one entry per linear factor.
    pub fn roots(&self) -> &[S] {
        &self.roots
    }

    /// The partial products, from the constant one up to the annihilator.
    pub fn rungs(&self) -> &[Poly<S>] {
        &self.rungs
    }

    pub fn rung(&self, k: usize) -> &Poly<S> {
        &self.rungs[k]
    }

    /// The full annihilator polynomial.
    pub fn zeta(&self) -> &Poly<S> {
        self.rungs.last().unwrap()
    }
}

/// Orthogonal polynomials for the moment functional multiplied by the square
/// of a ladder rung, built by exact solves over the modified moments and
/// normalized to the classical leading coefficient.
pub struct ModifiedFamily<S: Scalar> {
    functional: MomentFunctional<S>,
    modifier: Poly<S>,
    cache: RwLock<BTreeMap<usize, Poly<S>>>,
}

impl<S: Scalar> ModifiedFamily<S> {
    pub fn new(functional: MomentFunctional<S>, zeta_rung: &Poly<S>) -> Self {
        ModifiedFamily {
            functional,
            modifier: zeta_rung * zeta_rung,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    /// The squared rung multiplying the functional.
    pub fn modifier(&self) -> &Poly<S> {
        &self.modifier
    }

    /// Moment of the modified functional.
    pub fn modified_moment(&self, k: usize) -> S {
        self.functional
            .apply(&(&self.modifier * &Poly::monomial(S::one(), k)))
    }

    /// The degree-`n` orthogonal polynomial of the modified functional.
    pub fn poly(&self, n: usize) -> Result<Poly<S>> {
        {
            let cache = self.cache.read().expect("modified family lock");
            if let Some(p) = cache.get(&n) {
                return Ok(p.clone());
            }
        }
        let computed = self.compute(n)?;
        let mut cache = self.cache.write().expect("modified family lock");
        Ok(cache.entry(n).or_insert(computed).clone())
    }

    fn compute(&self, n: usize) -> Result<Poly<S>> {
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        let lead = S::from_i64(sign) / factorial::<S>(n);
        if n == 0 {
            return Ok(Poly::constant(lead));
        }
        let moments: Vec<S> = (0..2 * n).map(|k| self.modified_moment(k)).collect();
        let matrix: Vec<Vec<S>> = (0..n)
            .map(|r| (0..n).map(|k| moments[k + r].clone()).collect())
            .collect();
        let rhs: Vec<S> = (0..n)
            .map(|r| -(lead.clone() * moments[n + r].clone()))
            .collect();
        let mut coeffs = solve(&matrix, &rhs, "modified moment system")
            .map_err(|_| Error::ModifiedNotQuasiDefinite { degree: n })?;
        coeffs.push(lead);
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// Which basis a connection expansion is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionBasis {
    ZetaLadder,
    ShiftedParameter,
    Laguerre,
}

impl ConnectionBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            ConnectionBasis::ZetaLadder => "zeta-ladder",
            ConnectionBasis::ShiftedParameter => "shifted-parameter",
            ConnectionBasis::Laguerre => "laguerre",
        }
    }
}

impl fmt::Display for ConnectionBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A certified expansion of one Sobolev polynomial over a basis.
///
/// The stored residual is the target polynomial minus the reconstruction;
/// construction fails rather than return a result whose residual is not
/// negligible at the target's coefficient scale.
#[derive(Debug, Clone)]
pub struct ConnectionResult<S: Scalar> {
    pub basis: ConnectionBasis,
    pub degree: usize,
    pub coefficients: Vec<S>,
    pub basis_polys: Vec<Poly<S>>,
    pub residual: Poly<S>,
    /// Whether every factor in the nonvanishing condition on the ladder
    /// families at the mass locations is nonzero. A false value is a
    /// warning, not an error: the residual independently certifies the
    /// expansion. Always true for the bases without such a condition.
    pub condition_ok: bool,
}

impl<S: Scalar> ConnectionResult<S> {
    /// The linear combination the coefficients describe.
    pub fn reconstruct(&self) -> Poly<S> {
        let mut total = Poly::zero();
        for (coeff, basis) in self.coefficients.iter().zip(&self.basis_polys) {
            total = &total + &basis.scale(coeff);
        }
        total
    }

    pub fn residual_norm_f64(&self) -> f64 {
        self.residual.max_abs_coeff_f64()
    }
}

/// Rescale factor making the degree-`n` ladder basis element at rung `j`
/// share the classical leading coefficient: the rung is monic of degree `j`
/// and the modified polynomial has leading coefficient `(-1)^(n-j)/(n-j)!`.
fn rung_rescale<S: Scalar>(n: usize, j: usize) -> S {
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    S::from_i64(sign) * factorial::<S>(n - j) / factorial::<S>(n)
}

fn certify<S: Scalar>(
    basis: ConnectionBasis,
    degree: usize,
    target: &Poly<S>,
    coefficients: Vec<S>,
    basis_polys: Vec<Poly<S>>,
    condition_ok: bool,
) -> Result<ConnectionResult<S>> {
    let mut reconstruction = Poly::zero();
    for (coeff, b) in coefficients.iter().zip(&basis_polys) {
        reconstruction = &reconstruction + &b.scale(coeff);
    }
    let residual = target - &reconstruction;
    if !residual.is_negligible(target.max_abs_coeff_f64()) {
        return Err(Error::NonzeroResidual {
            basis: basis.as_str(),
            degree,
            residual: residual.to_string(),
        });
    }
    Ok(ConnectionResult {
        basis,
        degree,
        coefficients,
        basis_polys,
        residual,
        condition_ok,
    })
}

/// Expands the degree-`n` Sobolev polynomial over the zeta ladder: rung `j`
/// times the degree-`(n-j)` polynomial of the rung-modified functional,
/// rescaled to the classical leading coefficient. The coefficients are
/// determined by matching the top `nu + 1` monomial coefficients; the
/// remaining coefficients must then agree identically, which the residual
/// check enforces.
pub fn connect_zeta<S: Scalar>(fam: &SobolevFamily<S>, n: usize) -> Result<ConnectionResult<S>> {
    let ladder = ZetaLadder::build(fam.spec());
    let nu = ladder.nu();
    if n < nu {
        return Err(Error::DegreeBelowZeta {
            degree: n,
            zeta_degree: nu,
        });
    }
    let target = fam.polynomial(n)?;
    let families: Vec<ModifiedFamily<S>> = (0..=nu)
        .map(|j| ModifiedFamily::new(fam.functional(), ladder.rung(j)))
        .collect();
    let mut basis_polys = Vec::with_capacity(nu + 1);
    for (j, family) in families.iter().enumerate() {
        let modified = family.poly(n - j)?;
        let element = (ladder.rung(j) * &modified).scale(&rung_rescale(n, j));
        basis_polys.push(element);
    }
    let mut condition_ok = true;
    for mass in fam.spec().masses() {
        for (j, family) in families.iter().enumerate() {
            let value = family.poly(n - j)?.eval(&mass.location);
            if value.is_negligible(1.0) {
                condition_ok = false;
            }
        }
    }
    let matrix: Vec<Vec<S>> = (0..=nu)
        .map(|r| (0..=nu).map(|j| basis_polys[j].coeff(n - r)).collect())
        .collect();
    let rhs: Vec<S> = (0..=nu).map(|r| target.coeff(n - r)).collect();
    let coefficients = solve(&matrix, &rhs, "zeta-ladder connection system")?;
    certify(
        ConnectionBasis::ZetaLadder,
        n,
        &target,
        coefficients,
        basis_polys,
        condition_ok,
    )
}

/// Expands the degree-`n` Sobolev polynomial over Laguerre polynomials with
/// shifted parameter: degree `n - k` at parameter `alpha + k`, for `k` up to
/// the annihilator degree. The matching system is triangular, so the top
/// coefficient forces the leading expansion coefficient to one.
pub fn connect_shifted<S: Scalar>(fam: &SobolevFamily<S>, n: usize) -> Result<ConnectionResult<S>> {
    let ladder = ZetaLadder::build(fam.spec());
    let nu = ladder.nu();
    if n < nu {
        return Err(Error::DegreeBelowZeta {
            degree: n,
            zeta_degree: nu,
        });
    }
    let target = fam.polynomial(n)?;
    let alpha = fam.spec().alpha().clone();
    let basis_polys: Vec<Poly<S>> = (0..=nu)
        .map(|k| {
            let shifted = alpha.clone() + S::from_i64(k as i64);
            laguerre_polynomial_raw(&shifted, n - k)
        })
        .collect();
    let matrix: Vec<Vec<S>> = (0..=nu)
        .map(|r| (0..=nu).map(|k| basis_polys[k].coeff(n - r)).collect())
        .collect();
    let rhs: Vec<S> = (0..=nu).map(|r| target.coeff(n - r)).collect();
    let coefficients = solve(&matrix, &rhs, "shifted-parameter connection system")?;
    certify(
        ConnectionBasis::ShiftedParameter,
        n,
        &target,
        coefficients,
        basis_polys,
        true,
    )
}

/// Expands the degree-`n` Sobolev polynomial over the classical family
/// itself. The coefficients below the top come in closed form from the
/// kernel representation: minus the mass-weighted Sobolev derivative values
/// against the classical derivative values, over the squared norm. The top
/// coefficient is exactly one because leading coefficients agree.
pub fn connect_laguerre<S: Scalar>(
    fam: &SobolevFamily<S>,
    n: usize,
) -> Result<ConnectionResult<S>> {
    let target = fam.polynomial(n)?;
    let laguerre = fam.laguerre();
    let basis_polys: Vec<Poly<S>> = (0..=n).map(|k| laguerre.poly(k)).collect();
    let coefficients = fam.laguerre_coefficients(n)?;
    certify(
        ConnectionBasis::Laguerre,
        n,
        &target,
        coefficients,
        basis_polys,
        true,
    )
}

/// Checks the adjoint property of multiplication by the annihilator: moving
/// it from one argument of the inner product to the other changes nothing,
/// and both sides collapse to the bare functional applied to the triple
/// product, because the mass terms vanish on annihilator multiples.
pub fn zeta_adjoint_check<S: Scalar>(
    spec: &SobolevSpec<S>,
    zeta: &Poly<S>,
    f: &Poly<S>,
    g: &Poly<S>,
) -> bool {
    let left = spec.inner_product(&(zeta * f), g);
    let middle = spec.functional().apply(&(&(zeta * f) * g));
    let right = spec.inner_product(f, &(zeta * g));
    let scale = left
        .to_f64_lossy()
        .abs()
        .max(middle.to_f64_lossy().abs())
        .max(right.to_f64_lossy().abs());
    (left.clone() - middle.clone()).is_negligible(scale) && (middle - right).is_negligible(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use crate::sobolev::MassPoint;
    use num_traits::{One, Zero};

    fn mass(location: i64, order: usize, mass_num: i64, mass_den: i64) -> MassPoint<Rat> {
        MassPoint::new(Rat::from_i64(location), order, rat(mass_num, mass_den))
    }

    fn spec(alpha: Rat, masses: Vec<MassPoint<Rat>>) -> SobolevSpec<Rat> {
        SobolevSpec::new(alpha, masses).unwrap()
    }

    fn family(alpha: Rat, masses: Vec<MassPoint<Rat>>) -> SobolevFamily<Rat> {
        SobolevFamily::new(spec(alpha, masses)).unwrap()
    }

    fn single_mass_family() -> SobolevFamily<Rat> {
        family(Rat::zero(), vec![mass(0, 0, 1, 1)])
    }

    fn x() -> Poly<Rat> {
        Poly::monomial(Rat::one(), 1)
    }

    #[test]
    fn ladder_for_single_mass() {
        let ladder = ZetaLadder::build(&spec(Rat::zero(), vec![mass(0, 0, 1, 1)]));
        assert_eq!(ladder.nu(), 1);
        assert_eq!(*ladder.zeta(), x());
        assert_eq!(ladder.rungs(), &[Poly::one(), x()]);
    }

    #[test]
    fn ladder_merges_repeated_location_to_highest_order() {
        let ladder =
            ZetaLadder::build(&spec(Rat::zero(), vec![mass(0, 1, 1, 1), mass(0, 0, 1, 1)]));
        assert_eq!(ladder.nu(), 2);
        assert_eq!(*ladder.zeta(), &x() * &x());
    }

    #[test]
    fn ladder_for_two_locations() {
        let ladder =
            ZetaLadder::build(&spec(Rat::zero(), vec![mass(0, 0, 1, 1), mass(1, 0, 1, 1)]));
        assert_eq!(ladder.nu(), 2);
        let expected = &x() * &Poly::linear_factor(&Rat::one());
        assert_eq!(*ladder.zeta(), expected);
    }

    #[test]
    fn ladder_rungs_divide_successors() {
        let ladder = ZetaLadder::build(&spec(
            Rat::zero(),
            vec![mass(0, 1, 1, 1), mass(2, 0, 1, 1), mass(-1, 0, 1, 2)],
        ));
        assert_eq!(ladder.nu(), 4);
        for k in 0..ladder.nu() {
            let (quotient, remainder) = ladder.rung(k + 1).div_rem(ladder.rung(k)).unwrap();
            assert!(remainder.is_zero());
            assert_eq!(quotient.degree(), Some(1));
        }
    }

    #[test]
    fn zeta_annihilates_derivative_values() {
        let specs = vec![
            spec(Rat::zero(), vec![mass(0, 0, 1, 1)]),
            spec(Rat::zero(), vec![mass(0, 1, 1, 1), mass(0, 0, 1, 1)]),
            spec(rat(1, 2), vec![mass(0, 0, 1, 1), mass(1, 0, 1, 1)]),
            spec(Rat::one(), vec![mass(0, 0, 1, 1), mass(2, 1, 1, 3)]),
        ];
        let probes = vec![
            Poly::one(),
            x(),
            &(&x() * &x()) + &Poly::one(),
            &(&(&x() * &x()) * &x()) - &x().scale(&Rat::from_i64(2)),
        ];
        for s in &specs {
            let ladder = ZetaLadder::build(s);
            for q in &probes {
                let values = s.derivative_values(&(ladder.zeta() * q));
                assert!(values.iter().all(|v| v.is_zero()), "{:?}", values);
            }
        }
    }

    #[test]
    fn zeta_is_minimal_under_factor_removal() {
        let specs = vec![
            spec(Rat::zero(), vec![mass(0, 1, 1, 1), mass(0, 0, 1, 1)]),
            spec(Rat::zero(), vec![mass(0, 0, 1, 1), mass(1, 0, 1, 1)]),
            spec(Rat::one(), vec![mass(0, 0, 1, 1), mass(2, 1, 1, 3)]),
        ];
        let probes = [
            Poly::one(),
            x(),
            &x() + &Poly::one(),
            &x() * &x(),
            &(&x() * &x()) * &x(),
        ];
        for s in &specs {
            let ladder = ZetaLadder::build(s);
            for dropped in 0..ladder.nu() {
                let mut reduced = Poly::one();
                for (i, root) in ladder.roots().iter().enumerate() {
                    if i != dropped {
                        reduced = &reduced * &Poly::linear_factor(root);
                    }
                }
                let violated = probes.iter().any(|q| {
                    s.derivative_values(&(&reduced * q))
                        .iter()
                        .any(|v| !v.is_zero())
                });
                assert!(violated, "dropping factor {} kept annihilation", dropped);
            }
        }
    }

    #[test]
    fn trivial_rung_reproduces_classical_family() {
        let fam = family(rat(1, 2), vec![]);
        let modified = ModifiedFamily::new(fam.functional(), &Poly::one());
        for n in 0..=5 {
            assert_eq!(modified.poly(n).unwrap(), fam.laguerre().poly(n));
        }
    }

    #[test]
    fn first_rung_family_hand_values_and_orthogonality() {
        let fam = single_mass_family();
        let modified = ModifiedFamily::new(fam.functional(), &x());
        assert_eq!(modified.poly(0).unwrap(), Poly::one());
        assert_eq!(
            modified.poly(1).unwrap(),
            Poly::from_coeffs(vec![Rat::from_i64(3), Rat::from_i64(-1)])
        );
        assert_eq!(
            modified.poly(2).unwrap(),
            Poly::from_coeffs(vec![Rat::from_i64(6), Rat::from_i64(-4), rat(1, 2)])
        );
        let functional = fam.functional();
        for n in 0..=5usize {
            let p = modified.poly(n).unwrap();
            for m in 0..n {
                let weighted = &(modified.modifier() * &p) * &Poly::monomial(Rat::one(), m);
                assert_eq!(functional.apply(&weighted), Rat::zero(), "n={} m={}", n, m);
            }
        }
    }

    #[test]
    fn zeta_expansion_of_massless_family_is_trivial() {
        let fam = family(rat(1, 2), vec![]);
        let result = connect_zeta(&fam, 4).unwrap();
        assert_eq!(result.coefficients, vec![Rat::one()]);
        assert_eq!(result.basis_polys, vec![fam.laguerre().poly(4)]);
        assert!(result.residual.is_zero());
        assert!(result.condition_ok);
    }

    #[test]
    fn zeta_expansion_hand_values_degree_one() {
        let fam = single_mass_family();
        let result = connect_zeta(&fam, 1).unwrap();
        assert_eq!(result.coefficients, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(
            result.basis_polys[0],
            Poly::from_coeffs(vec![Rat::one(), Rat::from_i64(-1)])
        );
        assert_eq!(result.basis_polys[1], x().scale(&Rat::from_i64(-1)));
        assert_eq!(result.reconstruct(), fam.polynomial(1).unwrap());
    }

    #[test]
    fn zeta_expansion_hand_values_degree_two() {
        let fam = single_mass_family();
        let result = connect_zeta(&fam, 2).unwrap();
        assert_eq!(result.coefficients, vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(
            result.basis_polys[1],
            Poly::from_coeffs(vec![Rat::zero(), rat(-3, 2), rat(1, 2)])
        );
        assert!(result.condition_ok);
    }

    #[test]
    fn zeta_expansion_coefficients_sum_to_one() {
        let fams = vec![
            single_mass_family(),
            family(Rat::one(), vec![mass(0, 0, 1, 1), mass(2, 1, 1, 3)]),
        ];
        for fam in &fams {
            let nu = ZetaLadder::build(fam.spec()).nu();
            for n in nu..=6 {
                let result = connect_zeta(fam, n).unwrap();
                let total: Rat = result.coefficients.iter().cloned().sum();
                assert_eq!(total, Rat::one(), "n={}", n);
                assert_eq!(result.reconstruct(), fam.polynomial(n).unwrap());
                assert_eq!(result.coefficients.len(), nu + 1);
            }
        }
    }

    #[test]
    fn zeta_expansion_rejects_degrees_below_annihilator() {
        let fam = family(Rat::zero(), vec![mass(0, 1, 1, 1)]);
        let err = connect_zeta(&fam, 1).unwrap_err();
        assert!(matches!(
            err,
            Error::DegreeBelowZeta {
                degree: 1,
                zeta_degree: 2
            }
        ));
        let boundary = connect_zeta(&fam, 2).unwrap();
        assert_eq!(boundary.reconstruct(), fam.polynomial(2).unwrap());
    }

    #[test]
    fn shared_root_between_rungs_makes_matching_singular() {
        let fam = family(Rat::zero(), vec![mass(0, 0, 1, 1), mass(2, 0, 1, 1)]);
        let err = connect_zeta(&fam, 3).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { .. }));
    }

    #[test]
    fn shifted_expansion_of_massless_family_is_trivial() {
        let fam = family(rat(1, 2), vec![]);
        let result = connect_shifted(&fam, 3).unwrap();
        assert_eq!(result.coefficients, vec![Rat::one()]);
        assert!(result.residual.is_zero());
    }

    #[test]
    fn shifted_expansion_hand_values() {
        let fam = single_mass_family();
        let first = connect_shifted(&fam, 1).unwrap();
        assert_eq!(first.coefficients, vec![Rat::one(), rat(-1, 2)]);
        let second = connect_shifted(&fam, 2).unwrap();
        assert_eq!(second.coefficients, vec![Rat::one(), rat(-1, 3)]);
    }

    #[test]
    fn shifted_expansion_reconstructs_for_origin_masses() {
        let fams = vec![
            single_mass_family(),
            family(rat(1, 2), vec![mass(0, 0, 1, 1), mass(0, 1, 1, 1)]),
        ];
        for fam in &fams {
            let nu = ZetaLadder::build(fam.spec()).nu();
            for n in nu..=8 {
                let result = connect_shifted(fam, n).unwrap();
                assert_eq!(result.coefficients[0], Rat::one(), "n={}", n);
                assert_eq!(result.reconstruct(), fam.polynomial(n).unwrap());
            }
        }
    }

    /// For masses away from the origin the expansion over shifted-parameter
    /// polynomials does not truncate: the unique triangular expansion of the
    /// degree-4 polynomial below has a nonzero coefficient on the degree-0
    /// basis element, one slot past the annihilator degree. The refusal with
    /// its exact residual is frozen here.
    #[test]
    fn shifted_expansion_is_refused_away_from_origin() {
        let fam = family(Rat::one(), vec![mass(0, 0, 1, 1), mass(2, 1, 1, 3)]);
        for n in 3..=3usize {
            connect_shifted(&fam, n).unwrap();
        }
        let err = connect_shifted(&fam, 4).unwrap_err();
        match err {
            Error::NonzeroResidual {
                basis,
                degree,
                residual,
            } => {
                assert_eq!(basis, "shifted-parameter");
                assert_eq!(degree, 4);
                assert!(residual.contains("-74/229"), "residual={}", residual);
            }
            other => panic!("unexpected error {:?}", other),
        }

        let derivative_mass = family(Rat::from_i64(2), vec![mass(1, 2, 5, 1)]);
        assert!(matches!(
            connect_shifted(&derivative_mass, 4),
            Err(Error::NonzeroResidual { .. })
        ));
    }

    #[test]
    fn laguerre_expansion_of_massless_family_is_trivial() {
        let fam = family(rat(1, 2), vec![]);
        let result = connect_laguerre(&fam, 3).unwrap();
        assert_eq!(
            result.coefficients,
            vec![Rat::zero(), Rat::zero(), Rat::zero(), Rat::one()]
        );
    }

    #[test]
    fn laguerre_expansion_hand_values_degree_two() {
        let fam = single_mass_family();
        let result = connect_laguerre(&fam, 2).unwrap();
        assert_eq!(
            result.coefficients,
            vec![rat(-1, 3), rat(-1, 3), Rat::one()]
        );
        assert_eq!(result.reconstruct(), fam.polynomial(2).unwrap());
    }

    #[test]
    fn laguerre_expansion_reconstructs() {
        let fam = family(Rat::one(), vec![mass(0, 0, 1, 1), mass(2, 1, 1, 3)]);
        for n in 0..=6 {
            let result = connect_laguerre(&fam, n).unwrap();
            assert_eq!(*result.coefficients.last().unwrap(), Rat::one());
            assert_eq!(result.reconstruct(), fam.polynomial(n).unwrap(), "n={}", n);
        }
    }

    #[test]
    fn adjoint_check_hand_value() {
        let s = spec(Rat::zero(), vec![mass(0, 0, 7, 1)]);
        let zeta = x();
        assert!(zeta_adjoint_check(&s, &zeta, &Poly::one(), &Poly::one()));
        assert_eq!(
            s.inner_product(&(&zeta * &Poly::one()), &Poly::one()),
            Rat::one()
        );
    }

    #[test]
    fn adjoint_check_sweep() {
        let specs = vec![
            spec(Rat::zero(), vec![mass(0, 0, 1, 1)]),
            spec(Rat::one(), vec![mass(0, 0, 1, 1), mass(2, 1, 1, 3)]),
            spec(rat(1, 2), vec![]),
        ];
        let probes = vec![
            Poly::one(),
            x(),
            &(&x() * &x()) - &Poly::constant(rat(1, 3)),
            &(&(&x() * &x()) * &x()) + &x().scale(&rat(5, 2)),
        ];
        for s in &specs {
            let zeta = ZetaLadder::build(s).zeta().clone();
            for f in &probes {
                for g in &probes {
                    assert!(zeta_adjoint_check(s, &zeta, f, g));
                }
            }
        }
    }

    #[test]
    fn float_backend_zeta_expansion_tracks_exact() {
        let exact = connect_zeta(&single_mass_family(), 2).unwrap();
        let float_fam =
            SobolevFamily::new(spec(Rat::zero(), vec![mass(0, 0, 1, 1)]).to_float()).unwrap();
        let float = connect_zeta(&float_fam, 2).unwrap();
        assert!(float.condition_ok);
        for (e, f) in exact.coefficients.iter().zip(&float.coefficients) {
            assert!((e.to_f64_lossy() - f).abs() < 1e-9);
        }
        assert!(float.residual_norm_f64() < 1e-9);
    }
}
