//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building or evaluating the families.
#[derive(Debug, Error)]
pub enum Error {
    /// The Laguerre functional is not quasi-definite when alpha is a negative
    /// integer, so no orthogonal family exists for it.
    #[error(
        "alpha = {alpha} is a negative integer; the Laguerre functional is not quasi-definite"
    )]
    DegenerateAlpha { alpha: String },

    /// Gauss quadrature needs an integrable weight, which requires alpha > -1.
    #[error("quadrature requires alpha > -1, got alpha = {alpha}")]
    QuadratureAlphaOutOfRange { alpha: f64 },

    /// A quadrature rule with zero nodes integrates nothing.
    #[error("quadrature rule needs at least one node")]
    QuadratureEmpty,

    /// The symmetric eigensolver failed to converge on the Jacobi matrix.
    #[error("eigenvalue iteration did not converge for {nodes} quadrature nodes")]
    EigenDidNotConverge { nodes: usize },

    /// A denominator Pochhammer factor of the confluent series vanished
    /// within the truncation range.
    #[error("series parameter {b} makes the denominator factor vanish at term {term}")]
    HypergeometricPole { b: String, term: usize },

    /// Polynomial division by the zero polynomial.
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,

    /// A division that must be exact left a remainder.
    #[error("polynomial division left a nonzero remainder ({context})")]
    NonzeroRemainder { context: &'static str },

    /// The Sobolev polynomial of this degree does not exist because the
    /// deformation matrix I + D*K is singular.
    #[error(
        "Sobolev polynomial of degree {degree} does not exist: det(I + D*K) = {determinant} \
         for the kernel matrix K of index {degree} - 1; I + D*K = {matrix}"
    )]
    DegreeDoesNotExist {
        degree: usize,
        determinant: String,
        matrix: String,
    },

    /// A linear system that should have been solvable was singular.
    #[error("singular linear system ({context})")]
    SingularSystem { context: &'static str },

    /// The moment matrix of the Sobolev product is singular at this degree,
    /// so the Gram-Schmidt reference construction cannot continue.
    #[error("Sobolev moment matrix is singular at degree {degree}")]
    GramSingular { degree: usize },

    /// The polynomially modified functional has no orthogonal polynomial of
    /// this degree.
    #[error("modified functional is not quasi-definite at degree {degree}")]
    ModifiedNotQuasiDefinite { degree: usize },

    /// A connection formula failed to reproduce the target polynomial.
    #[error("connection residual is nonzero at degree {degree} in the {basis} basis: {residual}")]
    NonzeroResidual {
        basis: &'static str,
        degree: usize,
        residual: String,
    },

    /// Connection over the annihilator ladder needs degree at least deg(zeta).
    #[error("connection requires degree >= {zeta_degree}, got {degree}")]
    DegreeBelowZeta { degree: usize, zeta_degree: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
