//! Sobolev-type orthogonal polynomials for the Laguerre weight with point
//! masses attached to derivative values.
//!
//! The crate is generic over a scalar backend: exact rationals serve as the
//! reference oracle, `f64` as the fast evaluation path. It builds the
//! classical Laguerre family, its reproducing kernels and their derivatives,
//! the Sobolev-orthogonal family for a list of mass points, and the
//! connection formulas expressing that family over other polynomial bases.

pub mod connect;
pub mod error;
pub mod kernels;
pub mod laguerre;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod sobolev;

pub use connect::{
    connect_laguerre, connect_shifted, connect_zeta, zeta_adjoint_check, ConnectionBasis,
    ConnectionResult, ModifiedFamily, ZetaLadder,
};
pub use error::{Error, Result};
pub use kernels::{
    kernel_cd, kernel_matrix, kernel_partial, kernel_partial_cd, kernel_partial_cd_poly,
    kernel_section, kernel_sum, kernel_vector, telescoping_identity_check, KernelMatrix,
    KernelRequest,
};
pub use laguerre::{
    gauss_laguerre, laguerre_polynomial_raw, structure_checks, LaguerreFamily, MomentFunctional,
    QuadratureRule, StructureChecks,
};
pub use linalg::{determinant, invert, solve};
pub use poly::{hyp1f1_truncated, Poly};
pub use scalar::{factorial, pochhammer, rat, Rat, Scalar};
pub use sobolev::{
    gram_schmidt_oracle, DegreeRecord, MassPoint, RegularityEntry, SobolevFamily, SobolevSpec,
};
