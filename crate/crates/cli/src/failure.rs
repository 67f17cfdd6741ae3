//! Command failures paired with the process exit code they map to.

use sobolag::Error;

/// Exit code for a verification that found a broken identity.
pub const EXIT_VERIFICATION: u8 = 1;
/// Exit code for bad invocations, unreadable files, and malformed data.
pub const EXIT_USAGE: u8 = 2;
/// Exit code for mathematical objects that provably do not exist.
pub const EXIT_EXISTENCE: u8 = 3;

/// A failed command: what to print on stderr and how to exit.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    /// Classifies a library error: nonexistence of a polynomial or an
    /// expansion exits 3, a failed certification exits 1, and everything
    /// else is treated as bad input.
    pub fn from_library(error: Error) -> Self {
        let code = match &error {
            Error::DegreeDoesNotExist { .. }
            | Error::GramSingular { .. }
            | Error::ModifiedNotQuasiDefinite { .. }
            | Error::SingularSystem { .. } => EXIT_EXISTENCE,
            Error::NonzeroResidual { .. } => EXIT_VERIFICATION,
            Error::DegreeBelowZeta { .. } => EXIT_USAGE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: error.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::from_library(error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_nonexistence_maps_to_the_existence_code() {
        let err = Error::DegreeDoesNotExist {
            degree: 1,
            determinant: "0".into(),
            matrix: "[[0]]".into(),
        };
        assert_eq!(Failure::from_library(err).code, EXIT_EXISTENCE);
    }

    #[test]
    fn residual_violations_map_to_the_verification_code() {
        let err = Error::NonzeroResidual {
            basis: "shifted-parameter",
            degree: 4,
            residual: "x".into(),
        };
        assert_eq!(Failure::from_library(err).code, EXIT_VERIFICATION);
    }

    #[test]
    fn degree_below_ladder_is_a_usage_error() {
        let err = Error::DegreeBelowZeta {
            degree: 0,
            zeta_degree: 1,
        };
        assert_eq!(Failure::from_library(err).code, EXIT_USAGE);
    }
}
