//! Spec files: the on-disk JSON description of a Sobolev inner product.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sobolag::{MassPoint, Rat, SobolevSpec};

use crate::failure::Failure;

/// JSON schema of a spec file. Rationals are strings, "p/q" or plain
/// integers, so exact data survives serialization untouched.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    pub alpha: String,
    pub masses: Vec<MassEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
}

/// One mass term: location `c`, derivative order `nu`, weight `mu`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MassEntry {
    pub c: String,
    pub nu: usize,
    pub mu: String,
}

/// Arithmetic backend selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

impl SpecFile {
    /// Reads and parses a spec file, reporting unreadable files and invalid
    /// JSON as usage errors.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::usage(format!("cannot read spec file {}: {}", path.display(), e))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("invalid spec file {}: {}", path.display(), e)))
    }

    /// Backend to run under: an explicit flag wins, then the file's choice,
    /// then exact.
    pub fn backend(&self, flag: Option<Backend>) -> Backend {
        flag.or(self.backend).unwrap_or(Backend::Exact)
    }

    /// Validates the data into an exact spec.
    pub fn to_spec(&self) -> Result<SobolevSpec<Rat>, Failure> {
        let alpha = parse_rational(&self.alpha)?;
        let mut masses = Vec::with_capacity(self.masses.len());
        for entry in &self.masses {
            let c = parse_rational(&entry.c)?;
            let mu = parse_rational(&entry.mu)?;
            masses.push(MassPoint::new(c, entry.nu, mu));
        }
        SobolevSpec::new(alpha, masses).map_err(|e| Failure::usage(e.to_string()))
    }

    /// The float mirror of the validated spec.
    pub fn to_float_spec(&self) -> Result<SobolevSpec<f64>, Failure> {
        Ok(self.to_spec()?.to_float())
    }
}

/// Parses "p/q" or a plain integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rat, Failure> {
    let trimmed = text.trim();
    let bad = || {
        Failure::usage(format!(
            "cannot parse '{}' as a rational (use p or p/q)",
            text
        ))
    };
    if trimmed.is_empty() {
        return Err(bad());
    }
    match trimmed.split_once('/') {
        None => {
            let n = BigInt::from_str(trimmed).map_err(|_| bad())?;
            Ok(Rat::from(n))
        }
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Failure::usage(format!("denominator is zero in '{}'", text)));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Parses a grid coordinate: any float literal, or an exact "p/q".
pub fn parse_grid_point(text: &str) -> Result<f64, Failure> {
    if let Ok(v) = f64::from_str(text.trim()) {
        if v.is_finite() {
            return Ok(v);
        }
    }
    parse_rational(text).map(|r| sobolag::Scalar::to_f64_lossy(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sobolag::rat;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_rational(" 1 / 3 ").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
    }

    #[test]
    fn rejects_zero_denominators_and_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn grid_points_accept_floats_and_rationals() {
        assert_eq!(parse_grid_point("0.5").unwrap(), 0.5);
        assert_eq!(parse_grid_point("1/2").unwrap(), 0.5);
        assert!(parse_grid_point("nan").is_err());
    }

    #[test]
    fn spec_json_round_trips() {
        let text = r#"{"alpha":"1/2","masses":[{"c":"0","nu":0,"mu":"1"}],"backend":"exact"}"#;
        let file: SpecFile = serde_json::from_str(text).unwrap();
        assert_eq!(file.backend(None), Backend::Exact);
        let spec = file.to_spec().unwrap();
        assert_eq!(spec.alpha(), &rat(1, 2));
        assert_eq!(spec.mass_count(), 1);
        let back = serde_json::to_string(&file).unwrap();
        assert_eq!(back, text);
    }

    #[test]
    fn degenerate_alpha_is_a_usage_error() {
        let file = SpecFile {
            alpha: "-2".into(),
            masses: vec![],
            backend: None,
        };
        let err = file.to_spec().unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("-2"));
    }
}
