//! JSON problem files.
//!
//! ```json
//! {
//!   "n": 1,
//!   "convention": "Lu+N+b=0",
//!   "linear": [[0, 0, 0.0]],
//!   "terms": [{ "degree": 2, "entries": [[0, [0, 0], 1.0]] }],
//!   "constant": [-4.0],
//!   "known_root": [2.0],
//!   "u0": [3.0]
//! }
//! ```
//!
//! Problems written as `L·u + N(u) = b` must be stored with `b` negated.
//! Writing always emits the canonical form of the system, so a
//! parse/serialize round trip normalizes entry order and merges duplicates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error as SystemError;
use crate::poly_system::{PolynomialSystem, RawTerm, TermEntry};
use crate::problems::{ParamValue, ProblemSpec};

pub const CONVENTION: &str = "Lu+N+b=0";

#[derive(Debug, Error)]
pub enum ProblemFileError {
    #[error("malformed problem JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported convention {0:?}, expected \"Lu+N+b=0\"")]
    Convention(String),
    #[error("invalid system: {0}")]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, ParamValue>,
    pub n: usize,
    pub convention: String,
    #[serde(default)]
    pub linear: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub terms: Vec<TermFile>,
    pub constant: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_root: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub degree: usize,
    pub entries: Vec<(usize, Vec<usize>, f64)>,
}

impl ProblemFile {
    pub fn from_system(system: &PolynomialSystem) -> Self {
        Self {
            name: None,
            params: BTreeMap::new(),
            n: system.dim(),
            convention: CONVENTION.into(),
            linear: system.linear().to_vec(),
            terms: system
                .terms()
                .iter()
                .map(|t| TermFile {
                    degree: t.degree(),
                    entries: t.entries().iter().map(|e| (e.row, e.vars.clone(), e.coeff)).collect(),
                })
                .collect(),
            constant: system.constant().to_vec(),
            known_root: None,
            u0: None,
        }
    }

    pub fn from_spec(spec: &ProblemSpec) -> Self {
        Self {
            name: Some(spec.name.clone()),
            params: spec.params.clone(),
            known_root: spec.known_root.clone(),
            u0: Some(spec.suggested_u0.clone()),
            ..Self::from_system(&spec.system)
        }
    }

    pub fn to_system(&self) -> Result<PolynomialSystem, ProblemFileError> {
        if self.convention != CONVENTION {
            return Err(ProblemFileError::Convention(self.convention.clone()));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                RawTerm::new(
                    t.degree,
                    t.entries
                        .iter()
                        .map(|(row, vars, c)| TermEntry::new(*row, vars.clone(), *c))
                        .collect(),
                )
            })
            .collect();
        Ok(PolynomialSystem::build(
            self.n,
            &self.linear,
            terms,
            self.constant.clone(),
        )?)
    }

    /// Validates the file and turns it into a runnable problem. Without a
    /// `u0`, the start is the zero vector.
    pub fn to_spec(&self) -> Result<ProblemSpec, ProblemFileError> {
        let system = self.to_system()?;
        let n = system.dim();
        for v in [&self.known_root, &self.u0].into_iter().flatten() {
            if v.len() != n {
                return Err(SystemError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                }
                .into());
            }
            if let Some(&x) = v.iter().find(|x| !x.is_finite()) {
                return Err(SystemError::NonfiniteCoefficient(x).into());
            }
        }
        Ok(ProblemSpec {
            name: self.name.clone().unwrap_or_else(|| "file".into()),
            params: self.params.clone(),
            system,
            known_root: self.known_root.clone(),
            suggested_u0: self.u0.clone().unwrap_or_else(|| vec![0.0; n]),
        })
    }
}

pub fn parse_problem(json: &str) -> Result<ProblemSpec, ProblemFileError> {
    let file: ProblemFile = serde_json::from_str(json)?;
    file.to_spec()
}

pub fn problem_to_json(spec: &ProblemSpec) -> String {
    serde_json::to_string_pretty(&ProblemFile::from_spec(spec)).expect("problem file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{burgers_1d, random_polynomial_problem, scalar_power_problem};

    #[test]
    fn parses_documented_example() {
        let json = r#"{
            "n": 1, "convention": "Lu+N+b=0",
            "linear": [[0, 0, 0.0]],
            "terms": [{"degree": 2, "entries": [[0, [0, 0], 1.0]]}],
            "constant": [-4.0], "known_root": [2.0], "u0": [3.0]
        }"#;
        let spec = parse_problem(json).unwrap();
        assert_eq!(spec.system, scalar_power_problem(2, 4.0).unwrap().system);
        assert_eq!(spec.suggested_u0, vec![3.0]);
        assert_eq!(spec.name, "file");
    }

    #[test]
    fn round_trip_is_exact() {
        for spec in [
            random_polynomial_problem(8, &[2, 3, 4], 0.3, 11).unwrap(),
            burgers_1d(7, 0.1, 1.0, 0.0).unwrap(),
        ] {
            let json = problem_to_json(&spec);
            let back = parse_problem(&json).unwrap();
            assert_eq!(back, spec);
            assert_eq!(problem_to_json(&back), json);
        }
    }

    #[test]
    fn wrong_arity_is_a_build_error() {
        // degree 3 declared on degree-2 entries
        let json = r#"{"n": 1, "convention": "Lu+N+b=0", "linear": [],
            "terms": [{"degree": 3, "entries": [[0, [0, 0], 1.0]]}], "constant": [-4.0]}"#;
        let err = parse_problem(json).unwrap_err();
        assert!(
            matches!(err, ProblemFileError::System(SystemError::ArityMismatch { .. })),
            "{err}"
        );
    }

    #[test]
    fn other_failures() {
        assert!(matches!(parse_problem("{"), Err(ProblemFileError::Json(_))));
        let conv = r#"{"n": 1, "convention": "Lu+N=b", "constant": [1.0]}"#;
        assert!(matches!(parse_problem(conv), Err(ProblemFileError::Convention(_))));
        let short_u0 = r#"{"n": 2, "convention": "Lu+N+b=0", "constant": [1.0, 2.0], "u0": [1.0]}"#;
        assert!(matches!(parse_problem(short_u0), Err(ProblemFileError::System(_))));
        let unknown = r#"{"n": 1, "convention": "Lu+N+b=0", "constant": [1.0], "extra": 1}"#;
        assert!(matches!(parse_problem(unknown), Err(ProblemFileError::Json(_))));
    }
}
