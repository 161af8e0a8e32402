use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Per-solve tallies of the expensive operations.
///
/// `homogeneous_evals` is keyed by term degree and is seeded with a zero for
/// every degree present in the system, so a degree that was never evaluated
/// shows up explicitly as `0` rather than being absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounters {
    pub homogeneous_evals: BTreeMap<usize, u64>,
    pub jacobian_assemblies: u64,
    /// Matrix-free `J(u)·v` products, used by frozen-Jacobian function-free steps.
    pub jacobian_vector_products: u64,
    pub factorizations: u64,
    pub linear_solves: u64,
    pub residual_evaluations: u64,
    pub residual_reconstructions: u64,
}

impl EvalCounters {
    pub fn for_degrees(degrees: impl IntoIterator<Item = usize>) -> Self {
        Self {
            homogeneous_evals: degrees.into_iter().map(|d| (d, 0)).collect(),
            ..Self::default()
        }
    }

    pub fn homogeneous(&self, degree: usize) -> u64 {
        self.homogeneous_evals.get(&degree).copied().unwrap_or(0)
    }

    pub(crate) fn bump_homogeneous(&mut self, degree: usize) {
        *self.homogeneous_evals.entry(degree).or_insert(0) += 1;
    }
}
