//! Newton iterations for polynomial systems.
//!
//! Two step formulas share one outer loop:
//!
//! * [`Scheme::Standard`]: `u⁺ = u − J(u)⁻¹ f(u)`.
//! * [`Scheme::FunctionFree`]: with top degree `p`,
//!   `u⁺ = ((p−1)/p)·u − (1/p)·J(u)⁻¹ ((p−1)·L·u + Σ_{m<p}(p−m)·N⁽ᵐ⁾(u) + p·b)`,
//!   which is algebraically the same step but never evaluates `N⁽ᵖ⁾`.
//!   For `p = 2` and `p = 3` with no lower terms it evaluates no nonlinear
//!   term at all; a mixed quadratic/cubic system still needs `N⁽²⁾`.

mod finite_diff;
mod solve;
mod step;

use serde::{Deserialize, Serialize};

pub use finite_diff::{finite_difference_jacobian, finite_difference_jacobian_scaled, max_relative_entry_error};
pub use solve::solve;
pub use step::{function_free_update, newton_step_function_free, newton_step_standard, standard_update};

pub use crate::counters::EvalCounters;
pub use crate::matrix::linear_solve;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Standard,
    FunctionFree,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Standard => "standard",
            Scheme::FunctionFree => "function-free",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub scheme: Scheme,
    /// Stop once `‖f(u)‖∞ ≤ residual_tol`.
    pub residual_tol: f64,
    /// Stop once `‖u⁺ − u‖∞ ≤ step_tol·(1 + ‖u⁺‖∞)`.
    pub step_tol: f64,
    pub max_iters: usize,
    /// Reassemble and refactor the Jacobian every this many steps.
    /// `1` is full Newton; larger values give a frozen-Jacobian iteration.
    pub jacobian_refresh: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Standard,
            residual_tol: 1e-10,
            step_tol: 1e-12,
            max_iters: 50,
            jacobian_refresh: 1,
        }
    }
}

impl SolverConfig {
    pub fn with_scheme(scheme: Scheme) -> Self {
        Self {
            scheme,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t.is_finite() && t >= 0.0;
        if !tol_ok(self.residual_tol) || !tol_ok(self.step_tol) {
            return Err(Error::InvalidParameter(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        if self.residual_tol == 0.0 && self.step_tol == 0.0 {
            return Err(Error::InvalidParameter(
                "at least one tolerance must be positive".into(),
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
        }
        if self.jacobian_refresh == 0 {
            return Err(Error::InvalidParameter("jacobian_refresh must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    ConvergedResidual,
    ConvergedStep,
    MaxIters,
    SingularJacobian,
    Diverged,
}

impl SolveStatus {
    pub fn is_converged(self) -> bool {
        matches!(self, SolveStatus::ConvergedResidual | SolveStatus::ConvergedStep)
    }
}

/// State at the start of iteration `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub iterate: Vec<f64>,
    pub residual_inf: f64,
    /// `‖u^k − u^{k−1}‖∞`; absent for `k = 0`.
    pub step_inf: Option<f64>,
    /// Seconds since the solve started.
    pub wall_time: f64,
}

/// Accumulated wall-clock seconds per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub assembly: f64,
    pub factorization: f64,
    pub solve: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub scheme: Scheme,
    pub records: Vec<IterationRecord>,
    pub status: SolveStatus,
    /// Updates applied to the iterate.
    pub steps: usize,
    pub counters: EvalCounters,
    pub timings: PhaseTimings,
}

impl IterationTrace {
    /// Number of iterations, i.e. residual checks at `u⁰ … u^K`.
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.records.last().map(|r| r.residual_inf)
    }

    pub fn iterates(&self) -> impl Iterator<Item = &[f64]> {
        self.records.iter().map(|r| r.iterate.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_matches_documented_values() {
        let c = SolverConfig::default();
        assert_eq!(
            (c.residual_tol, c.step_tol, c.max_iters, c.jacobian_refresh),
            (1e-10, 1e-12, 50, 1)
        );
        assert!(c.validate().is_ok());
    }

    #[test]
    fn invalid_configs_rejected() {
        let base = SolverConfig::default();
        for bad in [
            SolverConfig {
                residual_tol: 0.0,
                step_tol: 0.0,
                ..base
            },
            SolverConfig {
                residual_tol: -1.0,
                ..base
            },
            SolverConfig {
                step_tol: f64::NAN,
                ..base
            },
            SolverConfig { max_iters: 0, ..base },
            SolverConfig {
                jacobian_refresh: 0,
                ..base
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        assert!(SolverConfig {
            residual_tol: 0.0,
            ..base
        }
        .validate()
        .is_ok());
    }
}
