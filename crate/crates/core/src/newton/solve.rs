use std::time::Instant;

use super::step::{function_free_update, standard_update};
use super::{IterationRecord, IterationTrace, PhaseTimings, Scheme, SolveStatus, SolverConfig};
use crate::error::{Error, Result};
use crate::matrix::{norm_inf, DenseMatrix, LuFactorization};
use crate::poly_system::{check_len, Evaluator, PolynomialSystem};

/// Iterates beyond this magnitude are reported as divergent.
pub const DIVERGENCE_BOUND: f64 = 1e12;

/// Runs the configured Newton iteration from `u0`.
///
/// Every iteration `k` checks the residual at `u^k` and records it before
/// deciding whether to step. Under [`Scheme::FunctionFree`] that residual is
/// rebuilt from the Jacobian (or, on frozen steps, from a matrix-free `J(u)·u`
/// product), so the top-degree term is never evaluated.
///
/// Returns `Err` only for invalid input (bad config, wrong `u0` length, or a
/// function-free run on a system without nonlinear terms). Numerical failures
/// end up in [`IterationTrace::status`].
pub fn solve(sys: &PolynomialSystem, u0: &[f64], config: &SolverConfig) -> Result<(Vec<f64>, IterationTrace)> {
    config.validate()?;
    check_len(u0, sys.dim())?;
    if config.scheme == Scheme::FunctionFree && sys.top_degree() < 2 {
        return Err(Error::NoNonlinearTerm);
    }

    let start = Instant::now();
    let mut timings = PhaseTimings::default();
    let mut ev = Evaluator::new(sys);
    let mut records = Vec::new();
    let mut u = u0.to_vec();
    let mut steps = 0;
    let mut last_step: Option<f64> = None;
    let mut step_converged = false;
    let mut factored: Option<LuFactorization> = None;

    let status = loop {
        let k = records.len();
        if u.iter().any(|v| !v.is_finite()) || norm_inf(&u) > DIVERGENCE_BOUND {
            break SolveStatus::Diverged;
        }

        let refresh = factored.is_none() || k % config.jacobian_refresh == 0;
        let jac: Option<DenseMatrix> = if refresh {
            let t = Instant::now();
            let j = ev.jacobian(&u)?;
            timings.assembly += t.elapsed().as_secs_f64();
            Some(j)
        } else {
            None
        };

        let (residual, parts) = match config.scheme {
            Scheme::Standard => (ev.residual(&u)?, None),
            Scheme::FunctionFree => {
                let parts = ev.function_free_parts(&u)?;
                let ju = match &jac {
                    Some(j) => j.mul_vec(&u)?,
                    None => ev.jacobian_vector_product(&u, &u)?,
                };
                (ev.reconstruct_residual(&parts, &ju)?, Some(parts))
            }
        };
        let residual_inf = norm_inf(&residual);
        records.push(IterationRecord {
            k,
            iterate: u.clone(),
            residual_inf,
            step_inf: last_step,
            wall_time: start.elapsed().as_secs_f64(),
        });

        if !residual_inf.is_finite() {
            break SolveStatus::Diverged;
        }
        if residual_inf <= config.residual_tol {
            break SolveStatus::ConvergedResidual;
        }
        if step_converged {
            break SolveStatus::ConvergedStep;
        }
        if steps >= config.max_iters {
            break SolveStatus::MaxIters;
        }

        if let Some(j) = &jac {
            let t = Instant::now();
            let lu = ev.factor(j);
            timings.factorization += t.elapsed().as_secs_f64();
            match lu {
                Ok(lu) => factored = Some(lu),
                Err(Error::SingularMatrix) => break SolveStatus::SingularJacobian,
                Err(e) => return Err(e),
            }
        }
        let lu = factored.as_ref().expect("factorization present after refresh");

        let t = Instant::now();
        let next = match (&parts, refresh) {
            // the closed-form step needs J at this exact u
            (Some(parts), true) => function_free_update(&mut ev, &u, lu, parts)?,
            _ => standard_update(&mut ev, &u, lu, &residual)?,
        };
        timings.solve += t.elapsed().as_secs_f64();

        let step_inf = u.iter().zip(&next).fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
        step_converged = step_inf <= config.step_tol * (1.0 + norm_inf(&next));
        last_step = Some(step_inf);
        steps += 1;
        u = next;
    };

    timings.total = start.elapsed().as_secs_f64();
    let trace = IterationTrace {
        scheme: config.scheme,
        records,
        status,
        steps,
        counters: ev.into_counters(),
        timings,
    };
    Ok((u, trace))
}
