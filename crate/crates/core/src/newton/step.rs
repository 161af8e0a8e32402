use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, LuFactorization};
use crate::poly_system::{check_len, Evaluator, FunctionFreeParts, PolynomialSystem};

/// `u − J⁻¹·f` for an already factored `J` and evaluated `f`.
pub fn standard_update(ev: &mut Evaluator<'_>, u: &[f64], lu: &LuFactorization, residual: &[f64]) -> Result<Vec<f64>> {
    let delta = ev.solve(lu, residual)?;
    Ok(u.iter().zip(delta).map(|(a, d)| a - d).collect())
}

/// `((p−1)/p)·u − (1/p)·J⁻¹·rhs` with `rhs` built from `parts`.
///
/// Only valid when `lu` factors the Jacobian at this exact `u`.
pub fn function_free_update(
    ev: &mut Evaluator<'_>,
    u: &[f64],
    lu: &LuFactorization,
    parts: &FunctionFreeParts,
) -> Result<Vec<f64>> {
    let rhs = parts.step_rhs(ev.system().constant());
    let x = ev.solve(lu, &rhs)?;
    let p = parts.top_degree as f64;
    Ok(u.iter().zip(x).map(|(a, xi)| (p - 1.0) / p * a - xi / p).collect())
}

/// One standard Newton step with the given Jacobian.
pub fn newton_step_standard(sys: &PolynomialSystem, u: &[f64], jac: &DenseMatrix) -> Result<Vec<f64>> {
    check_len(u, sys.dim())?;
    let mut ev = Evaluator::new(sys);
    let residual = ev.residual(u)?;
    let lu = ev.factor(jac)?;
    standard_update(&mut ev, u, &lu, &residual)
}

/// One Newton step that never evaluates the top-degree term.
pub fn newton_step_function_free(sys: &PolynomialSystem, u: &[f64], jac: &DenseMatrix) -> Result<Vec<f64>> {
    check_len(u, sys.dim())?;
    if sys.top_degree() < 2 {
        return Err(Error::NoNonlinearTerm);
    }
    let mut ev = Evaluator::new(sys);
    let parts = ev.function_free_parts(u)?;
    let lu = ev.factor(jac)?;
    function_free_update(&mut ev, u, &lu, &parts)
}
