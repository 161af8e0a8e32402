use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::poly_system::{check_len, PolynomialSystem};

/// Central-difference Jacobian of `f` with one step `h` for every column.
pub fn finite_difference_jacobian(sys: &PolynomialSystem, u: &[f64], h: f64) -> Result<DenseMatrix> {
    fd_columns(sys, u, |_| h)
}

/// Central differences with the per-column step `max(1e−6, 1e−6·|u_j|)`.
pub fn finite_difference_jacobian_scaled(sys: &PolynomialSystem, u: &[f64]) -> Result<DenseMatrix> {
    fd_columns(sys, u, |uj| 1e-6_f64.max(1e-6 * uj.abs()))
}

fn fd_columns(sys: &PolynomialSystem, u: &[f64], step: impl Fn(f64) -> f64) -> Result<DenseMatrix> {
    let n = sys.dim();
    check_len(u, n)?;
    let mut jac = DenseMatrix::zeros(n, n);
    let mut probe = u.to_vec();
    for j in 0..n {
        let h = step(u[j]);
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "finite-difference step {h} must be positive"
            )));
        }
        probe[j] = u[j] + h;
        let plus = sys.residual(&probe)?;
        probe[j] = u[j] - h;
        let minus = sys.residual(&probe)?;
        probe[j] = u[j];
        // the realized spacing, not 2h, since u ± h is rounded
        let width = (u[j] + h) - (u[j] - h);
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / width;
        }
    }
    Ok(jac)
}

/// `max_ij |a_ij − b_ij| / max(1, |a_ij|)`.
pub fn max_relative_entry_error(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    debug_assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs() / x.abs().max(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_system::{RawTerm, TermEntry};

    #[test]
    fn scalar_square() {
        let sys = PolynomialSystem::build(
            1,
            &[],
            vec![RawTerm::new(2, vec![TermEntry::new(0, [0, 0], 1.0)])],
            vec![-4.0],
        )
        .unwrap();
        let fd = finite_difference_jacobian(&sys, &[3.0], 1e-6).unwrap();
        assert!((fd[(0, 0)] - 6.0).abs() <= 1e-6);
    }

    #[test]
    fn linear_system_recovers_matrix() {
        let sys =
            PolynomialSystem::build(2, &[(0, 0, 2.0), (0, 1, -3.0), (1, 0, 0.25)], vec![], vec![1.0, 1.0]).unwrap();
        for h in [1e-3, 1e-6, 0.5] {
            let fd = finite_difference_jacobian(&sys, &[0.3, -0.7], h).unwrap();
            assert!(max_relative_entry_error(&sys.linear_dense(), &fd) < 1e-9, "h = {h}");
        }
    }

    #[test]
    fn rejects_bad_step_and_length() {
        let sys = PolynomialSystem::build(1, &[(0, 0, 1.0)], vec![], vec![0.0]).unwrap();
        assert!(finite_difference_jacobian(&sys, &[1.0], 0.0).is_err());
        assert!(matches!(
            finite_difference_jacobian(&sys, &[1.0, 2.0], 1e-6),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
