//! Thin wrappers around the dense self-adjoint eigensolver.

use faer::c64;
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &faer::Mat<f64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| CoreError::Eigensolver(format!("{e:?}")))
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &faer::Mat<c64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| CoreError::Eigensolver(format!("{e:?}")))
}

/// Eigenvalues of a dense Hermitian matrix given as rows of `Complex64`,
/// ascending. Used by oracles that build small matrices directly.
pub fn hermitian_eigenvalues_from_rows(rows: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let n = rows.len();
    let m = faer::Mat::<c64>::from_fn(n, n, |i, j| c64::new(rows[i][j].re, rows[i][j].im));
    hermitian_eigenvalues(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_by_two_analytic() {
        let m = faer::mat![[0.5, 0.25], [0.25, 0.5]];
        let ev = symmetric_eigenvalues(&m).unwrap();
        assert_relative_eq!(ev[0], 0.25, epsilon = 1e-14);
        assert_relative_eq!(ev[1], 0.75, epsilon = 1e-14);
    }

    #[test]
    fn hermitian_with_complex_offdiagonal() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let m = faer::mat![
            [c64::new(1.0, 0.0), c64::new(0.0, 1.0)],
            [c64::new(0.0, -1.0), c64::new(1.0, 0.0)]
        ];
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert_relative_eq!(ev[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(ev[1], 2.0, epsilon = 1e-14);
    }
}
