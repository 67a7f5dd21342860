//! Spectra and von Neumann entropy, in bits.

use super::eigen::hermitian_eigen;
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Eigenvalues in `[-EIGEN_CLIP, 0)` are treated as numerical zero.
pub const EIGEN_CLIP: f64 = 1e-10;

/// Descending spectrum of a density matrix, clipped to `[0, 1]`.
pub fn hermitian_eigenvalues(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eigen(rho.matrix())?;
    let mut values = eig.values;
    values.reverse();
    if let Some(&min) = values.last() {
        if min < -EIGEN_CLIP {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: min });
        }
    }
    if let Some(&max) = values.first() {
        if max > 1.0 + EIGEN_CLIP {
            return Err(Error::OutOfRange {
                value: max,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok(values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// `-Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    s.max(0.0)
}

/// Entropy in bits, clamped to `[0, log₂ n]` against rounding.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let s = shannon_bits(hermitian_eigenvalues(rho)?);
    Ok(s.min((rho.dim() as f64).log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::matrix::CMatrix;
    use crate::quantum::state::StateVector;

    #[test]
    fn maximally_mixed_spectra() {
        let v = hermitian_eigenvalues(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| (x - 0.5).abs() < 1e-15));
        assert!(
            (von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-15
        );
        assert!(
            (von_neumann_entropy(&DensityMatrix::maximally_mixed(4)).unwrap() - 2.0).abs() < 1e-15
        );
    }

    #[test]
    fn pure_plus_spectrum() {
        let v = hermitian_eigenvalues(&StateVector::plus().to_density()).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && v[1].abs() < 1e-15);
        assert!(
            von_neumann_entropy(&StateVector::plus().to_density())
                .unwrap()
                .abs()
                < 1e-14
        );
    }

    #[test]
    fn diag_point_nine() {
        // independent scalar evaluation
        let expected = -(0.9f64 * 0.9f64.ln() + 0.1f64 * 0.1f64.ln()) / 2f64.ln();
        let rho = DensityMatrix::new(CMatrix::diag(&[0.9, 0.1])).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s - expected).abs() < 1e-14);
        assert!((s - 0.468_995_593_589_281).abs() < 1e-12);
    }

    #[test]
    fn clipping_window() {
        let tiny = DensityMatrix::from_matrix_unchecked(CMatrix::diag(&[1.0 + 5e-11, -5e-11]));
        let v = hermitian_eigenvalues(&tiny).unwrap();
        assert_eq!(v, vec![1.0, 0.0]);
        let bad = DensityMatrix::from_matrix_unchecked(CMatrix::diag(&[1.1, -0.1]));
        assert!(matches!(
            hermitian_eigenvalues(&bad),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        assert!(von_neumann_entropy(&bad).is_err());
    }

    #[test]
    fn shannon_convention() {
        assert_eq!(shannon_bits([1.0, 0.0]), 0.0);
        assert!((shannon_bits([0.25; 4]) - 2.0).abs() < 1e-15);
    }
}
