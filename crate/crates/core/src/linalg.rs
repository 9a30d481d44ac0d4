//! Small dense numeric helpers: complex column spans, numeric rank and
//! span-membership residuals, and eigenvalue tests for definiteness.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative singular-value cutoff used for numeric rank and span tests.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Eigenvalue threshold for positive definiteness.
pub const PD_THRESHOLD: f64 = 1e-10;

/// Numeric rank with a relative singular-value threshold.
pub fn numeric_rank(m: &DMatrix<Complex64>) -> usize {
    let svals = m.clone().svd(false, false).singular_values;
    let max = svals.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    svals.iter().filter(|&&s| s > RANK_REL_TOL * max).count()
}

/// Orthonormal basis for the numeric column space.
pub fn column_space_basis(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd with u");
    let svals = svd.singular_values;
    let max = svals.iter().cloned().fold(0.0f64, f64::max);
    let rank = if max == 0.0 {
        0
    } else {
        svals.iter().filter(|&&s| s > RANK_REL_TOL * max).count()
    };
    u.columns(0, rank).into_owned()
}

/// Distance of `w` from the column span of `basis` (an orthonormal basis),
/// normalized by `max(1, |w|)`.
pub fn span_distance(basis: &DMatrix<Complex64>, w: &DVector<Complex64>) -> f64 {
    if basis.ncols() == 0 {
        return w.norm() / w.norm().max(1.0);
    }
    let coeffs = basis.adjoint() * w;
    let proj = basis * coeffs;
    (w - proj).norm() / w.norm().max(1.0)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Max absolute entry of a complex matrix.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_of_dependent_columns() {
        // third column = 2*first + i*second
        let a = DMatrix::from_fn(4, 3, |r, k| match k {
            0 => c(r as f64 + 1.0, 0.5),
            1 => c(0.3 * r as f64, -1.0),
            _ => c(2.0, 0.0) * c(r as f64 + 1.0, 0.5) + c(0.0, 1.0) * c(0.3 * r as f64, -1.0),
        });
        assert_eq!(numeric_rank(&a), 2);
    }

    #[test]
    fn span_distance_detects_membership() {
        let f = DMatrix::from_column_slice(3, 2, &[
            c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0),
            c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0),
        ]);
        let basis = column_space_basis(&f);
        let inside = DVector::from_column_slice(&[c(2.0, 0.0), c(1.0, 2.0), c(1.0, 1.0)]);
        assert!(span_distance(&basis, &inside) < 1e-12);
        let outside = DVector::from_column_slice(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(span_distance(&basis, &outside) > 0.1);
    }

    #[test]
    fn eigenvalues_of_indefinite_pairing() {
        // 2x2 split form [[0,1],[1,0]] has eigenvalues -1, 1
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }
}
