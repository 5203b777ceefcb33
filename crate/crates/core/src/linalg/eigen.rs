//! Determinant-sign repair on the general linear group.
//!
//! A metric-learning iterate that drifts into GL⁻ is pulled back to GL⁺ by
//! flipping the sign of one real negative eigenvalue (the one of smallest
//! magnitude) in an explicit eigendecomposition, leaving the rest of the
//! spectrum untouched.

use nalgebra::{Complex, DMatrix, DVector};

use super::{check_nonsingular, SquareMatrix, DEFECTIVE_CONDITION_LIMIT};
use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex<f64>>;

/// Relative imaginary-part tolerance for treating an eigenvalue as real.
const REAL_EIGENVALUE_RTOL: f64 = 1e-8;

/// Returns `a` unchanged when `det a > 0`; otherwise flips the sign of the
/// real negative eigenvalue of smallest magnitude and reconstructs the
/// matrix from its eigendecomposition.
pub fn project_to_glplus(a: &SquareMatrix) -> Result<SquareMatrix> {
    let det = check_nonsingular(a.matrix())?;
    if det > 0.0 {
        return Ok(a.clone());
    }

    let (mut values, vectors) = eigen_decompose(a.matrix())?;

    let cond = condition_number(&vectors);
    if !cond.is_finite() || cond > DEFECTIVE_CONDITION_LIMIT {
        return Err(Error::DefectiveMatrix { cond });
    }

    let scale = values
        .iter()
        .map(|l| l.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let flip = values
        .iter()
        .enumerate()
        .filter(|(_, l)| l.im.abs() <= REAL_EIGENVALUE_RTOL * scale && l.re < 0.0)
        .min_by(|(_, x), (_, y)| x.norm().total_cmp(&y.norm()))
        .map(|(i, _)| i);
    let Some(flip) = flip else {
        // det < 0 guarantees an odd count of negative real eigenvalues; not
        // resolving one means the computed spectrum cannot be trusted
        return Err(Error::DefectiveMatrix { cond });
    };
    values[flip] = -values[flip];

    let mut scaled = vectors.clone();
    for (j, lambda) in values.iter().enumerate() {
        let mut col = scaled.column_mut(j);
        col *= *lambda;
    }
    // A' = V Λ V⁻¹, obtained transposed from Vᵀ X = (V Λ)ᵀ
    let recon = vectors
        .transpose()
        .lu()
        .solve(&scaled.transpose())
        .ok_or(Error::DefectiveMatrix { cond })?;
    let real = recon.transpose().map(|c| c.re);
    SquareMatrix::from_matrix(real)
}

/// Full complex eigendecomposition of a real matrix: eigenvalues plus an
/// eigenvector matrix, via complex Schur form and back-substitution.
pub(crate) fn eigen_decompose(a: &DMatrix<f64>) -> Result<(Vec<Complex<f64>>, CMatrix)> {
    let n = a.nrows();
    let ac: CMatrix = a.map(|x| Complex::new(x, 0.0));
    let (q, t) = ac.schur().unpack();

    let t_scale = t
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let smin = f64::EPSILON * t_scale;

    let values: Vec<Complex<f64>> = (0..n).map(|i| t[(i, i)]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for j in 0..n {
        let lambda = values[j];
        let mut w = DVector::<Complex<f64>>::zeros(n);
        w[j] = Complex::new(1.0, 0.0);
        for k in (0..j).rev() {
            let mut acc = Complex::new(0.0, 0.0);
            for m in k + 1..=j {
                acc += t[(k, m)] * w[m];
            }
            let mut den = lambda - t[(k, k)];
            if den.norm() < smin {
                // repeated eigenvalue: clamp the divisor, LAPACK-style
                den = Complex::new(smin, 0.0);
            }
            w[k] = acc / den;
        }
        let norm = w.norm();
        let col = &q * (w / Complex::new(norm, 0.0));
        vectors.set_column(j, &col);
    }
    Ok((values, vectors))
}

fn condition_number(v: &CMatrix) -> f64 {
    let svals = v.clone().svd(false, false).singular_values;
    let max = svals.iter().fold(0.0f64, |a, b| a.max(*b));
    let min = svals.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn positive_determinant_is_untouched() {
        let a = SquareMatrix::from_row_slice(2, &[2.0, 1.0, 0.0, 3.0]).unwrap();
        let p = project_to_glplus(&a).unwrap();
        assert_eq!(p.matrix(), a.matrix());
    }

    #[test]
    fn diagonal_flip() {
        let a = SquareMatrix::from_row_slice(2, &[-1.0, 0.0, 0.0, 1.0]).unwrap();
        let p = project_to_glplus(&a).unwrap();
        assert_relative_eq!(
            p.matrix(),
            SquareMatrix::identity(2).matrix(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn similarity_flip_matches_explicit_reconstruction() {
        // P diag(-0.5, 3) P^-1 must project to P diag(0.5, 3) P^-1
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -1.0, 1.5]);
        let p_inv = p.clone().try_inverse().unwrap();
        let a = &p * DMatrix::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 3.0]) * &p_inv;
        let expected = &p * DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 3.0]) * &p_inv;
        let proj = project_to_glplus(&SquareMatrix::from_matrix(a).unwrap()).unwrap();
        assert_relative_eq!(proj.matrix(), &expected, epsilon = 1e-10);
    }

    #[test]
    fn projection_is_idempotent() {
        let a = SquareMatrix::from_row_slice(3, &[
            -0.4, 1.0, 0.2, //
            0.3, 2.0, -1.0, //
            0.1, 0.0, 1.5,
        ])
        .unwrap();
        let once = project_to_glplus(&a).unwrap();
        assert!(once.determinant() > 0.0);
        let twice = project_to_glplus(&once).unwrap();
        assert_eq!(once.matrix(), twice.matrix());
    }

    #[test]
    fn flips_smallest_magnitude_negative_eigenvalue() {
        let a = SquareMatrix::from_row_slice(3, &[
            -2.0, 0.0, 0.0, //
            0.0, -0.5, 0.0, //
            0.0, 0.0, -1.0,
        ])
        .unwrap();
        // det = -1 < 0; the -0.5 eigenvalue is the one to flip
        let p = project_to_glplus(&a).unwrap();
        assert_relative_eq!(p.matrix()[(1, 1)], 0.5, epsilon = 1e-12);
        assert_relative_eq!(p.matrix()[(0, 0)], -2.0, epsilon = 1e-12);
        assert_relative_eq!(p.matrix()[(2, 2)], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_input_is_rejected() {
        let a = SquareMatrix::from_row_slice(2, &[1.0, 2.0, 0.5, 1.0]).unwrap();
        assert!(matches!(
            project_to_glplus(&a),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn defective_negative_matrix_is_rejected() {
        // Jordan block at -1 padded with a positive direction: det < 0 and
        // genuinely defective
        let a = SquareMatrix::from_row_slice(3, &[
            -1.0, 1.0, 0.0, //
            0.0, -1.0, 0.0, //
            0.0, 0.0, -2.0,
        ])
        .unwrap();
        assert!(matches!(
            project_to_glplus(&a),
            Err(Error::DefectiveMatrix { .. })
        ));
    }
}
