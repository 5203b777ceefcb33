//! Dense real matrix functions for the Lie-group machinery: exponential,
//! principal logarithm, spectra, determinant-sign repair and geodesic
//! interpolation on GL⁺(n, ℝ).
//!
//! Decompositions (Schur, LU, SVD) come from nalgebra; the matrix functions
//! built on top of them live here.

mod eigen;
mod expm;
mod logm;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub use eigen::project_to_glplus;

/// Default Tikhonov knob for callers that want to escape a
/// [`Error::SingularMatrix`] by nudging the matrix off the singular set.
pub const DEFAULT_REGULARIZATION: f64 = 1e-8;

/// Relative determinant threshold below which a matrix is treated as singular.
pub const SINGULARITY_RTOL: f64 = 1e-12;

/// Condition-number guard for eigenvector-based reconstruction.
pub const DEFECTIVE_CONDITION_LIMIT: f64 = 1e10;

/// Dense real square matrix with finite entries.
///
/// Carrier for component transformations, their logs and all intermediates.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    inner: DMatrix<f64>,
}

impl SquareMatrix {
    /// Wraps a dense matrix, checking squareness and finiteness.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NonSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix entries".into(),
            });
        }
        Ok(Self { inner: m })
    }

    /// Builds a `dim`×`dim` matrix from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    /// Internal constructor for results already known to be square; entries
    /// are not re-validated.
    pub(crate) fn wrap(inner: DMatrix<f64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn determinant(&self) -> f64 {
        det_lu(&self.inner)
    }

    /// Returns `self + eps·I`, the standard escape hatch when an iterate
    /// drifts too close to the singular set.
    pub fn regularize(&self, eps: f64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += eps;
        }
        Self { inner: m }
    }

    /// Eigenvalues (with multiplicity) and determinant.
    pub fn spectrum(&self) -> Spectrum {
        Spectrum {
            eigenvalues: self
                .inner
                .clone()
                .complex_eigenvalues()
                .iter()
                .copied()
                .collect(),
            determinant: self.determinant(),
        }
    }

    /// Inverse via LU; fails with [`Error::SingularMatrix`] below the
    /// determinant threshold.
    pub fn try_inverse(&self) -> Result<Self> {
        check_nonsingular(&self.inner)?;
        self.inner
            .clone()
            .try_inverse()
            .map(Self::wrap)
            .ok_or(Error::SingularMatrix { det: 0.0 })
    }
}

/// Eigenvalue multiset of a real matrix together with its determinant.
///
/// Complex eigenvalues occur in conjugate pairs; their product equals the
/// determinant, which is what the GL⁺ membership logic keys on.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex<f64>>,
    pub determinant: f64,
}

impl Spectrum {
    /// Count of eigenvalues that are real and negative at tolerance `rtol`
    /// relative to the spectral scale.
    pub fn negative_real_count(&self, rtol: f64) -> usize {
        let scale = self
            .eigenvalues
            .iter()
            .map(|l| l.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        self.eigenvalues
            .iter()
            .filter(|l| l.im.abs() <= rtol * scale && l.re < 0.0)
            .count()
    }
}

/// Matrix exponential by scaling-and-squaring with diagonal Padé
/// approximants (degree 13 at the top of the ladder).
///
/// Total for finite input; the result always has positive determinant
/// (`det(exp A) = exp(tr A)`).
pub fn mat_exp(a: &SquareMatrix) -> SquareMatrix {
    SquareMatrix::wrap(expm::expm(&a.inner))
}

/// Principal matrix logarithm via real Schur decomposition followed by
/// inverse scaling-and-squaring with a Padé approximant.
///
/// Defined when no eigenvalue lies on the closed negative real axis;
/// inverse of [`mat_exp`] on that domain.
pub fn mat_log(a: &SquareMatrix) -> Result<SquareMatrix> {
    check_nonsingular(&a.inner)?;
    logm::logm(&a.inner).map(SquareMatrix::wrap)
}

/// Geodesic interpolation `f(a, b, t) = exp(t·log(b·a⁻¹))·a`: the
/// constant-speed path in the matrix group from `a` (t = 0) to `b` (t = 1).
pub fn geodesic_interp(a: &SquareMatrix, b: &SquareMatrix, t: f64) -> Result<SquareMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter(
            "interpolation parameter t must be finite".into(),
        ));
    }
    let a_inv = a.try_inverse()?;
    let d = SquareMatrix::wrap(&b.inner * &a_inv.inner);
    let x = mat_log(&d)?;
    let step = SquareMatrix::wrap(x.inner * t);
    Ok(SquareMatrix::wrap(mat_exp(&step).inner * &a.inner))
}

/// Determinant via LU with partial pivoting.
pub(crate) fn det_lu(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// Singularity gate: `|det| ≤ SINGULARITY_RTOL · (max-norm)^dim`.
pub(crate) fn check_nonsingular(m: &DMatrix<f64>) -> Result<f64> {
    let det = det_lu(m);
    let max_norm = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let threshold = SINGULARITY_RTOL * max_norm.powi(m.nrows() as i32);
    if det.abs() <= threshold {
        return Err(Error::SingularMatrix { det });
    }
    Ok(det)
}

pub(crate) fn one_norm(m: &DMatrix<f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|x| x.abs()).sum();
        best = best.max(s);
    }
    best
}
