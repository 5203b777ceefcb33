//! Principal matrix logarithm: real Schur form, repeated square roots of the
//! quasi-triangular factor until it is close to the identity, then a diagonal
//! Padé approximant of log(I + X) in Gauss–Legendre partial-fraction form.

use nalgebra::DMatrix;

use super::one_norm;
use crate::error::{Error, Result};

/// ‖T − I‖₁ must drop below this before the Padé approximant applies.
/// Well inside the degree-8 backward-error radius (θ₈ ≈ 0.367).
const SQRT_TARGET: f64 = 0.25;

/// Safety cap on square-root recursions; each one halves the log norm, so
/// hitting the cap means the iteration is not contracting.
const MAX_SQRTS: usize = 60;

/// Degree-8 Gauss–Legendre nodes and weights on [0, 1]:
/// log(I + X) ≈ Σ wᵢ · X · (I + tᵢX)⁻¹.
const GL_NODES: [f64; 8] = [
    1.985_507_175_123_188_4e-2,
    1.016_667_612_931_866_4e-1,
    2.372_337_950_418_355e-1,
    4.082_826_787_521_751e-1,
    5.917_173_212_478_249e-1,
    7.627_662_049_581_645e-1,
    8.983_332_387_068_134e-1,
    9.801_449_282_487_681e-1,
];
const GL_WEIGHTS: [f64; 8] = [
    5.061_426_814_518_813e-2,
    1.111_905_172_266_872_4e-1,
    1.568_533_229_389_436_3e-1,
    1.813_418_916_891_81e-1,
    1.813_418_916_891_81e-1,
    1.568_533_229_389_436_3e-1,
    1.111_905_172_266_872_4e-1,
    5.061_426_814_518_813e-2,
];

pub(super) fn logm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let schur = a.clone().schur();
    let (q, mut t) = schur.unpack();
    let mut q = q;
    standardize(&mut t, &mut q);

    // principal log exists only when no eigenvalue sits on (-inf, 0]:
    // 1x1 blocks are real eigenvalues, 2x2 blocks are complex pairs
    for (start, len) in blocks(&t) {
        if len == 1 && t[(start, start)] <= 0.0 {
            return if t[(start, start)] == 0.0 {
                Err(Error::SingularMatrix { det: 0.0 })
            } else {
                Err(Error::NonPrincipalLog)
            };
        }
    }

    let mut root = t;
    let mut sqrt_count = 0usize;
    let id = DMatrix::<f64>::identity(n, n);
    while one_norm(&(&root - &id)) > SQRT_TARGET {
        if sqrt_count >= MAX_SQRTS || root.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix logarithm square-root recursion".into(),
            });
        }
        root = sqrtm_quasi_upper(&root)?;
        sqrt_count += 1;
    }

    let x = &root - &id;
    let mut log_t = DMatrix::<f64>::zeros(n, n);
    for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        let denom = &id + &x * *node;
        let term = denom
            .lu()
            .solve(&x)
            .ok_or_else(|| Error::NonFinite {
                context: "matrix logarithm Pade solve".into(),
            })?;
        log_t += term * *weight;
    }
    log_t *= 2.0f64.powi(sqrt_count as i32);

    Ok(&q * log_t * q.transpose())
}

/// Block structure of a quasi-triangular matrix: (start, len) with len 1 or 2.
fn blocks(t: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            out.push((i, 2));
            i += 2;
        } else {
            out.push((i, 1));
            i += 1;
        }
    }
    out
}

/// Normalizes the Schur output: flushes negligible subdiagonals to zero and
/// splits 2x2 diagonal blocks whose eigenvalues are actually real, so that
/// every remaining 2x2 block is a genuine complex-conjugate pair.
fn standardize(t: &mut DMatrix<f64>, q: &mut DMatrix<f64>) {
    let n = t.nrows();
    let mut i = 0;
    while i + 1 < n {
        let sub = t[(i + 1, i)];
        if sub == 0.0 {
            i += 1;
            continue;
        }
        let scale = t[(i, i)].abs() + t[(i + 1, i + 1)].abs();
        if sub.abs() <= f64::EPSILON * scale {
            t[(i + 1, i)] = 0.0;
            i += 1;
            continue;
        }
        let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
        let disc = (a - d) * (a - d) + 4.0 * b * c;
        if disc < 0.0 {
            // complex pair: leave the block alone
            i += 2;
            continue;
        }
        // real eigenvalues: rotate so the block becomes upper triangular
        let lambda = (a + d) / 2.0 + ((a + d) / 2.0 - d).signum() * disc.sqrt() / 2.0;
        // eigenvector of [[a,b],[c,d]] for lambda: (lambda - d, c)
        let (vx, vy) = (lambda - d, c);
        let norm = vx.hypot(vy);
        let (cs, sn) = (vx / norm, vy / norm);
        // Givens G = [[cs, sn], [-sn, cs]]^T applied as T <- G^T T G, Q <- Q G
        for col in 0..n {
            let (x, y) = (t[(i, col)], t[(i + 1, col)]);
            t[(i, col)] = cs * x + sn * y;
            t[(i + 1, col)] = -sn * x + cs * y;
        }
        for row in 0..n {
            let (x, y) = (t[(row, i)], t[(row, i + 1)]);
            t[(row, i)] = cs * x + sn * y;
            t[(row, i + 1)] = -sn * x + cs * y;
        }
        for row in 0..n {
            let (x, y) = (q[(row, i)], q[(row, i + 1)]);
            q[(row, i)] = cs * x + sn * y;
            q[(row, i + 1)] = -sn * x + cs * y;
        }
        t[(i + 1, i)] = 0.0;
        i += 1;
    }
}

/// Principal square root of an upper quasi-triangular matrix by the block
/// recurrence of Higham (1987). Diagonal blocks get explicit square roots;
/// off-diagonal blocks solve small Sylvester equations.
fn sqrtm_quasi_upper(t: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = t.nrows();
    let blks = blocks(t);
    let m = blks.len();
    let mut s = DMatrix::<f64>::zeros(n, n);

    for &(start, len) in &blks {
        if len == 1 {
            let v = t[(start, start)];
            if v <= 0.0 {
                return Err(Error::NonPrincipalLog);
            }
            s[(start, start)] = v.sqrt();
        } else {
            let (a, b, c, d) = (
                t[(start, start)],
                t[(start, start + 1)],
                t[(start + 1, start)],
                t[(start + 1, start + 1)],
            );
            // eigenvalues theta ± i*mu with mu > 0
            let theta = (a + d) / 2.0;
            let mu = (-(a - d) * (a - d) - 4.0 * b * c).sqrt() / 2.0;
            let r = theta.hypot(mu);
            let alpha = ((r + theta) / 2.0).sqrt();
            let gamma = 1.0 / (2.0 * alpha);
            s[(start, start)] = alpha + gamma * (a - theta);
            s[(start, start + 1)] = gamma * b;
            s[(start + 1, start)] = gamma * c;
            s[(start + 1, start + 1)] = alpha + gamma * (d - theta);
        }
    }

    // off-diagonal blocks, one superdiagonal of blocks at a time
    for sep in 1..m {
        for bi in 0..m - sep {
            let bj = bi + sep;
            let (ri, pi) = blks[bi];
            let (rj, pj) = blks[bj];
            let mut rhs = t.view((ri, rj), (pi, pj)).into_owned();
            for bk in bi + 1..bj {
                let (rk, pk) = blks[bk];
                rhs -= s.view((ri, rk), (pi, pk)) * s.view((rk, rj), (pk, pj));
            }
            let sii = s.view((ri, ri), (pi, pi)).into_owned();
            let sjj = s.view((rj, rj), (pj, pj)).into_owned();
            let x = solve_sylvester(&sii, &sjj, &rhs)?;
            s.view_mut((ri, rj), (pi, pj)).copy_from(&x);
        }
    }

    Ok(s)
}

/// Solves A·X + X·B = C for blocks no larger than 2x2 via the Kronecker
/// system (I ⊗ A + Bᵀ ⊗ I)·vec(X) = vec(C).
fn solve_sylvester(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = a.nrows();
    let q = b.nrows();
    let mut k = DMatrix::<f64>::zeros(p * q, p * q);
    // column-major vec: entry (i, j) of X sits at index j*p + i
    for j in 0..q {
        for i in 0..p {
            let row = j * p + i;
            for ii in 0..p {
                k[(row, j * p + ii)] += a[(i, ii)];
            }
            for jj in 0..q {
                k[(row, jj * p + i)] += b[(jj, j)];
            }
        }
    }
    let mut rhs = nalgebra::DVector::<f64>::zeros(p * q);
    for j in 0..q {
        for i in 0..p {
            rhs[j * p + i] = c[(i, j)];
        }
    }
    let sol = k.lu().solve(&rhs).ok_or_else(|| Error::NonFinite {
        context: "Sylvester solve in matrix square root".into(),
    })?;
    let mut x = DMatrix::<f64>::zeros(p, q);
    for j in 0..q {
        for i in 0..p {
            x[(i, j)] = sol[j * p + i];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sqrt_of_quasi_triangular_squares_back() {
        // 2x2 complex-pair block stacked over a real eigenvalue
        let t = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, -0.8, 1.0, 1.5, 0.0, 0.0, 4.0]);
        let s = sqrtm_quasi_upper(&t).unwrap();
        assert_relative_eq!(&s * &s, t, epsilon = 1e-12);
    }

    #[test]
    fn logm_handles_spiral_with_many_square_roots() {
        // strong scaling forces several inverse-scaling steps
        let a = DMatrix::from_row_slice(2, 2, &[30.0, -4.0, 4.0, 30.0]);
        let l = logm(&a).unwrap();
        let back = super::super::expm::expm(&l);
        assert_relative_eq!(back, a, max_relative = 1e-11);
    }
}
