//! Scaling-and-squaring matrix exponential with diagonal Padé approximants.
//!
//! Order selection and θ thresholds follow Higham, "The Scaling and Squaring
//! Method for the Matrix Exponential Revisited" (SIAM J. Matrix Anal. 2005).

use nalgebra::DMatrix;

use super::one_norm;

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_230e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const PADE_9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

pub(super) fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = one_norm(a);
    let a2 = a * a;

    if norm <= THETA_3 {
        let (u, v) = pade_low(a, &a2, &PADE_3);
        return pade_solve(&u, &v);
    }
    let a4 = &a2 * &a2;
    if norm <= THETA_5 {
        let (u, v) = pade_low(a, &a2, &PADE_5);
        return pade_solve(&u, &v);
    }
    let a6 = &a4 * &a2;
    if norm <= THETA_7 {
        let (u, v) = pade_low(a, &a2, &PADE_7);
        return pade_solve(&u, &v);
    }
    if norm <= THETA_9 {
        let (u, v) = pade_low(a, &a2, &PADE_9);
        return pade_solve(&u, &v);
    }

    // scale so the degree-13 approximant applies, square back afterwards
    let squarings = ((norm / THETA_13).log2().ceil().max(0.0)) as u32;
    let scale = 0.5f64.powi(squarings as i32);
    let a_s = a * scale;
    let a2_s = &a2 * (scale * scale);
    let a4_s = &a4 * (scale * scale * scale * scale);
    let a6_s = &a4_s * &a2_s;

    let b = &PADE_13;
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let u_inner = &a6_s * (&a6_s * b[13] + &a4_s * b[11] + &a2_s * b[9])
        + &a6_s * b[7]
        + &a4_s * b[5]
        + &a2_s * b[3]
        + &id * b[1];
    let u = &a_s * u_inner;
    let v = &a6_s * (&a6_s * b[12] + &a4_s * b[10] + &a2_s * b[8])
        + &a6_s * b[6]
        + &a4_s * b[4]
        + &a2_s * b[2]
        + &id * b[0];

    let mut result = pade_solve(&u, &v);
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// U and V for the low-order approximants: powers of A² with even/odd
/// coefficient split, U picking up a final factor of A.
fn pade_low(a: &DMatrix<f64>, a2: &DMatrix<f64>, coeffs: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut u_sum = &id * coeffs[1];
    let mut v = &id * coeffs[0];
    let mut power = id;
    for k in 1..coeffs.len() / 2 {
        power = &power * a2;
        u_sum += &power * coeffs[2 * k + 1];
        v += &power * coeffs[2 * k];
    }
    (a * u_sum, v)
}

/// Solve (V − U)·X = (V + U), the Padé quotient.
fn pade_solve(u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let numer = v + u;
    let denom = v - u;
    denom
        .lu()
        .solve(&numer)
        .expect("Pade denominator is singular; input norm out of range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn large_norm_triggers_squaring() {
        // diag(10, -3): huge norm forces the scaling path
        let a = DMatrix::from_row_slice(2, 2, &[10.0, 0.0, 0.0, -3.0]);
        let e = expm(&a);
        assert_relative_eq!(e[(0, 0)], 10.0f64.exp(), max_relative = 1e-12);
        assert_relative_eq!(e[(1, 1)], (-3.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn nilpotent_exact() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&a);
        assert_relative_eq!(e[(0, 1)], 1.0, max_relative = 1e-15);
        assert_relative_eq!(e[(0, 0)], 1.0, max_relative = 1e-15);
    }
}
