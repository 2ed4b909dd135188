use num_complex::Complex64;

use crate::error::{shape, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};

/// Taylor degree used by [`expm_oracle`].
pub const TAYLOR_DEGREE: u32 = 12;

/// `e^{-iHt}` through the spectral decomposition of `h`.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(h.rows()));
    }
    Ok(eig.spectral_map(|l| Complex64::from_polar(1.0, -l * t)))
}

/// `e^{A}` for a general square matrix by scaling and squaring:
/// scale by `2^-s` until `‖A‖_F/2^s ≤ 1/2`, sum the Taylor series to degree 12,
/// then square `s` times.
///
/// Shares no code path with [`expm_hermitian`] beyond matrix multiplication.
pub fn expm_oracle(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(shape(format!("exponential of non-square {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let x = a.scale_real(2f64.powi(-(squarings as i32)));

    // Horner: I + X(I + X/2(I + X/3(… (I + X/12))))
    let id = ComplexMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = &id + &x.matmul(&acc)?.scale_real(1.0 / f64::from(k));
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc)?;
    }
    Ok(acc)
}
