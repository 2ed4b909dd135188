//! Dense complex linear algebra: matrix arithmetic, Hermitian
//! eigendecomposition and matrix exponentials.

mod eigen;
mod expm;
mod matrix;

pub use eigen::{hermitian_eig, EigenDecomposition, HERMITIAN_TOLERANCE, MAX_SWEEPS, OFF_DIAGONAL_TOLERANCE};
pub(crate) use eigen::check_hermitian;
pub use expm::{expm_hermitian, expm_oracle, TAYLOR_DEGREE};
pub use matrix::{partial_trace, ComplexMatrix, Subsystem};
