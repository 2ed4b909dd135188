//! Seeded random matrices and states for property checks.
//!
//! Generator: ChaCha8 seeded from a single `u64` through `seed_from_u64`, so
//! streams are identical across platforms. Gaussian draws use
//! `rand_distr::StandardNormal`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ensembles::{DensityMatrix, ProbabilityVector, PureState};
use crate::linalg::ComplexMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// `n×n` matrix with independent standard-normal real and imaginary parts.
pub fn random_ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| Complex64::new(normal(rng), normal(rng))).collect();
    ComplexMatrix::new(n, n, data).expect("finite gaussian entries")
}

/// GUE-style Hermitian matrix `(A + A†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_ginibre(rng, n);
    &(&a + &a.adjoint()) * 0.5
}

/// Real symmetric matrix `(A + Aᵀ)/2` with standard-normal `A`.
pub fn random_real_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data: Vec<f64> = (0..n * n).map(|_| normal(rng)).collect();
    let a = ComplexMatrix::from_real(n, n, &data).expect("finite gaussian entries");
    &(&a + &a.adjoint()) * 0.5
}

/// Haar-distributed pure state (normalized complex Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PureState {
    let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(normal(rng), normal(rng))).collect();
    let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    PureState::new(v.into_iter().map(|z| z / norm).collect()).expect("normalized")
}

/// Full-rank density matrix `GG†/tr(GG†)` from a Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let g = random_ginibre(rng, n);
    let w = g.matmul(&g.adjoint()).expect("square");
    let tr = w.trace().expect("square").re;
    let mut rho = w.scale_real(1.0 / tr);
    // exact Hermitian symmetry before validation
    rho = &(&rho + &rho.adjoint()) * 0.5;
    DensityMatrix::new(rho).expect("Ginibre ensemble is positive definite")
}

/// Uniform draw from `[0, 1)`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

/// Uniformly random point on the probability simplex.
pub fn random_probability_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbabilityVector {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    ProbabilityVector::new(e.into_iter().map(|x| x / total).collect()).expect("normalized")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = random_hermitian(&mut seeded_rng(42), 5);
        let b = random_hermitian(&mut seeded_rng(42), 5);
        assert_eq!(a, b);
        assert_ne!(a, random_hermitian(&mut seeded_rng(43), 5));
    }

    #[test]
    fn constructions_are_valid() {
        let mut rng = seeded_rng(0);
        assert_eq!(random_hermitian(&mut rng, 6).hermiticity_residual(), 0.0);
        let s = random_real_symmetric(&mut rng, 6);
        assert!(s.as_slice().iter().all(|z| z.im == 0.0));
        let rho = random_density(&mut rng, 6);
        assert!((rho.matrix().trace().unwrap().re - 1.0).abs() < 1e-12);
        let p = random_probability_vector(&mut rng, 6);
        assert!((p.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
