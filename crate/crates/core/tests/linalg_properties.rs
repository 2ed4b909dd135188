use proptest::prelude::*;

use qentropy::linalg::{expm_hermitian, expm_oracle, hermitian_eig, partial_trace, ComplexMatrix, Subsystem};
use qentropy::random::{random_density, random_ginibre, random_hermitian, seeded_rng};
use qentropy::Complex64;

fn rel_close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), n in 1usize..=8) {
        let m = random_ginibre(&mut seeded_rng(seed), n);
        prop_assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn trace_is_cyclic(seed in any::<u64>(), n in 1usize..=16) {
        let mut rng = seeded_rng(seed);
        let a = random_ginibre(&mut rng, n);
        let b = random_ginibre(&mut rng, n);
        let ab = a.matmul(&b).unwrap().trace().unwrap();
        let ba = b.matmul(&a).unwrap().trace().unwrap();
        prop_assert!(rel_close(ab, ba, 1e-12), "{} vs {}", ab, ba);
    }

    #[test]
    fn trace_of_kron_factorizes(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=5) {
        let mut rng = seeded_rng(seed);
        let a = random_ginibre(&mut rng, n);
        let b = random_ginibre(&mut rng, m);
        let lhs = a.kron(&b).trace().unwrap();
        let rhs = a.trace().unwrap() * b.trace().unwrap();
        prop_assert!(rel_close(lhs, rhs, 1e-12));
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 2usize..=32) {
        let h = random_hermitian(&mut seeded_rng(seed), n);
        let eig = hermitian_eig(&h).unwrap();
        let norm = h.frobenius_norm();
        prop_assert!(eig.reconstruct().frobenius_distance(&h) <= 1e-10 * norm);
        prop_assert!(eig.eigenvectors().unitarity_residual() <= 1e-10 * n as f64);
        prop_assert!(eig.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn propagator_group_property(seed in any::<u64>(), n in 2usize..=8, t in -3.0f64..3.0, s in -3.0f64..3.0) {
        let h = random_hermitian(&mut seeded_rng(seed), n);
        let lhs = expm_hermitian(&h, t).unwrap().matmul(&expm_hermitian(&h, s).unwrap()).unwrap();
        prop_assert!(lhs.frobenius_distance(&expm_hermitian(&h, t + s).unwrap()) <= 1e-9);
    }

    #[test]
    fn exponential_routes_agree(seed in any::<u64>(), n in 2usize..=8, scale in 0.0f64..=10.0) {
        let h = random_hermitian(&mut seeded_rng(seed), n);
        let t = scale / h.frobenius_norm();
        let spectral = expm_hermitian(&h, t).unwrap();
        let taylor = expm_oracle(&h.scale(Complex64::new(0.0, -t))).unwrap();
        prop_assert!(spectral.frobenius_distance(&taylor) <= 1e-9);
    }

    #[test]
    fn partial_trace_keeps_trace(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4) {
        let rho = random_density(&mut seeded_rng(seed), da * db);
        let full = rho.matrix().trace().unwrap();
        for keep in [Subsystem::A, Subsystem::B] {
            let reduced = partial_trace(rho.matrix(), da, db, keep).unwrap();
            prop_assert!((reduced.trace().unwrap() - full).norm() <= 1e-12);
        }
    }
}

#[test]
fn frobenius_distance_of_identical_is_zero() {
    let m = ComplexMatrix::identity(3);
    assert_eq!(m.frobenius_distance(&m), 0.0);
}
