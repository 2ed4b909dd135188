use proptest::prelude::*;

use qentropy::dynamics::{
    evolve_density, expectation, heisenberg_observable, heisenberg_rhs, picture_equivalence,
    transition_probability_exact, HamiltonianOperator,
};
use qentropy::ensembles::{
    factor_pure, mixture_density, pure_density, shannon_entropy, von_neumann_entropy, DensityMatrix,
    OrthonormalBasis, ProbabilityVector,
};
use qentropy::linalg::{hermitian_eig, partial_trace, ComplexMatrix, Subsystem};
use qentropy::random::{
    random_density, random_hermitian, random_probability_vector, random_pure_state, seeded_rng,
};
use qentropy::systems::{
    alpha, compose_density, composite_hamiltonian, lattice_hamiltonian, lattice_momentum_basis,
    rabi_populations, CompositeSystem, LatticeFreeParticle, SpinHalfSystem,
};

fn random_basis(seed: u64, n: usize) -> OrthonormalBasis {
    let h = random_hermitian(&mut seeded_rng(seed), n);
    OrthonormalBasis::from_columns(hermitian_eig(&h).unwrap().eigenvectors()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn shannon_bounds(seed in any::<u64>(), n in 1usize..=16) {
        let p = random_probability_vector(&mut seeded_rng(seed), n);
        let s = shannon_entropy(&p);
        prop_assert!(s >= 0.0);
        prop_assert!(s <= (n as f64).ln() + 1e-12);
        let u = shannon_entropy(&ProbabilityVector::uniform(n));
        prop_assert!((u - (n as f64).ln()).abs() <= 1e-12);
    }

    #[test]
    fn factor_pure_recovers_probabilities(seed in any::<u64>(), n in 1usize..=12, phase in -10.0f64..10.0) {
        let p = random_probability_vector(&mut seeded_rng(seed), n);
        let phases: Vec<f64> = (0..n).map(|j| phase * (j as f64 + 0.5)).collect();
        let psi = factor_pure(&p, &phases).unwrap();
        for (q, w) in psi.probabilities().iter().zip(p.weights()) {
            prop_assert!((q - w).abs() <= 1e-12);
        }
    }

    #[test]
    fn mixture_entropy_is_basis_independent(seed in any::<u64>(), n in 2usize..=10) {
        let p = random_probability_vector(&mut seeded_rng(seed ^ 0x5555), n);
        let rho = mixture_density(&random_basis(seed, n), &p).unwrap();
        prop_assert!((von_neumann_entropy(&rho).unwrap() - shannon_entropy(&p)).abs() <= 1e-9);
    }

    #[test]
    fn pure_density_has_rank_one(seed in any::<u64>(), n in 2usize..=12) {
        let rho = pure_density(&random_pure_state(&mut seeded_rng(seed), n));
        let eig = rho.eigenvalues().unwrap();
        prop_assert!((eig[n - 1] - 1.0).abs() <= 1e-10);
        prop_assert!(eig[..n - 1].iter().all(|l| l.abs() <= 1e-10));
    }

    #[test]
    fn entropy_is_additive(seed in any::<u64>(), na in 1usize..=4, nb in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let a = random_density(&mut rng, na);
        let b = random_density(&mut rng, nb);
        let joint = von_neumann_entropy(&compose_density(&a, &b)).unwrap();
        let sum = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
        prop_assert!((joint - sum).abs() <= 1e-9);
    }

    #[test]
    fn evolution_preserves_state_invariants(seed in any::<u64>(), n in 2usize..=16, t in 0.0f64..10.0) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(&mut rng, n);
        let h = HamiltonianOperator::new(random_hermitian(&mut rng, n)).unwrap();
        let out = evolve_density(&rho, &h, t).unwrap();
        let m = out.matrix();
        prop_assert!((m.trace().unwrap().re - 1.0).abs() <= 1e-10);
        prop_assert!(m.hermiticity_residual() <= 1e-10);
        prop_assert!(out.eigenvalues().unwrap()[0] >= -1e-9);
        let ds = von_neumann_entropy(&out).unwrap() - von_neumann_entropy(&rho).unwrap();
        prop_assert!(ds.abs() <= 1e-9);
    }

    #[test]
    fn heisenberg_preserves_spectrum(seed in any::<u64>(), n in 2usize..=10, t in -5.0f64..5.0) {
        let mut rng = seeded_rng(seed);
        let h = HamiltonianOperator::new(random_hermitian(&mut rng, n)).unwrap();
        let x0 = random_hermitian(&mut rng, n);
        let xt = heisenberg_observable(&x0, &h, t).unwrap();
        let before = hermitian_eig(&x0).unwrap();
        let after = hermitian_eig(&xt).unwrap();
        for (a, b) in before.eigenvalues().iter().zip(after.eigenvalues()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn pictures_agree(seed in any::<u64>(), n in 2usize..=10, t in 0.0f64..10.0) {
        let mut rng = seeded_rng(seed);
        let h = HamiltonianOperator::new(random_hermitian(&mut rng, n)).unwrap();
        let x = random_hermitian(&mut rng, n);
        let rho = random_density(&mut rng, n);
        prop_assert!(picture_equivalence(&x, &rho, &h, t).unwrap().relative_discrepancy() <= 1e-9);
    }

    #[test]
    fn transitions_sum_to_one(seed in any::<u64>(), n in 2usize..=8, j in 0usize..8, t in 0.0f64..10.0) {
        let j = j % n;
        let h = HamiltonianOperator::new(random_hermitian(&mut seeded_rng(seed), n)).unwrap();
        let basis = random_basis(seed.wrapping_add(1), n);
        let total: f64 = (0..n).map(|k| transition_probability_exact(&basis, j, k, &h, t).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn rabi_populations_sum_to_one(delta in -5.0f64..5.0, omega in -5.0f64..5.0, t in 0.0f64..20.0) {
        let (a, b) = rabi_populations(&SpinHalfSystem::new(delta, omega).unwrap(), t).unwrap();
        prop_assert!((a + b - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn isolated_subsystems_stay_isolated(seed in any::<u64>(), t in 0.0f64..10.0) {
        let mut rng = seeded_rng(seed);
        let h1 = HamiltonianOperator::new(random_hermitian(&mut rng, 2)).unwrap();
        let h2 = HamiltonianOperator::new(random_hermitian(&mut rng, 3)).unwrap();
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 3);
        let c = CompositeSystem::new(h1.clone(), h2.clone(), ComplexMatrix::zeros(6, 6)).unwrap();
        let joint = evolve_density(&compose_density(&a, &b), &composite_hamiltonian(&c), t).unwrap();
        let factored = evolve_density(&a, &h1, t).unwrap().matrix().kron(evolve_density(&b, &h2, t).unwrap().matrix());
        prop_assert!(joint.matrix().frobenius_distance(&factored) <= 1e-9);
    }
}

#[test]
fn central_difference_converges_quadratically() {
    let mut rng = seeded_rng(77);
    let n = 4;
    let h = HamiltonianOperator::new(random_hermitian(&mut rng, n)).unwrap();
    let x = random_hermitian(&mut rng, n);
    let rho = random_density(&mut rng, n);
    let t = 0.9;
    let mean = |s: f64| expectation(&heisenberg_observable(&x, &h, s).unwrap(), &rho).unwrap();
    let exact = expectation(&heisenberg_rhs(&heisenberg_observable(&x, &h, t).unwrap(), &h).unwrap(), &rho).unwrap();
    let err = |d: f64| ((mean(t + d) - mean(t - d)) / (2.0 * d) - exact).abs();
    let ratio = err(1e-3) / err(5e-4);
    assert!((ratio - 4.0).abs() <= 0.8, "ratio {ratio}");
}

#[test]
fn momentum_basis_identities_up_to_64_sites() {
    for n in 2..=64 {
        let sys = LatticeFreeParticle::new(n, 1.0 + n as f64 / 7.0, 0.8).unwrap();
        let r = lattice_momentum_basis(&sys).residuals();
        assert!(r.orthonormality <= 1e-12, "n={n}: {}", r.orthonormality);
        assert!(r.completeness.unwrap() <= 1e-12, "n={n}");
    }
}

#[test]
fn lattice_hamiltonian_commutes_with_momentum_projectors() {
    for n in [2, 3, 8, 13] {
        let sys = LatticeFreeParticle::new(n, 2.5, 1.3).unwrap();
        let h = lattice_hamiltonian(&sys);
        for v in lattice_momentum_basis(&sys).vectors() {
            let proj = ComplexMatrix::outer(v.amplitudes(), v.amplitudes());
            assert!(h.matrix().commutator(&proj).unwrap().frobenius_norm() <= 1e-10);
        }
    }
}

#[test]
fn coupled_spins_entangle_while_global_entropy_stays_zero() {
    let c = CompositeSystem::coupled_spins(1.0, 0.3).unwrap();
    let h = composite_hamiltonian(&c);
    let rho0 = pure_density(&alpha().tensor(&alpha()));
    let mut max_sub: f64 = 0.0;
    for i in 0..1000 {
        let t = 20.0 * i as f64 / 999.0;
        let rho = evolve_density(&rho0, &h, t).unwrap();
        assert!(von_neumann_entropy(&rho).unwrap() <= 1e-9);
        let reduced = DensityMatrix::new(partial_trace(rho.matrix(), 2, 2, Subsystem::A).unwrap()).unwrap();
        max_sub = max_sub.max(von_neumann_entropy(&reduced).unwrap());
    }
    // brute-force (scipy) reference maximum on the same grid: 0.28500
    assert!((max_sub - 0.285).abs() < 1e-3, "{max_sub}");
}
