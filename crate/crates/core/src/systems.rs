//! Concrete systems: spin-½, a free particle on a periodic 1-D lattice, and
//! composite two-body systems on a tensor-product space.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{evolve_state, HamiltonianOperator};
use crate::ensembles::{DensityMatrix, OrthonormalBasis, PureState};
use crate::error::{domain, shape, Result};
use crate::linalg::{check_hermitian, ComplexMatrix};

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn sigma_y() -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::new(2, 2, vec![z, -i, i, z]).expect("2x2")
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliMatrices {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

pub fn pauli() -> PauliMatrices {
    PauliMatrices { x: sigma_x(), y: sigma_y(), z: sigma_z() }
}

/// Spin up, `(1, 0)`.
pub fn alpha() -> PureState {
    PureState::basis_state(2, 0).expect("in range")
}

/// Spin down, `(0, 1)`.
pub fn beta() -> PureState {
    PureState::basis_state(2, 1).expect("in range")
}

/// Two-level system with splitting `Δ` and an optional `σ_x` coupling `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinHalfSystem {
    delta: f64,
    omega: f64,
}

impl SpinHalfSystem {
    pub fn new(delta: f64, omega: f64) -> Result<Self> {
        if !delta.is_finite() || !omega.is_finite() {
            return Err(domain("spin-½ parameters must be finite"));
        }
        Ok(Self { delta, omega })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Closed-form `|<β|e^{-iHt}|α>|² = Ω²/(Δ²+Ω²)·sin²(√(Δ²+Ω²)·t/2)`.
    pub fn rabi_closed_form(&self, t: f64) -> f64 {
        let w2 = self.delta * self.delta + self.omega * self.omega;
        if w2 == 0.0 {
            return 0.0;
        }
        self.omega * self.omega / w2 * (w2.sqrt() * t / 2.0).sin().powi(2)
    }
}

/// `H = (Δ/2)σ_z + (Ω/2)σ_x`.
pub fn spin_hamiltonian(s: &SpinHalfSystem) -> HamiltonianOperator {
    let h = &sigma_z().scale_real(s.delta / 2.0) + &sigma_x().scale_real(s.omega / 2.0);
    HamiltonianOperator::new(h).expect("real symmetric")
}

/// Populations `(P_α, P_β)` at time `t` for a system prepared in `α`,
/// computed by exact propagation.
pub fn rabi_populations(s: &SpinHalfSystem, t: f64) -> Result<(f64, f64)> {
    let psi = evolve_state(&alpha(), &spin_hamiltonian(s), t)?;
    let p = psi.probabilities();
    Ok((p[0], p[1]))
}

/// Free particle of mass `m` on `n` sites of a periodic interval of length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeFreeParticle {
    sites: usize,
    length: f64,
    mass: f64,
}

impl LatticeFreeParticle {
    pub fn new(sites: usize, length: f64, mass: f64) -> Result<Self> {
        if sites < 2 {
            return Err(domain(format!("lattice needs at least 2 sites, got {sites}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(domain(format!("lattice length must be positive, got {length}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(domain(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { sites, length, mass })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Momentum quantum numbers `k ∈ {−⌊n/2⌋, …, ⌈n/2⌉−1}` in basis order.
    pub fn momentum_indices(&self) -> Vec<i64> {
        let n = self.sites as i64;
        (-(n / 2)..(n - n / 2)).collect()
    }

    /// `p_k = 2πk/L` in basis order.
    pub fn momenta(&self) -> Vec<f64> {
        self.momentum_indices()
            .into_iter()
            .map(|k| 2.0 * PI * k as f64 / self.length)
            .collect()
    }

    /// `x_s = sL/n`.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.sites).map(|s| s as f64 * self.length / self.sites as f64).collect()
    }

    /// `p_k²/2m` in basis order.
    pub fn kinetic_energies(&self) -> Vec<f64> {
        self.momenta().into_iter().map(|p| p * p / (2.0 * self.mass)).collect()
    }
}

/// Discrete plane waves `e^{i p_k x_s}/√n`.
pub fn lattice_momentum_basis(sys: &LatticeFreeParticle) -> OrthonormalBasis {
    let n = sys.sites;
    let norm = 1.0 / (n as f64).sqrt();
    let vectors = sys
        .momentum_indices()
        .into_iter()
        .map(|k| {
            // p_k x_s = 2πks/n; reduce ks mod n so the phase argument stays small
            let amps = (0..n as i64)
                .map(|s| {
                    let m = (k * s).rem_euclid(n as i64);
                    Complex64::from_polar(norm, 2.0 * PI * m as f64 / n as f64)
                })
                .collect();
            PureState::new(amps).expect("unit norm")
        })
        .collect();
    OrthonormalBasis::new(vectors).expect("discrete Fourier basis is orthonormal")
}

/// `H = p²/2m` in the site basis: `V·diag(p_k²/2m)·V†`.
pub fn lattice_hamiltonian(sys: &LatticeFreeParticle) -> HamiltonianOperator {
    let v = lattice_momentum_basis(sys).to_matrix();
    let d = ComplexMatrix::from_real_diag(&sys.kinetic_energies());
    let h = v.matmul(&d).and_then(|vd| vd.matmul(&v.adjoint())).expect("square");
    // remove roundoff asymmetry
    let h = &(&h + &h.adjoint()) * 0.5;
    HamiltonianOperator::new(h).expect("Hermitian by construction")
}

/// `ρ_A ⊗ ρ_B`.
pub fn compose_density(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new(rho_a.matrix().kron(rho_b.matrix()))
        .expect("tensor product of density matrices is a density matrix")
}

/// Two subsystems with their own Hamiltonians and an interaction on the product space.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeSystem {
    h1: HamiltonianOperator,
    h2: HamiltonianOperator,
    interaction: ComplexMatrix,
}

impl CompositeSystem {
    pub fn new(h1: HamiltonianOperator, h2: HamiltonianOperator, interaction: ComplexMatrix) -> Result<Self> {
        let dim = h1.dim() * h2.dim();
        if !interaction.is_square() || interaction.rows() != dim {
            return Err(shape(format!(
                "interaction must be {dim}x{dim} for subsystems of dimension {} and {}, got {}x{}",
                h1.dim(),
                h2.dim(),
                interaction.rows(),
                interaction.cols()
            )));
        }
        check_hermitian(&interaction, "interaction Hamiltonian")?;
        Ok(Self { h1, h2, interaction })
    }

    /// Two spins with `H₁ = H₂ = (Δ/2)σ_z` coupled by `g·σ_x⊗σ_x`.
    pub fn coupled_spins(delta: f64, g: f64) -> Result<Self> {
        let single = spin_hamiltonian(&SpinHalfSystem::new(delta, 0.0)?);
        Self::new(single.clone(), single, sigma_xx_coupling(g))
    }

    pub fn dim_a(&self) -> usize {
        self.h1.dim()
    }

    pub fn dim_b(&self) -> usize {
        self.h2.dim()
    }

    pub fn h1(&self) -> &HamiltonianOperator {
        &self.h1
    }

    pub fn h2(&self) -> &HamiltonianOperator {
        &self.h2
    }

    pub fn interaction(&self) -> &ComplexMatrix {
        &self.interaction
    }
}

/// `g·σ_x⊗σ_x`.
pub fn sigma_xx_coupling(g: f64) -> ComplexMatrix {
    sigma_x().kron(&sigma_x()).scale_real(g)
}

/// `H = H₁⊗𝟏 + 𝟏⊗H₂ + H_int`.
pub fn composite_hamiltonian(c: &CompositeSystem) -> HamiltonianOperator {
    let ia = ComplexMatrix::identity(c.dim_a());
    let ib = ComplexMatrix::identity(c.dim_b());
    let h = &(&c.h1.matrix().kron(&ib) + &ia.kron(c.h2.matrix())) + &c.interaction;
    HamiltonianOperator::new(h).expect("sum of Hermitian terms")
}
