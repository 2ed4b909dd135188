//! Unitary time evolution generated by a time-independent Hamiltonian
//! (`ħ = 1`), in both the Schrödinger and Heisenberg pictures, plus exact
//! and first-order transition probabilities.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::ensembles::{DensityMatrix, OrthonormalBasis, PureState};
use crate::error::{domain, shape, Error, Result};
use crate::linalg::{check_hermitian, hermitian_eig, ComplexMatrix, EigenDecomposition};

/// Imaginary parts of expectation values up to `1e-10·max(1, ‖x‖_F)` are discarded.
pub const EXPECTATION_IMAG_TOLERANCE: f64 = 1e-10;

/// Hermitian generator of time translations.
///
/// The spectral decomposition is computed once, on first use, and shared by
/// every propagator built from this operator.
#[derive(Debug, Clone)]
pub struct HamiltonianOperator {
    matrix: ComplexMatrix,
    spectrum: OnceLock<EigenDecomposition>,
}

impl HamiltonianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_hermitian(&matrix, "Hamiltonian")?;
        Ok(Self { matrix, spectrum: OnceLock::new() })
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(dim, dim), spectrum: OnceLock::new() }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn spectrum(&self) -> Result<&EigenDecomposition> {
        if let Some(eig) = self.spectrum.get() {
            return Ok(eig);
        }
        let eig = hermitian_eig(&self.matrix)?;
        Ok(self.spectrum.get_or_init(|| eig))
    }

    /// Energy levels in ascending order.
    pub fn energies(&self) -> Result<&[f64]> {
        Ok(self.spectrum()?.eigenvalues())
    }

    /// Eigenbasis ordered by ascending energy.
    pub fn eigenbasis(&self) -> Result<OrthonormalBasis> {
        OrthonormalBasis::from_columns(self.spectrum()?.eigenvectors())
    }
}

impl PartialEq for HamiltonianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

/// Unitary `U(t) = e^{-iHt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    matrix: ComplexMatrix,
    time: f64,
}

impl Propagator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        let amps = self.matrix.apply(psi.amplitudes())?;
        Ok(PureState::from_vec_unchecked(amps))
    }

    /// `UρU†`.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let m = self.matrix.matmul(rho.matrix())?.matmul(&self.matrix.adjoint())?;
        Ok(DensityMatrix::from_matrix_unchecked(m))
    }

    /// `U†xU`.
    pub fn conjugate_observable(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.matrix.adjoint().matmul(x)?.matmul(&self.matrix)
    }
}

pub fn propagator(h: &HamiltonianOperator, t: f64) -> Result<Propagator> {
    let n = h.dim();
    let eig = h.spectrum()?;
    let matrix = if t == 0.0 {
        ComplexMatrix::identity(n)
    } else {
        eig.spectral_map(|l| Complex64::from_polar(1.0, -l * t))
    };
    Ok(Propagator { matrix, time: t })
}

fn check_dims(what: &str, got: usize, h: &HamiltonianOperator) -> Result<()> {
    if got != h.dim() {
        return Err(shape(format!("{what} has dimension {got}, Hamiltonian has dimension {}", h.dim())));
    }
    Ok(())
}

/// `Ψ(t) = U(t)Ψ(0)`.
pub fn evolve_state(psi: &PureState, h: &HamiltonianOperator, t: f64) -> Result<PureState> {
    check_dims("state", psi.dim(), h)?;
    propagator(h, t)?.apply(psi)
}

/// `ρ(t) = U(t)ρ(0)U(t)†`.
pub fn evolve_density(rho: &DensityMatrix, h: &HamiltonianOperator, t: f64) -> Result<DensityMatrix> {
    check_dims("density matrix", rho.dim(), h)?;
    propagator(h, t)?.conjugate(rho)
}

/// Heisenberg-picture observable `x(t) = U†x(0)U`.
pub fn heisenberg_observable(x0: &ComplexMatrix, h: &HamiltonianOperator, t: f64) -> Result<ComplexMatrix> {
    check_hermitian(x0, "observable")?;
    check_dims("observable", x0.rows(), h)?;
    propagator(h, t)?.conjugate_observable(x0)
}

/// `tr(xρ)`. Errors if the imaginary part exceeds roundoff, which means `x`
/// was not Hermitian.
pub fn expectation(x: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    if !x.is_square() || x.rows() != rho.dim() {
        return Err(shape(format!(
            "observable is {}x{}, density matrix has dimension {}",
            x.rows(),
            x.cols(),
            rho.dim()
        )));
    }
    let r = rho.matrix();
    let n = x.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += x[(i, k)] * r[(k, i)];
        }
    }
    let tol = EXPECTATION_IMAG_TOLERANCE * x.frobenius_norm().max(1.0);
    if acc.im.abs() > tol {
        return Err(Error::Numerical(format!(
            "expectation value has imaginary part {:.3e} (observable not Hermitian?)",
            acc.im
        )));
    }
    Ok(acc.re)
}

/// The same expectation value computed in both pictures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PictureComparison {
    /// `tr{x(0)·ρ(t)}`
    pub schrodinger: f64,
    /// `tr{x(t)·ρ(0)}`
    pub heisenberg: f64,
}

impl PictureComparison {
    /// `|a − b| / max(|a|, 1)`.
    pub fn relative_discrepancy(&self) -> f64 {
        (self.schrodinger - self.heisenberg).abs() / self.schrodinger.abs().max(1.0)
    }
}

pub fn picture_equivalence(
    x0: &ComplexMatrix,
    rho0: &DensityMatrix,
    h: &HamiltonianOperator,
    t: f64,
) -> Result<PictureComparison> {
    check_hermitian(x0, "observable")?;
    check_dims("observable", x0.rows(), h)?;
    check_dims("density matrix", rho0.dim(), h)?;
    let u = propagator(h, t)?;
    let schrodinger = expectation(x0, &u.conjugate(rho0)?)?;
    let heisenberg = expectation(&u.conjugate_observable(x0)?, rho0)?;
    Ok(PictureComparison { schrodinger, heisenberg })
}

/// Right-hand side of the Heisenberg equation of motion, `i[H, x]`.
pub fn heisenberg_rhs(x: &ComplexMatrix, h: &HamiltonianOperator) -> Result<ComplexMatrix> {
    check_dims("observable", x.rows(), h)?;
    if !x.is_square() {
        return Err(shape("observable must be square"));
    }
    Ok(h.matrix().commutator(x)?.scale(Complex64::new(0.0, 1.0)))
}

fn basis_pair<'a>(
    basis: &'a OrthonormalBasis,
    j: usize,
    k: usize,
    h: &HamiltonianOperator,
) -> Result<(&'a PureState, &'a PureState)> {
    check_dims("basis", basis.dim(), h)?;
    let get = |i: usize| {
        basis
            .get(i)
            .ok_or_else(|| shape(format!("basis index {i} out of range (basis has {} vectors)", basis.len())))
    };
    Ok((get(j)?, get(k)?))
}

/// `|<Ψ_k|e^{-iH't}|Ψ_j>|²`.
pub fn transition_probability_exact(
    basis: &OrthonormalBasis,
    j: usize,
    k: usize,
    h_prime: &HamiltonianOperator,
    t: f64,
) -> Result<f64> {
    let (from, to) = basis_pair(basis, j, k, h_prime)?;
    let evolved = propagator(h_prime, t)?.apply(from)?;
    Ok(to.inner(&evolved).norm_sqr().min(1.0))
}

/// Leading small-`t` behaviour `t²|<Ψ_k|H'|Ψ_j>|²`, for `k ≠ j`.
pub fn transition_probability_first_order(
    basis: &OrthonormalBasis,
    j: usize,
    k: usize,
    h_prime: &HamiltonianOperator,
    t: f64,
) -> Result<f64> {
    if j == k {
        return Err(domain("first-order transition probability needs distinct states (j ≠ k)"));
    }
    let (from, to) = basis_pair(basis, j, k, h_prime)?;
    let h_from = PureState::from_vec_unchecked(h_prime.matrix().apply(from.amplitudes())?);
    Ok(t * t * to.inner(&h_from).norm_sqr())
}
