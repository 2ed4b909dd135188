//! Probability vectors, pure states, density matrices and orthonormal bases,
//! together with the Shannon and von Neumann entropies (in nats).

use num_complex::Complex64;

use crate::error::{domain, shape, Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};

/// Weights below zero but above `-PROBABILITY_CLAMP` are clamped to zero.
pub const PROBABILITY_CLAMP: f64 = 1e-12;
/// `|Σ P_j − 1|` accepted on input.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;
/// Density-matrix eigenvalues in `[-EIGENVALUE_CLAMP, 0)` count as zero.
pub const EIGENVALUE_CLAMP: f64 = 1e-10;
/// Absolute tolerance for Hermiticity, trace and orthonormality checks on states.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Classical weights `P_j`: nonnegative, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates without renormalizing. Tiny negatives (≥ −1e-12) are clamped to zero.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(shape("probability vector must be nonempty"));
        }
        let mut weights = weights;
        for (j, w) in weights.iter_mut().enumerate() {
            if !w.is_finite() {
                return Err(domain(format!("probability P[{j}] is not finite")));
            }
            if *w < -PROBABILITY_CLAMP {
                return Err(domain(format!("probability P[{j}] = {w} is negative")));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(domain(format!("probabilities must sum to 1 (sum ≠ 1: got {sum})")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        Self { weights: vec![1.0 / n as f64; n] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(shape("state vector must be nonempty"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(domain("state vector has non-finite amplitudes"));
        }
        let norm_sqr: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > STATE_TOLERANCE {
            return Err(domain(format!("state vector is not normalized: ‖Ψ‖² = {norm_sqr}")));
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_vec_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// `|index>` in the standard basis of dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(shape(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Componentwise `|Ψ_j|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// `|Ψ>⊗|Φ>`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        PureState { amplitudes: amps }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(shape(format!("density matrix must be square, got {}x{}", matrix.rows(), matrix.cols())));
        }
        let herm = matrix.hermiticity_residual();
        if herm > STATE_TOLERANCE {
            return Err(domain(format!("density matrix is not Hermitian: ‖ρ − ρ†‖_F = {herm:.3e}")));
        }
        let tr = matrix.trace()?;
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return Err(domain(format!("density matrix trace is {tr}, expected 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.eigenvalues()[0];
        if min < -EIGENVALUE_CLAMP {
            return Err(domain(format!("density matrix is not positive semidefinite: eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that the caller guarantees is a density matrix up to roundoff.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// `𝟏/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(&self.matrix)?.eigenvalues().to_vec())
    }

    /// Diagonal entries `<j|ρ|j>` in the standard basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(Complex64::norm_sqr).sum()
    }
}

/// Orthonormal set of pure states of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<PureState>,
}

/// Diagnostic residuals of a candidate basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisResiduals {
    /// `max_{j,k} |<Ψ_j|Ψ_k> − δ_jk|`.
    pub orthonormality: f64,
    /// `‖Σ_j |Ψ_j><Ψ_j| − 𝟏‖_F`, only when the set has as many vectors as the dimension.
    pub completeness: Option<f64>,
}

impl OrthonormalBasis {
    pub fn new(vectors: Vec<PureState>) -> Result<Self> {
        let dim = vectors.first().map(PureState::dim).ok_or_else(|| shape("basis must be nonempty"))?;
        if vectors.iter().any(|v| v.dim() != dim) {
            return Err(shape("basis vectors have unequal dimensions"));
        }
        if vectors.len() > dim {
            return Err(domain(format!("{} vectors cannot be orthonormal in dimension {dim}", vectors.len())));
        }
        let res = basis_residuals(&vectors);
        if res.orthonormality > STATE_TOLERANCE {
            return Err(domain(format!("basis is not orthonormal: residual {:.3e}", res.orthonormality)));
        }
        if let Some(c) = res.completeness {
            if c > STATE_TOLERANCE {
                return Err(domain(format!("basis is not complete: residual {c:.3e}")));
            }
        }
        Ok(Self { vectors })
    }

    pub fn standard(dim: usize) -> Self {
        Self { vectors: (0..dim).map(|k| PureState::basis_state(dim, k).expect("in range")).collect() }
    }

    /// Basis formed by the columns of a unitary matrix.
    pub fn from_columns(u: &ComplexMatrix) -> Result<Self> {
        let vectors = (0..u.cols()).map(|k| PureState::new(u.column(k))).collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn get(&self, j: usize) -> Option<&PureState> {
        self.vectors.get(j)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn is_complete(&self) -> bool {
        self.len() == self.dim()
    }

    pub fn residuals(&self) -> BasisResiduals {
        basis_residuals(&self.vectors)
    }

    /// Matrix with the basis vectors as columns.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let cols: Vec<Vec<Complex64>> = self.vectors.iter().map(|v| v.amplitudes().to_vec()).collect();
        ComplexMatrix::from_columns(&cols).expect("equal lengths")
    }
}

/// Orthonormality and completeness residuals of an arbitrary set of states.
///
/// Sets with mixed dimensions report an infinite orthonormality residual.
pub fn basis_residuals(vectors: &[PureState]) -> BasisResiduals {
    let Some(dim) = vectors.first().map(PureState::dim) else {
        return BasisResiduals { orthonormality: 0.0, completeness: None };
    };
    if vectors.iter().any(|v| v.dim() != dim) {
        return BasisResiduals { orthonormality: f64::INFINITY, completeness: None };
    }
    let mut ortho: f64 = 0.0;
    for (j, a) in vectors.iter().enumerate() {
        for (k, b) in vectors.iter().enumerate() {
            let delta = if j == k { 1.0 } else { 0.0 };
            ortho = ortho.max((a.inner(b) - delta).norm());
        }
    }
    let completeness = (vectors.len() == dim).then(|| {
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for v in vectors {
            sum = &sum + &ComplexMatrix::outer(v.amplitudes(), v.amplitudes());
        }
        sum.frobenius_distance(&ComplexMatrix::identity(dim))
    });
    BasisResiduals { orthonormality: ortho, completeness }
}

fn entropy_of(weights: &[f64]) -> f64 {
    let s: f64 = weights.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    s.max(0.0)
}

/// `S = −Σ P_j ln P_j` with `0·ln 0 = 0`.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    entropy_of(p.weights())
}

/// `S = −Σ λ ln λ` over the spectrum of `ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eigenvalues = rho.eigenvalues()?;
    let mut clamped = Vec::with_capacity(eigenvalues.len());
    for l in eigenvalues {
        if l < -EIGENVALUE_CLAMP {
            return Err(Error::Domain(format!("not a density matrix: eigenvalue {l:.3e} < 0")));
        }
        clamped.push(l.max(0.0));
    }
    Ok(entropy_of(&clamped))
}

/// `Ψ_j = √P_j · e^{iφ_j}`.
pub fn factor_pure(p: &ProbabilityVector, phases: &[f64]) -> Result<PureState> {
    if phases.len() != p.len() {
        return Err(shape(format!("{} phases for {} probabilities", phases.len(), p.len())));
    }
    let amps = p
        .weights()
        .iter()
        .zip(phases)
        .map(|(&w, &phi)| Complex64::from_polar(w.sqrt(), phi))
        .collect();
    Ok(PureState::from_vec_unchecked(amps))
}

/// `ρ = |Ψ><Ψ|`.
pub fn pure_density(psi: &PureState) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()))
}

/// `ρ = Σ_j P_j |Ψ_j><Ψ_j|`.
pub fn mixture_density(basis: &OrthonormalBasis, p: &ProbabilityVector) -> Result<DensityMatrix> {
    if basis.len() != p.len() {
        return Err(shape(format!("{} weights for a basis of {} vectors", p.len(), basis.len())));
    }
    let dim = basis.dim();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for (v, &w) in basis.vectors().iter().zip(p.weights()) {
        if w == 0.0 {
            continue;
        }
        rho = &rho + &ComplexMatrix::outer(v.amplitudes(), v.amplitudes()).scale_real(w);
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho))
}
