//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then annihilates the now-real pivot with a real Givens rotation.
//! Sweeps visit pivots in row-major order `(0,1), (0,2), …, (n-2,n-1)`, so the
//! result is a deterministic function of the input.

use num_complex::Complex64;

use crate::error::{domain, shape, Error, Result};
use crate::linalg::ComplexMatrix;

/// Relative Hermiticity tolerance accepted on input: `‖H − H†‖_F ≤ 1e-10·‖H‖_F`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Sweeps stop once the off-diagonal Frobenius norm falls below this fraction of `‖H‖_F`.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;

pub const MAX_SWEEPS: usize = 100;

/// Relative window inside which two moduli count as tied when choosing the
/// phase pivot of an eigenvector.
const PHASE_TIE_TOLERANCE: f64 = 1e-10;

/// Spectral decomposition `H = V·diag(λ)·V†` with ascending `λ`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose column `k` pairs with `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum();
            }
        }
        out
    }

    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.spectral_map(|l| Complex64::new(l, 0.0))
    }
}

/// Rejects anything that is not square and Hermitian to `HERMITIAN_TOLERANCE`.
pub(crate) fn check_hermitian(h: &ComplexMatrix, what: &str) -> Result<()> {
    if !h.is_square() {
        return Err(shape(format!("{what} must be square, got {}x{}", h.rows(), h.cols())));
    }
    let residual = h.hermiticity_residual();
    let norm = h.frobenius_norm();
    if residual > HERMITIAN_TOLERANCE * norm {
        return Err(domain(format!(
            "{what} is not Hermitian: ‖M − M†‖_F = {residual:.3e} exceeds {:.0e}·‖M‖_F = {:.3e}",
            HERMITIAN_TOLERANCE,
            HERMITIAN_TOLERANCE * norm
        )));
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvectors are normalized so that their largest-modulus component is
/// real and positive (lowest index wins ties). Inside a degenerate eigenspace
/// no particular basis is promised.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(h, "matrix")?;
    let n = h.rows();

    // Work on the exactly Hermitian part.
    let mut a = &(h + &h.adjoint()) * 0.5;
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let norm = a.frobenius_norm();

    let mut converged = norm == 0.0 || n == 1;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&a) <= OFF_DIAGONAL_TOLERANCE * norm {
            converged = true;
            break;
        }
        if sweeps == MAX_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {:.3e})",
            off_diagonal_norm(&a)
        )));
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let columns: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            col
        })
        .collect();
    let eigenvectors = ComplexMatrix::from_columns(&columns)?;
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// One Jacobi rotation zeroing `a[p][q]`: `A ← J†AJ`, `V ← VJ`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J restricted to (p, q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

fn fix_phase(col: &mut [Complex64]) {
    let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = col
        .iter()
        .position(|z| z.norm() >= max * (1.0 - PHASE_TIE_TOLERANCE))
        .expect("max is attained");
    let z = col[pivot];
    let rot = z.conj() / z.norm();
    for x in col.iter_mut() {
        *x *= rot;
    }
    col[pivot] = Complex64::new(col[pivot].norm(), 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, seeded_rng};

    fn diag_residual(h: &ComplexMatrix, eig: &EigenDecomposition) -> f64 {
        let v = eig.eigenvectors();
        let hv = h.matmul(v).unwrap();
        let vl = v.matmul(&ComplexMatrix::from_real_diag(eig.eigenvalues())).unwrap();
        hv.frobenius_distance(&vl)
    }

    #[test]
    fn split_spin_hamiltonian() {
        // (Δ/2)σ_z with Δ = 2
        let h = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let eig = hermitian_eig(&h).unwrap();
        assert_eq!(eig.eigenvalues(), &[-1.0, 1.0]);
        assert_eq!(eig.eigenvector(0), vec![Complex64::new(0., 0.), Complex64::new(1., 0.)]);
        assert_eq!(eig.eigenvector(1), vec![Complex64::new(1., 0.), Complex64::new(0., 0.)]);
    }

    #[test]
    fn degenerate_identity() {
        let eig = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(eig.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert!(eig.eigenvectors().unitarity_residual() < 1e-14);
    }

    #[test]
    fn zero_and_scalar_matrices() {
        let eig = hermitian_eig(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert_eq!(eig.eigenvalues(), &[0.0; 4]);
        let eig = hermitian_eig(&ComplexMatrix::from_real(1, 1, &[-3.5]).unwrap()).unwrap();
        assert_eq!(eig.eigenvalues(), &[-3.5]);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = seeded_rng(8);
        let h = random_hermitian(&mut rng, 8);
        let eig = hermitian_eig(&h).unwrap();
        let norm = h.frobenius_norm();
        assert!(eig.reconstruct().frobenius_distance(&h) <= 1e-10 * norm);
        assert!(diag_residual(&h, &eig) <= 1e-10 * norm);
        assert!(eig.eigenvectors().unitarity_residual() <= 1e-10 * 8.0);
        assert!(eig.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn phase_convention_holds() {
        let mut rng = seeded_rng(3);
        let h = random_hermitian(&mut rng, 6);
        let eig = hermitian_eig(&h).unwrap();
        for k in 0..6 {
            let col = eig.eigenvector(k);
            let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = col.iter().position(|z| z.norm() >= max * (1.0 - 1e-10)).unwrap();
            assert_eq!(col[pivot].im, 0.0);
            assert!(col[pivot].re > 0.0);
        }
    }

    #[test]
    fn deterministic() {
        let mut rng = seeded_rng(11);
        let h = random_hermitian(&mut rng, 7);
        let a = hermitian_eig(&h).unwrap();
        let b = hermitian_eig(&h).unwrap();
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::Domain(_))));
        assert!(matches!(hermitian_eig(&ComplexMatrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn widely_separated_scales() {
        let h = ComplexMatrix::from_rows(vec![
            vec![Complex64::new(1e8, 0.0), Complex64::new(1e-3, 1e-3)],
            vec![Complex64::new(1e-3, -1e-3), Complex64::new(-1e-8, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!(diag_residual(&h, &eig) <= 1e-10 * h.frobenius_norm());
    }
}
