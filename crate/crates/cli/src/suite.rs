//! Seeded invariant suite behind `qentropy verify`.
//!
//! Every check draws its random instances from a ChaCha8 stream derived from
//! `(seed, check, dim)`, so cells are independent of each other and of the
//! order in which they run.

use std::fmt;

use serde::Serialize;

use qentropy::dynamics::{
    evolve_density, expectation, heisenberg_observable, heisenberg_rhs, picture_equivalence, propagator,
    transition_probability_exact, transition_probability_first_order, HamiltonianOperator,
};
use qentropy::ensembles::{
    mixture_density, pure_density, shannon_entropy, von_neumann_entropy, DensityMatrix, OrthonormalBasis,
};
use qentropy::linalg::{expm_hermitian, expm_oracle, hermitian_eig, partial_trace, ComplexMatrix, Subsystem};
use qentropy::random::{
    random_density, random_ginibre, random_hermitian, random_probability_vector, random_real_symmetric, random_unit, seeded_rng,
    SeededRng,
};
use qentropy::systems::{
    alpha, compose_density, composite_hamiltonian, lattice_hamiltonian, lattice_momentum_basis, rabi_populations,
    CompositeSystem, LatticeFreeParticle, SpinHalfSystem,
};
use qentropy::Complex64;

use crate::error::Result;
use crate::report::Check;

/// Random instances per (check, dimension) cell.
pub const TRIALS_PER_CELL: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    /// Multiplies every residual tolerance (not the convergence-order windows).
    pub tolerance_scale: f64,
    /// Negative control: replace unitary evolution with a slightly
    /// non-unitary map in the evolution checks.
    pub corrupt_evolution: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 0, dims: vec![2, 4, 8], tolerance_scale: 1.0, corrupt_evolution: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<SuiteCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteCheck {
    /// `None` for checks that do not depend on the dimension list.
    pub dim: Option<usize>,
    #[serde(flatten)]
    pub check: Check,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.check.passed)
    }

    /// `(name, dim, passed)` triples, for comparing runs.
    pub fn verdicts(&self) -> Vec<(String, Option<usize>, bool)> {
        self.checks.iter().map(|c| (c.check.name.clone(), c.dim, c.check.passed)).collect()
    }

    pub fn get(&self, name: &str, dim: Option<usize>) -> Option<&Check> {
        self.checks.iter().find(|c| c.check.name == name && c.dim == dim).map(|c| &c.check)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let dim = c.dim.map_or_else(|| "-".to_string(), |d| d.to_string());
            writeln!(
                f,
                "{}  {:<32} dim={:<3} measured={:<12.3e} tolerance={:.1e}",
                if c.check.passed { "PASS" } else { "FAIL" },
                c.check.name,
                dim,
                c.check.measured,
                c.check.tolerance
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.check.passed).count();
        write!(f, "{} checks, {} failed (seed {})", self.checks.len(), failed, self.seed)
    }
}

fn cell_rng(seed: u64, check: u64, dim: usize) -> SeededRng {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(check.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(dim as u64);
    seeded_rng(mix)
}

struct Evolver {
    corrupt: bool,
}

impl Evolver {
    fn evolve(&self, rho: &DensityMatrix, h: &HamiltonianOperator, t: f64) -> Result<DensityMatrix> {
        if !self.corrupt {
            return Ok(evolve_density(rho, h, t)?);
        }
        // K = U·diag(1 + 0.05·j): Kρ K† renormalized is a valid state with a different spectrum
        let n = rho.dim();
        let u = propagator(h, t)?;
        let d = ComplexMatrix::from_real_diag(&(0..n).map(|j| 1.0 + 0.05 * j as f64).collect::<Vec<_>>());
        let k = u.matrix().matmul(&d)?;
        let m = k.matmul(rho.matrix())?.matmul(&k.adjoint())?;
        let tr = m.trace()?.re;
        let m = m.scale_real(1.0 / tr);
        Ok(DensityMatrix::new(&(&m + &m.adjoint()) * 0.5)?)
    }
}

fn max_over<F>(trials: usize, mut f: F) -> Result<f64>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut m: f64 = 0.0;
    for i in 0..trials {
        let v = f(i)?;
        m = if v.is_nan() { f64::INFINITY } else { m.max(v) };
    }
    Ok(m)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Factor a dimension as `2 × d/2` when even, `1 × d` otherwise.
fn split(dim: usize) -> (usize, usize) {
    if dim.is_multiple_of(2) {
        (2, dim / 2)
    } else {
        (1, dim)
    }
}

pub fn run_invariant_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let scale = config.tolerance_scale;
    let seed = config.seed;
    let ev = Evolver { corrupt: config.corrupt_evolution };
    let mut checks = Vec::new();
    let mut push = |dim: Option<usize>, check: Check| checks.push(SuiteCheck { dim, check });

    for &n in &config.dims {
        let d = Some(n);
        let nf = n as f64;

        let mut rng = cell_rng(seed, 1, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let h = random_hermitian(&mut rng, n);
            let eig = hermitian_eig(&h)?;
            Ok(eig.reconstruct().frobenius_distance(&h) / h.frobenius_norm())
        })?;
        push(d, Check::at_most("eigen-reconstruction", v, 1e-10 * scale));

        let mut rng = cell_rng(seed, 2, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let h = random_hermitian(&mut rng, n);
            Ok(hermitian_eig(&h)?.eigenvectors().unitarity_residual())
        })?;
        push(d, Check::at_most("eigenvector-orthonormality", v, 1e-10 * nf * scale));

        let mut rng = cell_rng(seed, 3, n);
        let v = max_over(TRIALS_PER_CELL, |i| {
            let h = random_hermitian(&mut rng, n);
            let t = 10.0 * (i + 1) as f64 / TRIALS_PER_CELL as f64 / h.frobenius_norm();
            let a = expm_hermitian(&h, t)?;
            let b = expm_oracle(&h.scale(Complex64::new(0.0, -t)))?;
            Ok(a.frobenius_distance(&b))
        })?;
        push(d, Check::at_most("expm-cross-oracle", v, 1e-9 * scale));

        let mut rng = cell_rng(seed, 4, n);
        let v = max_over(TRIALS_PER_CELL, |i| {
            let h = random_hermitian(&mut rng, n);
            let (t, s) = (0.3 * i as f64, 1.7 - 0.2 * i as f64);
            let lhs = expm_hermitian(&h, t)?.matmul(&expm_hermitian(&h, s)?)?;
            Ok(lhs.frobenius_distance(&expm_hermitian(&h, t + s)?))
        })?;
        push(d, Check::at_most("propagator-group-law", v, 1e-9 * scale));

        let mut rng = cell_rng(seed, 5, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let a = random_ginibre(&mut rng, n);
            let b = random_ginibre(&mut rng, n);
            let cyc = rel(a.matmul(&b)?.trace()?, b.matmul(&a)?.trace()?);
            let kr = rel(a.kron(&b).trace()?, a.trace()? * b.trace()?);
            Ok(cyc.max(kr))
        })?;
        push(d, Check::at_most("trace-cyclic-and-kron", v, 1e-12 * scale));

        let (da, db) = split(n);
        let mut rng = cell_rng(seed, 6, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let rho = random_density(&mut rng, n);
            let mut worst: f64 = 0.0;
            for keep in [Subsystem::A, Subsystem::B] {
                let r = partial_trace(rho.matrix(), da, db, keep)?;
                worst = worst.max((r.trace()?.re - 1.0).abs());
            }
            Ok(worst)
        })?;
        push(d, Check::at_most("partial-trace-preserves-trace", v, 1e-12 * scale));

        let mut rng = cell_rng(seed, 7, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let h = random_hermitian(&mut rng, n);
            let basis = OrthonormalBasis::from_columns(hermitian_eig(&h)?.eigenvectors())?;
            let p = random_probability_vector(&mut rng, n);
            Ok((von_neumann_entropy(&mixture_density(&basis, &p)?)? - shannon_entropy(&p)).abs())
        })?;
        push(d, Check::at_most("mixture-entropy-equals-shannon", v, 1e-9 * scale));

        let mut rng = cell_rng(seed, 8, n);
        let mut trace_h: f64 = 0.0;
        let mut min_eig: f64 = 0.0;
        let v = max_over(TRIALS_PER_CELL, |_| {
            let rho = random_density(&mut rng, n);
            let h = HamiltonianOperator::new(random_hermitian(&mut rng, n))?;
            let t = 10.0 * random_unit(&mut rng);
            let out = ev.evolve(&rho, &h, t)?;
            trace_h = trace_h
                .max((out.matrix().trace()?.re - 1.0).abs())
                .max(out.matrix().hermiticity_residual());
            min_eig = min_eig.min(out.eigenvalues()?[0]);
            Ok((von_neumann_entropy(&out)? - von_neumann_entropy(&rho)?).abs())
        })?;
        push(d, Check::at_most("entropy-invariance", v, 1e-9 * scale));
        push(d, Check::at_most("evolution-trace-and-hermiticity", trace_h, 1e-10 * scale));
        push(d, Check::at_most("evolution-negative-eigenvalue", -min_eig, 1e-9 * scale));

        let mut rng = cell_rng(seed, 9, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let h = HamiltonianOperator::new(random_hermitian(&mut rng, n))?;
            let x = random_hermitian(&mut rng, n);
            let rho = random_density(&mut rng, n);
            let t = 10.0 * random_unit(&mut rng);
            Ok(picture_equivalence(&x, &rho, &h, t)?.relative_discrepancy())
        })?;
        push(d, Check::at_most("picture-equivalence", v, 1e-9 * scale));

        let mut rng = cell_rng(seed, 10, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let h = HamiltonianOperator::new(random_hermitian(&mut rng, n))?;
            let x = random_hermitian(&mut rng, n);
            let t = 10.0 * random_unit(&mut rng);
            let before = hermitian_eig(&x)?;
            let after = hermitian_eig(&heisenberg_observable(&x, &h, t)?)?;
            Ok(before
                .eigenvalues()
                .iter()
                .zip(after.eigenvalues())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        })?;
        push(d, Check::at_most("heisenberg-spectrum-preserved", v, 1e-9 * scale));

        let mut rng = cell_rng(seed, 11, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let h = HamiltonianOperator::new(random_hermitian(&mut rng, n))?;
            let x = random_hermitian(&mut rng, n);
            let rho = random_density(&mut rng, n);
            let t = 0.5 + random_unit(&mut rng);
            Ok((central_difference_ratio(&x, &rho, &h, t)? - 4.0).abs() / 4.0)
        })?;
        push(d, Check::at_most("heisenberg-eom-order", v, 0.2));

        let mut rng = cell_rng(seed, 12, n);
        let v = max_over(TRIALS_PER_CELL, |i| {
            let h = HamiltonianOperator::new(random_hermitian(&mut rng, n))?;
            let basis = OrthonormalBasis::from_columns(hermitian_eig(&random_hermitian(&mut rng, n))?.eigenvectors())?;
            let t = 10.0 * random_unit(&mut rng);
            let j = i % n;
            let total: f64 = (0..n)
                .map(|k| transition_probability_exact(&basis, j, k, &h, t))
                .sum::<qentropy::Result<f64>>()?;
            Ok((total - 1.0).abs())
        })?;
        push(d, Check::at_most("transition-completeness", v, 1e-9 * scale));

        let mut rng = cell_rng(seed, 13, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let a = random_density(&mut rng, da);
            let b = random_density(&mut rng, db);
            let joint = von_neumann_entropy(&compose_density(&a, &b))?;
            Ok((joint - von_neumann_entropy(&a)? - von_neumann_entropy(&b)?).abs())
        })?;
        push(d, Check::at_most("entropy-additivity", v, 1e-9 * scale));

        let mut rng = cell_rng(seed, 14, n);
        let v = max_over(TRIALS_PER_CELL, |_| {
            let h1 = HamiltonianOperator::new(random_hermitian(&mut rng, da))?;
            let h2 = HamiltonianOperator::new(random_hermitian(&mut rng, db))?;
            let a = random_density(&mut rng, da);
            let b = random_density(&mut rng, db);
            let t = 10.0 * random_unit(&mut rng);
            let c = CompositeSystem::new(h1.clone(), h2.clone(), ComplexMatrix::zeros(n, n))?;
            let joint = ev.evolve(&compose_density(&a, &b), &composite_hamiltonian(&c), t)?;
            let parts = ev.evolve(&a, &h1, t)?.matrix().kron(ev.evolve(&b, &h2, t)?.matrix());
            Ok(joint.matrix().frobenius_distance(&parts))
        })?;
        push(d, Check::at_most("isolated-subsystems", v, 1e-9 * scale));
    }

    // dimension-independent checks
    let mut worst: f64 = 0.0;
    for (delta, omega) in [(0.0, 1.0), (1.0, 1.0), (3.0, 4.0)] {
        let s = SpinHalfSystem::new(delta, omega)?;
        for i in 0..1000 {
            let t = 20.0 * i as f64 / 999.0;
            let (_, pb) = rabi_populations(&s, t)?;
            worst = worst.max((pb - s.rabi_closed_form(t)).abs());
        }
    }
    push(None, Check::at_most("rabi-closed-form", worst, 1e-9 * scale));

    let mut worst: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for n in 2..=64 {
        let sys = LatticeFreeParticle::new(n, 1.0, 1.0)?;
        let basis = lattice_momentum_basis(&sys);
        let r = basis.residuals();
        worst = worst.max(r.orthonormality).max(r.completeness.unwrap_or(f64::INFINITY));
        if n <= 16 {
            let h = lattice_hamiltonian(&sys);
            for v in basis.vectors() {
                let p = ComplexMatrix::outer(v.amplitudes(), v.amplitudes());
                comm = comm.max(h.matrix().commutator(&p)?.frobenius_norm());
            }
        }
    }
    push(None, Check::at_most("momentum-basis-identities", worst, 1e-12 * scale));
    push(None, Check::at_most("lattice-hamiltonian-commutes", comm, 1e-10 * scale));

    let c = CompositeSystem::coupled_spins(1.0, 0.3)?;
    let h = composite_hamiltonian(&c);
    let rho0 = pure_density(&alpha().tensor(&alpha()));
    let (mut drift, mut sub): (f64, f64) = (0.0, 0.0);
    for i in 0..=200 {
        let rho = ev.evolve(&rho0, &h, 0.1 * i as f64)?;
        drift = drift.max(von_neumann_entropy(&rho)?);
        let reduced = DensityMatrix::new(partial_trace(rho.matrix(), 2, 2, Subsystem::A)?)?;
        sub = sub.max(von_neumann_entropy(&reduced)?);
    }
    push(None, Check::at_most("coupled-global-entropy-constant", drift, 1e-9 * scale));
    push(
        None,
        Check { name: "coupled-subsystem-entropy-grows".into(), measured: sub, tolerance: 0.1, passed: sub >= 0.1 },
    );

    let mut rng = cell_rng(seed, 15, 0);
    let slope = first_order_slope(&mut rng, 6)?;
    push(None, Check::at_most("first-order-t2-slope", (slope - 2.0).abs(), 0.2));

    Ok(SuiteReport { seed, checks })
}

/// Error ratio `e(δ)/e(δ/2)` of the central-difference derivative of `<x(t)>`
/// against `<i[H, x(t)]>`, with `δ = 1e-3`.
pub fn central_difference_ratio(
    x: &ComplexMatrix,
    rho: &DensityMatrix,
    h: &HamiltonianOperator,
    t: f64,
) -> Result<f64> {
    let mean = |s: f64| -> Result<f64> { Ok(expectation(&heisenberg_observable(x, h, s)?, rho)?) };
    let exact = expectation(&heisenberg_rhs(&heisenberg_observable(x, h, t)?, h)?, rho)?;
    let err = |d: f64| -> Result<f64> { Ok(((mean(t + d)? - mean(t - d)?) / (2.0 * d) - exact).abs()) };
    Ok(err(1e-3)? / err(5e-4)?)
}

/// Log-log slope of `|exact/first-order − 1|` against `t‖H'‖_F` over
/// `{1e-3, 1e-2, 1e-1}` for a random real-symmetric `H'`, using the
/// standard-basis pair with the largest coupling.
pub fn first_order_slope(rng: &mut SeededRng, n: usize) -> Result<f64> {
    let m = random_real_symmetric(rng, n);
    let norm = m.frobenius_norm();
    let (j, k) = strongest_pair(&m);
    let h = HamiltonianOperator::new(m)?;
    let basis = OrthonormalBasis::standard(n);
    let xs = [1e-3f64, 1e-2, 1e-1];
    let mut pts = Vec::new();
    for s in xs {
        let t = s / norm;
        let e = transition_probability_exact(&basis, j, k, &h, t)?;
        let f = transition_probability_first_order(&basis, j, k, &h, t)?;
        pts.push((s.ln(), (e / f - 1.0).abs().ln()));
    }
    Ok(least_squares_slope(&pts))
}

/// Off-diagonal index pair `(j, k)`, `j < k`, maximizing `|m[k][j]|`.
pub fn strongest_pair(m: &ComplexMatrix) -> (usize, usize) {
    let n = m.rows();
    let mut best = (0, 1);
    let mut val = -1.0;
    for j in 0..n {
        for k in j + 1..n {
            if m[(k, j)].norm() > val {
                val = m[(k, j)].norm();
                best = (j, k);
            }
        }
    }
    best
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        let pts = [(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)];
        assert!((least_squares_slope(&pts) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn strongest_pair_picks_largest_entry() {
        let m = ComplexMatrix::from_real(3, 3, &[0., 1., 0.5, 1., 0., -4., 0.5, -4., 0.]).unwrap();
        assert_eq!(strongest_pair(&m), (1, 2));
    }

    #[test]
    fn default_suite_passes() {
        let report = run_invariant_suite(&SuiteConfig::default()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn corrupted_evolution_is_caught() {
        let config = SuiteConfig { corrupt_evolution: true, dims: vec![2, 4], ..SuiteConfig::default() };
        let report = run_invariant_suite(&config).unwrap();
        assert!(!report.passed());
        for d in [2, 4] {
            assert!(!report.get("entropy-invariance", Some(d)).unwrap().passed);
        }
        assert!(report.get("rabi-closed-form", None).unwrap().passed);
    }
}
