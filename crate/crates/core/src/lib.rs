//! Finite-dimensional quantum ensembles under unitary, entropy-preserving
//! dynamics.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense complex matrices, a Jacobi Hermitian eigensolver and two
//!   independent matrix-exponential routes.
//! * [`ensembles`]: probability vectors, pure states, density matrices,
//!   orthonormal bases, Shannon and von Neumann entropies.
//! * [`dynamics`]: propagators `e^{-iHt}`, Schrödinger and Heisenberg
//!   evolution, the Heisenberg equation of motion and transition probabilities.
//! * [`systems`]: spin-½, a free particle on a periodic lattice and composite
//!   two-body systems.
//! * [`random`]: seeded random matrices and states for property checks.
//!
//! Units have `ħ = 1`; entropies are in nats.

pub mod dynamics;
pub mod ensembles;
mod error;
pub mod linalg;
pub mod random;
pub mod systems;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use dynamics::{HamiltonianOperator, Propagator};
pub use ensembles::{DensityMatrix, OrthonormalBasis, ProbabilityVector, PureState};
pub use linalg::{ComplexMatrix, EigenDecomposition, Subsystem};
