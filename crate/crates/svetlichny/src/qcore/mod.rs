//! Minimal dense complex linear algebra and N-qubit state construction.
//!
//! Everything is double precision, row-major, and immutable once built, so
//! values can be shared freely across threads.

mod eigen;
mod matrix;
mod state;

pub use eigen::{eigenvalues_hermitian, min_eigenvalue_hermitian};
pub use matrix::{kron, kron_all, pauli_x, pauli_y, pauli_z, ComplexMatrix, C64};
pub use state::{
    bloch_operator, expectation, make_ghz, partial_trace, pauli_basis, permute_parties,
    random_direction, random_state, DensityMatrix, Direction, GhzPhase, Purity, MAX_PARTIES,
};
