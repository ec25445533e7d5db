//! Exact finite-dimensional quantum kinematics over registers of labeled
//! subsystems: states, density matrices, partial traces, spectral evolution,
//! product-state tests and relative-state expansions.
//!
//! Everything here works on dense vectors and matrices and serves as the
//! brute-force reference for the closed-form models.

mod density;
pub mod fixture;
mod operator;
mod partition;
mod register;
mod relative;
mod state;

pub use density::{partial_trace, DensityMatrix, Reducible};
pub use operator::{commutes, evolve_exact, HermitianOperator, Spectral};
pub use partition::{is_product, Partition, ProductTest};
pub use register::{Register, Subsystem};
pub use relative::{relative_states, Branch, RelativeStateDecomposition};
pub use state::{tensor, PureState};

pub type C64 = num_complex::Complex64;

/// Tolerance for structural invariants (normalization, Hermiticity, trace).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for comparisons between a closed form and the spectral oracle.
pub const ORACLE_TOL: f64 = 1e-10;
/// Threshold for rank and boolean decisions.
pub const DECISION_TOL: f64 = 1e-10;
