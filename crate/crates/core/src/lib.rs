//! Synthesis of single- and two-qubit gates by steering on the Bloch sphere
//! (SU(2) modulo z-rotations) and in the Weyl chamber (SU(4) modulo local
//! operations), with exact unitary simulation as the verification backend.

pub mod bangbang;
pub mod bloch;
pub mod pulse1q;
pub mod qmath;
pub mod steer2q;
pub mod weyl;

pub use bangbang::{HamiltonianPair, StandardizedPair, SwitchSequence};
pub use bloch::{BlochPoint, DriftStandardization, EulerZxz};
pub use pulse1q::{OscillatingFieldSpec, PulseProgram1Q};
pub use qmath::{ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
pub use steer2q::{HamiltonianSpec, SteeringPlan, WeylTrajectory};
pub use weyl::{CouplingMatrix, InvariantTriple, WeylPoint};

/// Structural identities (unitarity, Hermiticity, reconstruction) hold to this.
pub const TOL_STRUCTURAL: f64 = 1e-12;
/// Physics-level comparisons (designed gate vs. target) hold to this.
pub const TOL_PHYSICS: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix entries must be finite")]
    NonFiniteEntries,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension {0} (expected 2 or 4)")]
    BadDimension(usize),
    #[error("duration must be nonnegative, got {0}")]
    NegativeDuration(f64),
    #[error("{0}")]
    InvalidInput(String),
    #[error("solver failed: {0}")]
    SolverFailure(String),
    #[error("designed program misses target: fidelity {fidelity}, best-effort result kept")]
    FidelityShortfall { fidelity: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
