//! Minimum-weight Fermion-to-qubit encodings through SAT.
//!
//! The crate builds the constraint system for `2N` Majorana strings on `N`
//! qubits, hands the CNF to an external solver in a descending weight
//! search, and refines mode pairings by simulated annealing. Reference
//! encodings, an exact verifier and a small circuit model are included.

pub mod anneal;
pub mod baselines;
pub mod circuit;
pub mod encode;
pub mod error;
pub mod fermion;
pub mod pauli;
pub mod solve;

pub use error::{Error, Result, SolverError};
pub use fermion::{HamiltonianModel, MajoranaSet};
pub use pauli::{PauliOp, PauliString};
