//! Quantum Hamming distances between tracial states of the quantum
//! permutation group `C(S_n^+)`.
//!
//! States are finite mixtures of traces induced by finite-dimensional magic
//! unitaries. Three distances are estimated: the tensor distance (exact for
//! the presented atoms, via discrete optimal transport), and the free and
//! `L^1` distances, both reported as certified `[lower, upper]` sandwiches.

pub mod corpus;
pub mod distances;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod magic;
pub mod perm;
pub mod states;
pub mod suite;
pub mod transport;

pub use error::{Error, Result};
pub use magic::{MagicGrid, MagicUnitary, ValidationReport};
pub use perm::Permutation;
pub use states::{AtomicTrace, StateMixture, Word};
