//! Interpreter and equivalence checker for a quantum process algebra.
//!
//! Programs mix classical values, qubits and communications. Their
//! operational semantics produces process graphs with action transitions
//! (`g!v`, `g!x`, `g?v`, `g?x`, `tau`) and probabilistic transitions, over
//! contexts that carry a density matrix for the quantum store. On top of the
//! graphs, [`bisim`] decides probabilistic (rooted) branching bisimilarity.

pub mod bisim;
pub mod cli;
pub mod graph;
pub mod quantum;
pub mod semantics;
pub mod syntax;
