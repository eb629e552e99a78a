// SPDX-License-Identifier: Apache-2.0

//! Block-encoding synthesis for factorized unitary coupled-cluster operators.
//!
//! A rank-n factor `exp(θ(Â − Â†))` under Jordan–Wigner is a sum of Pauli
//! strings. This crate expands it, builds PREPARE and SELECT circuits for the
//! resulting linear combination of unitaries, wraps them with oblivious
//! amplitude amplification, verifies everything against dense simulation and
//! counts CNOTs against a per-string rotation cascade.

pub mod circuit;
pub mod cost;
pub mod dense;
pub mod error;
pub mod exec;
pub mod fermion;
pub mod lcu;
pub mod pauli;
pub mod prepare;
pub mod qasm;
pub mod select;
pub mod sim;

pub use circuit::{Circuit, Control, Gate, GateKind, Polarity, QubitRoles};
pub use dense::DenseOperator;
pub use error::{Error, Result};
pub use exec::Execution;
pub use fermion::{exact_unitary, ucc_factor_expand, UccFactor};
pub use pauli::{Letter, PauliString, PauliSum};
pub use sim::{apply_circuit, unitary_of, Statevector};
