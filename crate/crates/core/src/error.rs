// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} needs {requested} qubits, above the simulation cap of {cap}")]
    ResourceCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("orbital index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },

    #[error("invalid UCC factor: {0}")]
    InvalidFactor(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error(
        "arcsin argument {value} outside [-1, 1] for angle {index} (rank {rank}, theta {theta})"
    )]
    Domain {
        rank: usize,
        index: usize,
        theta: f64,
        value: f64,
    },

    #[error("no weight-2 Z-mask decomposition reaches string {string}")]
    Planning { string: String },

    #[error("state norm deviates from 1 by {deviation:e}")]
    Unnormalized { deviation: f64 },

    #[error("postselection onto ancilla |0> has zero probability")]
    ZeroProbability,

    #[error("gap list has length {actual}, expected {expected} for rank {rank}")]
    RhoLength {
        rank: usize,
        expected: usize,
        actual: usize,
    },

    #[error("gate {index} acts non-diagonally on ancilla qubit {qubit}")]
    NotBlockDiagonal { index: usize, qubit: usize },

    #[error("rank must be at least 1")]
    ZeroRank,
}
