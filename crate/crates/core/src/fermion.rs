// SPDX-License-Identifier: Apache-2.0

//! Fermionic excitations of a single UCC factor and their Jordan–Wigner image.
//!
//! Spin-orbital `k` maps to qubit `k`; `|1>` is occupied. The annihilator is
//! `a_k = ½(X_k + iY_k) ⊗ Z_{k+1} ⊗ … ⊗ Z_{N-1}`, with the parity chain on the
//! higher indices. The excitation operator of a factor with occupied
//! `i_1 < … < i_n` and virtual `a_1 < … < a_n` orbitals is fixed as
//!
//! ```text
//! A = a†_{a_n} … a†_{a_1} a_{i_1} … a_{i_n}
//! ```
//!
//! and the factor is `exp(θ(A − A†))`. Because `(A − A†)³ = A − A†`, the
//! exponential collapses to
//! `I + sin θ (A − A†) + (cos θ − 1)(A A† + A† A)`, which is what
//! [`ucc_factor_expand`] returns in Pauli form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::{check_cap, DenseOperator, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, PauliSum, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UccFactor {
    occupied: Vec<usize>,
    virtuals: Vec<usize>,
    theta: f64,
    num_qubits: usize,
}

fn strictly_ascending(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl UccFactor {
    pub fn new(
        occupied: Vec<usize>,
        virtuals: Vec<usize>,
        theta: f64,
        num_qubits: usize,
    ) -> Result<Self> {
        if occupied.is_empty() {
            return Err(Error::ZeroRank);
        }
        if occupied.len() != virtuals.len() {
            return Err(Error::InvalidFactor(format!(
                "{} occupied but {} virtual orbitals",
                occupied.len(),
                virtuals.len()
            )));
        }
        if !strictly_ascending(&occupied) || !strictly_ascending(&virtuals) {
            return Err(Error::InvalidFactor(
                "orbital lists must be strictly ascending".into(),
            ));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::ResourceCap {
                what: "UCC factor",
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        if let Some(&bad) = occupied.iter().chain(&virtuals).find(|&&k| k >= num_qubits) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                num_qubits,
            });
        }
        if occupied.iter().any(|k| virtuals.contains(k)) {
            return Err(Error::InvalidFactor(
                "occupied and virtual orbitals overlap".into(),
            ));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidFactor(format!("theta {theta} is not finite")));
        }
        Ok(Self {
            occupied,
            virtuals,
            theta,
            num_qubits,
        })
    }

    /// Rank-`n` factor on the first `2n` orbitals: occupied `0..n`, virtual `n..2n`.
    pub fn adjacent(rank: usize, theta: f64) -> Result<Self> {
        Self::new(
            (0..rank).collect(),
            (rank..2 * rank).collect(),
            theta,
            2 * rank,
        )
    }

    pub fn rank(&self) -> usize {
        self.occupied.len()
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn virtuals(&self) -> &[usize] {
        &self.virtuals
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self {
            theta,
            ..self.clone()
        }
    }

    /// All `2n` active orbitals in ascending order.
    pub fn active_orbitals(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .occupied
            .iter()
            .chain(&self.virtuals)
            .copied()
            .collect();
        v.sort_unstable();
        v
    }

    /// Inactive qubits that carry a Z in every excitation string: those with
    /// an odd number of active orbitals below them.
    pub fn chain_qubits(&self) -> Vec<usize> {
        let active = self.active_orbitals();
        active
            .chunks(2)
            .flat_map(|pair| pair[0] + 1..pair[1])
            .collect()
    }

    /// Length of each Z chain, one per consecutive pair of active orbitals.
    pub fn chain_lengths(&self) -> Vec<usize> {
        self.active_orbitals()
            .chunks(2)
            .map(|pair| pair[1] - pair[0] - 1)
            .collect()
    }
}

/// Jordan–Wigner image of a single ladder operator on `num_qubits` qubits.
pub fn jw_ladder(index: usize, kind: LadderKind, num_qubits: usize) -> Result<PauliSum> {
    if index >= num_qubits {
        return Err(Error::IndexOutOfRange { index, num_qubits });
    }
    let chain = PauliString::z_on(num_qubits, index + 1..num_qubits);
    let x = PauliString::single(num_qubits, index, Letter::X) * chain;
    let y = PauliString::single(num_qubits, index, Letter::Y) * chain;
    let sign = match kind {
        LadderKind::Annihilate => 1.0,
        LadderKind::Create => -1.0,
    };
    PauliSum::from_terms(
        num_qubits,
        [
            (x, Complex64::new(0.5, 0.0)),
            (y, Complex64::new(0.0, 0.5 * sign)),
        ],
    )
}

/// The excitation operator `A` (not antisymmetrized).
pub fn excitation_operator(f: &UccFactor) -> PauliSum {
    let n = f.num_qubits();
    let ladders = f
        .virtuals()
        .iter()
        .rev()
        .map(|&a| (a, LadderKind::Create))
        .chain(f.occupied().iter().map(|&i| (i, LadderKind::Annihilate)));
    let mut acc = PauliSum::identity(n);
    for (k, kind) in ladders {
        let l = jw_ladder(k, kind, n).expect("factor indices are validated");
        acc = &acc * &l;
    }
    acc.prune(0.0);
    acc
}

/// `A − A†` in Pauli form; `2^{2n-1}` mutually commuting strings.
pub fn excitation_pauli_sum(f: &UccFactor) -> PauliSum {
    let a = excitation_operator(f);
    let mut k = &a - &a.adjoint();
    k.prune(0.0);
    k
}

/// `A A† + A† A`: the two projectors onto the states the factor rotates.
pub fn projector_pauli_sum(f: &UccFactor) -> PauliSum {
    let a = excitation_operator(f);
    let ad = a.adjoint();
    let mut p = &(&a * &ad) + &(&ad * &a);
    p.prune(0.0);
    p
}

/// Closed-form Pauli expansion of `exp(θ(A − A†))`.
pub fn ucc_factor_expand(f: &UccFactor) -> PauliSum {
    let (s, c) = f.theta().sin_cos();
    let id = PauliSum::identity(f.num_qubits());
    let xy = excitation_pauli_sum(f).scale(Complex64::new(s, 0.0));
    let iz = projector_pauli_sum(f).scale(Complex64::new(c - 1.0, 0.0));
    let mut out = &(&id + &xy) + &iz;
    out.prune(0.0);
    out
}

/// `exp(θ(A − A†))` by dense matrix exponential, independent of the expansion.
pub fn exact_unitary(f: &UccFactor) -> Result<DenseOperator> {
    exact_unitary_capped(f, DEFAULT_QUBIT_CAP)
}

pub fn exact_unitary_capped(f: &UccFactor, cap: usize) -> Result<DenseOperator> {
    check_cap("exact unitary", f.num_qubits(), cap)?;
    let k = excitation_pauli_sum(f).to_dense_capped(f.num_qubits(), cap)?;
    Ok(k.scale(Complex64::new(f.theta(), 0.0)).expm())
}
