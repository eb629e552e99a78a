// SPDX-License-Identifier: Apache-2.0

//! CNOT-count model for the LCU circuits and the per-string rotation cascade.
//!
//! A gate with `k ≥ 2` controls costs `8k − 12` CNOTs. A singly controlled
//! Pauli or Hadamard costs one and a singly controlled rotation or phase two.
//! The gap list `ρ` has one entry per inactive stretch between consecutive
//! active orbitals, `2n − 2` entries for rank `n`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::fermion::{excitation_pauli_sum, UccFactor};
use crate::pauli::{display_order, Letter};

pub const CSV_HEADER: &str = "rank,cascade,lcu_total,prepare,select_total";

fn check_rank(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    Ok(n as u64)
}

fn gap_total(n: usize, rho: &[usize]) -> Result<u64> {
    check_rank(n)?;
    let expected = 2 * n - 2;
    if rho.len() != expected {
        return Err(Error::RhoLength {
            rank: n,
            expected,
            actual: rho.len(),
        });
    }
    Ok(rho.iter().map(|&r| r as u64).sum())
}

fn multi_control(k: u64) -> u64 {
    8 * k - 12
}

/// `2n + 2 Σ_{k=2}^{2n−1} (8k − 12)(2n + 1 − k)`, checked against the
/// closed form `(64n³ − 48n² − 82n + 72)/3`.
pub fn prepare_cnot_count(n: usize) -> Result<u64> {
    let n = check_rank(n)?;
    let sum: u64 = 2 * n
        + 2 * (2..2 * n)
            .map(|k| multi_control(k) * (2 * n + 1 - k))
            .sum::<u64>();
    let closed = (64 * n.pow(3) + 72 - 48 * n.pow(2) - 82 * n) / 3;
    assert_eq!(sum, closed, "prepare count forms disagree at rank {n}");
    Ok(sum)
}

/// `(4n − 2, 4n + Σρ)`: the mask steps and the reference initialization.
pub fn select_cnot_counts(n: usize, rho: &[usize]) -> Result<(u64, u64)> {
    let total = gap_total(n, rho)?;
    let n = n as u64;
    Ok((4 * n - 2, 4 * n + total))
}

/// `6·prepare + 3·(8n − 2 + Σρ)`, checked against
/// `128n³ − 96n² − 140n + 138 + 3Σρ`.
pub fn total_lcu_count(n: usize, rho: &[usize]) -> Result<u64> {
    let total = gap_total(n, rho)?;
    lcu_total_from_gaps(n, total)
}

fn lcu_total_from_gaps(n: usize, gaps: u64) -> Result<u64> {
    let prep = prepare_cnot_count(n)?;
    let m = n as u64;
    let sum = 6 * prep + 3 * (8 * m - 2 + gaps);
    let closed = 128 * m.pow(3) + 138 + 3 * gaps - 96 * m.pow(2) - 140 * m;
    assert_eq!(sum, closed, "total count forms disagree at rank {n}");
    Ok(sum)
}

/// `2^{2n} (2n − 1 + Σρ)`: `2^{2n−1}` strings, each with a ladder of
/// `2n − 1 + Σρ` CNOTs on both sides of its rotation.
pub fn cascade_count(n: usize, rho: &[usize]) -> Result<u64> {
    let total = gap_total(n, rho)?;
    Ok(cascade_from_gaps(check_rank(n)?, total))
}

fn cascade_from_gaps(n: u64, gaps: u64) -> u64 {
    (1u64 << (2 * n)) * (2 * n - 1 + gaps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub rank: usize,
    pub rho: Vec<usize>,
    pub prepare_cnots: u64,
    pub select_step_cnots: u64,
    pub reference_init_cnots: u64,
    pub select_cnots: u64,
    pub total_cnots: u64,
    pub cascade_cnots: u64,
}

impl CostReport {
    pub fn new(n: usize, rho: &[usize]) -> Result<Self> {
        let gaps = gap_total(n, rho)?;
        Self::from_gaps(n, rho.to_vec(), gaps)
    }

    /// Counts for a concrete factor, with `ρ` taken from its Jordan–Wigner
    /// chains (one entry per active pair).
    pub fn for_factor(f: &UccFactor) -> Result<Self> {
        let chains = f.chain_lengths();
        let gaps = chains.iter().map(|&c| c as u64).sum();
        Self::from_gaps(f.rank(), chains, gaps)
    }

    fn from_gaps(n: usize, rho: Vec<usize>, gaps: u64) -> Result<Self> {
        let m = check_rank(n)?;
        let prepare_cnots = prepare_cnot_count(n)?;
        let (steps, init) = (4 * m - 2, 4 * m + gaps);
        Ok(Self {
            rank: n,
            rho,
            prepare_cnots,
            select_step_cnots: steps,
            reference_init_cnots: init,
            select_cnots: steps + init,
            total_cnots: lcu_total_from_gaps(n, gaps)?,
            cascade_cnots: cascade_from_gaps(m, gaps),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhoPolicy {
    /// Every gap set to the same value; 0 means adjacent orbitals.
    Uniform(usize),
    /// One list; rank `n` uses its first `2n − 2` entries.
    Explicit(Vec<usize>),
}

impl Default for RhoPolicy {
    fn default() -> Self {
        RhoPolicy::Uniform(0)
    }
}

impl RhoPolicy {
    pub fn for_rank(&self, n: usize) -> Result<Vec<usize>> {
        check_rank(n)?;
        let len = 2 * n - 2;
        match self {
            RhoPolicy::Uniform(k) => Ok(vec![*k; len]),
            RhoPolicy::Explicit(v) if v.len() >= len => Ok(v[..len].to_vec()),
            RhoPolicy::Explicit(v) => Err(Error::RhoLength {
                rank: n,
                expected: len,
                actual: v.len(),
            }),
        }
    }
}

/// Cost reports for ranks `1..=n_max`.
pub fn comparison(n_max: usize, policy: &RhoPolicy) -> Result<Vec<CostReport>> {
    check_rank(n_max)?;
    (1..=n_max)
        .map(|n| CostReport::new(n, &policy.for_rank(n)?))
        .collect()
}

/// CSV with [`CSV_HEADER`] and one row per rank.
pub fn emit_comparison(n_max: usize, policy: &RhoPolicy) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in comparison(n_max, policy)? {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.rank, r.cascade_cnots, r.total_cnots, r.prepare_cnots, r.select_cnots
        )
        .unwrap();
    }
    Ok(out)
}

/// First rank at which the LCU total drops below the cascade, if any.
pub fn crossover_rank(reports: &[CostReport]) -> Option<usize> {
    reports
        .iter()
        .find(|r| r.total_cnots < r.cascade_cnots)
        .map(|r| r.rank)
}

/// CNOTs the model charges for one gate.
pub fn gate_cnot_cost(g: &Gate) -> u64 {
    let k = g.controls().len() as u64;
    match g.kind() {
        // A controlled global phase is a phase gate on one of its controls.
        GateKind::GlobalPhase => match k {
            0 | 1 => 0,
            2 => 2,
            _ => multi_control(k - 1),
        },
        kind => match k {
            0 => 0,
            1 if matches!(kind, GateKind::X | GateKind::Y | GateKind::Z | GateKind::H) => 1,
            1 => 2,
            _ => multi_control(k),
        },
    }
}

pub fn model_cnot_count(c: &Circuit) -> u64 {
    c.gates().iter().map(gate_cnot_cost).sum()
}

/// `exp(θ(A − A†))` as one Pauli rotation per excitation string. The strings
/// commute, so the product is exact in any order.
pub fn synth_cascade(f: &UccFactor) -> Result<Circuit> {
    let mut terms: Vec<_> = excitation_pauli_sum(f).iter().collect();
    terms.sort_by(|a, b| display_order(&a.0, &b.0));
    let mut circ = Circuit::new(f.num_qubits());
    for (p, coeff) in terms {
        // θ·(i b P) exponentiates to R_P(−2θb) with R_P(φ) = exp(−iφP/2).
        let phi = -2.0 * f.theta() * (coeff / Complex64::i()).re;
        let support = p.support();
        let mut basis = Vec::new();
        let mut unbasis = Vec::new();
        for &q in &support {
            match p.letter(q) {
                Letter::X => {
                    basis.push(Gate::h(q));
                    unbasis.push(Gate::h(q));
                }
                Letter::Y => {
                    basis.push(Gate::rx(q, std::f64::consts::FRAC_PI_2));
                    unbasis.push(Gate::rx(q, -std::f64::consts::FRAC_PI_2));
                }
                _ => {}
            }
        }
        let ladder: Vec<Gate> = support.windows(2).map(|w| Gate::cnot(w[0], w[1])).collect();
        for g in basis.into_iter().chain(ladder.iter().cloned()) {
            circ.push(g)?;
        }
        circ.push(Gate::rz(*support.last().expect("nonempty string"), phi))?;
        for g in ladder.into_iter().rev().chain(unbasis) {
            circ.push(g)?;
        }
    }
    Ok(circ)
}
