// SPDX-License-Identifier: Apache-2.0

//! PREPARE: loading the LCU coefficients of a rank-`n` factor onto a bank of
//! `2n` ancilla qubits.
//!
//! Code layout (ancilla qubit 0 is the most significant bit, `M = 2^{2n-1}`):
//!
//! | codes        | term                | coefficient            |
//! |--------------|---------------------|------------------------|
//! | `0`          | identity            | `1 + (cos θ − 1)/M`    |
//! | `1 .. M`     | diagonal projectors | `±(cos θ − 1)/M`       |
//! | `M .. 2M`    | excitation strings  | `±i sin θ / M`         |
//!
//! The circuit is hierarchical. A rotation on qubit 0 splits off the
//! excitation sector, a controlled Hadamard broadcast spreads it uniformly,
//! and each later level `k` peels `2^{2n-k}` projector codes off the branch
//! where qubits `0..k-1` are still `|0>`.
//!
//! [`PrepareMode::Verified`] loads the nonnegative amplitudes `√(|α|/s)` and
//! leaves every coefficient phase to SELECT. [`PrepareMode::PaperLiteral`]
//! uses the published angle formulas with an RX on the first qubit; under
//! [`RotationConvention::FullAngle`] that circuit loads `α` itself rather
//! than `√(|α|/s)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Control, Gate, QubitRoles};
use crate::error::{Error, Result};
use crate::sim::{apply_circuit, Statevector};

/// Ancilla count used by a rank-`n` bank.
pub fn bank_width(rank: usize) -> usize {
    2 * rank
}

fn half_bank(rank: usize) -> f64 {
    2f64.powi(2 * rank as i32 - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcuCoefficients {
    pub rank: usize,
    pub theta: f64,
    pub identity_coeff: f64,
    /// Shared magnitude-and-sign of the projector terms before per-string signs.
    pub projector_coeff: f64,
    /// `i sin θ / M`, before per-string signs.
    pub excitation_coeff: Complex64,
    pub s_one_norm: f64,
}

impl LcuCoefficients {
    /// Number of codes per sector, `2^{2n-1}`.
    pub fn sector_size(&self) -> usize {
        1usize << (2 * self.rank - 1)
    }

    /// `|α_c|` for every code in bank order.
    pub fn magnitudes(&self) -> Vec<f64> {
        let m = self.sector_size();
        let mut out = Vec::with_capacity(2 * m);
        out.push(self.identity_coeff.abs());
        out.extend(std::iter::repeat_n(self.projector_coeff.abs(), m - 1));
        out.extend(std::iter::repeat_n(self.excitation_coeff.norm(), m));
        out
    }

    /// `√(|α_c|/s)` for every code; the verified-mode PREPARE target.
    pub fn target_amplitudes(&self) -> Vec<f64> {
        self.magnitudes()
            .into_iter()
            .map(|a| (a / self.s_one_norm).sqrt())
            .collect()
    }
}

pub fn lcu_coefficients(rank: usize, theta: f64) -> Result<LcuCoefficients> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let m = half_bank(rank);
    let (s, c) = theta.sin_cos();
    let identity_coeff = 1.0 + (c - 1.0) / m;
    let projector_coeff = (c - 1.0) / m;
    let excitation_coeff = Complex64::new(0.0, s / m);
    let s_one_norm =
        identity_coeff.abs() + (m - 1.0) * projector_coeff.abs() + m * excitation_coeff.norm();
    Ok(LcuCoefficients {
        rank,
        theta,
        identity_coeff,
        projector_coeff,
        excitation_coeff,
        s_one_norm,
    })
}

/// The published angles `Θ_1 … Θ_{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrepareAngles {
    pub rank: usize,
    pub theta: f64,
    pub angles: Vec<f64>,
}

fn checked_asin(rank: usize, index: usize, theta: f64, value: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&value) {
        return Err(Error::Domain {
            rank,
            index,
            theta,
            value,
        });
    }
    Ok(value.asin())
}

pub fn prepare_angles(rank: usize, theta: f64) -> Result<PrepareAngles> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let (s, c) = theta.sin_cos();
    let mut angles = Vec::with_capacity(2 * rank);
    angles.push(checked_asin(rank, 1, theta, -s / half_bank(rank).sqrt())?);
    for k in 2..=2 * rank {
        let pk = 2f64.powi(k as i32);
        let denom = 2f64.powi((2 * rank - 2 + k) as i32) - pk + 2.0 + 2.0 * c * c + (pk - 4.0) * c;
        angles.push(checked_asin(rank, k, theta, (c - 1.0) / denom.sqrt())?);
    }
    Ok(PrepareAngles {
        rank,
        theta,
        angles,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum PrepareMode {
    #[default]
    Verified,
    PaperLiteral,
}

/// How a published angle `Θ` maps onto a gate: `exp(−iΘP/2)` or `exp(−iΘP)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RotationConvention {
    #[default]
    HalfAngle,
    FullAngle,
}

impl RotationConvention {
    fn gate_angle(self, published: f64) -> f64 {
        match self {
            RotationConvention::HalfAngle => published,
            RotationConvention::FullAngle => 2.0 * published,
        }
    }
}

/// Gate angles of the verified hierarchy, one per bank qubit.
///
/// Level 1 keeps `|sin θ|/s` of the mass in the excitation sector. Level `k`
/// moves `2^{2n-k}` projector codes out of the `2^{2n-k+1}` codes still
/// reachable on its branch.
pub fn verified_gate_angles(rank: usize, theta: f64) -> Result<Vec<f64>> {
    let coeffs = lcu_coefficients(rank, theta)?;
    let (s, c) = theta.sin_cos();
    let m = half_bank(rank);
    let mut out = Vec::with_capacity(2 * rank);
    out.push(2.0 * (s.abs() / coeffs.s_one_norm).sqrt().asin());
    for k in 2..=2 * rank {
        let moved = 2f64.powi((2 * rank - k) as i32) * (1.0 - c);
        let remaining = m - 1.0 + c + (2f64.powi((2 * rank - k + 1) as i32) - 1.0) * (1.0 - c);
        let p = moved / remaining;
        debug_assert!((0.0..=1.0 + 1e-12).contains(&p));
        out.push(2.0 * p.min(1.0).sqrt().asin());
    }
    Ok(out)
}

/// Verified-mode PREPARE on `2n` ancilla qubits.
pub fn synth_prepare(rank: usize, theta: f64) -> Result<Circuit> {
    synth_prepare_with(
        rank,
        theta,
        PrepareMode::Verified,
        RotationConvention::HalfAngle,
    )
}

pub fn synth_prepare_with(
    rank: usize,
    theta: f64,
    mode: PrepareMode,
    convention: RotationConvention,
) -> Result<Circuit> {
    let width = bank_width(rank);
    let (first, levels) = match mode {
        PrepareMode::Verified => {
            let a = verified_gate_angles(rank, theta)?;
            (Gate::ry(0, a[0]), a[1..].to_vec())
        }
        PrepareMode::PaperLiteral => {
            let a = prepare_angles(rank, theta)?.angles;
            let g: Vec<f64> = a.iter().map(|&x| convention.gate_angle(x)).collect();
            (Gate::rx(0, g[0]), g[1..].to_vec())
        }
    };
    let mut circ = Circuit::new(width).with_roles(QubitRoles {
        ancilla: 0..width,
        system: width..width,
    });
    circ.push(first)?;
    for (idx, &angle) in levels.iter().enumerate() {
        // Level k = idx + 2 acts on bank qubit k-1.
        let q = idx + 1;
        let broadcast: Vec<Control> = (0..q - 1)
            .map(Control::neg)
            .chain(std::iter::once(Control::pos(q - 1)))
            .collect();
        for t in q..width {
            circ.push(Gate::h(t).with_controls(broadcast.iter().copied()))?;
        }
        circ.push(Gate::ry(q, angle).with_controls((0..q).map(Control::neg)))?;
    }
    Ok(circ)
}

/// Binary-tree loader for an arbitrary nonnegative amplitude vector, one
/// fully controlled RY per nonzero branching.
pub fn synth_state_loader(amplitudes: &[f64]) -> Result<Circuit> {
    if !amplitudes.len().is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: amplitudes.len().next_power_of_two(),
            actual: amplitudes.len(),
        });
    }
    let width = amplitudes.len().trailing_zeros() as usize;
    let mass: Vec<f64> = amplitudes.iter().map(|a| a * a).collect();
    let total: f64 = mass.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized {
            deviation: (total - 1.0).abs(),
        });
    }
    let mut circ = Circuit::new(width);
    for level in 0..width {
        let block = 1usize << (width - level);
        for prefix in 0..1usize << level {
            let lo = prefix * block;
            let p0: f64 = mass[lo..lo + block / 2].iter().sum();
            let p1: f64 = mass[lo + block / 2..lo + block].iter().sum();
            if p1 == 0.0 {
                continue;
            }
            let angle = 2.0 * p1.sqrt().atan2(p0.sqrt());
            let controls = (0..level).map(|q| Control {
                q,
                pol: crate::circuit::Polarity::from_bit((prefix >> (level - 1 - q)) & 1 == 1),
            });
            circ.push(Gate::ry(level, angle).with_controls(controls))?;
        }
    }
    Ok(circ)
}

/// Generic-loader PREPARE for the same targets as [`synth_prepare`].
pub fn synth_prepare_fallback(rank: usize, theta: f64) -> Result<Circuit> {
    let targets = lcu_coefficients(rank, theta)?.target_amplitudes();
    synth_state_loader(&targets)
}

/// Largest `||amp_c| − target_c|` of the state a bank circuit prepares.
pub fn prepared_deviation(circuit: &Circuit, targets: &[f64]) -> Result<f64> {
    let out = apply_circuit(circuit, &Statevector::zero(circuit.num_qubits()))?;
    if out.amplitudes().len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            actual: out.amplitudes().len(),
        });
    }
    Ok(out
        .amplitudes()
        .iter()
        .zip(targets)
        .map(|(a, t)| (a.norm() - t).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrepareReport {
    pub rank: usize,
    pub theta: f64,
    pub max_deviation: f64,
    pub used_fallback: bool,
    pub fallback_deviation: Option<f64>,
}

/// Checks the verified hierarchy against `√(|α|/s)` and falls back to the
/// generic loader if it misses `tolerance`.
pub fn verify_prepare(rank: usize, theta: f64, tolerance: f64) -> Result<PrepareReport> {
    let targets = lcu_coefficients(rank, theta)?.target_amplitudes();
    let max_deviation = prepared_deviation(&synth_prepare(rank, theta)?, &targets)?;
    let mut report = PrepareReport {
        rank,
        theta,
        max_deviation,
        used_fallback: false,
        fallback_deviation: None,
    };
    if max_deviation > tolerance {
        let fb = prepared_deviation(&synth_prepare_fallback(rank, theta)?, &targets)?;
        assert!(
            fb <= tolerance,
            "generic loader missed its target by {fb:e} at rank {rank}, theta {theta}"
        );
        report.used_fallback = true;
        report.fallback_deviation = Some(fb);
    }
    Ok(report)
}
