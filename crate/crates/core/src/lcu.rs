// SPDX-License-Identifier: Apache-2.0

//! `W = (B† ⊗ 1) · SELECT · (B ⊗ 1)`, postselection, and exact oblivious
//! amplitude amplification.
//!
//! Wire layout: bank qubits `0..2n`, then the pad qubit when one is needed,
//! then the `N` system qubits. The ancilla-`|0>` block of `W` is `U/s`.
//!
//! `m` rounds of `−W R W† R` after `W` rotate that block onto `U` exactly
//! when `s = s_m = 1/sin(π/(2(2m+1)))`. For other `s` a pad qubit adds the
//! two terms `+c·I` and `−c·I` with `c = (s_m − s)/2`. They cancel in the
//! operator but lift the one-norm to `s_m`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Control, Gate, QubitRoles};
use crate::dense::{check_cap, DenseOperator, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::exec::{map_indices, map_slice, Execution};
use crate::fermion::{exact_unitary, UccFactor};
use crate::prepare::{lcu_coefficients, synth_prepare_with, PrepareMode, RotationConvention};
use crate::select::{derive_select_plan, synth_select_on};
use crate::sim::{apply_circuit, run_in_place, Statevector};

/// θ values swept by default.
pub const DEFAULT_GRID: [f64; 8] = [0.0, 0.3, -0.3, FRAC_PI_4, 1.0, FRAC_PI_2, 2.0, 2.5];

const PAD_EPS: f64 = 1e-12;

/// `s_m = 1/sin(π/(2(2m+1)))`: the one-norm `m` rounds amplify exactly.
pub fn amplification_norm(rounds: usize) -> f64 {
    1.0 / (PI / (2.0 * (2.0 * rounds as f64 + 1.0))).sin()
}

/// Smallest `m` with `s_m ≥ s`.
pub fn rounds_for(s: f64) -> usize {
    (0..)
        .find(|&m| amplification_norm(m) >= s - PAD_EPS)
        .expect("s_m grows without bound")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Postselect,
    Oaa,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LcuOptions {
    pub prepare: PrepareMode,
    pub convention: RotationConvention,
    /// Amplify with at least this many rounds (padding further if needed).
    pub min_rounds: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcuAssembly {
    pub w_circuit: Circuit,
    /// `W` followed by the amplification rounds; equals `w_circuit` when
    /// no rounds are needed or the assembly is for postselection.
    pub oaa_circuit: Circuit,
    pub s_one_norm: f64,
    pub s_effective: f64,
    pub pad_qubits: usize,
    pub pad_coeff: f64,
    pub oaa_rounds: usize,
    pub num_ancilla: usize,
    pub num_system: usize,
}

impl LcuAssembly {
    pub fn width(&self) -> usize {
        self.num_ancilla + self.num_system
    }
}

/// Concatenates `B` on the leading qubits, `SELECT`, and `B†`.
pub fn assemble_w(prep: &Circuit, select: &Circuit) -> Result<Circuit> {
    let width = select.num_qubits();
    let b = prep.embedded(0, width)?;
    let mut w = b.clone();
    w.append(select)?;
    w.append(&b.adjoint())?;
    Ok(match select.roles() {
        Some(r) => w.with_roles(r.clone()),
        None => w,
    })
}

/// `R = 1 − 2|0><0|` on the ancilla qubits `0..num_ancilla`.
pub fn reflection(num_ancilla: usize) -> Gate {
    Gate::global_phase(PI).with_controls((0..num_ancilla).map(Control::neg))
}

fn bank_prepare(f: &UccFactor, opts: &LcuOptions) -> Result<Circuit> {
    synth_prepare_with(f.rank(), f.theta(), opts.prepare, opts.convention)
}

/// `W` without padding, for postselected use.
pub fn build_postselect(f: &UccFactor, opts: &LcuOptions) -> Result<LcuAssembly> {
    let coeffs = lcu_coefficients(f.rank(), f.theta())?;
    let plan = derive_select_plan(f)?;
    let bank = plan.num_ancilla();
    let width = bank + f.num_qubits();
    let select = synth_select_on(&plan, bank, width)?;
    let w = assemble_w(&bank_prepare(f, opts)?, &select)?;
    Ok(LcuAssembly {
        oaa_circuit: w.clone(),
        w_circuit: w,
        s_one_norm: coeffs.s_one_norm,
        s_effective: coeffs.s_one_norm,
        pad_qubits: 0,
        pad_coeff: 0.0,
        oaa_rounds: 0,
        num_ancilla: bank,
        num_system: f.num_qubits(),
    })
}

/// Pads the one-norm up to the next `s_m` and emits the `m`-round circuit.
pub fn pad_and_synth_oaa(f: &UccFactor, opts: &LcuOptions) -> Result<LcuAssembly> {
    let coeffs = lcu_coefficients(f.rank(), f.theta())?;
    let s = coeffs.s_one_norm;
    let needed = rounds_for(s);
    let rounds = match opts.min_rounds {
        Some(m) if m < needed => {
            log::warn!("{m} rounds cannot amplify s = {s}; using {needed}");
            needed
        }
        Some(m) => m,
        None => needed,
    };
    let s_m = amplification_norm(rounds);
    let pad_coeff = ((s_m - s) / 2.0).max(0.0);
    let padded = pad_coeff > PAD_EPS;

    let plan = derive_select_plan(f)?;
    let bank = plan.num_ancilla();
    let pad = usize::from(padded);
    let num_ancilla = bank + pad;
    let width = num_ancilla + f.num_qubits();
    let prep = bank_prepare(f, opts)?.embedded(0, width)?;
    let select = synth_select_on(&plan, num_ancilla, width)?;

    let (b, sel) = if padded {
        let p = bank;
        let mut b = Circuit::new(width);
        b.push(Gate::ry(p, 2.0 * (2.0 * pad_coeff / s_m).sqrt().asin()))?;
        b.append(&prep.with_extra_controls(&[Control::neg(p)])?)?;
        b.push(Gate::h(0).controlled(Control::pos(p)))?;
        let mut sel = select.with_extra_controls(&[Control::neg(p)])?;
        sel.push(Gate::z(0).controlled(Control::pos(p)))?;
        (b, sel)
    } else {
        (prep, select)
    };
    let roles = QubitRoles {
        ancilla: 0..num_ancilla,
        system: num_ancilla..width,
    };
    let mut w = b.clone();
    w.append(&sel)?;
    w.append(&b.adjoint())?;
    let w = w.with_roles(roles.clone());

    let mut oaa = w.clone();
    let w_dag = w.adjoint();
    for _ in 0..rounds {
        oaa.push(reflection(num_ancilla))?;
        oaa.append(&w_dag)?;
        oaa.push(reflection(num_ancilla))?;
        oaa.append(&w)?;
        oaa.push(Gate::global_phase(PI))?;
    }
    Ok(LcuAssembly {
        w_circuit: w,
        oaa_circuit: oaa.with_roles(roles),
        s_one_norm: s,
        s_effective: if padded { s_m } else { s },
        pad_qubits: pad,
        pad_coeff: if padded { pad_coeff } else { 0.0 },
        oaa_rounds: rounds,
        num_ancilla,
        num_system: f.num_qubits(),
    })
}

/// Runs `w` on `|0>_anc ⊗ ψ`, projects the ancilla onto `|0>` and
/// renormalizes. Returns the system state and the success probability.
pub fn apply_postselected(
    w: &Circuit,
    num_ancilla: usize,
    psi: &Statevector,
) -> Result<(Statevector, f64)> {
    if num_ancilla + psi.num_qubits() != w.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: w.num_qubits(),
            actual: num_ancilla + psi.num_qubits(),
        });
    }
    let input = Statevector::zero(num_ancilla).tensor(psi);
    let out = apply_circuit(w, &input)?;
    let block = &out.amplitudes()[..1 << psi.num_qubits()];
    let prob: f64 = block.iter().map(|a| a.norm_sqr()).sum();
    if prob <= f64::MIN_POSITIVE {
        return Err(Error::ZeroProbability);
    }
    let scale = 1.0 / prob.sqrt();
    let state = Statevector::from_amplitudes(block.iter().map(|a| a * scale).collect())?;
    Ok((state, prob))
}

/// The ancilla-`|0>` block of `circuit` and the norm of everything it leaks
/// out of that block, over all system basis inputs.
pub fn zero_block(
    circuit: &Circuit,
    num_ancilla: usize,
    exec: Execution,
) -> Result<(DenseOperator, f64)> {
    let width = circuit.num_qubits();
    check_cap("end-to-end simulation", width, DEFAULT_QUBIT_CAP)?;
    let sys = width - num_ancilla;
    let dim = 1usize << sys;
    let columns = map_indices(exec, dim, |j| {
        let mut amps = Statevector::basis(width, j).into_amplitudes();
        run_in_place(circuit, &mut amps);
        let leak: f64 = amps[dim..].iter().map(|a| a.norm_sqr()).sum();
        amps.truncate(dim);
        (amps, leak)
    });
    let leakage = columns.iter().map(|(_, l)| l).sum::<f64>().sqrt();
    let block = DenseOperator::from_columns(sys, columns.into_iter().map(|(c, _)| c).collect());
    Ok((block, leakage))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndToEndReport {
    pub theta: f64,
    pub mode: VerifyMode,
    /// `min_φ ‖e^{iφ}·scale·M − U‖_F`, with `scale` the estimated `s` when
    /// postselecting and 1 after amplification.
    pub deviation: f64,
    pub s: f64,
    pub s_effective: f64,
    pub s_estimate: f64,
    pub rounds: usize,
    pub pad_qubits: usize,
    /// Norm of the amplitude outside the ancilla-`|0>` block.
    pub leakage: f64,
    pub success_probability: f64,
    pub phase: f64,
    pub pass: bool,
}

pub fn verify_end_to_end(
    f: &UccFactor,
    mode: VerifyMode,
    tolerance: f64,
) -> Result<EndToEndReport> {
    verify_end_to_end_with(
        f,
        mode,
        &LcuOptions::default(),
        tolerance,
        Execution::default(),
    )
}

pub fn verify_end_to_end_with(
    f: &UccFactor,
    mode: VerifyMode,
    opts: &LcuOptions,
    tolerance: f64,
    exec: Execution,
) -> Result<EndToEndReport> {
    let asm = match mode {
        VerifyMode::Postselect => build_postselect(f, opts)?,
        VerifyMode::Oaa => pad_and_synth_oaa(f, opts)?,
    };
    let (block, leakage) = zero_block(&asm.oaa_circuit, asm.num_ancilla, exec)?;
    let target = exact_unitary(f)?;
    let dim = block.dim() as f64;
    let weight = block.frobenius_norm().powi(2);
    let s_estimate = (dim / weight).sqrt();
    let scale = match mode {
        VerifyMode::Postselect => s_estimate,
        VerifyMode::Oaa => 1.0,
    };
    let (deviation, phase) = block
        .scale(Complex64::new(scale, 0.0))
        .phase_aligned_distance(&target);
    let mut pass = deviation <= tolerance;
    if mode == VerifyMode::Oaa {
        pass &= leakage <= tolerance;
    }
    Ok(EndToEndReport {
        theta: f.theta(),
        mode,
        deviation,
        s: asm.s_one_norm,
        s_effective: asm.s_effective,
        s_estimate,
        rounds: asm.oaa_rounds,
        pad_qubits: asm.pad_qubits,
        leakage,
        success_probability: weight / dim,
        phase,
        pass,
    })
}

/// [`verify_end_to_end_with`] over a θ grid; reports come back sorted by θ.
pub fn verify_grid(
    f: &UccFactor,
    thetas: &[f64],
    mode: VerifyMode,
    opts: &LcuOptions,
    tolerance: f64,
    exec: Execution,
) -> Result<Vec<EndToEndReport>> {
    let mut sorted = thetas.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Columns already fan out, so grid points run one after another unless
    // the grid is wider than the system register.
    let inner = if sorted.len() > 1 {
        Execution::Sequential
    } else {
        exec
    };
    map_slice(exec, &sorted, |&t| {
        verify_end_to_end_with(&f.with_theta(t), mode, opts, tolerance, inner)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::unitary_of;

    fn gapped(theta: f64) -> UccFactor {
        UccFactor::new(vec![0, 2], vec![3, 5], theta, 6).unwrap()
    }

    #[test]
    fn amplification_norms() {
        assert_eq!(amplification_norm(0), 1.0);
        assert!((amplification_norm(1) - 2.0).abs() < 1e-15);
        assert!((amplification_norm(2) - 1.0 / (PI / 10.0).sin()).abs() < 1e-15);
        assert!((amplification_norm(2) - 3.23606797749979).abs() < 1e-12);
        assert_eq!(rounds_for(1.0), 0);
        assert_eq!(rounds_for(1.5), 1);
        assert_eq!(rounds_for(2.0), 1);
        assert_eq!(rounds_for(2.75), 2);
        assert_eq!(rounds_for(3.3), 3);
    }

    #[test]
    fn w_is_unitary() {
        let f = UccFactor::adjacent(1, 0.6).unwrap();
        let asm = build_postselect(&f, &LcuOptions::default()).unwrap();
        assert!(unitary_of(&asm.w_circuit).unwrap().unitarity_error() < 1e-10);
        let asm = pad_and_synth_oaa(&f, &LcuOptions::default()).unwrap();
        assert!(unitary_of(&asm.oaa_circuit).unwrap().unitarity_error() < 1e-10);
    }

    #[test]
    fn zero_angle_block_is_identity() {
        let f = UccFactor::adjacent(1, 0.0).unwrap();
        let asm = build_postselect(&f, &LcuOptions::default()).unwrap();
        let (block, leak) = zero_block(&asm.w_circuit, 2, Execution::Sequential).unwrap();
        assert!(block.sub(&DenseOperator::identity(2)).max_abs() < 1e-15);
        assert!(leak < 1e-15);
    }

    #[test]
    fn block_encoding_contract() {
        for f in [
            UccFactor::adjacent(1, 0.6).unwrap(),
            UccFactor::adjacent(2, 1.2).unwrap(),
        ] {
            let asm = build_postselect(&f, &LcuOptions::default()).unwrap();
            let (block, _) =
                zero_block(&asm.w_circuit, asm.num_ancilla, Execution::default()).unwrap();
            let s = asm.s_one_norm;
            let mtm = block.adjoint().matmul(&block);
            let want = DenseOperator::identity(block.num_qubits()).scale((1.0 / (s * s)).into());
            assert!(mtm.sub(&want).max_abs() < 1e-10);
            let (d, _) = block
                .scale(s.into())
                .phase_aligned_distance(&exact_unitary(&f).unwrap());
            assert!(d < 1e-9, "{d:e}");
        }
    }

    #[test]
    fn postselected_state() {
        let f = UccFactor::adjacent(1, 0.9).unwrap();
        let asm = build_postselect(&f, &LcuOptions::default()).unwrap();
        // Orbital 0 occupied: qubit 0 set, qubit 1 empty.
        let psi = Statevector::basis(2, 0b10);
        let (out, prob) = apply_postselected(&asm.w_circuit, 2, &psi).unwrap();
        let want = exact_unitary(&f).unwrap();
        let col: Vec<Complex64> = (0..4).map(|i| want.matrix()[[i, 2]]).collect();
        let overlap: Complex64 = out
            .amplitudes()
            .iter()
            .zip(&col)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-9);
        assert!((prob - 1.0 / (asm.s_one_norm * asm.s_one_norm)).abs() < 1e-9);

        let id = UccFactor::adjacent(1, 0.0).unwrap();
        let asm = build_postselect(&id, &LcuOptions::default()).unwrap();
        let (out, prob) = apply_postselected(&asm.w_circuit, 2, &psi).unwrap();
        assert!((prob - 1.0).abs() < 1e-15);
        assert!((out.amplitudes()[2] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn success_probability_at_half_pi() {
        let f = UccFactor::adjacent(2, FRAC_PI_2).unwrap();
        let r = verify_end_to_end(&f, VerifyMode::Postselect, 1e-8).unwrap();
        assert!((r.s - 11.0 / 4.0).abs() < 1e-12);
        assert!((r.success_probability - 16.0 / 121.0).abs() < 1e-9);
        assert!(r.pass);
    }

    #[test]
    fn padding_choices() {
        let f = UccFactor::adjacent(2, FRAC_PI_2).unwrap();
        let asm = pad_and_synth_oaa(&f, &LcuOptions::default()).unwrap();
        assert_eq!(asm.oaa_rounds, 2);
        assert_eq!(asm.pad_qubits, 1);
        assert!((asm.pad_coeff - (amplification_norm(2) - 2.75) / 2.0).abs() < 1e-12);
        assert!((asm.s_effective - amplification_norm(2)).abs() < 1e-12);

        // n = 1 at θ = π/2 has s = 2 exactly: one round, no pad.
        let f = UccFactor::adjacent(1, FRAC_PI_2).unwrap();
        let asm = pad_and_synth_oaa(&f, &LcuOptions::default()).unwrap();
        assert_eq!((asm.oaa_rounds, asm.pad_qubits), (1, 0));

        let f = UccFactor::adjacent(1, 0.0).unwrap();
        let asm = pad_and_synth_oaa(&f, &LcuOptions::default()).unwrap();
        assert_eq!((asm.oaa_rounds, asm.pad_qubits), (0, 0));
        assert_eq!(asm.oaa_circuit, asm.w_circuit);
    }

    #[test]
    fn oaa_rank_one_grid() {
        let f = UccFactor::adjacent(1, 0.0).unwrap();
        let reports = verify_grid(
            &f,
            &DEFAULT_GRID,
            VerifyMode::Oaa,
            &LcuOptions::default(),
            1e-8,
            Execution::default(),
        )
        .unwrap();
        for r in reports {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn oaa_rank_two_gapped() {
        for t in [0.3, FRAC_PI_2, -2.0] {
            let r = verify_end_to_end(&gapped(t), VerifyMode::Oaa, 1e-8).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn extra_rounds_still_exact() {
        let f = UccFactor::adjacent(1, 0.4).unwrap();
        let opts = LcuOptions {
            min_rounds: Some(2),
            ..Default::default()
        };
        let r =
            verify_end_to_end_with(&f, VerifyMode::Oaa, &opts, 1e-8, Execution::default()).unwrap();
        assert_eq!(r.rounds, 2);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn paper_literal_prepare_breaks_the_block() {
        let f = UccFactor::adjacent(2, 1.0).unwrap();
        let opts = LcuOptions {
            prepare: PrepareMode::PaperLiteral,
            convention: RotationConvention::FullAngle,
            min_rounds: None,
        };
        let r = verify_end_to_end_with(
            &f,
            VerifyMode::Postselect,
            &opts,
            1e-8,
            Execution::default(),
        )
        .unwrap();
        assert!(!r.pass);
        assert!(r.deviation > 1e-3);
    }

    #[test]
    fn postselect_width_mismatch() {
        let w = Circuit::new(3);
        assert!(matches!(
            apply_postselected(&w, 2, &Statevector::zero(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
