// SPDX-License-Identifier: Apache-2.0

//! SELECT: ancilla code `c` applies `e^{iφ_c} P_c` to the system register.
//!
//! Every code string is a sector reference times a product of weight-2 Z
//! masks. Ancilla qubit 0 picks the sector: `1` selects the excitation (XY)
//! strings and `0` the diagonal (IZ) strings. Ancilla qubit `q ≥ 1` toggles
//! one mask. A weight-2 Z mask on two active orbitals swaps `X ↔ Y` on both,
//! so it keeps the odd Y-parity every excitation string has. The same
//! `2n − 1` masks therefore enumerate both sectors.
//!
//! Multiplying a reference by masks picks up powers of `i`. Those, together
//! with the coefficient phases (the `i` and sign of each excitation term, the
//! sign of each projector term), are fixed by ancilla-controlled global
//! phases at the end of the circuit so PREPARE can stay nonnegative.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::circuit::{Circuit, Control, Gate, Polarity, QubitRoles};
use crate::dense::DEFAULT_QUBIT_CAP;
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::fermion::{excitation_pauli_sum, projector_pauli_sum, ucc_factor_expand, UccFactor};
use crate::pauli::{Letter, PauliString};
use crate::sim::{clamp_ancilla, unitary_of_with};

const PHASE_EPS: f64 = 1e-12;

fn letters<S: Serializer>(p: &PauliString, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.letter_string())
}

fn complex<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectStep {
    pub ancilla: usize,
    pub polarity: Polarity,
    #[serde(serialize_with = "letters")]
    pub z_mask: PauliString,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeEntry {
    pub code: usize,
    #[serde(serialize_with = "letters")]
    pub string: PauliString,
    /// Power of `i` picked up when the masks multiply the reference.
    pub mask_phase: u8,
    /// Coefficient of `string` in the factor's expansion.
    #[serde(serialize_with = "complex")]
    pub coefficient: Complex64,
    /// Phase the circuit attaches to `string` on this code.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectPlan {
    pub rank: usize,
    pub num_system: usize,
    pub theta: f64,
    pub sector_qubit: usize,
    #[serde(serialize_with = "letters")]
    pub xy_reference: PauliString,
    #[serde(serialize_with = "letters")]
    pub iz_reference: PauliString,
    pub steps: Vec<SelectStep>,
    pub code_table: Vec<CodeEntry>,
    /// Phase applied to a whole sector, `[iz, xy]`.
    pub sector_phases: [f64; 2],
}

impl SelectPlan {
    pub fn num_ancilla(&self) -> usize {
        2 * self.rank
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

/// Y on the lowest active orbital, X on the others, Z on every chain qubit.
pub fn default_xy_reference(f: &UccFactor) -> PauliString {
    let n = f.num_qubits();
    let active = f.active_orbitals();
    let mut p = PauliString::z_on(n, f.chain_qubits());
    p.set_letter(active[0], Letter::Y);
    for &q in &active[1..] {
        p.set_letter(q, Letter::X);
    }
    p
}

fn zz(n: usize, a: usize, b: usize) -> PauliString {
    PauliString::z_on(n, [a, b])
}

/// Reduces `v` against a GF(2) basis kept as pivot → row.
fn independent(basis: &mut BTreeMap<u32, u64>, mut v: u64) -> bool {
    while v != 0 {
        let pivot = 63 - v.leading_zeros();
        match basis.get(&pivot) {
            Some(&row) => v ^= row,
            None => {
                basis.insert(pivot, v);
                return true;
            }
        }
    }
    false
}

/// `2n − 1` independent weight-2 Z masks on the active orbitals, one per
/// non-sector ancilla qubit, from the last qubit backwards: pair edges
/// `(p1,p2), (p3,p4), …` first, then the bridges `(p2,p3), …`, then any other
/// pair should those not span.
pub fn default_masks(f: &UccFactor) -> Vec<SelectStep> {
    let n = f.num_qubits();
    let active = f.active_orbitals();
    let width = 2 * f.rank();
    let mut candidates: Vec<(usize, usize)> = active.chunks(2).map(|p| (p[0], p[1])).collect();
    candidates.extend(
        active[1..]
            .chunks(2)
            .filter(|p| p.len() == 2)
            .map(|p| (p[0], p[1])),
    );
    for (i, &a) in active.iter().enumerate() {
        for &b in &active[i + 1..] {
            candidates.push((a, b));
        }
    }
    let mut basis = BTreeMap::new();
    let mut steps = Vec::new();
    for (a, b) in candidates {
        if steps.len() == width - 1 {
            break;
        }
        let mask = zz(n, a, b);
        if independent(&mut basis, mask.z_mask()) {
            steps.push(SelectStep {
                ancilla: width - 1 - steps.len(),
                polarity: Polarity::Positive,
                z_mask: mask,
            });
        }
    }
    steps
}

pub fn derive_select_plan(f: &UccFactor) -> Result<SelectPlan> {
    build_plan(
        f,
        default_xy_reference(f),
        PauliString::identity(f.num_qubits()),
        default_masks(f),
    )
}

/// The published rank-2 choice: references `Y X X X` and `I Z Z I`, with
/// masks `Z_l Z_k`, `Z_j Z_i`, `Z_k Z_j` on ancilla qubits 3, 2, 1. Its
/// identity code is `0100`, so it only pairs with a PREPARE that loads the
/// identity coefficient there.
pub fn paper_fixture_plan(f: &UccFactor) -> Result<SelectPlan> {
    if f.rank() != 2 {
        return Err(Error::InvalidFactor(
            "the published SELECT table is for rank 2".into(),
        ));
    }
    let n = f.num_qubits();
    let a = f.active_orbitals();
    let step = |ancilla, p: usize, q: usize| SelectStep {
        ancilla,
        polarity: Polarity::Positive,
        z_mask: zz(n, a[p], a[q]),
    };
    build_plan(
        f,
        default_xy_reference(f),
        zz(n, a[1], a[2]),
        vec![step(3, 0, 1), step(2, 2, 3), step(1, 1, 2)],
    )
}

fn wrap(phi: f64) -> f64 {
    let r = phi.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Builds the code table for the given references and masks and checks that
/// each sector is hit exactly once per string of the expansion.
pub fn build_plan(
    f: &UccFactor,
    xy_reference: PauliString,
    iz_reference: PauliString,
    steps: Vec<SelectStep>,
) -> Result<SelectPlan> {
    let n = f.num_qubits();
    let width = 2 * f.rank();
    for s in &steps {
        if s.z_mask.x_mask() != 0
            || s.z_mask.num_qubits() != n
            || s.ancilla == 0
            || s.ancilla >= width
        {
            return Err(Error::Planning {
                string: s.z_mask.letter_string(),
            });
        }
    }
    if steps.len() != width - 1 {
        return Err(Error::Planning {
            string: format!("{} masks for {} ancilla qubits", steps.len(), width),
        });
    }
    let key = |p: &PauliString| (p.x_mask(), p.z_mask());
    let sectors: [BTreeSet<(u64, u64)>; 2] = [
        projector_pauli_sum(f)
            .iter()
            .map(|(p, _)| key(&p))
            .collect(),
        excitation_pauli_sum(f)
            .iter()
            .map(|(p, _)| key(&p))
            .collect(),
    ];
    let expansion = ucc_factor_expand(f);

    let mut seen: [BTreeSet<(u64, u64)>; 2] = Default::default();
    let mut raw = Vec::with_capacity(1 << width);
    for code in 0..1usize << width {
        let sector = (code >> (width - 1)) & 1;
        let mut mask = PauliString::identity(n);
        for s in &steps {
            let bit = (code >> (width - 1 - s.ancilla)) & 1;
            if bit == s.polarity.required_bit() {
                mask = mask.multiply(&s.z_mask)?;
            }
        }
        let reference = if sector == 1 {
            &xy_reference
        } else {
            &iz_reference
        };
        let prod = mask.multiply(reference)?;
        let string = prod.without_phase();
        if !sectors[sector].contains(&key(&string)) || !seen[sector].insert(key(&string)) {
            return Err(Error::Planning {
                string: string.letter_string(),
            });
        }
        raw.push((
            code,
            string,
            prod.phase_power(),
            expansion.coefficient(&string),
        ));
    }

    // One shared phase per sector, taken from its first nonzero code, plus a
    // correction wherever a code's target phase differs from it.
    let mut sector_phases = [0.0; 2];
    for (sector, slot) in sector_phases.iter_mut().enumerate() {
        if let Some((_, _, k, c)) = raw
            .iter()
            .find(|(code, _, _, c)| (code >> (width - 1)) & 1 == sector && c.norm() > 0.0)
        {
            *slot = wrap(c.arg() - *k as f64 * FRAC_PI_2);
        }
    }
    let code_table = raw
        .into_iter()
        .map(|(code, string, k, coefficient)| {
            let phase = if coefficient.norm() > 0.0 {
                wrap(coefficient.arg())
            } else {
                wrap(k as f64 * FRAC_PI_2 + sector_phases[(code >> (width - 1)) & 1])
            };
            CodeEntry {
                code,
                string,
                mask_phase: k,
                coefficient,
                phase,
            }
        })
        .collect();
    Ok(SelectPlan {
        rank: f.rank(),
        num_system: n,
        theta: f.theta(),
        sector_qubit: 0,
        xy_reference,
        iz_reference,
        steps,
        code_table,
        sector_phases,
    })
}

fn code_controls(code: usize, width: usize, offset: usize) -> impl Iterator<Item = Control> {
    (0..width).map(move |q| Control {
        q: q + offset,
        pol: Polarity::from_bit((code >> (width - 1 - q)) & 1 == 1),
    })
}

fn push_string(circ: &mut Circuit, p: &PauliString, offset: usize, ctl: Control) -> Result<()> {
    for q in p.support() {
        let g = match p.letter(q) {
            Letter::X => Gate::x(q + offset),
            Letter::Y => Gate::y(q + offset),
            Letter::Z => Gate::z(q + offset),
            Letter::I => continue,
        };
        circ.push(g.controlled(ctl))?;
    }
    Ok(())
}

/// SELECT with the bank on qubits `0..2n` and the system on
/// `system_offset..system_offset + N` of a `width`-qubit circuit.
pub fn synth_select_on(plan: &SelectPlan, system_offset: usize, width: usize) -> Result<Circuit> {
    let bank = plan.num_ancilla();
    if system_offset < bank || system_offset + plan.num_system > width {
        return Err(Error::DimensionMismatch {
            expected: width,
            actual: system_offset + plan.num_system,
        });
    }
    let mut circ = Circuit::new(width).with_roles(QubitRoles {
        ancilla: 0..system_offset,
        system: system_offset..system_offset + plan.num_system,
    });
    let sector = plan.sector_qubit;
    push_string(
        &mut circ,
        &plan.xy_reference,
        system_offset,
        Control::pos(sector),
    )?;
    push_string(
        &mut circ,
        &plan.iz_reference,
        system_offset,
        Control::neg(sector),
    )?;
    for s in &plan.steps {
        let ctl = Control {
            q: s.ancilla,
            pol: s.polarity,
        };
        push_string(&mut circ, &s.z_mask, system_offset, ctl)?;
    }
    for (idx, &phi) in plan.sector_phases.iter().enumerate() {
        if phi.abs() > PHASE_EPS {
            let ctl = Control {
                q: sector,
                pol: Polarity::from_bit(idx == 1),
            };
            circ.push(Gate::global_phase(phi).controlled(ctl))?;
        }
    }
    for e in &plan.code_table {
        if e.coefficient.norm() == 0.0 {
            continue;
        }
        let base = plan.sector_phases[(e.code >> (bank - 1)) & 1];
        let delta = wrap(e.phase - e.mask_phase as f64 * FRAC_PI_2 - base);
        if delta.abs() > PHASE_EPS {
            circ.push(Gate::global_phase(delta).with_controls(code_controls(e.code, bank, 0)))?;
        }
    }
    Ok(circ)
}

pub fn synth_select(f: &UccFactor, plan: &SelectPlan) -> Result<Circuit> {
    if plan.rank != f.rank() || plan.num_system != f.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 2 * f.rank() + f.num_qubits(),
            actual: plan.num_ancilla() + plan.num_system,
        });
    }
    let bank = plan.num_ancilla();
    synth_select_on(plan, bank, bank + plan.num_system)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectReport {
    pub worst_deviation: f64,
    pub worst_code: usize,
    pub failing_codes: Vec<usize>,
    pub pass: bool,
}

/// Clamps the bank to each code in turn and compares the induced system
/// operator with `e^{iφ_c} P_c` from the code table, without phase alignment.
pub fn verify_select(
    f: &UccFactor,
    plan: &SelectPlan,
    circuit: &Circuit,
    tolerance: f64,
) -> Result<SelectReport> {
    let bank = plan.num_ancilla();
    if circuit.num_qubits() != bank + f.num_qubits() || plan.num_system != f.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: bank + f.num_qubits(),
            actual: circuit.num_qubits(),
        });
    }
    let deviations = map_indices(Execution::default(), plan.code_table.len(), |i| {
        let e = &plan.code_table[i];
        let sys = clamp_ancilla(circuit, bank, e.code)?;
        let got = unitary_of_with(&sys, Execution::Sequential, DEFAULT_QUBIT_CAP)?;
        let want = e
            .string
            .to_dense()?
            .scale(Complex64::from_polar(1.0, e.phase));
        Ok(got.sub(&want).frobenius_norm())
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let (worst_code, worst_deviation) = deviations
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    let failing_codes: Vec<usize> = deviations
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > tolerance)
        .map(|(i, _)| plan.code_table[i].code)
        .collect();
    Ok(SelectReport {
        worst_deviation,
        worst_code: plan.code_table[worst_code].code,
        pass: failing_codes.is_empty(),
        failing_codes,
    })
}
