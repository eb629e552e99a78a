// SPDX-License-Identifier: Apache-2.0

//! Dense statevector simulation. Qubit 0 is the most significant bit of a
//! basis-state index, so `|q0 q1 … q_{m-1}>` reads left to right.

use num_complex::Complex64;

use crate::circuit::{Circuit, Control, Gate, GateKind};
use crate::dense::{check_cap, DenseOperator, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};

const NORM_WARN: f64 = 1e-9;
const NORM_ERROR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: amps.len().next_power_of_two(),
                actual: amps.len(),
            });
        }
        Ok(Self {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|a> ⊗ |b>` with `self` on the leading (more significant) qubits.
    pub fn tensor(&self, other: &Statevector) -> Statevector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Statevector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }
}

fn control_pattern(width: usize, controls: &[Control]) -> (usize, usize) {
    let (mut mask, mut value) = (0usize, 0usize);
    for c in controls {
        let b = 1usize << (width - 1 - c.q);
        mask |= b;
        value |= c.pol.required_bit() * b;
    }
    (mask, value)
}

/// Applies the 2×2 matrix `[a, b, c, d]` (row-major) to `target` on the
/// amplitudes whose controls are satisfied.
pub(crate) fn apply_matrix(
    amps: &mut [Complex64],
    width: usize,
    target: usize,
    controls: &[Control],
    [a, b, c, d]: [Complex64; 4],
) {
    let (cmask, cval) = control_pattern(width, controls);
    let tb = 1usize << (width - 1 - target);
    for i in 0..amps.len() {
        if i & tb != 0 || i & cmask != cval {
            continue;
        }
        let j = i | tb;
        let (u, v) = (amps[i], amps[j]);
        amps[i] = a * u + b * v;
        amps[j] = c * u + d * v;
    }
}

/// Applies one gate in place to amplitudes of a `width`-qubit register.
pub(crate) fn apply_gate(amps: &mut [Complex64], width: usize, gate: &Gate) {
    match (gate.target(), gate.matrix()) {
        (Some(t), Some(m)) => apply_matrix(amps, width, t, gate.controls(), m),
        _ => {
            let (cmask, cval) = control_pattern(width, gate.controls());
            let f = Complex64::from_polar(1.0, gate.angle());
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & cmask == cval {
                    *amp *= f;
                }
            }
        }
    }
}

pub(crate) fn run_in_place(circuit: &Circuit, amps: &mut [Complex64]) {
    for g in circuit.gates() {
        apply_gate(amps, circuit.num_qubits(), g);
    }
}

/// Runs `circuit` on `state`, returning the final state.
pub fn apply_circuit(circuit: &Circuit, state: &Statevector) -> Result<Statevector> {
    if state.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.num_qubits(),
            actual: state.num_qubits(),
        });
    }
    let deviation = (state.norm() - 1.0).abs();
    if deviation > NORM_ERROR {
        return Err(Error::Unnormalized { deviation });
    }
    if deviation > NORM_WARN {
        log::warn!("input state norm off by {deviation:e}");
    }
    let mut out = state.clone();
    run_in_place(circuit, &mut out.amps);
    Ok(out)
}

/// Full unitary of `circuit`; column `j` is the circuit applied to `|j>`.
pub fn unitary_of(circuit: &Circuit) -> Result<DenseOperator> {
    unitary_of_with(circuit, Execution::default(), DEFAULT_QUBIT_CAP)
}

pub fn unitary_of_with(circuit: &Circuit, exec: Execution, cap: usize) -> Result<DenseOperator> {
    let width = circuit.num_qubits();
    check_cap("circuit unitary", width, cap)?;
    let columns = map_indices(exec, 1 << width, |j| {
        let mut amps = Statevector::basis(width, j).into_amplitudes();
        run_in_place(circuit, &mut amps);
        amps
    });
    Ok(DenseOperator::from_columns(width, columns))
}

/// The system-register circuit `circuit` induces when its leading
/// `num_ancilla` qubits hold basis code `code` (qubit 0 is the code's most
/// significant bit).
///
/// Ancilla controls are resolved against the code. A diagonal gate on an
/// ancilla becomes a system-controlled phase. Any other gate on an ancilla
/// would leave the code and is rejected.
pub fn clamp_ancilla(circuit: &Circuit, num_ancilla: usize, code: usize) -> Result<Circuit> {
    let width = circuit.num_qubits();
    if num_ancilla > width {
        return Err(Error::DimensionMismatch {
            expected: width,
            actual: num_ancilla,
        });
    }
    let bit = |q: usize| (code >> (num_ancilla - 1 - q)) & 1;
    let mut out = Circuit::new(width - num_ancilla);
    'gates: for (index, g) in circuit.gates().iter().enumerate() {
        let mut controls = Vec::new();
        for c in g.controls() {
            if c.q < num_ancilla {
                if bit(c.q) != c.pol.required_bit() {
                    continue 'gates;
                }
            } else {
                controls.push(Control {
                    q: c.q - num_ancilla,
                    pol: c.pol,
                });
            }
        }
        match g.target() {
            Some(t) if t < num_ancilla => {
                let b = bit(t) as f64;
                let phase = match g.kind() {
                    GateKind::Z => std::f64::consts::PI * b,
                    GateKind::Phase => g.angle() * b,
                    GateKind::Rz => g.angle() * (b - 0.5),
                    _ => return Err(Error::NotBlockDiagonal { index, qubit: t }),
                };
                if phase != 0.0 {
                    out.push(Gate::global_phase(phase).with_controls(controls))?;
                }
            }
            Some(t) => out.push(g.rebuilt(Some(t - num_ancilla), controls))?,
            None => out.push(g.rebuilt(None, controls))?,
        }
    }
    Ok(out)
}
