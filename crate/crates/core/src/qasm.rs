// SPDX-License-Identifier: Apache-2.0

//! OpenQASM 2.0 export.
//!
//! Gates with at most one control map onto `qelib1.inc` gates. Gates with two
//! or more controls are lowered by the square-root recursion
//! `C^k(U) = C_c(V) · C^{k−1}X · C_c(V†) · C^{k−1}X · C^{k−1}(V)` with
//! `V² = U`, which is exact but uses more CNOTs than the cost model charges.
//! Negative controls are conjugated by `x`. Matrices follow the Qiskit reading
//! of `qelib1.inc`, so `rz(λ) = exp(−iλZ/2)` and `u1(λ) = diag(1, e^{iλ})`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::circuit::{Circuit, Control, Gate, GateKind, Polarity};
use crate::cost::model_cnot_count;

type Mat = [Complex64; 4];

const EPS: f64 = 1e-12;

/// One exported instruction.
#[derive(Debug, Clone, PartialEq)]
pub enum ExportOp {
    /// A `qelib1.inc` gate; `control` prefixes the name with `c`.
    Gate {
        name: &'static str,
        params: Vec<f64>,
        control: Option<usize>,
        target: usize,
    },
    Comment(String),
}

impl ExportOp {
    fn single(name: &'static str, params: Vec<f64>, target: usize) -> Self {
        ExportOp::Gate {
            name,
            params,
            control: None,
            target,
        }
    }

    fn ctrl(name: &'static str, params: Vec<f64>, control: usize, target: usize) -> Self {
        ExportOp::Gate {
            name,
            params,
            control: Some(control),
            target,
        }
    }

    /// Target matrix of a gate op.
    pub fn matrix(&self) -> Option<Mat> {
        match self {
            ExportOp::Gate { name, params, .. } => Some(base_matrix(name, params)),
            ExportOp::Comment(_) => None,
        }
    }

    fn render(&self, out: &mut String) {
        match self {
            ExportOp::Comment(text) => {
                let _ = writeln!(out, "// {text}");
            }
            ExportOp::Gate {
                name,
                params,
                control,
                target,
            } => {
                let prefix = if control.is_some() { "c" } else { "" };
                let _ = write!(out, "{prefix}{name}");
                if !params.is_empty() {
                    let ps: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
                    let _ = write!(out, "({})", ps.join(","));
                }
                match control {
                    Some(c) => {
                        let _ = writeln!(out, " q[{c}],q[{target}];");
                    }
                    None => {
                        let _ = writeln!(out, " q[{target}];");
                    }
                }
            }
        }
    }
}

fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        c.into(),
        -Complex64::from_polar(s, lambda),
        Complex64::from_polar(s, phi),
        Complex64::from_polar(c, phi + lambda),
    ]
}

fn base_matrix(name: &str, p: &[f64]) -> Mat {
    let gate = match name {
        "h" => Gate::h(0),
        "x" => Gate::x(0),
        "y" => Gate::y(0),
        "z" => Gate::z(0),
        "rx" => Gate::rx(0, p[0]),
        "ry" => Gate::ry(0, p[0]),
        "rz" => Gate::rz(0, p[0]),
        "u1" => Gate::phase(0, p[0]),
        "u3" => return u3_matrix(p[0], p[1], p[2]),
        other => unreachable!("no matrix for {other}"),
    };
    gate.matrix().expect("targeted gate")
}

fn dagger(a: &Mat) -> Mat {
    [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()]
}

/// Unitary square root of a 2×2 unitary.
fn sqrt_unitary(u: &Mat) -> Mat {
    let det = u[0] * u[3] - u[1] * u[2];
    let tr = u[0] + u[3];
    let mut s = det.sqrt();
    if (tr + 2.0 * s).norm() < 1e-9 {
        s = -s;
    }
    let t = (tr + 2.0 * s).sqrt();
    [(u[0] + s) / t, u[1] / t, u[2] / t, (u[3] + s) / t]
}

/// `U = e^{iα} U3(θ, φ, λ)`; returns `(θ, φ, λ, α)`.
fn zyz(u: &Mat) -> (f64, f64, f64, f64) {
    let (a, b, c, d) = (u[0], u[1], u[2], u[3]);
    let theta = 2.0 * c.norm().atan2(a.norm());
    if c.norm() < EPS {
        let alpha = a.arg();
        (0.0, 0.0, d.arg() - alpha, alpha)
    } else if a.norm() < EPS {
        let alpha = (-b).arg();
        (theta, c.arg() - alpha, 0.0, alpha)
    } else {
        let alpha = a.arg();
        (theta, c.arg() - alpha, (-b).arg() - alpha, alpha)
    }
}

fn is_x(u: &Mat) -> bool {
    u[0].norm() < EPS && u[3].norm() < EPS && (u[1] - 1.0).norm() < EPS && (u[2] - 1.0).norm() < EPS
}

/// Singly controlled arbitrary 2×2 unitary.
fn controlled_u(u: &Mat, control: usize, target: usize, ops: &mut Vec<ExportOp>) {
    if is_x(u) {
        ops.push(ExportOp::ctrl("x", vec![], control, target));
        return;
    }
    let (theta, phi, lambda, alpha) = zyz(u);
    ops.push(ExportOp::ctrl(
        "u3",
        vec![theta, phi, lambda],
        control,
        target,
    ));
    if alpha.abs() > EPS {
        ops.push(ExportOp::single("u1", vec![alpha], control));
    }
}

/// Positively multi-controlled unitary, `controls.len() ≥ 1`.
fn multi_controlled(u: &Mat, controls: &[usize], target: usize, ops: &mut Vec<ExportOp>) {
    let (&last, rest) = controls.split_last().expect("at least one control");
    if rest.is_empty() {
        controlled_u(u, last, target, ops);
        return;
    }
    let v = sqrt_unitary(u);
    let x = Gate::x(0).matrix().expect("x");
    controlled_u(&v, last, target, ops);
    multi_controlled(&x, rest, last, ops);
    controlled_u(&dagger(&v), last, target, ops);
    multi_controlled(&x, rest, last, ops);
    multi_controlled(&v, rest, target, ops);
}

fn native_name(kind: GateKind) -> &'static str {
    match kind {
        GateKind::H => "h",
        GateKind::X => "x",
        GateKind::Y => "y",
        GateKind::Z => "z",
        GateKind::Rx => "rx",
        GateKind::Ry => "ry",
        GateKind::Rz => "rz",
        GateKind::Phase => "u1",
        GateKind::GlobalPhase => unreachable!("global phase has no target"),
    }
}

fn export_targeted(
    kind: GateKind,
    angle: f64,
    m: &Mat,
    target: usize,
    controls: &[Control],
    ops: &mut Vec<ExportOp>,
) {
    let flips: Vec<usize> = controls
        .iter()
        .filter(|c| c.pol == Polarity::Negative)
        .map(|c| c.q)
        .collect();
    for &q in &flips {
        ops.push(ExportOp::single("x", vec![], q));
    }
    let params = if kind.is_parametric() {
        vec![angle]
    } else {
        vec![]
    };
    match controls {
        [] => ops.push(ExportOp::single(native_name(kind), params, target)),
        [c] => match kind {
            GateKind::Rx => ops.push(ExportOp::ctrl(
                "u3",
                vec![
                    angle,
                    -std::f64::consts::FRAC_PI_2,
                    std::f64::consts::FRAC_PI_2,
                ],
                c.q,
                target,
            )),
            GateKind::Ry => ops.push(ExportOp::ctrl("u3", vec![angle, 0.0, 0.0], c.q, target)),
            _ => ops.push(ExportOp::ctrl(native_name(kind), params, c.q, target)),
        },
        _ => {
            let qs: Vec<usize> = controls.iter().map(|c| c.q).collect();
            multi_controlled(m, &qs, target, ops);
        }
    }
    for &q in &flips {
        ops.push(ExportOp::single("x", vec![], q));
    }
}

fn export_gate(gate: &Gate, ops: &mut Vec<ExportOp>) {
    match (gate.target(), gate.matrix()) {
        (Some(t), Some(m)) => {
            export_targeted(gate.kind(), gate.angle(), &m, t, gate.controls(), ops)
        }
        _ => match gate.controls().split_last() {
            None => ops.push(ExportOp::Comment(format!("global phase {}", gate.angle()))),
            Some((last, rest)) => {
                // The phase lands on the |1⟩ (or |0⟩) branch of the last control.
                let p = Gate::phase(last.q, gate.angle());
                let m = p.matrix().expect("phase");
                let mut cs = rest.to_vec();
                let wrap = last.pol == Polarity::Negative;
                if wrap {
                    ops.push(ExportOp::single("x", vec![], last.q));
                }
                cs.retain(|c| c.q != last.q);
                export_targeted(GateKind::Phase, gate.angle(), &m, last.q, &cs, ops);
                if wrap {
                    ops.push(ExportOp::single("x", vec![], last.q));
                }
            }
        },
    }
}

/// Lowers `circuit` to `qelib1.inc` instructions.
pub fn export_ops(circuit: &Circuit) -> Vec<ExportOp> {
    let mut ops = Vec::new();
    for gate in circuit.gates() {
        export_gate(gate, &mut ops);
    }
    ops
}

/// Number of two-qubit gates in the lowered form.
pub fn exported_two_qubit_count(ops: &[ExportOp]) -> usize {
    ops.iter()
        .filter(|op| {
            matches!(
                op,
                ExportOp::Gate {
                    control: Some(_),
                    ..
                }
            )
        })
        .count()
}

/// Renders `circuit` as an OpenQASM 2.0 program. Each `header` line becomes a
/// `//` comment after the include.
pub fn to_qasm(circuit: &Circuit, header: &[String]) -> String {
    let ops = export_ops(circuit);
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for line in header {
        let _ = writeln!(out, "// {line}");
    }
    let _ = writeln!(
        out,
        "// {} two-qubit gates after lowering; the 8k-12 cost model charges {} CNOTs",
        exported_two_qubit_count(&ops),
        model_cnot_count(circuit)
    );
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    for op in &ops {
        op.render(&mut out);
    }
    out
}
