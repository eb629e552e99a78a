// SPDX-License-Identifier: Apache-2.0

//! Gate-level circuits with multi-controlled gates of either control polarity.
//!
//! Rotations follow `R_P(Θ) = exp(−iΘP/2)`. `PHASE(φ)` is `diag(1, e^{iφ})`
//! on its target. `GLOBALPHASE(φ)` has no target and multiplies every
//! amplitude whose controls are satisfied by `e^{iφ}`, so a controlled global
//! phase is a phase on the control pattern.

use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    #[serde(rename = "RX")]
    Rx,
    #[serde(rename = "RY")]
    Ry,
    #[serde(rename = "RZ")]
    Rz,
    #[serde(rename = "PHASE")]
    Phase,
    #[serde(rename = "GLOBALPHASE")]
    GlobalPhase,
}

impl GateKind {
    pub fn is_parametric(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Phase | GateKind::GlobalPhase
        )
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Z | GateKind::Rz | GateKind::Phase | GateKind::GlobalPhase
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Phase => "PHASE",
            GateKind::GlobalPhase => "GLOBALPHASE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Polarity {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    pub fn required_bit(self) -> usize {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub q: usize,
    pub pol: Polarity,
}

impl Control {
    pub fn pos(q: usize) -> Self {
        Self {
            q,
            pol: Polarity::Positive,
        }
    }

    pub fn neg(q: usize) -> Self {
        Self {
            q,
            pol: Polarity::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRepr", into = "GateRepr")]
pub struct Gate {
    kind: GateKind,
    angle: f64,
    target: Option<usize>,
    controls: Vec<Control>,
}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    kind: GateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    targets: Vec<usize>,
    #[serde(default)]
    controls: Vec<Control>,
}

impl TryFrom<GateRepr> for Gate {
    type Error = Error;

    fn try_from(r: GateRepr) -> Result<Self> {
        let angle = match (r.kind.is_parametric(), r.angle) {
            (true, Some(a)) => a,
            (true, None) => {
                return Err(Error::InvalidGate(format!(
                    "{} needs an angle",
                    r.kind.name()
                )))
            }
            (false, _) => 0.0,
        };
        let target = match (r.kind, r.targets.as_slice()) {
            (GateKind::GlobalPhase, []) => None,
            (GateKind::GlobalPhase, _) => {
                return Err(Error::InvalidGate("GLOBALPHASE takes no target".into()))
            }
            (_, [t]) => Some(*t),
            (k, _) => {
                return Err(Error::InvalidGate(format!(
                    "{} takes exactly one target",
                    k.name()
                )))
            }
        };
        let g = Gate {
            kind: r.kind,
            angle,
            target,
            controls: r.controls,
        };
        g.check_distinct()?;
        Ok(g)
    }
}

impl From<Gate> for GateRepr {
    fn from(g: Gate) -> Self {
        GateRepr {
            kind: g.kind,
            angle: g.kind.is_parametric().then_some(g.angle),
            targets: g.target.into_iter().collect(),
            controls: g.controls,
        }
    }
}

impl Gate {
    fn single(kind: GateKind, target: usize, angle: f64) -> Self {
        Self {
            kind,
            angle,
            target: Some(target),
            controls: Vec::new(),
        }
    }

    pub fn h(t: usize) -> Self {
        Self::single(GateKind::H, t, 0.0)
    }

    pub fn x(t: usize) -> Self {
        Self::single(GateKind::X, t, 0.0)
    }

    pub fn y(t: usize) -> Self {
        Self::single(GateKind::Y, t, 0.0)
    }

    pub fn z(t: usize) -> Self {
        Self::single(GateKind::Z, t, 0.0)
    }

    pub fn rx(t: usize, angle: f64) -> Self {
        Self::single(GateKind::Rx, t, angle)
    }

    pub fn ry(t: usize, angle: f64) -> Self {
        Self::single(GateKind::Ry, t, angle)
    }

    pub fn rz(t: usize, angle: f64) -> Self {
        Self::single(GateKind::Rz, t, angle)
    }

    pub fn phase(t: usize, angle: f64) -> Self {
        Self::single(GateKind::Phase, t, angle)
    }

    pub fn global_phase(angle: f64) -> Self {
        Self {
            kind: GateKind::GlobalPhase,
            angle,
            target: None,
            controls: Vec::new(),
        }
    }

    /// CNOT with a positive control.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::x(target).controlled(Control::pos(control))
    }

    pub fn controlled(mut self, c: Control) -> Self {
        self.controls.push(c);
        self
    }

    pub fn with_controls(mut self, cs: impl IntoIterator<Item = Control>) -> Self {
        self.controls.extend(cs);
        self
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Every qubit the gate touches.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.target
            .into_iter()
            .chain(self.controls.iter().map(|c| c.q))
    }

    fn check_distinct(&self) -> Result<()> {
        let qs: Vec<usize> = self.qubits().collect();
        for (i, a) in qs.iter().enumerate() {
            if qs[i + 1..].contains(a) {
                return Err(Error::InvalidGate(format!(
                    "qubit {a} used twice in {}",
                    self.kind.name()
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        self.check_distinct()?;
        if let Some(q) = self.qubits().find(|&q| q >= width) {
            return Err(Error::InvalidGate(format!(
                "qubit {q} outside circuit width {width}"
            )));
        }
        if !self.angle.is_finite() {
            return Err(Error::InvalidGate("non-finite angle".into()));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        let angle = if self.kind.is_parametric() {
            -self.angle
        } else {
            self.angle
        };
        Self {
            angle,
            ..self.clone()
        }
    }

    /// Target matrix `[[a, b], [c, d]]` in row-major order; `None` for
    /// GLOBALPHASE.
    pub fn matrix(&self) -> Option<[Complex64; 4]> {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let (s, c) = (self.angle / 2.0).sin_cos();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Some(match self.kind {
            GateKind::H => [r.into(), r.into(), r.into(), (-r).into()],
            GateKind::X => [z, one, one, z],
            GateKind::Y => [z, -i, i, z],
            GateKind::Z => [one, z, z, -one],
            GateKind::Rx => [c.into(), -i * s, -i * s, c.into()],
            GateKind::Ry => [c.into(), (-s).into(), s.into(), c.into()],
            GateKind::Rz => [
                Complex64::from_polar(1.0, -self.angle / 2.0),
                z,
                z,
                Complex64::from_polar(1.0, self.angle / 2.0),
            ],
            GateKind::Phase => [one, z, z, Complex64::from_polar(1.0, self.angle)],
            GateKind::GlobalPhase => return None,
        })
    }

    /// Shifts every qubit index by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            target: self.target.map(|t| t + offset),
            controls: self
                .controls
                .iter()
                .map(|c| Control {
                    q: c.q + offset,
                    pol: c.pol,
                })
                .collect(),
            ..self.clone()
        }
    }

    /// Relabels every qubit through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Self {
        Self {
            target: self.target.map(&map),
            controls: self
                .controls
                .iter()
                .map(|c| Control {
                    q: map(c.q),
                    pol: c.pol,
                })
                .collect(),
            ..self.clone()
        }
    }

    /// Same kind and angle on new wires.
    pub(crate) fn rebuilt(&self, target: Option<usize>, controls: Vec<Control>) -> Self {
        Self {
            kind: self.kind,
            angle: self.angle,
            target,
            controls,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if self.kind.is_parametric() {
            write!(f, "({})", self.angle)?;
        }
        if let Some(t) = self.target {
            write!(f, " q{t}")?;
        }
        for c in &self.controls {
            let p = match c.pol {
                Polarity::Positive => '+',
                Polarity::Negative => '-',
            };
            write!(f, " {p}q{}", c.q)?;
        }
        Ok(())
    }
}

/// Which qubits hold the ancilla bank and which the system register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitRoles {
    pub ancilla: Range<usize>,
    pub system: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    roles: Option<QubitRoles>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
            roles: None,
        }
    }

    pub fn with_roles(mut self, roles: QubitRoles) -> Self {
        self.roles = Some(roles);
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn roles(&self) -> Option<&QubitRoles> {
        self.roles.as_ref()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`'s gates; widths must agree.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Re-validates every gate, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        self.gates
            .iter()
            .try_for_each(|g| g.validate(self.num_qubits))
    }

    /// Reversed order, each gate inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            roles: self.roles.clone(),
        }
    }

    /// Places this circuit on qubits `offset..offset + width` of a wider one.
    pub fn embedded(&self, offset: usize, width: usize) -> Result<Circuit> {
        if offset + self.num_qubits > width {
            return Err(Error::DimensionMismatch {
                expected: width,
                actual: offset + self.num_qubits,
            });
        }
        Ok(Circuit {
            num_qubits: width,
            gates: self.gates.iter().map(|g| g.shifted(offset)).collect(),
            roles: None,
        })
    }

    /// Relabels qubits through `map` into a circuit of width `width`.
    pub fn remapped(&self, width: usize, map: impl Fn(usize) -> usize) -> Result<Circuit> {
        let mut out = Circuit::new(width);
        for g in &self.gates {
            out.push(g.remapped(&map))?;
        }
        Ok(out)
    }

    /// Adds `extra` to the controls of every gate.
    pub fn with_extra_controls(&self, extra: &[Control]) -> Result<Circuit> {
        let mut out = Circuit::new(self.num_qubits);
        out.roles = self.roles.clone();
        for g in &self.gates {
            out.push(g.clone().with_controls(extra.iter().copied()))?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(s).map_err(|e| Error::InvalidGate(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}
