//! Circuit IR for the classical-reversible gate set used by the adders.
//!
//! Qubits are addressed as `(register, index)` pairs. There is no global
//! numbering inside the IR; exporters decide how registers are flattened.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constant::Constant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Register {
    Data,
    Ancilla,
    Control,
}

impl Register {
    pub fn name(self) -> &'static str {
        match self {
            Register::Data => "data",
            Register::Ancilla => "ancilla",
            Register::Control => "control",
        }
    }
}

/// A qubit inside one of the circuit's registers. Data index 0 is the least
/// significant bit of the integer held in the data register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitRef {
    pub register: Register,
    pub index: usize,
}

impl QubitRef {
    pub const fn data(index: usize) -> Self {
        Self {
            register: Register::Data,
            index,
        }
    }

    pub const fn ancilla(index: usize) -> Self {
        Self {
            register: Register::Ancilla,
            index,
        }
    }

    /// The single qubit of the control register.
    pub const fn control() -> Self {
        Self {
            register: Register::Control,
            index: 0,
        }
    }
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.register {
            Register::Data => write!(f, "b[{}]", self.index),
            Register::Ancilla => write!(f, "anc[{}]", self.index),
            Register::Control => write!(f, "ctl[{}]", self.index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    X,
    CxClassical,
    Cnot,
    Toffoli,
    And,
    AndDagger,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::CxClassical => 1,
            GateKind::Cnot => 2,
            GateKind::Toffoli | GateKind::And | GateKind::AndDagger => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::CxClassical => "cx_classical",
            GateKind::Cnot => "cnot",
            GateKind::Toffoli => "toffoli",
            GateKind::And => "and",
            GateKind::AndDagger => "and_dagger",
        }
    }
}

/// One reversible gate. Operands store controls first and the target last.
///
/// `classical_bit` is only meaningful for [`GateKind::CxClassical`]; a slot
/// whose bit is `false` is a no-op that is kept so gate censuses can count
/// slots independently of the constant being added.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub operands: Vec<QubitRef>,
    pub classical_bit: Option<bool>,
}

fn sorted_pair(a: QubitRef, b: QubitRef) -> [QubitRef; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

impl Gate {
    pub fn x(target: QubitRef) -> Self {
        Self {
            kind: GateKind::X,
            operands: vec![target],
            classical_bit: None,
        }
    }

    /// Classically controlled X: flips `target` iff `bit` is set.
    pub fn classical_x(bit: bool, target: QubitRef) -> Self {
        Self {
            kind: GateKind::CxClassical,
            operands: vec![target],
            classical_bit: Some(bit),
        }
    }

    pub fn cnot(control: QubitRef, target: QubitRef) -> Self {
        Self {
            kind: GateKind::Cnot,
            operands: vec![control, target],
            classical_bit: None,
        }
    }

    pub fn toffoli(c1: QubitRef, c2: QubitRef, target: QubitRef) -> Self {
        Self::three(GateKind::Toffoli, c1, c2, target)
    }

    pub fn and(c1: QubitRef, c2: QubitRef, target: QubitRef) -> Self {
        Self::three(GateKind::And, c1, c2, target)
    }

    pub fn and_dagger(c1: QubitRef, c2: QubitRef, target: QubitRef) -> Self {
        Self::three(GateKind::AndDagger, c1, c2, target)
    }

    fn three(kind: GateKind, c1: QubitRef, c2: QubitRef, target: QubitRef) -> Self {
        let [lo, hi] = sorted_pair(c1, c2);
        Self {
            kind,
            operands: vec![lo, hi, target],
            classical_bit: None,
        }
    }

    pub fn target(&self) -> QubitRef {
        *self.operands.last().expect("gate without operands")
    }

    pub fn controls(&self) -> &[QubitRef] {
        &self.operands[..self.operands.len().saturating_sub(1)]
    }

    pub fn touches(&self, q: QubitRef) -> bool {
        self.operands.contains(&q)
    }

    /// True when the two gates act on at least one common qubit.
    pub fn overlaps(&self, other: &Gate) -> bool {
        self.operands.iter().any(|q| other.touches(*q))
    }

    /// A zero-bit classical slot, dropped on export.
    pub fn is_elidable(&self) -> bool {
        self.kind == GateKind::CxClassical && self.classical_bit == Some(false)
    }

    /// Gate-level inverse. Everything in the set is self-inverse except the
    /// AND / AND-dagger pair, which swap.
    pub fn inverse(&self) -> Gate {
        let kind = match self.kind {
            GateKind::And => GateKind::AndDagger,
            GateKind::AndDagger => GateKind::And,
            k => k,
        };
        Gate { kind, ..self.clone() }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let Some(bit) = self.classical_bit {
            write!(f, "[{}]", u8::from(bit))?;
        }
        let ops: Vec<String> = self.operands.iter().map(ToString::to_string).collect();
        write!(f, "({})", ops.join(", "))
    }
}

/// Which construction produced a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Unoptimized,
    Optimized,
    Controlled,
    BaselineCuccaro,
    Custom,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Unoptimized => "unoptimized",
            Variant::Optimized => "optimized",
            Variant::Controlled => "controlled",
            Variant::BaselineCuccaro => "baseline_cuccaro",
            Variant::Custom => "custom",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {index}: {kind:?} expects {expected} operand(s), found {found}")]
    ArityMismatch {
        index: usize,
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("gate {index}: classical bit must be present exactly on cx_classical slots")]
    ClassicalBitMismatch { index: usize },
    #[error("gate {index}: qubit {qubit} appears more than once")]
    DuplicateOperand { index: usize, qubit: QubitRef },
    #[error("gate {index}: qubit {qubit} is outside the declared registers")]
    UnknownQubit { index: usize, qubit: QubitRef },
    #[error("gate {index}: AND on {target} is never closed by an AND-dagger")]
    DanglingAnd { index: usize, target: QubitRef },
    #[error("gate {index}: AND-dagger on {target} does not match the most recent open AND")]
    MismatchedAndDagger { index: usize, target: QubitRef },
    #[error("circuits have different register layouts")]
    LayoutMismatch,
}

/// An ordered gate list over a data register, an ancilla register and an
/// optional single-qubit control register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n_data: usize,
    pub n_ancilla: usize,
    pub has_control: bool,
    pub gates: Vec<Gate>,
    pub variant: Variant,
    pub constant: Option<Constant>,
}

impl Circuit {
    pub fn new(n_data: usize, n_ancilla: usize, has_control: bool, variant: Variant) -> Self {
        Self {
            n_data,
            n_ancilla,
            has_control,
            gates: Vec::new(),
            variant,
            constant: None,
        }
    }

    pub fn with_constant(mut self, constant: Constant) -> Self {
        self.constant = Some(constant);
        self
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) {
        self.gates.extend(gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn register_size(&self, register: Register) -> usize {
        match register {
            Register::Data => self.n_data,
            Register::Ancilla => self.n_ancilla,
            Register::Control => usize::from(self.has_control),
        }
    }

    pub fn contains(&self, q: QubitRef) -> bool {
        q.index < self.register_size(q.register)
    }

    pub fn same_layout(&self, other: &Circuit) -> bool {
        self.n_data == other.n_data && self.n_ancilla == other.n_ancilla && self.has_control == other.has_control
    }

    /// Checks operand arity, operand resolution and AND / AND-dagger pairing.
    /// The error reports the first offending gate.
    pub fn validate(&self) -> Result<(), CircuitError> {
        // target -> stack of (gate index, sorted controls) for open ANDs
        let mut open: HashMap<QubitRef, Vec<(usize, [QubitRef; 2])>> = HashMap::new();

        for (index, gate) in self.gates.iter().enumerate() {
            let expected = gate.kind.arity();
            if gate.operands.len() != expected {
                return Err(CircuitError::ArityMismatch {
                    index,
                    kind: gate.kind,
                    expected,
                    found: gate.operands.len(),
                });
            }
            if (gate.kind == GateKind::CxClassical) != gate.classical_bit.is_some() {
                return Err(CircuitError::ClassicalBitMismatch { index });
            }
            for (pos, &q) in gate.operands.iter().enumerate() {
                if !self.contains(q) {
                    return Err(CircuitError::UnknownQubit { index, qubit: q });
                }
                if gate.operands[..pos].contains(&q) {
                    return Err(CircuitError::DuplicateOperand { index, qubit: q });
                }
            }

            match gate.kind {
                GateKind::And => {
                    let controls = sorted_pair(gate.operands[0], gate.operands[1]);
                    open.entry(gate.target()).or_default().push((index, controls));
                }
                GateKind::AndDagger => {
                    let target = gate.target();
                    let controls = sorted_pair(gate.operands[0], gate.operands[1]);
                    match open.get_mut(&target).and_then(|s| s.pop()) {
                        Some((_, c)) if c == controls => {}
                        _ => return Err(CircuitError::MismatchedAndDagger { index, target }),
                    }
                }
                _ => {}
            }
        }

        let first_open = open
            .into_iter()
            .flat_map(|(target, stack)| stack.into_iter().map(move |(i, _)| (i, target)))
            .min_by_key(|&(i, _)| i);
        match first_open {
            Some((index, target)) => Err(CircuitError::DanglingAnd { index, target }),
            None => Ok(()),
        }
    }

    /// Reversed gate order with AND and AND-dagger swapped.
    pub fn adjoint(&self) -> Result<Circuit, CircuitError> {
        self.validate()?;
        let gates = self.gates.iter().rev().map(Gate::inverse).collect();
        Ok(Circuit { gates, ..self.clone() })
    }

    /// `self` followed by `other` on the same registers.
    pub fn then(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if !self.same_layout(other) {
            return Err(CircuitError::LayoutMismatch);
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        if out.constant != other.constant {
            out.constant = None;
            out.variant = Variant::Custom;
        }
        Ok(out)
    }
}
