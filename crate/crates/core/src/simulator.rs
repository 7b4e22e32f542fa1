//! Basis-state simulation. Every gate in the IR maps computational basis
//! states to basis states, so a state is just a few packed words and two
//! circuits are equal as unitaries iff they agree on every basis input.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, QubitRef, Register};
use crate::constant::MAX_WIDTH;

/// Default limit on `n_data + has_control` for exhaustive tables.
pub const DEFAULT_TABLE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BasisState {
    pub data: u64,
    pub ancilla: u64,
    pub control: bool,
}

impl BasisState {
    pub fn data(data: u64) -> Self {
        Self {
            data,
            ..Self::default()
        }
    }

    pub fn controlled(data: u64, control: bool) -> Self {
        Self {
            data,
            ancilla: 0,
            control,
        }
    }

    pub fn get(&self, q: QubitRef) -> bool {
        match q.register {
            Register::Data => (self.data >> q.index) & 1 == 1,
            Register::Ancilla => (self.ancilla >> q.index) & 1 == 1,
            Register::Control => self.control,
        }
    }

    pub fn flip(&mut self, q: QubitRef) {
        match q.register {
            Register::Data => self.data ^= 1 << q.index,
            Register::Ancilla => self.ancilla ^= 1 << q.index,
            Register::Control => self.control = !self.control,
        }
    }
}

/// Why a single gate could not be applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GateFault {
    #[error("AND target {0} is not |0>")]
    AndTargetNotZero(QubitRef),
    #[error("AND-dagger target {0} does not hold the conjunction of its controls")]
    AndDaggerMismatch(QubitRef),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Invalid(#[from] CircuitError),
    #[error("gate {index}: AND target {target} is not |0>")]
    AndTargetNotZero { index: usize, target: QubitRef },
    #[error("gate {index}: AND-dagger target {target} does not hold the conjunction of its controls")]
    AndDaggerMismatch { index: usize, target: QubitRef },
    #[error("ancilla register must start at 0, got {ancilla:#b}")]
    AncillaNotZero { ancilla: u64 },
    #[error("ancilla register left dirty: {ancilla:#b}")]
    DirtyAncilla { ancilla: u64 },
    #[error("{qubits} input qubits exceed the exhaustive cap of {cap}")]
    CapExceeded { qubits: usize, cap: usize },
    #[error("register of {size} qubits exceeds the simulator word size")]
    RegisterTooWide { size: usize },
    #[error("circuits act on different input registers")]
    LayoutMismatch,
    #[error("permutation table is not a bijection: output {output} reached twice")]
    NotBijective { output: u64 },
}

/// Applies one gate to a basis state.
pub fn apply_gate(mut state: BasisState, gate: &Gate) -> Result<BasisState, GateFault> {
    let ops = &gate.operands;
    match gate.kind {
        GateKind::X => state.flip(ops[0]),
        GateKind::CxClassical => {
            if gate.classical_bit == Some(true) {
                state.flip(ops[0]);
            }
        }
        GateKind::Cnot => {
            if state.get(ops[0]) {
                state.flip(ops[1]);
            }
        }
        GateKind::Toffoli => {
            if state.get(ops[0]) && state.get(ops[1]) {
                state.flip(ops[2]);
            }
        }
        GateKind::And => {
            if state.get(ops[2]) {
                return Err(GateFault::AndTargetNotZero(ops[2]));
            }
            if state.get(ops[0]) && state.get(ops[1]) {
                state.flip(ops[2]);
            }
        }
        GateKind::AndDagger => {
            let conj = state.get(ops[0]) && state.get(ops[1]);
            if state.get(ops[2]) != conj {
                return Err(GateFault::AndDaggerMismatch(ops[2]));
            }
            if conj {
                state.flip(ops[2]);
            }
        }
    }
    Ok(state)
}

/// A validated circuit ready for repeated simulation. Holds only a shared
/// borrow, so any number of sweeps can run over one circuit concurrently.
#[derive(Debug, Clone, Copy)]
pub struct Simulator<'c> {
    circuit: &'c Circuit,
}

impl<'c> Simulator<'c> {
    pub fn new(circuit: &'c Circuit) -> Result<Self, SimError> {
        circuit.validate()?;
        for size in [circuit.n_data, circuit.n_ancilla] {
            if size > MAX_WIDTH {
                return Err(SimError::RegisterTooWide { size });
            }
        }
        Ok(Self { circuit })
    }

    pub fn circuit(&self) -> &'c Circuit {
        self.circuit
    }

    /// Applies every gate in order with no ancilla bookkeeping.
    pub fn execute(&self, mut state: BasisState) -> Result<BasisState, SimError> {
        for (index, gate) in self.circuit.gates.iter().enumerate() {
            state = apply_gate(state, gate).map_err(|fault| match fault {
                GateFault::AndTargetNotZero(target) => SimError::AndTargetNotZero { index, target },
                GateFault::AndDaggerMismatch(target) => SimError::AndDaggerMismatch { index, target },
            })?;
        }
        Ok(state)
    }

    /// Runs from a clean ancilla register and requires it to end clean.
    pub fn run(&self, input: BasisState) -> Result<BasisState, SimError> {
        if input.ancilla != 0 {
            return Err(SimError::AncillaNotZero { ancilla: input.ancilla });
        }
        let out = self.execute(input)?;
        if out.ancilla != 0 {
            return Err(SimError::DirtyAncilla { ancilla: out.ancilla });
        }
        Ok(out)
    }

    /// Number of bits in a packed input index: data bits, then the control.
    pub fn input_bits(&self) -> usize {
        self.circuit.n_data + usize::from(self.circuit.has_control)
    }

    pub fn unpack(&self, input: u64) -> BasisState {
        let n = self.circuit.n_data;
        let data = input & crate::constant::low_mask(n);
        let control = self.circuit.has_control && (input >> n) & 1 == 1;
        BasisState::controlled(data, control)
    }

    pub fn pack(&self, state: BasisState) -> u64 {
        let control = if self.circuit.has_control {
            u64::from(state.control) << self.circuit.n_data
        } else {
            0
        };
        state.data | control
    }

    /// Runs a packed input index and returns the packed output index.
    pub fn run_packed(&self, input: u64) -> Result<u64, SimError> {
        self.run(self.unpack(input)).map(|s| self.pack(s))
    }
}

/// Convenience wrapper: validate, then [`Simulator::run`].
pub fn run(circuit: &Circuit, input: BasisState) -> Result<BasisState, SimError> {
    Simulator::new(circuit)?.run(input)
}

/// The permutation a circuit induces on its data (and control) register.
/// Entry `i` is the packed output for packed input `i`; the control bit,
/// when present, sits just above the data bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationTable {
    pub n_data: usize,
    pub has_control: bool,
    pub outputs: Vec<u64>,
}

impl PermutationTable {
    pub fn get(&self, input: u64) -> u64 {
        self.outputs[input as usize]
    }
}

pub fn permutation_table(circuit: &Circuit) -> Result<PermutationTable, SimError> {
    permutation_table_with_cap(circuit, DEFAULT_TABLE_CAP)
}

pub fn permutation_table_with_cap(circuit: &Circuit, cap: usize) -> Result<PermutationTable, SimError> {
    let sim = Simulator::new(circuit)?;
    let bits = sim.input_bits();
    if bits > cap {
        return Err(SimError::CapExceeded { qubits: bits, cap });
    }
    let results: Vec<Result<u64, SimError>> = (0..1u64 << bits).into_par_iter().map(|i| sim.run_packed(i)).collect();
    let mut outputs = Vec::with_capacity(results.len());
    for r in results {
        outputs.push(r?);
    }

    let mut seen = vec![false; outputs.len()];
    for &o in &outputs {
        let slot = &mut seen[o as usize];
        if *slot {
            return Err(SimError::NotBijective { output: o });
        }
        *slot = true;
    }
    Ok(PermutationTable {
        n_data: circuit.n_data,
        has_control: circuit.has_control,
        outputs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Packed input (data bits, control bit above them).
    pub input: u64,
    pub left: u64,
    pub right: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Differs(Counterexample),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Compares two circuits over the same data/control registers on every
/// basis input. Ancilla register sizes may differ.
pub fn assert_equivalent(left: &Circuit, right: &Circuit) -> Result<Equivalence, SimError> {
    if left.n_data != right.n_data || left.has_control != right.has_control {
        return Err(SimError::LayoutMismatch);
    }
    let lt = permutation_table(left)?;
    let rt = permutation_table(right)?;
    let diff = lt.outputs.iter().zip(&rt.outputs).position(|(l, r)| l != r);
    Ok(match diff {
        None => Equivalence::Equivalent,
        Some(i) => Equivalence::Differs(Counterexample {
            input: i as u64,
            left: lt.outputs[i],
            right: rt.outputs[i],
        }),
    })
}
