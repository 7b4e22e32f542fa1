//! Peephole rewrites over the reversible gate set.
//!
//! Two gates are treated as commuting only when they act on disjoint
//! qubits. A gate may therefore be paired with a later gate if everything
//! in between is disjoint from it.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassReport {
    pub pass_name: String,
    pub gates_before: usize,
    pub gates_after: usize,
    pub iterations_to_fixpoint: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PassError {
    #[error(transparent)]
    Invalid(#[from] CircuitError),
    #[error("unknown pass `{0}` (expected `cancel-inverses` or `merge-classical-x`)")]
    UnknownPass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pass {
    CancelInverses,
    MergeClassicalX,
}

impl Pass {
    pub fn name(self) -> &'static str {
        match self {
            Pass::CancelInverses => "cancel-inverses",
            Pass::MergeClassicalX => "merge-classical-x",
        }
    }

    pub fn apply(self, circuit: &Circuit) -> Result<(Circuit, PassReport), PassError> {
        match self {
            Pass::CancelInverses => cancel_adjacent_inverses(circuit),
            Pass::MergeClassicalX => merge_classical_x(circuit),
        }
    }
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pass {
    type Err = PassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "cancel-inverses" | "cancel" => Ok(Pass::CancelInverses),
            "merge-classical-x" | "merge" => Ok(Pass::MergeClassicalX),
            other => Err(PassError::UnknownPass(other.to_string())),
        }
    }
}

/// Parses a comma separated pass list such as `cancel-inverses,merge-classical-x`.
pub fn parse_pipeline(spec: &str) -> Result<Vec<Pass>, PassError> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// The default pipeline: inverse cancellation, then slot merging.
pub const DEFAULT_PIPELINE: [Pass; 2] = [Pass::CancelInverses, Pass::MergeClassicalX];

/// Index of the first live gate after `i` that shares a qubit with gate `i`.
fn next_overlapping(gates: &[Gate], live: &[bool], i: usize) -> Option<usize> {
    (i + 1..gates.len()).find(|&j| live[j] && gates[j].overlaps(&gates[i]))
}

fn compact(gates: Vec<Gate>, live: &[bool]) -> Vec<Gate> {
    gates
        .into_iter()
        .zip(live)
        .filter_map(|(g, &keep)| keep.then_some(g))
        .collect()
}

/// One left-to-right sweep; returns the number of removed pairs.
fn cancel_sweep(gates: &mut Vec<Gate>) -> usize {
    let mut live = vec![true; gates.len()];
    let mut removed = 0;
    for i in 0..gates.len() {
        if !live[i] {
            continue;
        }
        if let Some(j) = next_overlapping(gates, &live, i) {
            if gates[j] == gates[i].inverse() {
                live[i] = false;
                live[j] = false;
                removed += 1;
            }
        }
    }
    *gates = compact(std::mem::take(gates), &live);
    removed
}

/// Removes pairs `(g, g^-1)` separated only by gates disjoint from `g`,
/// repeating until no pair remains.
pub fn cancel_adjacent_inverses(circuit: &Circuit) -> Result<(Circuit, PassReport), PassError> {
    circuit.validate()?;
    let mut gates = circuit.gates.clone();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if cancel_sweep(&mut gates) == 0 {
            break;
        }
    }
    finish(circuit, gates, Pass::CancelInverses, iterations)
}

/// One sweep merging each classical slot into the next gate on its qubit
/// when that gate is a classical slot or a plain X.
fn merge_sweep(gates: &mut Vec<Gate>) -> usize {
    let mut live = vec![true; gates.len()];
    let mut merged = 0;
    for i in 0..gates.len() {
        if !live[i] || gates[i].kind != GateKind::CxClassical {
            continue;
        }
        let Some(j) = next_overlapping(gates, &live, i) else {
            continue;
        };
        let bit = gates[i].classical_bit.unwrap_or(false);
        let combined = match gates[j].kind {
            GateKind::CxClassical => bit ^ gates[j].classical_bit.unwrap_or(false),
            GateKind::X => !bit,
            _ => continue,
        };
        gates[j] = Gate::classical_x(combined, gates[j].target());
        live[i] = false;
        merged += 1;
    }
    *gates = compact(std::mem::take(gates), &live);
    merged
}

/// Folds runs of classically controlled X slots (and plain X gates) on one
/// qubit into a single slot whose bit is the XOR of the run.
pub fn merge_classical_x(circuit: &Circuit) -> Result<(Circuit, PassReport), PassError> {
    circuit.validate()?;
    let mut gates = circuit.gates.clone();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if merge_sweep(&mut gates) == 0 {
            break;
        }
    }
    finish(circuit, gates, Pass::MergeClassicalX, iterations)
}

fn finish(
    circuit: &Circuit,
    gates: Vec<Gate>,
    pass: Pass,
    iterations: usize,
) -> Result<(Circuit, PassReport), PassError> {
    let report = PassReport {
        pass_name: pass.name().to_string(),
        gates_before: circuit.gates.len(),
        gates_after: gates.len(),
        iterations_to_fixpoint: iterations,
    };
    let out = Circuit {
        gates,
        ..circuit.clone()
    };
    out.validate()?;
    Ok((out, report))
}

/// Runs the passes in order, repeating the whole list until a round leaves
/// the circuit unchanged. Every pass only removes gates, so the number of
/// rounds is bounded by the initial gate count.
pub fn run_pipeline(circuit: &Circuit, passes: &[Pass]) -> Result<(Circuit, Vec<PassReport>), PassError> {
    circuit.validate()?;
    let mut current = circuit.clone();
    let mut reports = Vec::new();
    if passes.is_empty() {
        return Ok((current, reports));
    }
    for _ in 0..=circuit.gates.len() {
        let before = current.gates.clone();
        for pass in passes {
            let (next, report) = pass.apply(&current)?;
            reports.push(report);
            current = next;
        }
        if current.gates == before {
            break;
        }
    }
    Ok((current, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{QubitRef, Variant};
    use crate::constant::Constant;
    use crate::simulator::assert_equivalent;
    use crate::synthesis::synth_unoptimized;

    fn d(i: usize) -> QubitRef {
        QubitRef::data(i)
    }

    fn circuit(n: usize, gates: Vec<Gate>) -> Circuit {
        let mut c = Circuit::new(n, 0, false, Variant::Custom);
        c.extend(gates);
        c
    }

    #[test]
    fn cnot_pair_cancels() {
        let c = circuit(2, vec![Gate::cnot(d(0), d(1)), Gate::cnot(d(0), d(1))]);
        let (out, report) = cancel_adjacent_inverses(&c).unwrap();
        assert!(out.is_empty());
        assert_eq!((report.gates_before, report.gates_after), (2, 0));
    }

    #[test]
    fn cancellation_skips_disjoint_gates() {
        let t = Gate::toffoli(d(0), d(1), d(2));
        let c = circuit(4, vec![t.clone(), Gate::x(d(3)), t]);
        let (out, _) = cancel_adjacent_inverses(&c).unwrap();
        assert_eq!(out.gates, vec![Gate::x(d(3))]);
    }

    #[test]
    fn cancellation_stops_at_overlap() {
        let c = circuit(2, vec![Gate::cnot(d(0), d(1)), Gate::x(d(0)), Gate::cnot(d(0), d(1))]);
        let (out, _) = cancel_adjacent_inverses(&c).unwrap();
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn and_pair_cancels_only_as_exact_inverse() {
        let c = circuit(3, vec![Gate::and(d(0), d(1), d(2)), Gate::and_dagger(d(1), d(0), d(2))]);
        assert!(cancel_adjacent_inverses(&c).unwrap().0.is_empty());
    }

    #[test]
    fn slot_merging() {
        let q = d(0);
        let merged = |gates| merge_classical_x(&circuit(1, gates)).unwrap().0.gates;
        assert_eq!(
            merged(vec![Gate::classical_x(true, q), Gate::classical_x(true, q)]),
            vec![Gate::classical_x(false, q)]
        );
        assert_eq!(
            merged(vec![Gate::classical_x(true, q), Gate::classical_x(false, q)]),
            vec![Gate::classical_x(true, q)]
        );
        assert_eq!(
            merged(vec![Gate::classical_x(true, q), Gate::x(q)]),
            vec![Gate::classical_x(false, q)]
        );
    }

    #[test]
    fn merge_respects_intervening_gates() {
        let c = circuit(
            2,
            vec![
                Gate::classical_x(true, d(1)),
                Gate::cnot(d(0), d(1)),
                Gate::classical_x(true, d(1)),
            ],
        );
        assert_eq!(merge_classical_x(&c).unwrap().0.len(), 3);
        let c = circuit(
            2,
            vec![
                Gate::classical_x(true, d(1)),
                Gate::x(d(0)),
                Gate::classical_x(true, d(1)),
            ],
        );
        assert_eq!(merge_classical_x(&c).unwrap().0.len(), 2);
    }

    #[test]
    fn pass_names_parse() {
        assert_eq!(
            parse_pipeline("cancel-inverses,merge-classical-x").unwrap(),
            DEFAULT_PIPELINE.to_vec()
        );
        assert_eq!(parse_pipeline("").unwrap(), vec![]);
        assert_eq!(
            parse_pipeline("cancel,fuse"),
            Err(PassError::UnknownPass("fuse".into()))
        );
    }

    #[test]
    fn empty_pipeline_is_identity() {
        let c = synth_unoptimized(&Constant::normalize(5, 5).unwrap()).unwrap();
        let (out, reports) = run_pipeline(&c, &[]).unwrap();
        assert_eq!(out, c);
        assert!(reports.is_empty());
    }

    #[test]
    fn cancellation_reproduces_linear_toffoli_count_at_five() {
        for a in (1..32).step_by(2) {
            let c = synth_unoptimized(&Constant::normalize(a, 5).unwrap()).unwrap();
            let (out, report) = cancel_adjacent_inverses(&c).unwrap();
            let toffolis = out.gates.iter().filter(|g| g.kind == GateKind::Toffoli).count();
            assert_eq!(toffolis, 6, "a={a}");
            assert!(report.gates_after <= report.gates_before);
            assert!(assert_equivalent(&c, &out).unwrap().is_equivalent());
        }
    }

    #[test]
    fn invalid_input_is_rejected() {
        let c = circuit(3, vec![Gate::and(d(0), d(1), d(2))]);
        assert!(matches!(cancel_adjacent_inverses(&c), Err(PassError::Invalid(_))));
        assert!(matches!(
            run_pipeline(&c, &DEFAULT_PIPELINE),
            Err(PassError::Invalid(_))
        ));
    }
}
