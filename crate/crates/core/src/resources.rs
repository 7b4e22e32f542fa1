//! Gate census and T-count under the AND/Toffoli cost model: an AND plus
//! its AND-dagger costs 4 T gates, a Toffoli costs 7, Clifford gates are free.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, GateKind, Variant};
use crate::synthesis::MIN_GENERAL_WIDTH;

pub const T_PER_AND_PAIR: usize = 4;
pub const T_PER_TOFFOLI: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResourceError {
    #[error("closed-form costs are only stated for n >= {min}, got {width}")]
    WidthTooSmall { width: usize, min: usize },
}

/// Closed-form `(ancilla, t_count)` of one adder family at a given width.
/// Signed because some reference formulas go negative at tiny widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub ancilla: i64,
    pub t_count: i64,
}

/// Adder families with published cost formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    Proposed,
    ProposedControlled,
    Cuccaro,
    DraperCla,
    Takahashi,
    Gidney,
}

impl Formula {
    pub fn for_variant(variant: Variant) -> Option<Formula> {
        match variant {
            Variant::Optimized => Some(Formula::Proposed),
            Variant::Controlled => Some(Formula::ProposedControlled),
            Variant::BaselineCuccaro => Some(Formula::Cuccaro),
            Variant::Unoptimized | Variant::Custom => None,
        }
    }
}

pub(crate) fn ceil_log2(n: usize) -> i64 {
    if n <= 1 {
        0
    } else {
        i64::from(usize::BITS - (n - 1).leading_zeros())
    }
}

pub fn expected_formulas(formula: Formula, n: usize) -> Result<Expected, ResourceError> {
    if n < MIN_GENERAL_WIDTH {
        return Err(ResourceError::WidthTooSmall {
            width: n,
            min: MIN_GENERAL_WIDTH,
        });
    }
    let n = n as i64;
    let (ancilla, t_count) = match formula {
        Formula::Proposed => (n - 3, 4 * n - 5),
        Formula::ProposedControlled => (n - 2, 11 * n - 15),
        Formula::Cuccaro => (n + 1, 14 * n - 21),
        Formula::DraperCla => {
            let lg = ceil_log2(n as usize);
            (2 * n - 2 * lg - 1, 70 * n - 84 * lg - 42)
        }
        Formula::Takahashi => (n, 14 * n - 7),
        Formula::Gidney => (2 * n - 1, 4 * n - 4),
    };
    Ok(Expected { ancilla, t_count })
}

/// Gate census of one circuit. Field names are the stable JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub variant: Variant,
    pub n: usize,
    pub a: Option<u64>,
    pub ancilla: usize,
    pub and_pairs: usize,
    pub toffoli: usize,
    pub cnot: usize,
    pub x: usize,
    pub cx_slots: usize,
    pub cx_emitted: usize,
    pub t_count: usize,
    pub formula_expected: Option<Expected>,
    pub conforms: bool,
}

impl ResourceReport {
    pub fn measured(&self) -> Expected {
        Expected {
            ancilla: self.ancilla as i64,
            t_count: self.t_count as i64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variant     {}", self.variant)?;
        writeln!(f, "n           {}", self.n)?;
        match self.a {
            Some(a) => writeln!(f, "a           {a}")?,
            None => writeln!(f, "a           -")?,
        }
        writeln!(f, "ancilla     {}", self.ancilla)?;
        writeln!(f, "and_pairs   {}", self.and_pairs)?;
        writeln!(f, "toffoli     {}", self.toffoli)?;
        writeln!(f, "cnot        {}", self.cnot)?;
        writeln!(f, "x           {}", self.x)?;
        writeln!(f, "cx_slots    {}", self.cx_slots)?;
        writeln!(f, "cx_emitted  {}", self.cx_emitted)?;
        writeln!(f, "t_count     {}", self.t_count)?;
        match self.formula_expected {
            Some(e) => writeln!(f, "expected    ancilla={} t_count={}", e.ancilla, e.t_count)?,
            None => writeln!(f, "expected    -")?,
        }
        writeln!(f, "conforms    {}", self.conforms)
    }
}

/// Width the closed forms are evaluated at: the effective width for the
/// proposed adders (even constants shrink the register), the full width
/// for the baseline.
fn formula_for(circuit: &Circuit) -> Option<Expected> {
    let formula = Formula::for_variant(circuit.variant)?;
    let width = match formula {
        Formula::Proposed | Formula::ProposedControlled => {
            let c = circuit.constant.as_ref()?;
            if c.is_identity() {
                return None;
            }
            c.effective_width()
        }
        _ => circuit.n_data,
    };
    expected_formulas(formula, width).ok()
}

pub fn census(circuit: &Circuit) -> Result<ResourceReport, CircuitError> {
    circuit.validate()?;
    let count = |kind| circuit.gates.iter().filter(|g| g.kind == kind).count();
    let and_pairs = count(GateKind::And);
    let toffoli = count(GateKind::Toffoli);
    let cx_slots = count(GateKind::CxClassical);
    let cx_emitted = circuit
        .gates
        .iter()
        .filter(|g| g.kind == GateKind::CxClassical && g.classical_bit == Some(true))
        .count();

    let mut report = ResourceReport {
        variant: circuit.variant,
        n: circuit.n_data,
        a: circuit.constant.map(|c| c.value),
        ancilla: circuit.n_ancilla,
        and_pairs,
        toffoli,
        cnot: count(GateKind::Cnot),
        x: count(GateKind::X),
        cx_slots,
        cx_emitted,
        t_count: T_PER_AND_PAIR * and_pairs + T_PER_TOFFOLI * toffoli,
        formula_expected: formula_for(circuit),
        conforms: true,
    };
    if let Some(expected) = report.formula_expected {
        report.conforms = check_conformance(&report, &expected).conforms;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldDiff {
    pub field: &'static str,
    pub expected: i64,
    pub measured: i64,
    /// `measured - expected`
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conformance {
    pub conforms: bool,
    pub diff: Vec<FieldDiff>,
}

/// Compares measured `(ancilla, t_count)` with a closed form.
pub fn check_conformance(report: &ResourceReport, expected: &Expected) -> Conformance {
    let measured = report.measured();
    let diff: Vec<FieldDiff> = [
        ("ancilla", expected.ancilla, measured.ancilla),
        ("t_count", expected.t_count, measured.t_count),
    ]
    .into_iter()
    .filter(|(_, e, m)| e != m)
    .map(|(field, expected, measured)| FieldDiff {
        field,
        expected,
        measured,
        delta: measured - expected,
    })
    .collect();
    Conformance {
        conforms: diff.is_empty(),
        diff,
    }
}
