//! Reduction-based adder by constant: load the constant into a second
//! register with X gates, run an in-place quantum-quantum adder, unload.
//!
//! The quantum-quantum adder is a Cuccaro-style MAJ/UMA ripple without
//! carry-out. Layout of its ancilla register: `anc[0..n)` holds the addend,
//! `anc[n]` is the zeroed carry-in.

use std::fmt;

use serde::Serialize;

use crate::circuit::{Circuit, Gate, QubitRef, Variant};
use crate::constant::Constant;
use crate::resources::{census, expected_formulas, Formula};
use crate::synthesis::{synth_optimized, SynthError};

pub fn addend_qubit(i: usize) -> QubitRef {
    QubitRef::ancilla(i)
}

pub fn carry_in_qubit(width: usize) -> QubitRef {
    QubitRef::ancilla(width)
}

fn maj(c: QubitRef, b: QubitRef, a: QubitRef) -> [Gate; 3] {
    [Gate::cnot(a, b), Gate::cnot(a, c), Gate::toffoli(c, b, a)]
}

fn uma(c: QubitRef, b: QubitRef, a: QubitRef) -> [Gate; 3] {
    [Gate::toffoli(c, b, a), Gate::cnot(a, c), Gate::cnot(c, b)]
}

/// In-place `b <- (a + b) mod 2^n` with `a` on `anc[0..n)` and a clean
/// carry-in at `anc[n]`. The top sum bit is finished with two CNOTs, so
/// the circuit has `2n - 2` Toffolis.
pub fn synth_cuccaro_mod(width: usize) -> Result<Circuit, SynthError> {
    if width == 0 {
        return Err(SynthError::WidthZero);
    }
    let a = addend_qubit;
    let b = QubitRef::data;
    let c0 = carry_in_qubit(width);
    // qubit carrying c_i into position i
    let carry = |i: usize| if i == 0 { c0 } else { a(i - 1) };

    let mut circuit = Circuit::new(width, width + 1, false, Variant::BaselineCuccaro);
    let top = width - 1;
    for i in 0..top {
        circuit.extend(maj(carry(i), b(i), a(i)));
    }
    circuit.push(Gate::cnot(a(top), b(top)));
    if top > 0 {
        circuit.push(Gate::cnot(carry(top), b(top)));
    }
    for i in (0..top).rev() {
        circuit.extend(uma(carry(i), b(i), a(i)));
    }
    Ok(circuit)
}

/// Wraps a two-register adder so it adds the classical `constant`: X gates
/// load the constant's bits into the addend register before the adder and
/// clear them afterwards.
pub fn reduce_to_constant(adder: &Circuit, constant: &Constant) -> Result<Circuit, SynthError> {
    let n = adder.n_data;
    if constant.width != n || adder.n_ancilla < n || adder.has_control {
        return Err(SynthError::WidthMismatch {
            expected: format!("{n}"),
            found: constant.width,
        });
    }
    let loads: Vec<Gate> = (0..n)
        .filter(|&i| (constant.value >> i) & 1 == 1)
        .map(|i| Gate::x(addend_qubit(i)))
        .collect();

    let mut circuit = Circuit::new(n, adder.n_ancilla, false, Variant::BaselineCuccaro).with_constant(*constant);
    circuit.extend(loads.iter().cloned());
    circuit.extend(adder.gates.iter().cloned());
    circuit.extend(loads);
    Ok(circuit)
}

/// Reduction-based constant adder over the Cuccaro ripple at full width.
pub fn constant_adder(constant: &Constant) -> Circuit {
    let adder = synth_cuccaro_mod(constant.width).expect("normalized constants have nonzero width");
    reduce_to_constant(&adder, constant).expect("adder width matches the constant")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub name: &'static str,
    pub ancilla_formula: i64,
    pub t_formula: i64,
    pub ancilla_measured: Option<usize>,
    pub t_measured: Option<usize>,
}

impl ComparisonRow {
    /// `measured - formula` for `(ancilla, t_count)` where measured exists.
    pub fn delta(&self) -> Option<(i64, i64)> {
        Some((
            self.ancilla_measured? as i64 - self.ancilla_formula,
            self.t_measured? as i64 - self.t_formula,
        ))
    }

    pub fn matches_formula(&self) -> bool {
        self.delta().is_none_or(|d| d == (0, 0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonTable {
    pub n: usize,
    pub rows: Vec<ComparisonRow>,
}

fn row(
    name: &'static str,
    formula: Formula,
    n: usize,
    measured: Option<(usize, usize)>,
) -> Result<ComparisonRow, SynthError> {
    let e = expected_formulas(formula, n).map_err(|_| SynthError::WidthTooSmall { width: n, min: 4 })?;
    Ok(ComparisonRow {
        name,
        ancilla_formula: e.ancilla,
        t_formula: e.t_count,
        ancilla_measured: measured.map(|m| m.0),
        t_measured: measured.map(|m| m.1),
    })
}

/// Cost comparison at width `n`. Measured values are filled for the
/// reduction-based Cuccaro baseline and the proposed optimized adder; the
/// remaining rows are closed forms only. Costs do not depend on the constant,
/// so the all-ones constant is used.
pub fn comparison_table(n: usize) -> Result<ComparisonTable, SynthError> {
    if n < 4 {
        return Err(SynthError::WidthTooSmall { width: n, min: 4 });
    }
    let c = Constant::normalize(u64::MAX, n)?;
    let measure = |circuit: &Circuit| {
        let r = census(circuit).expect("synthesized circuits validate");
        (r.ancilla, r.t_count)
    };
    let cuccaro = measure(&constant_adder(&c));
    let proposed = measure(&synth_optimized(&c)?);

    Ok(ComparisonTable {
        n,
        rows: vec![
            row("Cuccaro RCA", Formula::Cuccaro, n, Some(cuccaro))?,
            row("Draper CLA", Formula::DraperCla, n, None)?,
            row("Takahashi RCA", Formula::Takahashi, n, None)?,
            row("Gidney RCA", Formula::Gidney, n, None)?,
            row("Proposed", Formula::Proposed, n, Some(proposed))?,
        ],
    })
}

impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        let signed = |v: i64| if v > 0 { format!("+{v}") } else { v.to_string() };
        writeln!(f, "n = {}", self.n)?;
        writeln!(
            f,
            "{:<14} {:>11} {:>12} {:>10} {:>11} {:>13} {:>7}",
            "adder", "ancilla(f)", "ancilla(m)", "t(f)", "t(m)", "d_ancilla", "d_t"
        )?;
        for r in &self.rows {
            let (da, dt) = r
                .delta()
                .map_or(("-".into(), "-".into()), |(a, t)| (signed(a), signed(t)));
            writeln!(
                f,
                "{:<14} {:>11} {:>12} {:>10} {:>11} {:>13} {:>7}",
                r.name,
                r.ancilla_formula,
                opt(r.ancilla_measured),
                r.t_formula,
                opt(r.t_measured),
                da,
                dt
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::simulator::{BasisState, Simulator};

    #[test]
    fn cuccaro_adds_two_registers() {
        let c = synth_cuccaro_mod(3).unwrap();
        let sim = Simulator::new(&c).unwrap();
        let out = sim
            .execute(BasisState {
                data: 6,
                ancilla: 3,
                control: false,
            })
            .unwrap();
        assert_eq!(out.data, 1);
        assert_eq!(out.ancilla, 3, "addend and carry-in restored");
    }

    #[test]
    fn cuccaro_exhaustive_width_five() {
        let c = synth_cuccaro_mod(5).unwrap();
        let sim = Simulator::new(&c).unwrap();
        for a in 0..32u64 {
            for b in 0..32u64 {
                let out = sim
                    .execute(BasisState {
                        data: b,
                        ancilla: a,
                        control: false,
                    })
                    .unwrap();
                assert_eq!((out.data, out.ancilla), ((a + b) % 32, a));
            }
        }
    }

    #[test]
    fn cuccaro_toffoli_count() {
        for n in 1..=12 {
            let c = synth_cuccaro_mod(n).unwrap();
            assert_eq!(
                c.gates.iter().filter(|g| g.kind == GateKind::Toffoli).count(),
                2 * n - 2
            );
        }
    }

    #[test]
    fn reduction_allocates_n_plus_one_ancillas() {
        let zero = constant_adder(&Constant::normalize(0, 5).unwrap());
        assert_eq!(zero.n_ancilla, 6);
        assert!(zero.gates.iter().all(|g| g.kind != GateKind::X));

        let adder = synth_cuccaro_mod(4).unwrap();
        assert!(reduce_to_constant(&adder, &Constant::normalize(3, 5).unwrap()).is_err());
    }

    #[test]
    fn table_rows() {
        let t = comparison_table(5).unwrap();
        let proposed = t.rows.iter().find(|r| r.name == "Proposed").unwrap();
        assert_eq!((proposed.ancilla_formula, proposed.t_formula), (2, 15));
        assert_eq!((proposed.ancilla_measured, proposed.t_measured), (Some(2), Some(15)));
        let cuccaro = &t.rows[0];
        assert_eq!((cuccaro.ancilla_formula, cuccaro.t_formula), (6, 49));
        assert_eq!((cuccaro.ancilla_measured, cuccaro.t_measured), (Some(6), Some(56)));
        assert_eq!(cuccaro.delta(), Some((0, 7)));

        let gidney = comparison_table(8)
            .unwrap()
            .rows
            .into_iter()
            .find(|r| r.name == "Gidney RCA")
            .unwrap();
        assert_eq!((gidney.ancilla_formula, gidney.t_formula), (15, 28));
        assert!(comparison_table(3).is_err());
    }
}
