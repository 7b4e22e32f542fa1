//! OpenQASM 3.0 lowering using only `x`, `cx` and `ccx`.
//!
//! Registers flatten to `b[0..n)`, `anc[0..m)` and `ctl[0..1)`. AND and
//! AND-dagger both lower to `ccx`, preceded by a `// and` or
//! `// and_dagger` marker so the cost model can be reapplied by readers.
//! Zero-bit classical slots are dropped; set slots become `x`.

use std::fmt::Write;

use crate::circuit::{Circuit, GateKind};
use crate::resources::ResourceReport;

pub fn emit(circuit: &Circuit, report: &ResourceReport) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\n");
    let json = serde_json::to_string(report).expect("report serializes");
    writeln!(out, "// resource_report: {json}").unwrap();
    writeln!(out, "// t_count={}", report.t_count).unwrap();
    out.push_str("include \"stdgates.inc\";\n");

    writeln!(out, "qubit[{}] b;", circuit.n_data).unwrap();
    if circuit.n_ancilla > 0 {
        writeln!(out, "qubit[{}] anc;", circuit.n_ancilla).unwrap();
    }
    if circuit.has_control {
        out.push_str("qubit[1] ctl;\n");
    }

    for gate in &circuit.gates {
        let ops: Vec<String> = gate.operands.iter().map(ToString::to_string).collect();
        let ops = ops.join(", ");
        match gate.kind {
            GateKind::CxClassical if gate.classical_bit != Some(true) => {}
            GateKind::X | GateKind::CxClassical => writeln!(out, "x {ops};").unwrap(),
            GateKind::Cnot => writeln!(out, "cx {ops};").unwrap(),
            GateKind::Toffoli => writeln!(out, "ccx {ops};").unwrap(),
            GateKind::And => writeln!(out, "// and\nccx {ops};").unwrap(),
            GateKind::AndDagger => writeln!(out, "// and_dagger\nccx {ops};").unwrap(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Variant;
    use crate::resources::census;
    use crate::synthesis::synth;

    #[test]
    fn skeleton() {
        let c = synth(3, 4, Variant::Optimized).unwrap();
        let text = emit(&c, &census(&c).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "OPENQASM 3.0;");
        assert!(lines[1].starts_with("// resource_report: {"));
        assert_eq!(lines[2], "// t_count=11");
        assert_eq!(lines[3], "include \"stdgates.inc\";");
        assert_eq!(lines[4], "qubit[4] b;");
        assert_eq!(lines[5], "qubit[1] anc;");
        assert_eq!(text.matches("ccx").count(), 3);
        assert_eq!(text.matches("// and\n").count(), 1);
        assert_eq!(text.matches("// and_dagger\n").count(), 1);
    }

    #[test]
    fn identity_has_no_gate_statements() {
        let c = synth(0, 8, Variant::Optimized).unwrap();
        let text = emit(&c, &census(&c).unwrap());
        assert!(text.ends_with("qubit[8] b;\n"));
    }

    #[test]
    fn controlled_declares_ctl() {
        let c = synth(5, 4, Variant::Controlled).unwrap();
        let text = emit(&c, &census(&c).unwrap());
        assert!(text.contains("qubit[1] ctl;\n"));
        assert!(text.contains("cx ctl[0], b[0];"));
    }
}
