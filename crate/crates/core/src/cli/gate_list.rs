//! JSON gate list:
//! `{"n_data":..,"n_ancilla":..,"has_control":..,"gates":[{"kind":"cnot","operands":[["data",0],["data",1]]},..]}`.
//! Classical slots carry an extra `"bit": 0 | 1`.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind, QubitRef, Register, Variant};

#[derive(Debug, Serialize, Deserialize)]
struct GateDoc {
    kind: GateKind,
    operands: Vec<(Register, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bit: Option<u8>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CircuitDoc {
    n_data: usize,
    n_ancilla: usize,
    has_control: bool,
    gates: Vec<GateDoc>,
}

pub fn to_json(circuit: &Circuit) -> String {
    let doc = CircuitDoc {
        n_data: circuit.n_data,
        n_ancilla: circuit.n_ancilla,
        has_control: circuit.has_control,
        gates: circuit
            .gates
            .iter()
            .map(|g| GateDoc {
                kind: g.kind,
                operands: g.operands.iter().map(|q| (q.register, q.index)).collect(),
                bit: g.classical_bit.map(u8::from),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("gate list serializes")
}

/// Parses a gate list into a `custom` circuit. No structural validation is
/// done here; call [`Circuit::validate`] on the result.
pub fn from_json(text: &str) -> Result<Circuit, serde_json::Error> {
    let doc: CircuitDoc = serde_json::from_str(text)?;
    let mut circuit = Circuit::new(doc.n_data, doc.n_ancilla, doc.has_control, Variant::Custom);
    circuit.extend(doc.gates.into_iter().map(|g| {
        Gate {
            kind: g.kind,
            operands: g
                .operands
                .into_iter()
                .map(|(register, index)| QubitRef { register, index })
                .collect(),
            classical_bit: g.bit.map(|b| b != 0),
        }
    }));
    Ok(circuit)
}
