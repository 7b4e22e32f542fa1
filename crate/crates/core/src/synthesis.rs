//! Adder-by-constant synthesis.
//!
//! All builders work on the top `effective_width` data qubits of the
//! register: an even constant `a = a' << z` is added by running the adder
//! for the odd `a'` on qubits `z..n`. Below, `n` is the effective width,
//! `a_i` are the bits of the odd part and `b_i` the shifted data qubits.
//!
//! Carries follow `c_0 = 0`, `c_1 = b_0` (the odd part has `a_0 = 1`) and
//! `c_{i+1} = MAJ(b_i, c_i, a_i)`. In the optimized and controlled adders
//! `c_1` is read straight from `b_0`; `c_{i+1}` for `i >= 1` lives on
//! ancilla `i - 1`.

use thiserror::Error;

use crate::baseline;
use crate::circuit::{Circuit, Gate, QubitRef, Register, Variant};
use crate::constant::Constant;

/// Smallest effective width handled by the general constructions.
pub const MIN_GENERAL_WIDTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("register width must be at least 1")]
    WidthZero,
    #[error("width {width} exceeds the supported maximum of {max}")]
    WidthTooLarge { width: usize, max: usize },
    #[error("effective width {width} is below the minimum of {min} for this construction")]
    WidthTooSmall { width: usize, min: usize },
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: String, found: usize },
    #[error("MAJ block operands must be three distinct qubits, {0} repeats")]
    OperandCollision(QubitRef),
    #[error("variant `{0}` cannot be synthesized from a constant")]
    UnsupportedVariant(Variant),
}

/// Majority of three bits, `floor((x + y + a) / 2)`.
pub fn maj_value(x: bool, y: bool, a: bool) -> bool {
    (u8::from(x) + u8::from(y) + u8::from(a)) / 2 == 1
}

/// Writes `MAJ(x, y, a_bit)` into the clean qubit `t` using one Toffoli and
/// five classically controlled X slots; `x` and `y` are restored.
///
/// Uses `MAJ(x, y, a) = ((x ^ a) & (y ^ a)) ^ a`.
pub fn maj_block(a_bit: bool, x: QubitRef, y: QubitRef, t: QubitRef) -> Result<Vec<Gate>, SynthError> {
    if x == y || x == t {
        return Err(SynthError::OperandCollision(x));
    }
    if y == t {
        return Err(SynthError::OperandCollision(y));
    }
    Ok(vec![
        Gate::classical_x(a_bit, x),
        Gate::classical_x(a_bit, y),
        Gate::toffoli(x, y, t),
        Gate::classical_x(a_bit, x),
        Gate::classical_x(a_bit, y),
        Gate::classical_x(a_bit, t),
    ])
}

/// Qubit naming for one adder instance.
struct Layout<'a> {
    constant: &'a Constant,
}

impl Layout<'_> {
    fn width(&self) -> usize {
        self.constant.effective_width()
    }

    fn a(&self, i: usize) -> bool {
        self.constant.bit(i)
    }

    fn b(&self, i: usize) -> QubitRef {
        QubitRef::data(self.constant.shift + i)
    }

    /// Qubit holding carry `c_i` for `i >= 1`.
    fn carry(&self, i: usize) -> QubitRef {
        debug_assert!(i >= 1);
        if i == 1 {
            self.b(0)
        } else {
            QubitRef::ancilla(i - 2)
        }
    }
}

fn require_general(c: &Constant) -> Result<(), SynthError> {
    let width = c.effective_width();
    if c.is_identity() || width < MIN_GENERAL_WIDTH {
        return Err(SynthError::WidthTooSmall {
            width,
            min: MIN_GENERAL_WIDTH,
        });
    }
    Ok(())
}

/// The unoptimized ripple construction: for every output bit `i` from the
/// top down, compute all carries up to `c_i` on `n - 1` ancillas, add `c_i`
/// into `b_i`, uncompute, then apply `X_{a_i}(b_i)`.
pub fn synth_unoptimized(c: &Constant) -> Result<Circuit, SynthError> {
    require_general(c)?;
    let lay = Layout { constant: c };
    let n = lay.width();
    // u_k is ancilla k - 1, k = 1..n-1
    let u = |k: usize| QubitRef::ancilla(k - 1);

    let mut circuit = Circuit::new(c.width, n - 1, false, Variant::Unoptimized).with_constant(*c);
    for i in (1..n).rev() {
        let mut ladder = vec![Gate::cnot(lay.b(0), u(1))];
        for j in 2..=i {
            ladder.extend(maj_block(lay.a(j - 1), lay.b(j - 1), u(j - 1), u(j))?);
        }
        circuit.extend(ladder.iter().cloned());
        circuit.push(Gate::cnot(u(i), lay.b(i)));
        circuit.extend(ladder.iter().rev().map(Gate::inverse));
        circuit.push(Gate::classical_x(lay.a(i), lay.b(i)));
    }
    circuit.push(Gate::x(lay.b(0)));
    Ok(circuit)
}

/// Appends the optimized adder on effective width `n >= 3`.
///
/// Forward levels `1..=n-3` compute carries with AND gates, the top level
/// writes `c_{n-1}` straight into `b_{n-1}` with the only Toffoli, and the
/// downward levels uncompute while finishing the sum bits. Consecutive
/// classical slots on the same carry qubit are emitted pre-merged.
fn optimized_schedule(lay: &Layout, circuit: &mut Circuit) {
    let n = lay.width();
    debug_assert!(n >= 3);
    let top = n - 2;
    // Bit of the slot on C_i that opens level i, merged with the slot left
    // on it by level i - 1.
    let opening = |i: usize| if i == 1 { lay.a(1) } else { lay.a(i - 1) ^ lay.a(i) };

    for i in 1..top {
        circuit.push(Gate::classical_x(lay.a(i), lay.b(i)));
        circuit.push(Gate::classical_x(opening(i), lay.carry(i)));
        circuit.push(Gate::and(lay.b(i), lay.carry(i), lay.carry(i + 1)));
    }

    circuit.extend([
        Gate::classical_x(lay.a(top), lay.b(top)),
        Gate::classical_x(opening(top), lay.carry(top)),
        Gate::toffoli(lay.b(top), lay.carry(top), lay.b(n - 1)),
        Gate::classical_x(lay.a(top) ^ lay.a(n - 1), lay.b(n - 1)),
        Gate::cnot(lay.carry(top), lay.b(top)),
        Gate::classical_x(lay.a(top), lay.b(top)),
        Gate::classical_x(opening(top), lay.carry(top)),
    ]);

    for i in (1..top).rev() {
        circuit.extend([
            Gate::and_dagger(lay.b(i), lay.carry(i), lay.carry(i + 1)),
            Gate::cnot(lay.carry(i), lay.b(i)),
            Gate::classical_x(lay.a(i), lay.b(i)),
            Gate::classical_x(opening(i), lay.carry(i)),
        ]);
    }

    circuit.push(Gate::x(lay.b(0)));
}

/// The optimized adder: `n - 3` ancillas, `n - 3` AND pairs, one Toffoli,
/// `n - 2` CNOTs and a single X.
pub fn synth_optimized(c: &Constant) -> Result<Circuit, SynthError> {
    require_general(c)?;
    let lay = Layout { constant: c };
    let mut circuit = Circuit::new(c.width, lay.width() - 3, false, Variant::Optimized).with_constant(*c);
    optimized_schedule(&lay, &mut circuit);
    Ok(circuit)
}

/// Appends the controlled adder on effective width `n >= 2`.
///
/// Gates that target data qubits are conditioned on the control qubit: a
/// classical slot on data becomes `CNOT(ctl, q)` when its bit is set and
/// disappears otherwise, and the carry-into-sum CNOTs become Toffolis. The
/// last carry stays on an ancilla.
fn controlled_schedule(lay: &Layout, circuit: &mut Circuit) {
    let n = lay.width();
    debug_assert!(n >= 2);
    let g = QubitRef::control();
    let slot = |circuit: &mut Circuit, bit: bool, q: QubitRef| {
        if q.register == Register::Data {
            if bit {
                circuit.push(Gate::cnot(g, q));
            }
        } else {
            circuit.push(Gate::classical_x(bit, q));
        }
    };
    let opening = |i: usize| if i == 1 { lay.a(1) } else { lay.a(i - 1) ^ lay.a(i) };
    let last = n - 1;

    for i in 1..last {
        slot(circuit, lay.a(i), lay.b(i));
        slot(circuit, opening(i), lay.carry(i));
        circuit.push(Gate::and(lay.b(i), lay.carry(i), lay.carry(i + 1)));
    }
    if last > 1 {
        slot(circuit, lay.a(last - 1), lay.carry(last));
    }

    circuit.push(Gate::toffoli(g, lay.carry(last), lay.b(last)));
    slot(circuit, lay.a(last), lay.b(last));

    for i in (1..last).rev() {
        if i == last - 1 {
            slot(circuit, lay.a(i), lay.carry(i + 1));
        }
        circuit.push(Gate::and_dagger(lay.b(i), lay.carry(i), lay.carry(i + 1)));
        circuit.push(Gate::toffoli(g, lay.carry(i), lay.b(i)));
        slot(circuit, lay.a(i), lay.b(i));
        slot(circuit, opening(i), lay.carry(i));
    }

    circuit.push(Gate::cnot(g, lay.b(0)));
}

/// Controlled adder: identity when the control qubit is 0. Uses `n - 2`
/// ancillas, `n - 2` AND pairs and `n - 1` Toffolis.
pub fn synth_controlled(c: &Constant) -> Result<Circuit, SynthError> {
    require_general(c)?;
    let lay = Layout { constant: c };
    let mut circuit = Circuit::new(c.width, lay.width() - 2, true, Variant::Controlled).with_constant(*c);
    controlled_schedule(&lay, &mut circuit);
    Ok(circuit)
}

fn small_width(c: &Constant, controlled: bool) -> Result<Circuit, SynthError> {
    let width = c.effective_width();
    if c.is_identity() || width >= MIN_GENERAL_WIDTH {
        return Err(SynthError::WidthMismatch {
            expected: "1..=3".into(),
            found: width,
        });
    }
    let lay = Layout { constant: c };
    if controlled {
        let ancillas = width.saturating_sub(2);
        let mut circuit = Circuit::new(c.width, ancillas, true, Variant::Controlled).with_constant(*c);
        if width == 1 {
            circuit.push(Gate::cnot(QubitRef::control(), lay.b(0)));
        } else {
            controlled_schedule(&lay, &mut circuit);
        }
        return Ok(circuit);
    }

    let mut circuit = Circuit::new(c.width, 0, false, Variant::Optimized).with_constant(*c);
    match width {
        1 => circuit.push(Gate::x(lay.b(0))),
        2 => circuit.extend([
            Gate::cnot(lay.b(0), lay.b(1)),
            Gate::classical_x(lay.a(1), lay.b(1)),
            Gate::x(lay.b(0)),
        ]),
        _ => optimized_schedule(&lay, &mut circuit),
    }
    Ok(circuit)
}

/// Ancilla-free adders for effective widths 1 to 3.
pub fn synth_small(c: &Constant) -> Result<Circuit, SynthError> {
    small_width(c, false)
}

/// Controlled adders for effective widths 1 to 3.
pub fn synth_small_controlled(c: &Constant) -> Result<Circuit, SynthError> {
    small_width(c, true)
}

/// Builds the adder for `raw mod 2^width` of the requested variant.
///
/// Zero yields the empty circuit, even constants only touch the top
/// `width - shift` data qubits and effective widths below 4 fall back to
/// the small-width constructions.
pub fn synth(raw: u64, width: usize, variant: Variant) -> Result<Circuit, SynthError> {
    let c = Constant::normalize(raw, width)?;
    if variant == Variant::BaselineCuccaro {
        return Ok(baseline::constant_adder(&c));
    }
    if variant == Variant::Custom {
        return Err(SynthError::UnsupportedVariant(variant));
    }
    let controlled = variant == Variant::Controlled;

    if c.is_identity() {
        return Ok(Circuit::new(width, 0, controlled, variant).with_constant(c));
    }
    if c.effective_width() < MIN_GENERAL_WIDTH {
        let mut circuit = small_width(&c, controlled)?;
        circuit.variant = variant;
        return Ok(circuit);
    }
    match variant {
        Variant::Unoptimized => synth_unoptimized(&c),
        Variant::Optimized => synth_optimized(&c),
        Variant::Controlled => synth_controlled(&c),
        Variant::BaselineCuccaro | Variant::Custom => unreachable!(),
    }
}
