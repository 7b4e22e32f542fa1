//! Synthesis, peephole optimization, basis-state simulation and resource
//! auditing for in-place quantum adders by a classical constant.
//!
//! The optimized adder uses `n - 3` ancillas and `4n - 5` T gates; the
//! controlled adder uses `n - 2` ancillas and `11n - 15` T gates.

pub mod baseline;
pub mod circuit;
pub mod cli;
pub mod constant;
pub mod passes;
pub mod resources;
pub mod simulator;
pub mod synthesis;

pub use circuit::{Circuit, CircuitError, Gate, GateKind, QubitRef, Register, Variant};
pub use constant::Constant;
pub use passes::{run_pipeline, Pass, PassReport};
pub use resources::{census, ResourceReport};
pub use simulator::{assert_equivalent, permutation_table, BasisState, Simulator};
pub use synthesis::{synth, SynthError};
