//! `qadd` command line: synth, verify, count, compare and equiv.
//!
//! Exit codes: 0 success, 1 semantic failure (mismatch, nonconformance,
//! counterexample), 2 usage error, 3 internal validation failure.

pub mod gate_list;
pub mod qasm;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::baseline::comparison_table;
use crate::circuit::{Circuit, Variant};
use crate::constant::{low_mask, Constant, MAX_WIDTH};
use crate::passes::{parse_pipeline, run_pipeline, Pass, DEFAULT_PIPELINE};
use crate::resources::census;
use crate::simulator::{assert_equivalent, Equivalence, SimError, Simulator};
use crate::synthesis::synth;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

/// Largest `width + control` swept by `verify --exhaustive`.
pub const VERIFY_EXHAUSTIVE_CAP: usize = 24;

#[derive(Debug, Parser)]
#[command(name = "qadd", version, about = "Quantum adder-by-constant synthesis and auditing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize an adder and write it as OpenQASM 3, a JSON gate list or text.
    Synth(SynthArgs),
    /// Simulate an adder against (a + b) mod 2^n.
    Verify(VerifyArgs),
    /// Print the gate census and T-count with formula conformance.
    Count(CountArgs),
    /// Reproduce the adder cost comparison table at a width.
    Compare(CompareArgs),
    /// Check two adder variants for permutation equality.
    Equiv(EquivArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Carry ladder recomputed per output bit (quadratic Toffoli count).
    Unoptimized,
    /// Unoptimized construction followed by the peephole pipeline.
    Pipelined,
    /// AND-based carry chain: n-3 ancillas, T-count 4n-5.
    Optimized,
    /// Optimized adder conditioned on one control qubit.
    Controlled,
    /// Constant loaded into a Cuccaro ripple-carry adder.
    Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Qasm,
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct AdderArgs {
    /// Constant to add; reduced modulo 2^width.
    #[arg(long, short = 'a')]
    pub constant: u64,
    /// Register width in qubits (1..=64).
    #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..=MAX_WIDTH as u64))]
    pub width: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Optimized)]
    pub variant: VariantArg,
    /// Shorthand for `--variant controlled`.
    #[arg(long)]
    pub controlled: bool,
    /// Comma separated passes: cancel-inverses, merge-classical-x.
    #[arg(long)]
    pub passes: Option<String>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub adder: AdderArgs,
    #[arg(long, value_enum, default_value_t = Format::Qasm)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub adder: AdderArgs,
    /// Check every input (default without --samples; at most 24 input bits).
    #[arg(long, conflicts_with = "samples")]
    pub exhaustive: bool,
    /// Check K random inputs instead of all of them.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long, env = "QADD_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub adder: AdderArgs,
    /// Exit 1 when the census does not match the closed form.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Register width in qubits (1..=64).
    #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..=MAX_WIDTH as u64))]
    pub width: u64,
    /// Exit 1 when a measured row differs from its formula.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    /// Constant to add; reduced modulo 2^width.
    #[arg(long, short = 'a')]
    pub constant: u64,
    /// Register width in qubits (1..=64).
    #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..=MAX_WIDTH as u64))]
    pub width: u64,
    #[arg(long, value_enum)]
    pub left: VariantArg,
    #[arg(long, value_enum)]
    pub right: VariantArg,
    /// Pipeline used for `pipelined` sides.
    #[arg(long)]
    pub passes: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

/// Text destined for the output file (or stdout) plus the exit code.
struct Outcome {
    body: String,
    code: u8,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn internal(msg: impl ToString) -> CliError {
    CliError::Internal(msg.to_string())
}

fn require_format(format: Format, allowed: &[Format]) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(usage(format!("format {format:?} is not supported by this command")))
    }
}

fn base_variant(arg: VariantArg, controlled: bool) -> Result<Variant, CliError> {
    let variant = match arg {
        VariantArg::Unoptimized | VariantArg::Pipelined => Variant::Unoptimized,
        VariantArg::Optimized => Variant::Optimized,
        VariantArg::Controlled => Variant::Controlled,
        VariantArg::Baseline => Variant::BaselineCuccaro,
    };
    match (controlled, variant) {
        (false, v) => Ok(v),
        (true, Variant::Optimized | Variant::Controlled) => Ok(Variant::Controlled),
        (true, v) => Err(usage(format!("--controlled is not available for the {v} variant"))),
    }
}

fn pipeline_for(arg: VariantArg, passes: Option<&str>) -> Result<Vec<Pass>, CliError> {
    match passes {
        Some(spec) => parse_pipeline(spec).map_err(|e| usage(e.to_string())),
        None if arg == VariantArg::Pipelined => Ok(DEFAULT_PIPELINE.to_vec()),
        None => Ok(Vec::new()),
    }
}

fn build(constant: u64, width: u64, arg: VariantArg, controlled: bool, passes: &[Pass]) -> Result<Circuit, CliError> {
    let variant = base_variant(arg, controlled)?;
    let circuit = synth(constant, width as usize, variant).map_err(|e| usage(e.to_string()))?;
    circuit.validate().map_err(internal)?;
    if passes.is_empty() {
        return Ok(circuit);
    }
    let (out, _) = run_pipeline(&circuit, passes).map_err(internal)?;
    Ok(out)
}

fn build_adder(args: &AdderArgs) -> Result<Circuit, CliError> {
    let passes = pipeline_for(args.variant, args.passes.as_deref())?;
    build(args.constant, args.width, args.variant, args.controlled, &passes)
}

fn variant_label(arg: VariantArg, controlled: bool) -> &'static str {
    match (arg, controlled) {
        (VariantArg::Optimized, true) | (VariantArg::Controlled, _) => "controlled",
        (VariantArg::Optimized, false) => "optimized",
        (VariantArg::Unoptimized, _) => "unoptimized",
        (VariantArg::Pipelined, _) => "pipelined",
        (VariantArg::Baseline, _) => "baseline",
    }
}

fn cmd_synth(args: &SynthArgs) -> Result<Outcome, CliError> {
    let circuit = build_adder(&args.adder)?;
    let body = match args.format {
        Format::Qasm => {
            let report = census(&circuit).map_err(internal)?;
            qasm::emit(&circuit, &report)
        }
        Format::Json => {
            let mut s = gate_list::to_json(&circuit);
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!(
                "n_data={} n_ancilla={} has_control={} gates={}\n",
                circuit.n_data,
                circuit.n_ancilla,
                circuit.has_control,
                circuit.len()
            );
            for gate in &circuit.gates {
                writeln!(s, "{gate}").unwrap();
            }
            s
        }
    };
    Ok(Outcome { body, code: EXIT_OK })
}

#[derive(Debug, Serialize)]
struct VerifyFailure {
    data: u64,
    control: Option<bool>,
    expected: u64,
    got: Option<u64>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    variant: &'static str,
    constant: u64,
    width: u64,
    mode: &'static str,
    seed: u64,
    checked: usize,
    passed: usize,
    failed: usize,
    first_counterexample: Option<VerifyFailure>,
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    require_format(args.format, &[Format::Text, Format::Json])?;
    let circuit = build_adder(&args.adder)?;
    let sim = Simulator::new(&circuit).map_err(internal)?;
    let n = circuit.n_data;
    let mask = low_mask(n);
    let value = Constant::normalize(args.adder.constant, n)
        .map_err(|e| usage(e.to_string()))?
        .value;
    let controlled = circuit.has_control;

    let sweep_exhaustive = args.exhaustive || args.samples.is_none();
    let inputs: Vec<u64> = if sweep_exhaustive {
        let bits = sim.input_bits();
        if bits > VERIFY_EXHAUSTIVE_CAP {
            return Err(usage(format!(
                "{bits} input qubits exceed the exhaustive cap of {VERIFY_EXHAUSTIVE_CAP}; use --samples"
            )));
        }
        (0..1u64 << bits).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let k = args.samples.unwrap_or(1);
        let mut v = Vec::new();
        for _ in 0..k {
            let b = rng.gen::<u64>() & mask;
            v.push(b);
            if controlled {
                v.push(sim.pack(crate::simulator::BasisState::controlled(b, true)));
            }
        }
        v
    };

    let failures: Vec<Option<VerifyFailure>> = inputs
        .par_iter()
        .map(|&packed| {
            let state = sim.unpack(packed);
            let on = !controlled || state.control;
            let expected = if on {
                state.data.wrapping_add(value) & mask
            } else {
                state.data
            };
            let control = controlled.then_some(state.control);
            match sim.run(state) {
                Ok(out) if out.data == expected && out.control == state.control => None,
                Ok(out) => Some(VerifyFailure {
                    data: state.data,
                    control,
                    expected,
                    got: Some(out.data),
                    error: None,
                }),
                Err(e) => Some(VerifyFailure {
                    data: state.data,
                    control,
                    expected,
                    got: None,
                    error: Some(e.to_string()),
                }),
            }
        })
        .collect();
    let failed = failures.iter().filter(|f| f.is_some()).count();
    let report = VerifyReport {
        variant: variant_label(args.adder.variant, args.adder.controlled),
        constant: args.adder.constant,
        width: args.adder.width,
        mode: if sweep_exhaustive { "exhaustive" } else { "sampled" },
        seed: args.seed,
        checked: inputs.len(),
        passed: inputs.len() - failed,
        failed,
        first_counterexample: failures.into_iter().flatten().next(),
    };

    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        _ => {
            let mut s = format!(
                "verify variant={} constant={} width={} mode={} seed={}\n",
                report.variant, report.constant, report.width, report.mode, report.seed
            );
            if value == 0 {
                s.push_str("identity adder (constant mod 2^width = 0)\n");
            }
            writeln!(s, "{}/{} pass", report.passed, report.checked).unwrap();
            if let Some(f) = &report.first_counterexample {
                write!(s, "first counterexample: b={}", f.data).unwrap();
                if let Some(g) = f.control {
                    write!(s, " control={}", u8::from(g)).unwrap();
                }
                match (&f.got, &f.error) {
                    (Some(got), _) => writeln!(s, " expected={} got={}", f.expected, got).unwrap(),
                    (None, Some(e)) => writeln!(s, " expected={} error: {}", f.expected, e).unwrap(),
                    (None, None) => s.push('\n'),
                }
            }
            s
        }
    };
    Ok(Outcome {
        body,
        code: if failed == 0 { EXIT_OK } else { EXIT_FAILURE },
    })
}

fn cmd_count(args: &CountArgs) -> Result<Outcome, CliError> {
    require_format(args.format, &[Format::Json, Format::Text])?;
    let circuit = build_adder(&args.adder)?;
    let report = census(&circuit).map_err(internal)?;
    let body = match args.format {
        Format::Json => report.to_json() + "\n",
        _ => report.to_string(),
    };
    let code = if args.strict && !report.conforms {
        EXIT_FAILURE
    } else {
        EXIT_OK
    };
    Ok(Outcome { body, code })
}

fn cmd_compare(args: &CompareArgs) -> Result<Outcome, CliError> {
    require_format(args.format, &[Format::Json, Format::Text])?;
    let table = comparison_table(args.width as usize).map_err(|e| usage(e.to_string()))?;
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&table).expect("table serializes") + "\n",
        _ => table.to_string(),
    };
    let mismatch = table.rows.iter().any(|r| !r.matches_formula());
    let code = if args.strict && mismatch { EXIT_FAILURE } else { EXIT_OK };
    Ok(Outcome { body, code })
}

#[derive(Debug, Serialize)]
struct EquivReport {
    left: &'static str,
    right: &'static str,
    constant: u64,
    width: u64,
    equivalent: bool,
    counterexample: Option<crate::simulator::Counterexample>,
}

fn cmd_equiv(args: &EquivArgs) -> Result<Outcome, CliError> {
    require_format(args.format, &[Format::Json, Format::Text])?;
    let side = |arg: VariantArg| -> Result<Circuit, CliError> {
        let passes = if arg == VariantArg::Pipelined {
            pipeline_for(arg, args.passes.as_deref())?
        } else {
            Vec::new()
        };
        build(args.constant, args.width, arg, false, &passes)
    };
    let left = side(args.left)?;
    let right = side(args.right)?;
    let result = assert_equivalent(&left, &right).map_err(|e| match e {
        SimError::LayoutMismatch | SimError::CapExceeded { .. } => usage(e.to_string()),
        other => internal(other),
    })?;
    let counterexample = match result {
        Equivalence::Equivalent => None,
        Equivalence::Differs(c) => Some(c),
    };
    let report = EquivReport {
        left: variant_label(args.left, false),
        right: variant_label(args.right, false),
        constant: args.constant,
        width: args.width,
        equivalent: counterexample.is_none(),
        counterexample,
    };
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        _ => match counterexample {
            None => format!(
                "equivalent: left={} right={} constant={} width={} inputs={}\n",
                report.left,
                report.right,
                report.constant,
                report.width,
                1u64 << (left.n_data + usize::from(left.has_control))
            ),
            Some(c) => format!("counterexample: input={} left={} right={}\n", c.input, c.left, c.right),
        },
    };
    Ok(Outcome {
        body,
        code: if report.equivalent { EXIT_OK } else { EXIT_FAILURE },
    })
}

fn dispatch(cli: &Cli) -> Result<(Outcome, Option<&PathBuf>), CliError> {
    Ok(match &cli.command {
        Command::Synth(a) => (cmd_synth(a)?, a.out.as_ref()),
        Command::Verify(a) => (cmd_verify(a)?, a.out.as_ref()),
        Command::Count(a) => (cmd_count(a)?, a.out.as_ref()),
        Command::Compare(a) => (cmd_compare(a)?, a.out.as_ref()),
        Command::Equiv(a) => (cmd_equiv(a)?, a.out.as_ref()),
    })
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };

    match dispatch(&cli) {
        Ok((outcome, out_path)) => {
            let written = match out_path {
                Some(path) => std::fs::write(path, &outcome.body).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(outcome.body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => outcome.code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}
