use std::collections::HashMap;
use std::process::{Command, Output};

use qadd::{census, synth, Variant};

fn qadd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qadd"))
        .args(args)
        .env_remove("QADD_SEED")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Minimal reader for the emitted subset: declarations and `x`/`cx`/`ccx`
/// statements. Returns register sizes, gate counts and touched qubits.
struct Parsed {
    registers: HashMap<String, usize>,
    counts: HashMap<String, usize>,
    operands: Vec<(String, usize)>,
}

fn parse_qasm(text: &str) -> Parsed {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("OPENQASM 3.0;"));
    let mut parsed = Parsed {
        registers: HashMap::new(),
        counts: HashMap::new(),
        operands: Vec::new(),
    };
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with("//") || line.starts_with("include ") {
            continue;
        }
        let stmt = line.strip_suffix(';').expect("statement ends with ;");
        let (head, rest) = stmt.split_once(' ').unwrap();
        if let Some(size) = head.strip_prefix("qubit[").and_then(|s| s.strip_suffix(']')) {
            parsed.registers.insert(rest.to_string(), size.parse().unwrap());
            continue;
        }
        let arity = match head {
            "x" => 1,
            "cx" => 2,
            "ccx" => 3,
            other => panic!("unexpected statement {other}"),
        };
        let ops: Vec<(String, usize)> = rest
            .split(',')
            .map(|op| {
                let (reg, idx) = op.trim().split_once('[').unwrap();
                let idx: usize = idx.strip_suffix(']').unwrap().parse().unwrap();
                assert!(idx < parsed.registers[reg], "{op} out of range");
                (reg.to_string(), idx)
            })
            .collect();
        assert_eq!(ops.len(), arity, "{line}");
        *parsed.counts.entry(head.to_string()).or_default() += 1;
        parsed.operands.extend(ops);
    }
    parsed
}

#[test]
fn synth_qasm_for_width_four() {
    let out = qadd(&[
        "synth",
        "--constant",
        "3",
        "--width",
        "4",
        "--variant",
        "optimized",
        "--format",
        "qasm",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "// t_count=11"));
    let report_line = text
        .lines()
        .find_map(|l| l.strip_prefix("// resource_report: "))
        .unwrap();
    let report: serde_json::Value = serde_json::from_str(report_line).unwrap();
    assert_eq!(report["t_count"], 11);
    let parsed = parse_qasm(&text);
    // one Toffoli plus one AND pair, all lowered to ccx
    assert_eq!(parsed.counts["ccx"], 3);
    assert_eq!(text.matches("// and\n").count(), 1);
}

#[test]
fn qasm_counts_match_emitted_census() {
    for (a, n, variant) in [
        (3u64, 4usize, "optimized"),
        (45, 7, "controlled"),
        (22, 6, "unoptimized"),
        (9, 5, "baseline"),
        (1, 9, "pipelined"),
    ] {
        let out = qadd(&[
            "synth",
            "-a",
            &a.to_string(),
            "-n",
            &n.to_string(),
            "--variant",
            variant,
        ]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        let parsed = parse_qasm(&text);
        let report_line = text
            .lines()
            .find_map(|l| l.strip_prefix("// resource_report: "))
            .unwrap();
        let r: serde_json::Value = serde_json::from_str(report_line).unwrap();
        let get = |k: &str| r[k].as_u64().unwrap() as usize;
        let count = |k: &str| parsed.counts.get(k).copied().unwrap_or(0);
        assert_eq!(count("x"), get("x") + get("cx_emitted"), "{variant}");
        assert_eq!(count("cx"), get("cnot"), "{variant}");
        assert_eq!(count("ccx"), get("toffoli") + 2 * get("and_pairs"), "{variant}");
        assert_eq!(parsed.registers["b"], n);
        assert_eq!(parsed.registers.get("anc").copied().unwrap_or(0), get("ancilla"));
    }
}

#[test]
fn qasm_report_is_the_library_census() {
    let c = synth(13, 8, Variant::Controlled).unwrap();
    let expected = serde_json::to_string(&census(&c).unwrap()).unwrap();
    let text = stdout(&qadd(&["synth", "-a", "13", "-n", "8", "--controlled"]));
    assert!(text.contains(&format!("// resource_report: {expected}\n")));
}

#[test]
fn zero_constant_has_no_gate_statements() {
    let out = qadd(&["synth", "--constant", "0", "--width", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed = parse_qasm(&stdout(&out));
    assert_eq!(parsed.registers["b"], 8);
    assert!(parsed.counts.is_empty());
}

#[test]
fn even_constant_touches_only_high_qubits() {
    let out = qadd(&["synth", "--constant", "6", "--width", "5"]);
    let parsed = parse_qasm(&stdout(&out));
    assert!(!parsed.operands.is_empty());
    assert!(parsed.operands.iter().all(|(reg, i)| reg != "b" || *i >= 1));
}

#[test]
fn json_gate_list_shape() {
    let out = qadd(&["synth", "-a", "5", "-n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n_data"], 4);
    assert_eq!(v["n_ancilla"], 1);
    assert_eq!(v["has_control"], false);
    let first = &v["gates"][0];
    assert_eq!(first["kind"], "cx_classical");
    assert_eq!(first["operands"][0][0], "data");
}

#[test]
fn exit_codes() {
    assert_eq!(
        qadd(&["verify", "-a", "5", "-n", "6", "--exhaustive"]).status.code(),
        Some(0)
    );
    assert_eq!(qadd(&["synth", "-a", "5"]).status.code(), Some(2));
    assert_eq!(qadd(&["synth", "-a", "5", "-n", "65"]).status.code(), Some(2));
    assert_eq!(qadd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qadd(&["count", "-a", "5", "-n", "6", "--variant", "baseline", "--strict"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qadd(&["count", "-a", "5", "-n", "6", "--strict"]).status.code(),
        Some(0)
    );
    assert_eq!(
        qadd(&[
            "equiv",
            "-a",
            "7",
            "-n",
            "5",
            "--left",
            "unoptimized",
            "--right",
            "optimized"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn seed_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qadd"))
        .args(["verify", "-a", "3", "-n", "12", "--samples", "10"])
        .env("QADD_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("seed=42"));
    let out = Command::new(env!("CARGO_BIN_EXE_qadd"))
        .args(["verify", "-a", "3", "-n", "12", "--samples", "10", "--seed", "5"])
        .env("QADD_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("seed=5"));
}

#[test]
fn verify_json_report() {
    let out = qadd(&[
        "verify",
        "-a",
        "5",
        "-n",
        "6",
        "--variant",
        "controlled",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["checked"].as_u64(), v["failed"].as_u64()), (Some(128), Some(0)));
    assert!(v["first_counterexample"].is_null());
}

#[test]
fn count_text_and_compare_json() {
    let text = stdout(&qadd(&["count", "-a", "9", "-n", "10", "--format", "text"]));
    assert!(text.contains("t_count     35"));
    let v: serde_json::Value =
        serde_json::from_slice(&qadd(&["compare", "--width", "5", "--format", "json"]).stdout).unwrap();
    let proposed = &v["rows"][4];
    assert_eq!(
        (proposed["ancilla_formula"].as_i64(), proposed["t_formula"].as_i64()),
        (Some(2), Some(15))
    );
}
