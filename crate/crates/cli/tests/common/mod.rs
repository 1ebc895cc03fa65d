#![allow(dead_code)]

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub const GOLDEN_HOPF: &str = include_str!("../golden/hopf_n3.json");
pub const GOLDEN_ARGS: &[&str] = &[
    "invariant",
    "--N",
    "3",
    "--braid",
    "2: 1 1",
    "--colors",
    "0.3+0.1i,-0.45",
];

pub struct Outcome {
    /// `None` when the process was killed by a signal.
    pub code: Option<i32>,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_bin(args: &[&str], env: &[(&str, &str)]) -> Outcome {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_adolink"));
    cmd.args(args).env_remove("ADO_EPS_ABS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Outcome {
        code: out.status.code(),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Same keys, array lengths, strings and integers; floats within `rel`.
pub fn json_matches(expected: &Value, actual: &Value, rel: f64, path: &str) -> Result<(), String> {
    match (expected, actual) {
        (Value::Object(a), Value::Object(b)) => {
            let ka: Vec<_> = a.keys().collect();
            let kb: Vec<_> = b.keys().collect();
            if ka != kb {
                return Err(format!("{path}: keys {ka:?} vs {kb:?}"));
            }
            for (k, v) in a {
                json_matches(v, &b[k], rel, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Err(format!("{path}: length {} vs {}", a.len(), b.len()));
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                json_matches(x, y, rel, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (Value::Number(a), Value::Number(b)) if a.is_f64() || b.is_f64() => {
            let (x, y) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if (x - y).abs() <= rel * x.abs().max(y.abs()).max(1e-6) {
                Ok(())
            } else {
                Err(format!("{path}: {x} vs {y}"))
            }
        }
        (a, b) if a == b => Ok(()),
        (a, b) => Err(format!("{path}: {a} vs {b}")),
    }
}

pub fn golden_check() -> Result<(), String> {
    let out = run_bin(GOLDEN_ARGS, &[]);
    if out.code != Some(0) {
        return Err(format!("exit {:?}: {}", out.code, out.stderr));
    }
    let expected: Value = serde_json::from_str(GOLDEN_HOPF).map_err(|e| e.to_string())?;
    let actual: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    // The residual fields are rounding noise; only their presence is pinned.
    let strip = |mut v: Value| {
        v["residuals"]["max_disagreement"] = Value::Null;
        v
    };
    json_matches(&strip(expected), &strip(actual), 1e-9, "$")
}

/// `(description, args, expected exit code)`.
pub fn exit_code_cases() -> Vec<(&'static str, Vec<&'static str>, i32)> {
    vec![
        ("success", GOLDEN_ARGS.to_vec(), 0),
        (
            "malformed braid",
            vec!["invariant", "--N", "2", "--braid", "1 x", "--colors", "0.4"],
            1,
        ),
        (
            "atypical color",
            vec!["invariant", "--N", "3", "--braid", "1 1 1", "--colors", "1"],
            1,
        ),
        (
            "wrong color count",
            vec!["invariant", "--N", "2", "--braid", "1 1", "--colors", "0.4"],
            1,
        ),
        ("verify with N = 1", vec!["verify", "--N", "1"], 1),
        ("unknown command", vec!["frobnicate"], 1),
        (
            "disagreeing cuts",
            vec![
                "invariant",
                "--N",
                "2",
                "--braid",
                "1 1 1",
                "--colors",
                "0.42",
                "--perturb-cut",
                "0",
            ],
            2,
        ),
        (
            "corrupted verify",
            vec!["verify", "--N", "2", "--corrupt-relations"],
            3,
        ),
    ]
}

pub fn exit_code_check() -> Result<(), String> {
    for (what, args, code) in exit_code_cases() {
        let out = run_bin(&args, &[]);
        if out.code != Some(code) {
            return Err(format!(
                "{what}: expected {code}, got {:?} ({})",
                out.code,
                out.stderr.trim()
            ));
        }
    }
    Ok(())
}

/// Random strings over braid-like tokens and junk.
pub fn fuzz_strings(seed: u64, count: usize) -> Vec<String> {
    const JUNK: &[&str] = &[
        "x",
        "1.5",
        "--",
        "::",
        ":",
        "+3",
        "-",
        "+",
        "0",
        "-0",
        "1e3",
        "99999999999999999999999",
        "３",
        "λ",
        "\t",
        "\n",
        "2:3",
        "3 :",
        "#",
        ",",
        "1,2",
        "NaN",
        "",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s = String::new();
            if rng.random_bool(0.4) {
                s.push_str(&format!("{}:", rng.random_range(0..7)));
            }
            for _ in 0..rng.random_range(0..9) {
                let token = if rng.random_bool(0.75) {
                    let i: i64 = rng.random_range(-5..=5);
                    i.to_string()
                } else {
                    JUNK[rng.random_range(0..JUNK.len())].to_string()
                };
                s.push_str(&token);
                s.push_str(if rng.random_bool(0.85) { " " } else { "  " });
            }
            s
        })
        .collect()
}

/// Every fuzzed braid either evaluates or is rejected with exit status 1 and
/// a named error; the grammar itself only ever answers with a parse error.
pub fn fuzz_check(count: usize) -> Result<usize, String> {
    let mut parsed = 0;
    for text in fuzz_strings(0x5eed, count) {
        match adolink::parse_braid(&text) {
            Ok(_) => parsed += 1,
            Err(adolink::Error::Parse(_)) => {}
            Err(e) => return Err(format!("{text:?}: unexpected {e:?}")),
        }
        let braid = format!("--braid={text}");
        let out = run_bin(&["invariant", "--N", "2", &braid, "--colors", "0.3"], &[]);
        match out.code {
            Some(0) => {}
            Some(1) => {
                let v: Value = serde_json::from_str(out.stderr.lines().last().unwrap_or(""))
                    .map_err(|_| format!("{text:?}: unstructured error {}", out.stderr))?;
                if v["error"]["kind"].as_str().is_none() {
                    return Err(format!("{text:?}: error without kind"));
                }
            }
            other => return Err(format!("{text:?}: exit {other:?}, stderr {}", out.stderr)),
        }
    }
    Ok(parsed)
}
