//! End-to-end tests of the `rba` binary: exit-status contract, determinism
//! of result bodies, and the all-rational output guarantee.

use serde_json::Value;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn rba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rba"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn body_of(output: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&output.stdout).expect("stdout is JSON");
    doc.get("body")
        .cloned()
        .expect("result documents carry a body")
}

#[test]
fn exit_codes_follow_the_contract() {
    let g3 = fixture("g3.json");
    let rigid = fixture("rigid.json");
    // (args, expected exit code)
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["check-leibniz", "--input", &g3], 0),
        (vec!["check-rep", "--input", &g3], 0),
        (vec!["check-rb", "--input", &g3, "--operator", "Tfam2"], 0),
        (vec!["check-rb", "--input", &g3, "--operator", "Tid"], 1),
        (vec!["rb-system", "--input", &g3], 0),
        (
            vec![
                "rb-search",
                "--input",
                &g3,
                "--values",
                "0,1",
                "--free",
                "1,1;3,3",
            ],
            0,
        ),
        (
            vec![
                "cohomology",
                "--input",
                &g3,
                "--operator",
                "T0",
                "--degree",
                "1",
            ],
            0,
        ),
        (
            vec![
                "nijenhuis",
                "--input",
                &g3,
                "--operator",
                "Tfam2",
                "--element",
                "x1",
            ],
            0,
        ),
        (
            vec![
                "nijenhuis",
                "--input",
                &g3,
                "--operator",
                "Tfam2",
                "--element",
                "1,1,1",
            ],
            0,
        ),
        (
            vec![
                "linear-deform",
                "--input",
                &g3,
                "--operator",
                "Tfam1",
                "--tau",
                "Tau1",
            ],
            0,
        ),
        (
            vec![
                "linear-deform",
                "--input",
                &g3,
                "--operator",
                "T0",
                "--tau",
                "Tid",
            ],
            1,
        ),
        (
            vec![
                "equivalence",
                "--input",
                &g3,
                "--operator",
                "Tfam1",
                "--tau1",
                "T0",
                "--tau2",
                "T0",
                "--element",
                "x1",
            ],
            0,
        ),
        (vec!["obstruction", "--input", &g3, "--series", "S1"], 0),
        (
            vec![
                "equivalence",
                "--input",
                &rigid,
                "--series1",
                "Sconst",
                "--series2",
                "Sdef",
                "--pair",
                "W",
            ],
            0,
        ),
        (
            vec![
                "equivalence",
                "--input",
                &rigid,
                "--series1",
                "Sconst",
                "--series2",
                "Sdef",
                "--pair",
                "Wzero",
            ],
            1,
        ),
        (
            vec![
                "extend",
                "--input",
                &g3,
                "--series",
                "S1",
                "--to-order",
                "3",
            ],
            0,
        ),
        (
            vec![
                "extend",
                "--input",
                &g3,
                "--series",
                "Sblocked",
                "--to-order",
                "2",
            ],
            1,
        ),
        (vec!["rigidity", "--input", &g3, "--operator", "T0"], 1),
        (
            vec!["rigidity", "--input", &rigid, "--operator", "Trigid"],
            0,
        ),
        (vec!["mc-check", "--input", &g3, "--operator", "Tfam2"], 0),
        (vec!["mc-check", "--input", &g3, "--operator", "Tid"], 1),
        (vec!["sign-check", "--input", &g3, "--operator", "Tfam1"], 0),
        // Input errors.
        (vec!["check-rb", "--input", &g3, "--operator", "Nope"], 2),
        (vec!["obstruction", "--input", &g3, "--series", "Nope"], 2),
        (vec!["check-leibniz", "--input", "/nonexistent.json"], 2),
        (vec!["check-rb", "--input", &g3], 2), // several operators, none named
    ];
    for (args, expected) in cases {
        let out = rba(&args);
        assert_eq!(
            out.status.code(),
            Some(expected),
            "args {:?}: stdout {} stderr {}",
            args,
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn zero_operator_cohomology_dimensions_via_cli() {
    let g3 = fixture("g3.json");
    let out = rba(&[
        "cohomology",
        "--input",
        &g3,
        "--operator",
        "T0",
        "--degree",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let result = body_of(&out)["result"].clone();
    assert_eq!(result["dim_cochains"], 9);
    assert_eq!(result["dim_cocycles"], 9);
    assert_eq!(result["dim_coboundaries"], 0);
    assert_eq!(result["dim_cohomology"], 9);
}

#[test]
fn blocked_extension_reports_the_obstruction() {
    let g3 = fixture("g3.json");
    let out = rba(&[
        "extend",
        "--input",
        &g3,
        "--series",
        "Sblocked",
        "--to-order",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let body = body_of(&out);
    let result = &body["result"];
    assert_eq!(result["verdict"], Value::Bool(false));
    assert_eq!(result["blocked_at_order"], 1);
    let coeffs: Vec<String> = result["obstruction"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert!(
        coeffs.iter().any(|c| c != "0"),
        "obstruction representative must be nonzero"
    );
}

#[test]
fn parse_errors_carry_json_paths() {
    let dir = std::env::temp_dir().join("rba-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{ "algebra": { "dim": 2, "brackets": [ { "i": 1, "j": 1, "k": 2, "c": "1/0" } ] },
            "representation": "regular" }"#,
    )
    .unwrap();
    let out = rba(&["check-leibniz", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["errors"][0]["path"], "algebra.brackets[0].c");
}

fn run_all_commands(extra: &[&str]) -> Vec<(String, Value, Option<i32>)> {
    let g3 = fixture("g3.json");
    let dim2 = fixture("dim2.json");
    let rigid = fixture("rigid.json");
    let command_sets: Vec<Vec<&str>> = vec![
        vec!["check-leibniz", "--input", &g3],
        vec!["check-rep", "--input", &rigid],
        vec!["check-rb", "--input", &g3, "--operator", "Tfam2"],
        vec!["rb-system", "--input", &g3],
        vec!["rb-system", "--input", &dim2],
        vec![
            "rb-search",
            "--input",
            &g3,
            "--values",
            "-1,0,1",
            "--free",
            "1,1;2,1;3,3;1,2",
        ],
        vec![
            "cohomology",
            "--input",
            &g3,
            "--operator",
            "Tfam2",
            "--degree",
            "2",
        ],
        vec![
            "nijenhuis",
            "--input",
            &g3,
            "--operator",
            "Tfam2",
            "--element",
            "x1",
        ],
        vec![
            "linear-deform",
            "--input",
            &g3,
            "--operator",
            "Tfam1",
            "--tau",
            "Tau1",
        ],
        vec!["obstruction", "--input", &g3, "--series", "Sblocked"],
        vec![
            "extend",
            "--input",
            &g3,
            "--series",
            "S1",
            "--to-order",
            "4",
        ],
        vec!["rigidity", "--input", &rigid, "--operator", "Trigid"],
        vec!["mc-check", "--input", &g3, "--operator", "Tid"],
        vec!["sign-check", "--input", &g3, "--operator", "Tfam2"],
    ];
    command_sets
        .into_iter()
        .map(|mut args| {
            args.extend_from_slice(extra);
            let out = rba(&args);
            let doc: Value = serde_json::from_slice(&out.stdout)
                .unwrap_or_else(|e| panic!("{args:?} produced non-JSON output: {e}"));
            let body = doc["body"].clone();
            assert!(body.is_object(), "{args:?} produced no result body");
            (format!("{args:?}"), body, out.status.code())
        })
        .collect()
}

#[test]
fn result_bodies_are_deterministic_across_runs_and_workers() {
    let first = run_all_commands(&["--workers", "1"]);
    let second = run_all_commands(&["--workers", "1"]);
    let eight = run_all_commands(&["--workers", "8"]);
    for (((name, body1, code1), (_, body2, code2)), (_, body8, code8)) in
        first.iter().zip(&second).zip(&eight)
    {
        let b1 = serde_json::to_string(body1).unwrap();
        let b2 = serde_json::to_string(body2).unwrap();
        let b8 = serde_json::to_string(body8).unwrap();
        assert_eq!(b1, b2, "rerun differs for {name}");
        assert_eq!(b1, b8, "worker count changes body for {name}");
        assert_eq!(code1, code2);
        assert_eq!(code1, code8);
    }
}

fn assert_no_floats(value: &Value, context: &str) {
    match value {
        Value::Number(n) => {
            assert!(!n.is_f64(), "float {n} in output at {context}");
        }
        Value::Array(items) => items.iter().for_each(|v| assert_no_floats(v, context)),
        Value::Object(map) => map.values().for_each(|v| assert_no_floats(v, context)),
        _ => {}
    }
}

#[test]
fn output_contains_no_floating_point() {
    for (name, body, _) in run_all_commands(&[]) {
        assert_no_floats(&body, &name);
    }
}

#[test]
fn output_flag_writes_the_document() {
    let dir = std::env::temp_dir().join("rba-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("result.json");
    let g3 = fixture("g3.json");
    let out = rba(&[
        "check-rb",
        "--input",
        &g3,
        "--operator",
        "Tfam2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["body"]["result"]["verdict"], Value::Bool(true));
}

#[test]
fn max_degree_env_is_honoured() {
    let g3 = fixture("g3.json");
    let out = Command::new(env!("CARGO_BIN_EXE_rba"))
        .args([
            "cohomology",
            "--input",
            &g3,
            "--operator",
            "T0",
            "--degree",
            "3",
        ])
        .env("RBA_MAX_DEGREE", "2")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "degree above the env cap must be refused"
    );
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["errors"][0]["message"]
        .as_str()
        .unwrap()
        .contains("cap"));

    // The flag overrides the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_rba"))
        .args([
            "cohomology",
            "--input",
            &g3,
            "--operator",
            "T0",
            "--degree",
            "3",
            "--max-degree",
            "4",
        ])
        .env("RBA_MAX_DEGREE", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn search_budget_is_enforced() {
    let g3 = fixture("g3.json");
    let out = rba(&[
        "rb-search",
        "--input",
        &g3,
        "--values",
        "0,1",
        "--budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let message = doc["errors"][0]["message"].as_str().unwrap();
    assert!(
        message.contains("512"),
        "required grid size should be reported: {message}"
    );
}
