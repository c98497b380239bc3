use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use weakind::report::Report;
use weakind_cli::{run_command, Outcome};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn path(rel: &str) -> String {
    root().join(rel).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    let argv = std::iter::once("weakind".to_string()).chain(args.iter().map(|a| {
        if a.ends_with(".json") || a.ends_with(".csv") {
            path(a)
        } else {
            a.to_string()
        }
    }));
    run_command(argv)
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schemas/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

const EXACT: &[&str] = &[
    "--model",
    "data/models/ex3per3.json",
    "--table",
    "data/biostat.csv",
    "--samples",
    "300",
    "--burnin",
    "100",
    "--thin",
    "5",
    "--seed",
    "9",
];

fn commands() -> Vec<Vec<&'static str>> {
    vec![
        vec!["suffstat", "--model", "data/models/patexample.json"],
        vec!["basis", "--model", "data/models/ex3per3.json", "--verify", "4"],
        vec!["basis", "--model", "data/models/chol.json", "--verify", "6", "--verify-sample", "50"],
        vec!["fit", "--model", "data/models/m2.json", "--table", "data/swiss.csv"],
        [&["exact"], EXACT].concat(),
        [&["exact", "--chains", "2", "--stat", "g2"], EXACT].concat(),
    ]
}

#[test]
fn json_reports_validate_and_round_trip() {
    let v = validator();
    let mut all = commands();
    all.push([&["report", "--verify", "3"], EXACT].concat());
    for mut args in all {
        if args[0] != "report" {
            args.push("--json");
        }
        let out = run(&args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let value: Value = serde_json::from_str(&out.stdout).unwrap();
        let errors: Vec<String> =
            v.iter_errors(&value).map(|e| format!("{e} at {}", e.instance_path())).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        let parsed: Report = serde_json::from_value(value.clone()).unwrap();
        assert_eq!(Some(&parsed), out.report.as_ref());
        assert_eq!(serde_json::to_value(&parsed).unwrap(), value);
    }
}

/// `key: value` lines of the text form, and the rows under `fitted counts:`.
fn text_fields(text: &str) -> (HashMap<String, String>, Vec<Vec<f64>>) {
    let mut fields = HashMap::new();
    let mut counts = Vec::new();
    let mut in_counts = false;
    for line in text.lines() {
        if line == "fitted counts:" {
            in_counts = true;
            continue;
        }
        if in_counts && line.starts_with("  ") {
            counts.push(line.split_whitespace().map(|x| x.parse().unwrap()).collect());
            continue;
        }
        in_counts = false;
        if let Some((k, v)) = line.split_once(": ") {
            if !line.starts_with(' ') {
                fields.insert(k.to_string(), v.to_string());
            }
        }
    }
    (fields, counts)
}

#[test]
fn text_and_json_agree() {
    let pairs: &[(&str, &str)] = &[
        ("mcrs", "/model/mcrs"),
        ("mccs", "/model/mccs"),
        ("components", "/model/components"),
        ("rank", "/model/rank"),
        ("df", "/model/df"),
        ("moves", "/basis/size"),
        ("verified up to", "/basis/verified_up_to"),
        ("total", "/fit/total"),
        ("iterations", "/fit/iterations"),
        ("birch residual", "/fit/birch_residual"),
        ("c2", "/tests/c2"),
        ("g2", "/tests/g2"),
        ("test df", "/tests/df"),
        ("p asymptotic c2", "/tests/p_asymptotic_c2"),
        ("p asymptotic g2", "/tests/p_asymptotic_g2"),
        ("exact observed", "/tests/exact/observed"),
        ("p exact", "/tests/exact/p_value"),
        ("std error", "/tests/exact/std_error"),
        ("samples", "/tests/exact/params/samples"),
        ("burn in", "/tests/exact/params/burn_in"),
        ("thinning", "/tests/exact/params/thinning"),
        ("seed", "/tests/exact/params/seed"),
        ("chains", "/tests/exact/params/chains"),
        ("acceptance rate", "/tests/exact/acceptance_rate"),
    ];
    for args in commands().into_iter().chain([vec![
        "fit",
        "--model",
        "data/models/ex3per3.json",
        "--table",
        "data/biostat.csv",
    ]]) {
        let text = run(&args);
        let json = run(&[args.clone(), vec!["--json"]].concat());
        assert_eq!(text.code, 0);
        let value: Value = serde_json::from_str(&json.stdout).unwrap();
        let (fields, counts) = text_fields(&text.stdout);
        let mut checked = 0;
        for (key, pointer) in pairs {
            match (fields.get(*key), value.pointer(pointer)) {
                (Some(t), Some(j)) => {
                    let t: f64 = t.parse().unwrap_or_else(|_| panic!("{key}: {t}"));
                    assert_eq!(t, j.as_f64().unwrap(), "{args:?} {key}");
                    checked += 1;
                }
                (None, None) => {}
                (t, j) => panic!("{args:?}: {key} text {t:?} json {j:?}"),
            }
        }
        assert!(checked >= 5);
        if let Some(j) = value.pointer("/fit/fitted_counts") {
            let j: Vec<Vec<f64>> = serde_json::from_value(j.clone()).unwrap();
            assert_eq!(counts, j);
        }
    }
}

#[test]
fn independence_summary() {
    let out = run(&["suffstat", "--model", "data/models/full_3x3.json", "--json"]);
    let m = &out.report.unwrap().model;
    assert_eq!((m.mcrs, m.mccs, m.free_cells.len(), m.df, m.rank), (3, 3, 0, 4, 5));
}

#[test]
fn seeds_reproduce() {
    let a = run(&[&["exact", "--json", "--chains", "3"], EXACT].concat());
    let b = run(&[&["exact", "--json", "--chains", "3"], EXACT].concat());
    assert_eq!(a.stdout, b.stdout);
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_weakind")).current_dir(root()).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes() {
    let (code, out, _) =
        binary(&["fit", "--model", "data/models/ex3per3.json", "--table", "data/biostat.csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("c2: 0.98"));
    // input errors
    for args in [
        vec!["fit", "--model", "data/models/ex3per3.json", "--table", "data/chol.csv"],
        vec!["fit", "--model", "data/models/missing.json", "--table", "data/chol.csv"],
        vec!["exact", "--model", "data/models/ex3per3.json", "--table", "data/biostat.csv", "--stat", "x2"],
        vec!["exact", "--model", "data/models/ex3per3.json", "--table", "data/biostat.csv", "--thin", "0"],
        vec!["bogus"],
    ] {
        let (code, _, err) = binary(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    let (code, _, err) = binary(&[
        "fit",
        "--model",
        "data/models/m1.json",
        "--table",
        "data/swiss.csv",
        "--tol",
        "1e-15",
        "--max-iter",
        "2",
    ]);
    assert_eq!(code, 3, "{err}");
    let (code, _, err) = binary(&["basis", "--model", "data/models/chol.json", "--max-degree", "1"]);
    assert_eq!(code, 4, "{err}");
    let (code, _, err) =
        binary(&["basis", "--model", "data/models/chol.json", "--verify", "10", "--verify-budget", "1000"]);
    assert_eq!(code, 4, "{err}");
    let (code, out, _) = binary(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("suffstat"));
}

#[test]
fn bad_input_files() {
    let dir = std::env::temp_dir().join(format!("weakind-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ragged = dir.join("ragged.csv");
    std::fs::write(&ragged, "1,2\n3\n").unwrap();
    let negative = dir.join("neg.csv");
    std::fs::write(&negative, "1,2,3\n4,-5,6\n7,8,9\n").unwrap();
    let model = dir.join("bad.json");
    std::fs::write(&model, r#"{"rows": 3, "cols": 3, "minors": [[3, 1]]}"#).unwrap();
    let ex = path("data/models/ex3per3.json");
    for (m, t, needle) in [
        (ex.as_str(), ragged.to_str().unwrap(), "row 2"),
        (ex.as_str(), negative.to_str().unwrap(), "negative"),
        (model.to_str().unwrap(), negative.to_str().unwrap(), "outside"),
    ] {
        let out = run_command(["weakind", "fit", "--model", m, "--table", t]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains(needle), "{}", out.stderr);
    }
    std::fs::remove_dir_all(dir).unwrap();
}
