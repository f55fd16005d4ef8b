use std::process::{Command, Output};

use serde_json::Value;

fn dvrdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvrdual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timestamps(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamps");
    v
}

const QUICK: [&str; 8] = [
    "--suite",
    "arith.ring_laws",
    "--suite",
    "fingen.snf_invariance",
    "--suite",
    "flood.zdelta_laws",
    "--suite",
    "duality.square",
];

#[test]
fn verify_is_deterministic() {
    let args: Vec<&str> = ["verify", "--seed", "11"]
        .into_iter()
        .chain(QUICK)
        .collect();
    let a = dvrdual(&args);
    let b = dvrdual(&args);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let (a, b) = (json_of(&a), json_of(&b));
    assert_eq!(a["status"], "pass");
    assert_eq!(a["entries"].as_array().unwrap().len(), 4);
    assert!(a["timestamps"]["total_ms"].is_u64());
    assert_eq!(
        serde_json::to_string(&without_timestamps(a)).unwrap(),
        serde_json::to_string(&without_timestamps(b)).unwrap()
    );
}

#[test]
fn different_seeds_draw_different_cases() {
    let run = |seed: &str| {
        let out = dvrdual(&[
            "verify",
            "--seed",
            seed,
            "--suite",
            "fingen.snf_invariance",
            "--budget",
            "4096",
        ]);
        json_of(&out)["entries"][0]["cases"].clone()
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn corrupted_pivot_rule_is_caught() {
    let out = dvrdual(&[
        "verify",
        "--corrupt-snf-pivot",
        "--suite",
        "fingen.snf_invariance",
        "--suite",
        "arith.ring_laws",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert_eq!(report["status"], "fail");
    let failing: Vec<&str> = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["status"] == "fail")
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["fingen.snf_invariance"]);
    assert!(report["entries"][1]["counterexample"].is_object());
}

#[test]
fn empty_selection_passes() {
    let out = dvrdual(&["verify", "--none"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["totals"]["entries"], 0);
    assert_eq!(report["schema"], "dvrdual-verify/1");
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"seed": 3, "rings": ["mode=mixed,p=5,e=1,prec=6"], "suites": ["arith.unit_inverse"]}"#,
    )
    .unwrap();
    let report = dir.path().join("report.json");
    let out = dvrdual(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["rings"][0], "mode=mixed,p=5,e=1,prec=6");
}

#[test]
fn parse_errors_exit_with_two() {
    assert_eq!(
        dvrdual(&[
            "dual",
            "--ring",
            "mode=mixed,p=4,e=1,prec=3",
            "--module",
            "[1]"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        dvrdual(&[
            "dual",
            "--ring",
            "mode=mixed,p=2,e=1,prec=3",
            "--module",
            "[0]"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        dvrdual(&["verify", "--config", r#"{"sed": 1}"#])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(dvrdual(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn snf_of_a_matrix() {
    let out = dvrdual(&[
        "snf",
        "--matrix",
        r#"{"ring": "mode=mixed,p=2,e=1,prec=8", "rows": [[2, 0], [0, 4]]}"#,
    ]);
    let v = json_of(&out);
    assert_eq!(v["module"], "[1,2];f=0");
    assert_eq!(v["rank"], 2);
}

#[test]
fn small_computations() {
    let z2 = "mode=mixed,p=2,e=1,prec=8";
    let v = json_of(&dvrdual(&[
        "pair",
        "--ring",
        z2,
        "--module",
        "[2]",
        "--phi",
        r#"{"torsion":[1],"t":[]}"#,
        "--elem",
        r#"{"torsion":[3],"free":[]}"#,
    ]));
    assert_eq!(v["value"]["n"], 2);

    let v = json_of(&dvrdual(&[
        "double-dual",
        "--ring",
        z2,
        "--module",
        "[1,3];f=1",
        "--elem",
        r#"{"torsion":[1,5],"free":[9]}"#,
    ]));
    assert_eq!(v["identity"], true);

    let f2 = "mode=equal,p=2,e=1,prec=8";
    let out = dvrdual(&["square", "--ring", f2, "--a", "2", "--b", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["checked"], 16);

    let v = json_of(&dvrdual(&[
        "ell",
        "--ring",
        f2,
        "--phi",
        r#"{"coeffs":[0,1]}"#,
    ]));
    assert_eq!(v["t"]["n"], 2);

    let v = json_of(&dvrdual(&[
        "transport",
        "--ring",
        f2,
        "--module",
        "[1,1,2]",
    ]));
    assert_eq!(
        (v["functionals"].as_u64(), v["bijective"].as_bool()),
        (Some(16), Some(true))
    );

    let v = json_of(&dvrdual(&[
        "torsion-count",
        "--ring",
        "mode=mixed,p=3,e=1,prec=8",
        "--n",
        "4",
    ]));
    assert_eq!(v["count"], "81");

    let v = json_of(&dvrdual(&["zdelta", "--a", "-1", "--b", "0"]));
    assert_eq!(v["accepted"], true);
    let v = json_of(&dvrdual(&["zdelta", "--a", "-1", "--b", "2"]));
    assert_eq!(v["accepted"], false);
}
