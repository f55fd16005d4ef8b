use std::process::ExitCode;

use dvr_duality::verify::{run_suite, Status, VerifyConfig, VerifyReport};

const CRITERIA: [(&str, &[&str]); 9] = [
    ("dual counting", &["duality.counting"]),
    ("double dual is the identity", &["duality.double_dual"]),
    ("commuting square", &["duality.square"]),
    (
        "SNF invariance and cokernel oracle",
        &["fingen.snf_invariance", "fingen.cokernel_oracle"],
    ),
    (
        "ell is an R-linear bijection",
        &["flood.ell_linearity", "flood.ell_bijection"],
    ),
    ("adjoint transport bijection", &["flood.transport"]),
    ("hom lifting along chains", &["duality.extend_hom"]),
    ("torsion counts", &["flood.torsion_count"]),
    (
        "Z[delta] predicate and ring laws",
        &[
            "flood.zdelta_predicate",
            "flood.zdelta_laws",
            "flood.zdelta_norm",
        ],
    ),
];

fn line(n: usize, title: &str, ok: bool, detail: &str) {
    let mark = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} [{mark}] {title}{detail}");
}

fn judge(report: &VerifyReport, names: &[&str]) -> (bool, String) {
    let mut cases = 0;
    for name in names {
        match report.entry(name) {
            Some(e) if e.status == Status::Pass => cases += e.cases,
            Some(e) => {
                return (
                    false,
                    format!(
                        ": {name} failed with {}",
                        e.counterexample.clone().unwrap_or_default()
                    ),
                )
            }
            None => return (false, format!(": {name} missing from the report")),
        }
    }
    (true, format!(" ({cases} cases)"))
}

fn main() -> ExitCode {
    let config = VerifyConfig::default();
    let first = run_suite(&config).expect("default configuration is valid");
    let mut all = true;
    for (i, (title, names)) in CRITERIA.iter().enumerate() {
        let (ok, detail) = judge(&first, names);
        all &= ok;
        line(i + 1, title, ok, &detail);
    }
    let second = run_suite(&config).expect("default configuration is valid");
    let same = first.deterministic_json() == second.deterministic_json();
    all &= same;
    line(
        10,
        "report determinism",
        same,
        if same { "" } else { ": reports differ" },
    );

    let others: Vec<_> = first
        .entries
        .iter()
        .filter(|e| e.status == Status::Fail)
        .map(|e| e.name.as_str())
        .collect();
    if !others.is_empty() {
        println!("failing entries: {}", others.join(", "));
    }
    println!(
        "suite status: {:?}, {} cases, {} ms",
        first.status, first.totals.cases, first.timestamps["total_ms"]
    );
    if all && first.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
