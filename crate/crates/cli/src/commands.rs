use std::collections::BTreeSet;
use std::fmt::Write as _;

use dvr_duality::duality::{dual_structure, DualElem};
use dvr_duality::fingen::{snf, InvariantFactors};
use dvr_duality::flood::{torsion_count, zdelta_validate};
use dvr_duality::io;
use dvr_duality::verify::{run_suite, Status, VerifyConfig};
use dvr_duality::{Error, Result, RingCtx};
use serde_json::{json, Value};

use crate::{Command, Common};

const DEFAULT_BUDGET: u128 = 1 << 16;

/// What a command produced and whether every property it checked held.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn pass(json: Value, text: String) -> Self {
        Outcome {
            json,
            text,
            ok: true,
        }
    }
}

pub fn run(command: Command, common: &Common) -> Result<Outcome> {
    let budget = common.budget.unwrap_or(DEFAULT_BUDGET);
    match command {
        Command::Snf { matrix } => snf_cmd(&matrix),
        Command::Dual { ring, module } => dual_cmd(&ring, &module, budget),
        Command::Pair {
            ring,
            module,
            phi,
            elem,
        } => pair_cmd(&ring, &module, &phi, &elem),
        Command::DoubleDual { ring, module, elem } => double_dual_cmd(&ring, &module, &elem),
        Command::Square { ring, a, b, phi } => square_cmd(&ring, a, b, phi.as_deref(), budget),
        Command::Ell { ring, phi } => ell_cmd(&ring, &phi),
        Command::Transport { ring, module, phi } => {
            transport_cmd(&ring, &module, phi.as_deref(), budget)
        }
        Command::TorsionCount { ring, n } => torsion_count_cmd(&ring, n),
        Command::Zdelta { a, b } => zdelta_cmd(a, b),
        Command::Verify {
            config,
            ring,
            suite,
            none,
            corrupt_snf_pivot,
        } => {
            let mut cfg = match config {
                Some(c) => VerifyConfig::from_json(&read_text(&c)?)?,
                None => VerifyConfig::default(),
            };
            if let Some(seed) = common.seed {
                cfg.seed = seed;
            }
            if let Some(b) = common.budget {
                cfg.budgets.oracle_elements = b;
            }
            if !ring.is_empty() {
                cfg.rings = ring;
            }
            if none {
                cfg.suites = Some(Vec::new());
            } else if !suite.is_empty() {
                cfg.suites = Some(suite);
            }
            cfg.corrupt_snf_pivot |= corrupt_snf_pivot;
            verify_cmd(&cfg)
        }
    }
}

/// Inline JSON, `@path`, or a bare path.
fn read_text(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    let path = arg.strip_prefix('@').unwrap_or(arg);
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn read_json(arg: &str) -> Result<Value> {
    serde_json::from_str(&read_text(arg)?).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn ring_and_module(ring: &str, module: &str) -> Result<(RingCtx, InvariantFactors)> {
    Ok((ring.parse()?, module.parse()?))
}

fn snf_cmd(matrix: &str) -> Result<Outcome> {
    let (ctx, m) = io::parse_matrix(&read_text(matrix)?)?;
    let s = snf(&ctx, &m)?;
    let json = json!({
        "ring": ctx.spec_string(),
        "rows": m.nrows(),
        "cols": m.ncols(),
        "rank": s.rank(),
        "pivots": s.pivots,
        "module": s.factors.to_string(),
        "torsion_exps": s.factors.torsion_exps(),
        "free_rank": s.factors.free_rank(),
    });
    let text = format!("cokernel {} (pivot valuations {:?})", s.factors, s.pivots);
    Ok(Outcome::pass(json, text))
}

fn dual_cmd(ring: &str, module: &str, budget: u128) -> Result<Outcome> {
    let (ctx, m) = ring_and_module(ring, module)?;
    let d = dual_structure(&m);
    let card = d.cardinality(&ctx);
    let mut json = json!({
        "ring": ctx.spec_string(),
        "module": m.to_string(),
        "torsion_exps": d.torsion_exps,
        "t_copies": d.t_copies,
        "cardinality": card.map(|c| c.to_string()),
    });
    let mut text = format!(
        "dual of {m}: {} x T^{}",
        InvariantFactors::torsion(&d.torsion_exps)?,
        d.t_copies
    );
    if let Some(c) = card {
        write!(text, ", {c} functionals").unwrap();
        if c <= budget.min(256) {
            let all = ctx.dual_elements(&m, budget)?;
            json["elements"] = all.iter().map(io::dualelem_to_json).collect();
        }
    }
    Ok(Outcome::pass(json, text))
}

fn pair_cmd(ring: &str, module: &str, phi: &str, elem: &str) -> Result<Outcome> {
    let (ctx, m) = ring_and_module(ring, module)?;
    let phi = io::dualelem_from_json(&ctx, &m, &read_json(phi)?)?;
    let x = io::modelem_from_json(&ctx, &m, &read_json(elem)?, ctx.precision())?;
    let value = ctx.eval_pairing(&m, &phi, &x)?;
    Ok(Outcome::pass(
        json!({ "value": io::telem_to_json(&value) }),
        value.to_string(),
    ))
}

fn double_dual_cmd(ring: &str, module: &str, elem: &str) -> Result<Outcome> {
    let (ctx, m) = ring_and_module(ring, module)?;
    let x = io::modelem_from_json(&ctx, &m, &read_json(elem)?, ctx.precision())?;
    let x = ctx.elem_normalize(&m, &x)?;
    let image = ctx.double_dual_map(&m, &x)?;
    let identity = image == x;
    let json = json!({
        "elem": io::modelem_to_json(&x),
        "image": io::modelem_to_json(&image),
        "identity": identity,
    });
    Ok(Outcome {
        json,
        text: format!("{x} -> {image}"),
        ok: identity,
    })
}

fn square_cmd(ring: &str, a: usize, b: usize, phi: Option<&str>, budget: u128) -> Result<Outcome> {
    let ctx: RingCtx = ring.parse()?;
    let mb = InvariantFactors::torsion(&[b])?;
    let phis: Vec<DualElem> = match phi {
        Some(p) => vec![io::dualelem_from_json(&ctx, &mb, &read_json(p)?)?],
        None => ctx.dual_elements(&mb, budget)?,
    };
    let mut failures = Vec::new();
    for phi in &phis {
        let r = ctx.inf_res_square(a, b, phi)?;
        if r.via_dual_inf != r.via_res {
            failures.push(json!({
                "phi": io::dualelem_to_json(phi),
                "via_dual_inf": io::relem_to_json(&r.via_dual_inf),
                "via_res": io::relem_to_json(&r.via_res),
            }));
        }
    }
    let ok = failures.is_empty();
    let json =
        json!({ "a": a, "b": b, "checked": phis.len(), "commutes": ok, "failures": failures });
    let text = format!(
        "{} of {} functionals commute",
        phis.len() - failures.len(),
        phis.len()
    );
    Ok(Outcome { json, text, ok })
}

fn ell_cmd(ring: &str, phi: &str) -> Result<Outcome> {
    let ctx: RingCtx = ring.parse()?;
    let phi = io::zdual_from_json(&ctx, &read_json(phi)?)?;
    let t = ctx.ell(&phi)?;
    let back = ctx.ell_inv(&t)?;
    let ok = back == phi;
    let json = json!({ "t": io::telem_to_json(&t), "round_trip": ok });
    Ok(Outcome {
        json,
        text: t.to_string(),
        ok,
    })
}

fn transport_cmd(ring: &str, module: &str, phi: Option<&str>, budget: u128) -> Result<Outcome> {
    let (ctx, m) = ring_and_module(ring, module)?;
    let size = m
        .cardinality(&ctx)
        .ok_or_else(|| Error::Shape(format!("module {m} is not finite")))?;
    if let Some(p) = phi {
        let psi = io::dualelem_from_json(&ctx, &m, &read_json(p)?)?;
        let table = ctx.adjoint_transport(&m, &psi, budget)?;
        let rows: Vec<Value> = table
            .iter()
            .map(|(x, v)| json!({ "elem": io::modelem_to_json(x), "value": v.to_string() }))
            .collect();
        let text = table.iter().fold(String::new(), |mut s, (x, v)| {
            writeln!(s, "{x} -> {v}").unwrap();
            s
        });
        return Ok(Outcome::pass(json!({ "table": rows }), text));
    }
    let psis = ctx.dual_elements(&m, budget)?;
    let mut images = BTreeSet::new();
    for psi in &psis {
        let table = ctx.adjoint_transport(&m, psi, budget)?;
        images.insert(
            table
                .into_values()
                .map(|v| v.to_string())
                .collect::<Vec<_>>(),
        );
    }
    let ok = images.len() == psis.len() && psis.len() as u128 == size;
    let json = json!({
        "module": m.to_string(),
        "module_size": size.to_string(),
        "functionals": psis.len(),
        "distinct_characters": images.len(),
        "bijective": ok,
    });
    let text = format!(
        "{} functionals onto {} distinct characters of a module of size {size}",
        psis.len(),
        images.len()
    );
    Ok(Outcome { json, text, ok })
}

fn torsion_count_cmd(ring: &str, n: usize) -> Result<Outcome> {
    let ctx: RingCtx = ring.parse()?;
    let (count, expected) = torsion_count(&ctx, n)?;
    let ok = count == expected;
    let json = json!({ "n": n, "count": count.to_string(), "expected": expected.to_string(), "equal": ok });
    Ok(Outcome {
        json,
        text: format!("#T[p^{n}] = {count} (expected {expected})"),
        ok,
    })
}

fn zdelta_cmd(a: i64, b: i64) -> Result<Outcome> {
    let disc = (b as i128) * (b as i128) + 4 * a as i128;
    let (accepted, reason) = match zdelta_validate(a, b) {
        Ok(_) => (true, None),
        Err(Error::Rejected(r)) => (false, Some(r)),
        Err(e) => return Err(e),
    };
    let json = json!({ "a": a, "b": b, "discriminant": disc.to_string(), "accepted": accepted, "reason": reason });
    let text = match &reason {
        None => format!("accepted: delta^2 = {a} + {b} delta, b^2 + 4a = {disc}"),
        Some(r) => format!("rejected: {r}"),
    };
    Ok(Outcome::pass(json, text))
}

fn verify_cmd(cfg: &VerifyConfig) -> Result<Outcome> {
    let report = run_suite(cfg)?;
    let mut text = String::new();
    for e in &report.entries {
        let mark = if e.status == Status::Pass {
            "pass"
        } else {
            "FAIL"
        };
        write!(text, "{mark} {:<26} {} cases", e.name, e.cases).unwrap();
        if e.skipped > 0 {
            write!(text, ", {} skipped", e.skipped).unwrap();
        }
        if let Some(c) = &e.counterexample {
            write!(text, "\n     counterexample: {c}").unwrap();
        }
        text.push('\n');
    }
    writeln!(
        text,
        "{}/{} entries passed, {} cases",
        report.totals.passed, report.totals.entries, report.totals.cases
    )
    .unwrap();
    let json = serde_json::to_value(&report).expect("report serializes");
    Ok(Outcome {
        json,
        text,
        ok: report.passed(),
    })
}
