//! The property suite behind `dvrdual verify`.
//!
//! Every entry draws its randomness from its own ChaCha stream keyed by the
//! suite seed and the entry's fixed stream number, so a report depends only
//! on the configuration. Wall-clock times are collected under the report's
//! `timestamps` key and nowhere else.

mod algebra;
mod duality_checks;
mod flood_checks;
mod gen;

use std::time::Instant;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::RingCtx;
use crate::error::{Error, Result};

use gen::Rng8;

/// Sizes of the corpora and caps on brute-force enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Cap on anything an oracle enumerates.
    pub oracle_elements: u128,
    pub ring_law_cases: usize,
    pub torsion_count_max_n: usize,
    pub snf_matrices: usize,
    pub snf_scrambles: usize,
    pub snf_max_dim: usize,
    pub snf_max_valuation: usize,
    /// Exponent sum bound for the counting corpus over `Z_2`.
    pub counting_max_sum_z2: usize,
    /// Exponent sum bound for the counting corpus over the other rings.
    pub counting_max_sum: usize,
    pub counting_max_elements: u128,
    pub double_dual_max_elements: u128,
    pub double_dual_random: usize,
    pub square_max_exp: usize,
    pub hom_max_elements: u128,
    pub naturality_max_elements: u128,
    pub chains: usize,
    pub chain_max_elements: u128,
    pub ell_support: usize,
    pub ell_random: usize,
    pub transport_max_elements: u128,
    pub zdelta_triples: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            oracle_elements: 1 << 14,
            ring_law_cases: 1000,
            torsion_count_max_n: 6,
            snf_matrices: 500,
            snf_scrambles: 20,
            snf_max_dim: 4,
            snf_max_valuation: 3,
            counting_max_sum_z2: 12,
            counting_max_sum: 7,
            counting_max_elements: 1 << 12,
            double_dual_max_elements: 1 << 10,
            double_dual_random: 100,
            square_max_exp: 5,
            hom_max_elements: 256,
            naturality_max_elements: 64,
            chains: 200,
            chain_max_elements: 1 << 10,
            ell_support: 3,
            ell_random: 500,
            transport_max_elements: 256,
            zdelta_triples: 1000,
        }
    }
}

pub const DEFAULT_RINGS: [&str; 4] = [
    "mode=mixed,p=2,e=1,prec=8",
    "mode=mixed,p=3,e=1,prec=8",
    "mode=equal,p=2,e=1,prec=8",
    "mode=equal,p=2,e=2,poly=1,1,1,prec=8",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    pub rings: Vec<String>,
    pub budgets: Budgets,
    /// Entry names to run; `None` runs everything.
    pub suites: Option<Vec<String>>,
    /// Replaces the SNF pivot rule with one that ignores valuations, so that
    /// the suite can be seen to catch a broken elimination.
    pub corrupt_snf_pivot: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            rings: DEFAULT_RINGS.iter().map(|s| s.to_string()).collect(),
            budgets: Budgets::default(),
            suites: None,
            corrupt_snf_pivot: false,
        }
    }
}

impl VerifyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("verify config: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    /// Cases checked.
    pub cases: u64,
    /// Cases left out because an enumeration would exceed its budget.
    pub skipped: u64,
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Totals {
    pub entries: usize,
    pub passed: usize,
    pub failed: usize,
    pub cases: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub status: Status,
    pub seed: u64,
    pub rings: Vec<String>,
    pub totals: Totals,
    pub entries: Vec<Entry>,
    /// Elapsed milliseconds per entry and in total; not reproducible.
    pub timestamps: Value,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report as JSON with `timestamps` removed.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("timestamps");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

/// What a property check hands back: how much it covered, or the first
/// counterexample.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub cases: u64,
    pub skipped: u64,
}

impl Tally {
    fn absorb(&mut self, other: Tally) {
        self.cases += other.cases;
        self.skipped += other.skipped;
    }
}

pub(crate) struct Failure(pub Value);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(json!({ "error": e.to_string() }))
    }
}

pub(crate) type Check = std::result::Result<Tally, Failure>;

pub(crate) fn ensure(
    cond: bool,
    counterexample: impl FnOnce() -> Value,
) -> std::result::Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure(counterexample()))
    }
}

/// Everything a check may read.
pub(crate) struct Env {
    pub rings: Vec<RingCtx>,
    pub budgets: Budgets,
    pub corrupt_snf_pivot: bool,
    seed: u64,
}

impl Env {
    pub fn rng(&self, stream: u64) -> Rng8 {
        let mut rng = Rng8::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Runs `f` once per configured ring satisfying `keep`, tagging a
    /// counterexample with its ring.
    pub fn per_ring(
        &self,
        keep: impl Fn(&RingCtx) -> bool,
        mut f: impl FnMut(&RingCtx) -> Check,
    ) -> Check {
        let mut total = Tally::default();
        for ctx in self.rings.iter().filter(|c| keep(c)) {
            match f(ctx) {
                Ok(t) => total.absorb(t),
                Err(Failure(mut v)) => {
                    if let Value::Object(map) = &mut v {
                        map.insert("ring".into(), json!(ctx.spec_string()));
                    }
                    return Err(Failure(v));
                }
            }
        }
        Ok(total)
    }
}

type CheckFn = fn(&Env) -> Check;

/// Entry names with their checks, in report order. The position in this
/// list is the entry's random stream.
pub const ENTRY_NAMES: [&str; 25] = [
    "arith.canonical_t",
    "arith.torsion_count",
    "arith.ring_laws",
    "arith.unit_inverse",
    "arith.action_compat",
    "fingen.snf_invariance",
    "fingen.cokernel_oracle",
    "fingen.inf_res",
    "fingen.hom_space_count",
    "fingen.hom_constraints",
    "duality.counting",
    "duality.double_dual",
    "duality.square",
    "duality.naturality",
    "duality.kernel_trivial",
    "duality.extend_hom",
    "oracle.r_hom_linearity",
    "flood.ell_linearity",
    "flood.ell_bijection",
    "flood.transport",
    "flood.torsion_count",
    "flood.i_iso_linearity",
    "flood.zdelta_predicate",
    "flood.zdelta_laws",
    "flood.zdelta_norm",
];

const CHECKS: [CheckFn; 25] = [
    algebra::canonical_t,
    algebra::torsion_enumeration,
    algebra::ring_laws,
    algebra::unit_inverse,
    algebra::action_compat,
    algebra::snf_invariance,
    algebra::cokernel_oracle,
    algebra::inf_res,
    algebra::hom_space_count,
    algebra::hom_constraints,
    duality_checks::counting,
    duality_checks::double_dual,
    duality_checks::square,
    duality_checks::naturality,
    duality_checks::kernel_trivial,
    duality_checks::extend_hom,
    duality_checks::r_hom_linearity,
    flood_checks::ell_linearity,
    flood_checks::ell_bijection,
    flood_checks::transport,
    flood_checks::torsion_count,
    flood_checks::i_iso_linearity,
    flood_checks::zdelta_predicate,
    flood_checks::zdelta_laws,
    flood_checks::zdelta_norm,
];

/// Runs the selected entries in declaration order.
pub fn run_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    let rings = config
        .rings
        .iter()
        .map(|s| s.parse::<RingCtx>())
        .collect::<Result<Vec<_>>>()?;
    if let Some(sel) = &config.suites {
        if let Some(bad) = sel.iter().find(|s| !ENTRY_NAMES.contains(&s.as_str())) {
            return Err(Error::Parse(format!("unknown suite entry `{bad}`")));
        }
    }
    let env = Env {
        rings,
        budgets: config.budgets.clone(),
        corrupt_snf_pivot: config.corrupt_snf_pivot,
        seed: config.seed,
    };
    let start = Instant::now();
    let mut entries = Vec::new();
    let mut elapsed = serde_json::Map::new();
    for (name, check) in ENTRY_NAMES.iter().zip(CHECKS) {
        if config
            .suites
            .as_ref()
            .is_some_and(|sel| !sel.iter().any(|s| s == name))
        {
            continue;
        }
        let t = Instant::now();
        let entry = match check(&env) {
            Ok(t) => Entry {
                name: name.to_string(),
                status: Status::Pass,
                cases: t.cases,
                skipped: t.skipped,
                counterexample: None,
            },
            Err(Failure(v)) => Entry {
                name: name.to_string(),
                status: Status::Fail,
                cases: 0,
                skipped: 0,
                counterexample: Some(v),
            },
        };
        elapsed.insert(name.to_string(), json!(t.elapsed().as_millis() as u64));
        entries.push(entry);
    }
    let failed = entries.iter().filter(|e| e.status == Status::Fail).count();
    let totals = Totals {
        entries: entries.len(),
        passed: entries.len() - failed,
        failed,
        cases: entries.iter().map(|e| e.cases).sum(),
    };
    Ok(VerifyReport {
        schema: "dvrdual-verify/1",
        status: if failed == 0 {
            Status::Pass
        } else {
            Status::Fail
        },
        seed: config.seed,
        rings: env.rings.iter().map(RingCtx::spec_string).collect(),
        totals,
        entries,
        timestamps: json!({ "total_ms": start.elapsed().as_millis() as u64, "entries_ms": elapsed }),
    })
}
