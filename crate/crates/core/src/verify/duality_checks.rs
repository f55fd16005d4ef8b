use std::collections::HashSet;

use rand::Rng;
use serde_json::json;

use super::gen;
use super::{ensure, Check, Env, Tally};
use crate::arith::{RElem, RingCtx, TElem};
use crate::duality::{dual_structure, DualElem};
use crate::fingen::{HomMatrix, InvariantFactors, ModElem};
use crate::io::{dualelem_to_json, modelem_to_json, telem_to_json};
use crate::oracle::{self, EnumBudget};

const STREAM_DOUBLE_DUAL: u64 = 11;
const STREAM_NATURALITY: u64 = 13;
const STREAM_CHAINS: u64 = 15;
const STREAM_LINEARITY: u64 = 16;

fn sum_bound(ctx: &RingCtx, max_card: u128) -> usize {
    (0..)
        .take_while(|&n| ctx.residue_count(n).is_some_and(|c| c <= max_card))
        .last()
        .unwrap_or(0)
}

fn budget(env: &Env, at_least: u128) -> EnumBudget {
    EnumBudget {
        max_elements: env.budgets.oracle_elements.max(at_least),
        seed: 0,
    }
}

/// The oracle's image tuple `a_i / pi^L` of a functional with coordinates
/// `b_i / pi^e_i`.
fn as_images(phi: &DualElem, m: &InvariantFactors, level: usize) -> Vec<RElem> {
    phi.torsion
        .iter()
        .zip(m.torsion_exps())
        .map(|(b, &e)| b.shift_up(level - e))
        .collect()
}

pub(super) fn counting(env: &Env) -> Check {
    let b = &env.budgets;
    let budget = budget(env, b.counting_max_elements);
    env.per_ring(
        |_| true,
        |ctx| {
            let max_sum = if ctx.mode() == crate::arith::Mode::Mixed && ctx.p() == 2 {
                b.counting_max_sum_z2
            } else {
                b.counting_max_sum
            };
            let mut tally = Tally::default();
            for m in gen::torsion_corpus(ctx, max_sum, b.counting_max_elements) {
                let size = m.cardinality(ctx).expect("finite");
                let level = m.max_exp();
                let homs = oracle::enum_r_homs(ctx, &m, level, &budget)?;
                let structural = dual_structure(&m).cardinality(ctx);
                let oracle_set: HashSet<Vec<RElem>> =
                    homs.iter().map(|h| h.images.clone()).collect();
                let dual_set: HashSet<Vec<RElem>> = ctx
                    .dual_elements(&m, budget.max_elements)?
                    .iter()
                    .map(|phi| as_images(phi, &m, level))
                    .collect();
                let ok = homs.len() as u128 == size
                    && oracle_set.len() == homs.len()
                    && structural == Some(size)
                    && oracle_set == dual_set;
                ensure(ok, || {
                    json!({
                        "module": m.to_string(),
                        "cardinality": size.to_string(),
                        "oracle_homs": homs.len(),
                        "dual_module": structural.map(|c| c.to_string()),
                        "coordinates_match": oracle_set == dual_set,
                    })
                })?;
                tally.cases += 1;
            }
            Ok(tally)
        },
    )
}

const FREE_MODULES: [&str; 5] = ["[];f=1", "[];f=2", "[1];f=2", "[1,2];f=1", "[2,3];f=2"];

pub(super) fn double_dual(env: &Env) -> Check {
    let b = &env.budgets;
    let budget = budget(env, b.double_dual_max_elements);
    let mut rng = env.rng(STREAM_DOUBLE_DUAL);
    env.per_ring(
        |_| true,
        |ctx| {
            let mut tally = Tally::default();
            let max = b.double_dual_max_elements;
            for m in gen::torsion_corpus(ctx, sum_bound(ctx, max), max) {
                for x in oracle::enum_elements(ctx, &m, &budget)? {
                    let y = ctx.double_dual_map(&m, &x)?;
                    ensure(y == x, || json!({ "module": m.to_string(), "m": modelem_to_json(&x), "d(m)": modelem_to_json(&y) }))?;
                    tally.cases += 1;
                }
            }
            let prec = ctx.precision();
            for spec in FREE_MODULES {
                let m: InvariantFactors = spec.parse()?;
                for _ in 0..b.double_dual_random {
                    let x = gen::elem(ctx, &mut rng, &m, prec);
                    let y = ctx.double_dual_map(&m, &x)?;
                    ensure(y == x, || json!({ "module": spec, "m": modelem_to_json(&x), "d(m)": modelem_to_json(&y) }))?;
                    tally.cases += 1;
                }
            }
            Ok(tally)
        },
    )
}

pub(super) fn square(env: &Env) -> Check {
    env.per_ring(
        |ctx| ctx.q() == 2,
        |ctx| {
            let mut tally = Tally::default();
            for bexp in 1..=env.budgets.square_max_exp {
                let mb = InvariantFactors::torsion(&[bexp])?;
                for phi in ctx.dual_elements(&mb, env.budgets.oracle_elements.max(1 << 10))? {
                    for a in 0..=bexp {
                        let r = ctx.inf_res_square(a, bexp, &phi)?;
                        ensure(r.via_dual_inf == r.via_res, || json!({ "a": a, "b": bexp, "phi": dualelem_to_json(&phi), "sides": r }))?;
                        tally.cases += 1;
                    }
                }
            }
            Ok(tally)
        },
    )
}

fn combine(ctx: &RingCtx, gens: &[HomMatrix], coeffs: &[RElem]) -> crate::error::Result<HomMatrix> {
    let g0 = &gens[0];
    let entries = (0..g0.domain().ncomponents())
        .map(|i| {
            (0..g0.codomain().ncomponents())
                .map(|j| {
                    let prec = g0.entry(i, j).precision();
                    gens.iter()
                        .zip(coeffs)
                        .fold(RElem::zero(prec), |acc, (g, c)| {
                            ctx.r_add(
                                &acc,
                                &ctx.r_mul(&c.lift(prec).truncate(prec), g.entry(i, j)),
                            )
                        })
                })
                .collect()
        })
        .collect();
    HomMatrix::new(ctx, g0.domain().clone(), g0.codomain().clone(), entries)
}

/// Pairs whose `|M| |N|` is at most this are checked on every element of
/// `M`; larger ones on the generators and eight random elements.
const FULL_NATURALITY: u128 = 512;

/// `(h^ phi)(m) = phi(h m)` for every functional, with `h` the generators
/// of `Hom(M, N)` and two random combinations of them.
pub(super) fn naturality(env: &Env) -> Check {
    let max = env.budgets.naturality_max_elements;
    let budget = budget(env, max);
    let mut rng = env.rng(STREAM_NATURALITY);
    env.per_ring(
        |_| true,
        |ctx| {
            let corpus = gen::torsion_corpus(ctx, sum_bound(ctx, max), max);
            let mut tally = Tally::default();
            for m in &corpus {
                let m_elems = oracle::enum_elements(ctx, m, &budget)?;
                for n in &corpus {
                    let hs = ctx.hom_space(m, n);
                    let mut homs = hs.generators.clone();
                    if !homs.is_empty() {
                        for _ in 0..2 {
                            let coeffs: Vec<RElem> = homs.iter().map(|_| gen::relem(ctx, &mut rng, n.max_exp().max(1))).collect();
                            let h = combine(ctx, &hs.generators, &coeffs)?;
                            homs.push(h);
                        }
                    }
                    let phis = ctx.dual_elements(n, budget.max_elements)?;
                    let size = m_elems.len() * phis.len();
                    let probes: Vec<ModElem> = if size as u128 <= FULL_NATURALITY {
                        m_elems.clone()
                    } else {
                        let mut p: Vec<ModElem> = (0..m.ncomponents()).map(|i| ModElem::basis(m, i, 0)).collect();
                        p.extend((0..8).map(|_| gen::elem(ctx, &mut rng, m, 0)));
                        p
                    };
                    for h in &homs {
                        let dh = ctx.dual_hom(h);
                        let images = probes.iter().map(|x| ctx.apply_hom(h, x)).collect::<crate::error::Result<Vec<_>>>()?;
                        for phi in &phis {
                            let pulled = ctx.apply_dual_hom(&dh, phi)?;
                            for (x, hx) in probes.iter().zip(&images) {
                                let lhs = ctx.eval_pairing(m, &pulled, x)?;
                                let rhs = ctx.eval_pairing(n, phi, hx)?;
                                ensure(lhs == rhs, || {
                                    json!({
                                        "m": m.to_string(), "n": n.to_string(),
                                        "hom": h.entries().iter().map(|r| r.iter().map(crate::io::relem_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                                        "phi": dualelem_to_json(phi), "x": modelem_to_json(x),
                                        "lhs": telem_to_json(&lhs), "rhs": telem_to_json(&rhs),
                                    })
                                })?;
                            }
                            tally.cases += 1;
                        }
                    }
                }
            }
            Ok(tally)
        },
    )
}

pub(super) fn kernel_trivial(env: &Env) -> Check {
    let max = env.budgets.hom_max_elements;
    let budget = budget(env, max);
    env.per_ring(
        |_| true,
        |ctx| {
            let mut tally = Tally::default();
            for m in gen::torsion_corpus(ctx, sum_bound(ctx, max), max) {
                let phis = ctx.dual_elements(&m, budget.max_elements)?;
                for x in oracle::enum_elements(ctx, &m, &budget)? {
                    let mut detected = false;
                    for phi in &phis {
                        if !ctx.eval_pairing(&m, phi, &x)?.is_zero() {
                            detected = true;
                            break;
                        }
                    }
                    ensure(detected != x.is_zero(), || json!({ "module": m.to_string(), "m": modelem_to_json(&x), "some_phi_nonzero": detected }))?;
                    tally.cases += 1;
                }
            }
            Ok(tally)
        },
    )
}

/// Random `N = <gens> <= M`; every functional the oracle finds on `N`
/// must come back from `extend_hom` as a functional on `M` restricting to it.
pub(super) fn extend_hom(env: &Env) -> Check {
    let max = env.budgets.chain_max_elements;
    let budget = budget(env, max);
    let mut rng = env.rng(STREAM_CHAINS);
    env.per_ring(
        |ctx| ctx.q() == 2,
        |ctx| {
            let mut tally = Tally::default();
            for _ in 0..env.budgets.chains {
                let m = gen::finite_module(ctx, &mut rng, max);
                let k = rng.random_range(1..=3);
                let gens: Vec<ModElem> = (0..k).map(|_| gen::elem(ctx, &mut rng, &m, 0)).collect();
                let sub = oracle::enum_sub_homs(ctx, &m, &gens, &budget)?;
                let witness = |values: &[TElem]| {
                    json!({
                        "module": m.to_string(),
                        "gens": gens.iter().map(modelem_to_json).collect::<Vec<_>>(),
                        "values": values.iter().map(telem_to_json).collect::<Vec<_>>(),
                    })
                };
                ensure(sub.values.len() as u128 == sub.size, || json!({ "module": m.to_string(), "submodule_size": sub.size.to_string(), "functionals": sub.values.len() }))?;
                for values in &sub.values {
                    let lift = ctx.extend_hom(&m, &gens, values).map_err(|e| super::Failure(json!({ "error": e.to_string(), "case": witness(values) })))?;
                    for (g, v) in gens.iter().zip(values) {
                        ensure(ctx.eval_pairing(&m, &lift, g)? == *v, || witness(values))?;
                    }
                    tally.cases += 1;
                }
            }
            Ok(tally)
        },
    )
}

/// Every oracle `R`-linear map really is additive and `R`-linear pointwise,
/// and no generator-image tuple is listed twice.
pub(super) fn r_hom_linearity(env: &Env) -> Check {
    let budget = budget(env, 64);
    let mut rng = env.rng(STREAM_LINEARITY);
    env.per_ring(
        |_| true,
        |ctx| {
            let mut tally = Tally::default();
            for m in gen::torsion_corpus(ctx, sum_bound(ctx, 16), 16) {
                let level = m.max_exp();
                let elems = oracle::enum_elements(ctx, &m, &budget)?;
                let homs = oracle::enum_r_homs(ctx, &m, level, &budget)?;
                let distinct: HashSet<&Vec<RElem>> = homs.iter().map(|h| &h.images).collect();
                ensure(distinct.len() == homs.len(), || json!({ "module": m.to_string(), "duplicates": homs.len() - distinct.len() }))?;
                let scalars: Vec<RElem> = (0..3).map(|_| gen::relem(ctx, &mut rng, level.max(1))).collect();
                for f in &homs {
                    let values: Vec<TElem> = elems.iter().map(|x| f.eval(ctx, &m, x)).collect::<crate::error::Result<_>>()?;
                    for (i, x) in elems.iter().enumerate() {
                        for (j, y) in elems.iter().enumerate() {
                            let s = ctx.elem_add(&m, x, y)?;
                            ensure(f.eval(ctx, &m, &s)? == ctx.t_add(&values[i], &values[j]), || json!({ "module": m.to_string(), "x": modelem_to_json(x), "y": modelem_to_json(y) }))?;
                        }
                        for r in &scalars {
                            let rx = ctx.elem_scalar_mul(&m, r, x)?;
                            ensure(f.eval(ctx, &m, &rx)? == ctx.t_scalar_mul(r, &values[i])?, || json!({ "module": m.to_string(), "x": modelem_to_json(x), "r": crate::io::relem_to_json(r) }))?;
                        }
                    }
                    tally.cases += 1;
                }
            }
            Ok(tally)
        },
    )
}
