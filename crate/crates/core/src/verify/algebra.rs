use std::collections::HashSet;

use rand::Rng;
use serde_json::json;

use super::gen::{self, Rng8};
use super::{ensure, Check, Env, Failure, Tally};
use crate::arith::{enumerate_t, RElem, RingCtx, TElem};
use crate::error::Error;
use crate::fingen::{
    apply_col_ops, apply_row_ops, replay, snf_with_rule, HomMatrix, InvariantFactors, ModElem,
    PivotRule, PresMatrix, Snf,
};
use crate::io::{matrix_to_json, relem_to_json, telem_to_json};
use crate::oracle::{self, CokernelCount, EnumBudget};

const STREAM_CANONICAL: u64 = 0;
const STREAM_RING_LAWS: u64 = 2;
const STREAM_UNITS: u64 = 3;
const STREAM_ACTION: u64 = 4;
const STREAM_SNF_MATRICES: u64 = 5;
const STREAM_SNF_SCRAMBLES: u64 = 105;
const STREAM_COKERNEL_SMALL: u64 = 6;

fn random_t(ctx: &RingCtx, rng: &mut Rng8, max_level: usize) -> TElem {
    let n = rng.random_range(0..=max_level);
    ctx.t_from_parts(n, gen::digits(ctx, rng, n))
        .expect("digits below q")
}

pub(super) fn canonical_t(env: &Env) -> Check {
    let mut rng = env.rng(STREAM_CANONICAL);
    env.per_ring(
        |_| true,
        |ctx| {
            let n = env.budgets.ring_law_cases;
            let prec = ctx.precision();
            for _ in 0..n {
                let s = random_t(ctx, &mut rng, prec);
                let t = random_t(ctx, &mut rng, prec);
                let r = gen::relem(ctx, &mut rng, prec);
                let outputs = [ctx.t_add(&s, &t), ctx.t_sub(&s, &t), ctx.t_neg(&t), ctx.t_scalar_mul(&r, &t)?];
                for out in outputs {
                    ensure(out.is_canonical(), || json!({ "s": telem_to_json(&s), "t": telem_to_json(&t), "output": telem_to_json(&out) }))?;
                }
            }
            Ok(Tally { cases: n as u64, skipped: 0 })
        },
    )
}

pub(super) fn torsion_enumeration(env: &Env) -> Check {
    env.per_ring(
        |_| true,
        |ctx| {
            let mut tally = Tally::default();
            for n in 0..=env.budgets.torsion_count_max_n {
                let expected = ctx.residue_count(n).unwrap_or(u128::MAX);
                if expected > env.budgets.oracle_elements {
                    tally.skipped += 1;
                    continue;
                }
                let all = enumerate_t(ctx, n);
                let distinct: HashSet<&TElem> = all.iter().collect();
                let ok = all.len() as u128 == expected && distinct.len() == all.len() && all.iter().all(|t| t.is_canonical() && t.level() <= n);
                ensure(ok, || json!({ "n": n, "enumerated": all.len(), "distinct": distinct.len(), "expected": expected }))?;
                tally.cases += 1;
            }
            Ok(tally)
        },
    )
}

pub(super) fn ring_laws(env: &Env) -> Check {
    let mut rng = env.rng(STREAM_RING_LAWS);
    env.per_ring(
        |_| true,
        |ctx| {
            let prec = ctx.precision();
            let n = env.budgets.ring_law_cases;
            for _ in 0..n {
                let (a, b, c) = (gen::relem(ctx, &mut rng, prec), gen::relem(ctx, &mut rng, prec), gen::relem(ctx, &mut rng, prec));
                let witness = || json!({ "a": relem_to_json(&a), "b": relem_to_json(&b), "c": relem_to_json(&c) });
                ensure(ctx.r_add(&ctx.r_add(&a, &b), &c) == ctx.r_add(&a, &ctx.r_add(&b, &c)), witness)?;
                ensure(ctx.r_mul(&ctx.r_mul(&a, &b), &c) == ctx.r_mul(&a, &ctx.r_mul(&b, &c)), witness)?;
                ensure(ctx.r_mul(&a, &ctx.r_add(&b, &c)) == ctx.r_add(&ctx.r_mul(&a, &b), &ctx.r_mul(&a, &c)), witness)?;
                ensure(ctx.r_mul(&a, &b) == ctx.r_mul(&b, &a), witness)?;
                ensure(ctx.r_add(&a, &ctx.r_neg(&a)).is_zero(), witness)?;
            }
            Ok(Tally { cases: n as u64, skipped: 0 })
        },
    )
}

pub(super) fn unit_inverse(env: &Env) -> Check {
    let mut rng = env.rng(STREAM_UNITS);
    env.per_ring(
        |_| true,
        |ctx| {
            let prec = ctx.precision();
            let n = env.budgets.ring_law_cases;
            for _ in 0..n {
                let a = gen::unit(ctx, &mut rng, prec);
                let inv = ctx.r_unit_inverse(&a)?;
                ensure(
                    ctx.r_mul(&a, &inv) == RElem::one(prec),
                    || json!({ "a": relem_to_json(&a), "inverse": relem_to_json(&inv) }),
                )?;
                let b = gen::with_valuation(ctx, &mut rng, 1, prec);
                ensure(
                    matches!(ctx.r_unit_inverse(&b), Err(Error::NonUnit)),
                    || json!({ "non_unit": relem_to_json(&b) }),
                )?;
            }
            Ok(Tally {
                cases: 2 * n as u64,
                skipped: 0,
            })
        },
    )
}

pub(super) fn action_compat(env: &Env) -> Check {
    let mut rng = env.rng(STREAM_ACTION);
    env.per_ring(
        |_| true,
        |ctx| {
            let prec = ctx.precision();
            let n = env.budgets.ring_law_cases;
            for _ in 0..n {
                let (r, s) = (gen::relem(ctx, &mut rng, prec), gen::relem(ctx, &mut rng, prec));
                let t = random_t(ctx, &mut rng, prec);
                let lhs = ctx.t_scalar_mul(&ctx.r_mul(&r, &s), &t)?;
                let rhs = ctx.t_scalar_mul(&r, &ctx.t_scalar_mul(&s, &t)?)?;
                ensure(lhs == rhs, || json!({ "r": relem_to_json(&r), "s": relem_to_json(&s), "t": telem_to_json(&t) }))?;
            }
            Ok(Tally { cases: n as u64, skipped: 0 })
        },
    )
}

fn pivot_rule(env: &Env) -> PivotRule {
    if env.corrupt_snf_pivot {
        PivotRule::FirstNonzero
    } else {
        PivotRule::MinValuation
    }
}

/// The diagonal `replay` produces must be `pi^pivots[i]` followed by zeros.
fn replay_is_diagonal(ctx: &RingCtx, m: &PresMatrix, s: &Snf) -> bool {
    let d = replay(ctx, m, s);
    d.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| match (i == j, s.pivots.get(i)) {
                (true, Some(&v)) => *x == ctx.r_pi_pow(v, m.precision()),
                _ => x.is_zero(),
            })
    })
}

pub(super) fn snf_invariance(env: &Env) -> Check {
    let mut mats = env.rng(STREAM_SNF_MATRICES);
    let mut ops = env.rng(STREAM_SNF_SCRAMBLES);
    let b = &env.budgets;
    let rule = pivot_rule(env);
    env.per_ring(
        |_| true,
        |ctx| {
            let prec = ctx.precision();
            let mut tally = Tally::default();
            for _ in 0..b.snf_matrices {
                let m = gen::matrix(ctx, &mut mats, b.snf_max_dim, b.snf_max_valuation, prec);
                let base = match snf_with_rule(ctx, &m, rule) {
                    Ok(s) => s,
                    Err(Error::PrecisionExhausted(_)) => {
                        tally.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(Failure(json!({ "matrix": matrix_to_json(ctx, &m), "error": e.to_string() }))),
                };
                ensure(replay_is_diagonal(ctx, &m, &base), || json!({ "matrix": matrix_to_json(ctx, &m), "replay": "not diagonal" }))?;
                for _ in 0..b.snf_scrambles {
                    let mut rows = m.rows().to_vec();
                    let len = ops.random_range(1..=6);
                    apply_row_ops(ctx, &gen::scramble(ctx, &mut ops, m.nrows(), len, prec), &mut rows);
                    let len = ops.random_range(1..=6);
                    apply_col_ops(ctx, &gen::scramble(ctx, &mut ops, m.ncols(), len, prec), &mut rows);
                    let scrambled = PresMatrix::new(rows)?;
                    let got = snf_with_rule(ctx, &scrambled, rule);
                    let same = got.as_ref().is_ok_and(|s| s.factors == base.factors);
                    ensure(same, || {
                        json!({
                            "matrix": matrix_to_json(ctx, &m),
                            "factors": base.factors.to_string(),
                            "scrambled": matrix_to_json(ctx, &scrambled),
                            "scrambled_factors": match &got { Ok(s) => s.factors.to_string(), Err(e) => e.to_string() },
                        })
                    })?;
                    tally.cases += 1;
                }
            }
            Ok(tally)
        },
    )
}

fn compare_cokernel(
    ctx: &RingCtx,
    m: &PresMatrix,
    rule: PivotRule,
    budget: &EnumBudget,
    tally: &mut Tally,
) -> Result<(), Failure> {
    let structural = snf_with_rule(ctx, m, rule);
    let witness = |oracle: &str, structural: &str| json!({ "matrix": matrix_to_json(ctx, m), "oracle": oracle, "snf": structural });
    let s_desc = match &structural {
        Ok(s) => s.factors.to_string(),
        Err(e) => e.to_string(),
    };
    match oracle::cokernel_bruteforce(ctx, m, budget) {
        Err(Error::BudgetExceeded { .. }) => tally.skipped += 1,
        Err(Error::InfiniteCokernel) => {
            let ok = match &structural {
                Ok(s) => s.factors.free_rank() > 0,
                Err(Error::PrecisionExhausted(_)) => true,
                Err(_) => false,
            };
            ensure(ok, || witness("infinite", &s_desc))?;
            tally.cases += 1;
        }
        Err(e) => return Err(e.into()),
        Ok(count) => {
            let expected = structural
                .as_ref()
                .ok()
                .and_then(|s| CokernelCount::of_module(ctx, &s.factors));
            ensure(expected.as_ref() == Some(&count), || {
                witness(
                    &format!(
                        "{} elements, profile {:?}",
                        count.count, count.order_profile
                    ),
                    &s_desc,
                )
            })?;
            tally.cases += 1;
        }
    }
    Ok(())
}

pub(super) fn cokernel_oracle(env: &Env) -> Check {
    let mut mats = env.rng(STREAM_SNF_MATRICES);
    let mut small = env.rng(STREAM_COKERNEL_SMALL);
    let b = &env.budgets;
    let budget = EnumBudget::new(b.oracle_elements, 0)?;
    let rule = pivot_rule(env);
    env.per_ring(
        |_| true,
        |ctx| {
            let prec = ctx.precision();
            let mut tally = Tally::default();
            for _ in 0..b.snf_matrices {
                let m = gen::matrix(ctx, &mut mats, b.snf_max_dim, b.snf_max_valuation, prec);
                compare_cokernel(ctx, &m, rule, &budget, &mut tally)?;
            }
            for _ in 0..b.snf_matrices {
                let m = gen::matrix(ctx, &mut small, 3, 2, prec);
                compare_cokernel(ctx, &m, rule, &budget, &mut tally)?;
            }
            Ok(tally)
        },
    )
}

fn residues(ctx: &RingCtx, n: usize, budget: &EnumBudget) -> crate::error::Result<Vec<RElem>> {
    let m = InvariantFactors::new(if n == 0 { vec![] } else { vec![n] }, 0)?;
    Ok(oracle::enum_elements(ctx, &m, budget)?
        .into_iter()
        .map(|x| x.torsion.into_iter().next().unwrap_or(RElem::zero(0)))
        .collect())
}

pub(super) fn inf_res(env: &Env) -> Check {
    let budget = EnumBudget::new(env.budgets.oracle_elements, 0)?;
    env.per_ring(
        |_| true,
        |ctx| {
            let mut tally = Tally::default();
            for bexp in 1..=env.budgets.square_max_exp {
                if ctx.residue_count(bexp).is_none_or(|c| c > budget.max_elements) {
                    tally.skipped += 1;
                    continue;
                }
                let big = residues(ctx, bexp, &budget)?;
                for a in 1..=bexp {
                    let pi = ctx.r_pi_pow(bexp - a, bexp);
                    for r in residues(ctx, a, &budget)? {
                        let lhs = ctx.res_map(bexp, a, &ctx.inf_map(a, bexp, &r)?)?;
                        ensure(lhs == ctx.r_mul(&r, &pi.truncate(a)), || json!({ "a": a, "b": bexp, "r": relem_to_json(&r), "res_inf": relem_to_json(&lhs) }))?;
                        tally.cases += 1;
                    }
                    for r in &big {
                        let lhs = ctx.inf_map(a, bexp, &ctx.res_map(bexp, a, r)?)?;
                        ensure(lhs == ctx.r_mul(r, &pi), || json!({ "a": a, "b": bexp, "r": relem_to_json(r), "inf_res": relem_to_json(&lhs) }))?;
                        tally.cases += 1;
                    }
                }
            }
            Ok(tally)
        },
    )
}

fn finite_sum_bound(ctx: &RingCtx, max_card: u128) -> usize {
    (0..)
        .take_while(|&n| ctx.residue_count(n).is_some_and(|c| c <= max_card))
        .last()
        .unwrap_or(0)
}

pub(super) fn hom_space_count(env: &Env) -> Check {
    let budget = EnumBudget::new(env.budgets.oracle_elements, 0)?;
    env.per_ring(
        |_| true,
        |ctx| {
            let max = env.budgets.hom_max_elements;
            let corpus = gen::torsion_corpus(ctx, finite_sum_bound(ctx, max), max);
            let mut tally = Tally::default();
            for m in &corpus {
                for n in &corpus {
                    let structural = ctx.hom_space(m, n).structure.cardinality(ctx);
                    let brute = oracle::hom_count(ctx, m, n, &budget)?;
                    ensure(structural == Some(brute), || json!({ "m": m.to_string(), "n": n.to_string(), "hom_space": structural, "oracle": brute.to_string() }))?;
                    tally.cases += 1;
                }
            }
            Ok(tally)
        },
    )
}

/// Every tuple of images accepted by `HomMatrix::new` is exactly an oracle
/// homomorphism, and `apply_hom` agrees with the oracle's evaluation.
pub(super) fn hom_constraints(env: &Env) -> Check {
    let budget = EnumBudget::new(env.budgets.oracle_elements, 0)?;
    env.per_ring(
        |_| true,
        |ctx| {
            let corpus = gen::torsion_corpus(ctx, finite_sum_bound(ctx, 16), 16);
            let mut tally = Tally::default();
            for m in &corpus {
                for n in &corpus {
                    let n_elems = oracle::enum_elements(ctx, n, &budget)?;
                    let all_tuples = (n_elems.len() as u128).checked_pow(m.ncomponents() as u32);
                    if all_tuples.is_none_or(|c| c > budget.max_elements) {
                        tally.skipped += 1;
                        continue;
                    }
                    let homs: HashSet<Vec<ModElem>> = oracle::enum_homs(ctx, m, n, &budget)?.into_iter().collect();
                    let m_elems = oracle::enum_elements(ctx, m, &budget)?;
                    let k = m.ncomponents();
                    for mut t in 0..all_tuples.unwrap_or(0) as usize {
                        let tuple: Vec<ModElem> = (0..k)
                            .map(|_| {
                                let y = n_elems[t % n_elems.len()].clone();
                                t /= n_elems.len();
                                y
                            })
                            .collect();
                        let entries = tuple.iter().map(|y| y.torsion.clone()).collect();
                        let accepted = HomMatrix::new(ctx, m.clone(), n.clone(), entries);
                        let witness = || json!({ "m": m.to_string(), "n": n.to_string(), "images": tuple.iter().map(crate::io::modelem_to_json).collect::<Vec<_>>() });
                        ensure(accepted.is_ok() == homs.contains(&tuple), witness)?;
                        if let Ok(h) = accepted {
                            for x in &m_elems {
                                let y = ctx.apply_hom(&h, x)?;
                                ensure(y == oracle::apply_images(ctx, m, n, &tuple, x)?, witness)?;
                            }
                        }
                        tally.cases += 1;
                    }
                }
            }
            Ok(tally)
        },
    )
}
