use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{RElem, RingCtx};
use crate::fingen::{ElemOp, InvariantFactors, ModElem, PresMatrix};

pub(crate) type Rng8 = ChaCha8Rng;

pub(crate) fn digits(ctx: &RingCtx, rng: &mut Rng8, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.random_range(0..ctx.q())).collect()
}

pub(crate) fn relem(ctx: &RingCtx, rng: &mut Rng8, prec: usize) -> RElem {
    ctx.r_from_digits(digits(ctx, rng, prec))
        .expect("digits below q")
}

pub(crate) fn unit(ctx: &RingCtx, rng: &mut Rng8, prec: usize) -> RElem {
    let q = ctx.q();
    let mut digits: Vec<u32> = (0..prec).map(|_| rng.random_range(0..q)).collect();
    if prec > 0 {
        digits[0] = rng.random_range(1..q);
    }
    ctx.r_from_digits(digits).expect("digits below q")
}

/// `pi^v` times a random unit.
pub(crate) fn with_valuation(ctx: &RingCtx, rng: &mut Rng8, v: usize, prec: usize) -> RElem {
    unit(ctx, rng, prec).shift_up(v.min(prec)).truncate(prec)
}

/// A matrix of at most `max_dim` rows and columns whose entries are units
/// times `pi^v` for `v <= max_val`.
pub(crate) fn matrix(
    ctx: &RingCtx,
    rng: &mut Rng8,
    max_dim: usize,
    max_val: usize,
    prec: usize,
) -> PresMatrix {
    let rows = rng.random_range(1..=max_dim);
    let cols = rng.random_range(1..=max_dim);
    let rows = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let v = rng.random_range(0..=max_val);
                    with_valuation(ctx, rng, v, prec)
                })
                .collect()
        })
        .collect();
    PresMatrix::new(rows).expect("rectangular")
}

/// A random sequence of invertible elementary operations on `n` lines.
pub(crate) fn scramble(
    ctx: &RingCtx,
    rng: &mut Rng8,
    n: usize,
    len: usize,
    prec: usize,
) -> Vec<ElemOp> {
    (0..len)
        .map(|_| match rng.random_range(0..3) {
            0 if n > 1 => ElemOp::Swap(rng.random_range(0..n), rng.random_range(0..n)),
            1 if n > 1 => {
                let src = rng.random_range(0..n);
                let dst = (src + rng.random_range(1..n)) % n;
                ElemOp::AddMul {
                    src,
                    dst,
                    factor: relem(ctx, rng, prec),
                }
            }
            _ => ElemOp::Scale {
                idx: rng.random_range(0..n),
                unit: unit(ctx, rng, prec),
            },
        })
        .collect()
}

/// Nondecreasing exponent lists with sum at most `max_sum`, shortest first.
pub(crate) fn exponent_multisets(max_sum: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for e in min..=rest {
            cur.push(e);
            go(rest - e, e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max_sum, 1, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().sum::<usize>().cmp(&b.iter().sum()).then(a.cmp(b)));
    out
}

/// Finite modules with `sum e_i <= max_sum` and at most `max_card` elements.
pub(crate) fn torsion_corpus(
    ctx: &RingCtx,
    max_sum: usize,
    max_card: u128,
) -> Vec<InvariantFactors> {
    exponent_multisets(max_sum)
        .into_iter()
        .map(|e| InvariantFactors::new(e, 0).expect("positive exponents"))
        .filter(|m| m.cardinality(ctx).is_some_and(|c| c <= max_card))
        .collect()
}

pub(crate) fn elem(
    ctx: &RingCtx,
    rng: &mut Rng8,
    m: &InvariantFactors,
    free_prec: usize,
) -> ModElem {
    ModElem {
        torsion: m
            .torsion_exps()
            .iter()
            .map(|&e| relem(ctx, rng, e))
            .collect(),
        free: (0..m.free_rank())
            .map(|_| relem(ctx, rng, free_prec))
            .collect(),
    }
}

/// A random finite module with at most `max_card` elements and at least one
/// generator.
pub(crate) fn finite_module(ctx: &RingCtx, rng: &mut Rng8, max_card: u128) -> InvariantFactors {
    let q = ctx.q() as f64;
    let max_len = ((max_card as f64).ln() / q.ln()).floor().max(1.0) as usize;
    loop {
        let k = rng.random_range(1..=4usize);
        let exps: Vec<usize> = (0..k)
            .map(|_| rng.random_range(1..=max_len.min(5)))
            .collect();
        let m = InvariantFactors::new(exps, 0).expect("positive exponents");
        if m.cardinality(ctx).is_some_and(|c| c <= max_card) {
            return m;
        }
    }
}
