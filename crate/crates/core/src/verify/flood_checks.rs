use std::collections::HashSet;

use rand::Rng;
use serde_json::json;

use super::gen::{self, Rng8};
use super::{ensure, Check, Env, Tally};
use crate::arith::{enumerate_t, FqElem, Mode, RElem, RingCtx, TElem};
use crate::flood::{
    self, i_inv, i_iso, zdelta_validate, CircleElem, ZDelta, ZDeltaRing, ZDualFunctional,
};
use crate::io::{telem_to_json, zdual_to_json};
use crate::oracle::{self, EnumBudget};

const STREAM_ELL: u64 = 17;
const STREAM_ELL_BIJECTION: u64 = 18;
const STREAM_ZDELTA: u64 = 23;
const STREAM_NORM: u64 = 24;

fn equal(ctx: &RingCtx) -> bool {
    ctx.mode() == Mode::Equal
}

/// Every coefficient vector of length `len`.
fn all_functionals(ctx: &RingCtx, len: usize) -> crate::error::Result<Vec<ZDualFunctional>> {
    let q = ctx.q() as u64;
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut c| {
            let coeffs = (0..len)
                .map(|_| {
                    let d = (c % q) as u32;
                    c /= q;
                    ctx.unpack(d)
                })
                .collect();
            ZDualFunctional::new(ctx, coeffs)
        })
        .collect()
}

fn random_functional(
    ctx: &RingCtx,
    rng: &mut Rng8,
    max_len: usize,
) -> crate::error::Result<ZDualFunctional> {
    let len = rng.random_range(0..=max_len);
    ZDualFunctional::new(
        ctx,
        (0..len)
            .map(|_| ctx.unpack(rng.random_range(0..ctx.q())))
            .collect(),
    )
}

fn functional_add(
    ctx: &RingCtx,
    a: &ZDualFunctional,
    b: &ZDualFunctional,
) -> crate::error::Result<ZDualFunctional> {
    let n = a.support_bound().max(b.support_bound());
    let zero = ctx.unpack(0);
    let coeffs = (0..n)
        .map(|i| {
            ctx.fq_add(
                a.coeffs().get(i).unwrap_or(&zero),
                b.coeffs().get(i).unwrap_or(&zero),
            )
        })
        .collect::<crate::error::Result<Vec<_>>>()?;
    ZDualFunctional::new(ctx, coeffs)
}

/// `h x^k` at the given precision.
fn monomial(ctx: &RingCtx, h: u32, k: usize, prec: usize) -> RElem {
    let mut digits = vec![0u32; prec];
    digits[k] = h;
    ctx.r_from_digits(digits).expect("digit below q")
}

fn check_scalar(
    ctx: &RingCtx,
    phi: &ZDualFunctional,
    h: u32,
    k: usize,
    prec: usize,
) -> Result<(), super::Failure> {
    let r = monomial(ctx, h, k, prec);
    let lhs = ctx.ell(&phi.scale(ctx, &r)?)?;
    let rhs = ctx.t_scalar_mul(&r, &ctx.ell(phi)?)?;
    ensure(
        lhs == rhs,
        || json!({ "phi": zdual_to_json(ctx, phi).ok(), "h": h, "k": k, "ell_of_scaled": telem_to_json(&lhs), "scaled_ell": telem_to_json(&rhs) }),
    )
}

/// `ell(r phi) = r ell(phi)` for monomial scalars and `ell(phi + psi) =
/// ell(phi) + ell(psi)`; exhaustive when `q = 2`, sampled otherwise.
pub(super) fn ell_linearity(env: &Env) -> Check {
    let b = &env.budgets;
    let mut rng = env.rng(STREAM_ELL);
    env.per_ring(equal, |ctx| {
        let mut tally = Tally::default();
        let prec = b.ell_support + 5;
        if ctx.q() == 2 {
            let all = all_functionals(ctx, b.ell_support)?;
            for phi in &all {
                for h in 1..ctx.q() {
                    for k in 0..=3 {
                        check_scalar(ctx, phi, h, k, prec)?;
                        tally.cases += 1;
                    }
                }
                for psi in &all {
                    let sum = ctx.ell(&functional_add(ctx, phi, psi)?)?;
                    ensure(sum == ctx.t_add(&ctx.ell(phi)?, &ctx.ell(psi)?), || json!({ "phi": zdual_to_json(ctx, phi).ok(), "psi": zdual_to_json(ctx, psi).ok() }))?;
                    tally.cases += 1;
                }
            }
        } else {
            for _ in 0..b.ell_random {
                let phi = random_functional(ctx, &mut rng, b.ell_support + 1)?;
                let psi = random_functional(ctx, &mut rng, b.ell_support + 1)?;
                check_scalar(ctx, &phi, rng.random_range(1..ctx.q()), rng.random_range(0..=3), prec)?;
                let sum = ctx.ell(&functional_add(ctx, &phi, &psi)?)?;
                ensure(sum == ctx.t_add(&ctx.ell(&phi)?, &ctx.ell(&psi)?), || json!({ "phi": zdual_to_json(ctx, &phi).ok(), "psi": zdual_to_json(ctx, &psi).ok() }))?;
                tally.cases += 2;
            }
        }
        Ok(tally)
    })
}

pub(super) fn ell_bijection(env: &Env) -> Check {
    let b = &env.budgets;
    let mut rng = env.rng(STREAM_ELL_BIJECTION);
    env.per_ring(equal, |ctx| {
        let mut tally = Tally::default();
        let round_trip = |phi: &ZDualFunctional| -> Result<TElem, super::Failure> {
            let t = ctx.ell(phi)?;
            ensure(ctx.ell_inv(&t)? == *phi, || json!({ "phi": zdual_to_json(ctx, phi).ok(), "ell": telem_to_json(&t) }))?;
            Ok(t)
        };
        let back = |t: &TElem| -> Result<(), super::Failure> {
            let phi = ctx.ell_inv(t)?;
            ensure(ctx.ell(&phi)? == *t, || json!({ "t": telem_to_json(t), "ell_inv": zdual_to_json(ctx, &phi).ok() }))
        };
        if ctx.q() == 2 {
            let all = all_functionals(ctx, b.ell_support)?;
            let mut images = HashSet::new();
            for phi in &all {
                images.insert(round_trip(phi)?);
                tally.cases += 1;
            }
            let ts = enumerate_t(ctx, b.ell_support);
            for t in &ts {
                back(t)?;
                tally.cases += 1;
            }
            ensure(images.len() == all.len() && images.len() == ts.len(), || json!({ "functionals": all.len(), "distinct_images": images.len(), "torsion_elements": ts.len() }))?;
        } else {
            for _ in 0..b.ell_random {
                round_trip(&random_functional(ctx, &mut rng, b.ell_support + 1)?)?;
                let n = rng.random_range(0..=b.ell_support + 1);
                back(&ctx.t_from_parts(n, gen::digits(ctx, &mut rng, n))?)?;
                tally.cases += 2;
            }
        }
        Ok(tally)
    })
}

/// For every finite `M`, transporting each `psi in M^` gives pairwise
/// different tables, each of which is one of the oracle's additive maps.
pub(super) fn transport(env: &Env) -> Check {
    let max = env.budgets.transport_max_elements;
    let budget = EnumBudget {
        max_elements: env.budgets.oracle_elements.max(max),
        seed: 0,
    };
    env.per_ring(equal, |ctx| {
        let mut tally = Tally::default();
        let max_sum = (0..).take_while(|&n| ctx.residue_count(n).is_some_and(|c| c <= max)).last().unwrap_or(0);
        for m in gen::torsion_corpus(ctx, max_sum, max) {
            let elems = oracle::enum_elements(ctx, &m, &budget)?;
            let additive: HashSet<Vec<CircleElem>> = oracle::enum_z_homs(ctx, &m, &budget)?
                .iter()
                .map(|f| elems.iter().map(|x| f.eval(ctx, &m, x)).collect::<crate::error::Result<Vec<_>>>())
                .collect::<crate::error::Result<_>>()?;
            let mut seen = HashSet::new();
            for psi in ctx.dual_elements(&m, budget.max_elements)? {
                let table = ctx.adjoint_transport(&m, &psi, budget.max_elements)?;
                let row: Vec<CircleElem> = elems.iter().map(|x| table.get(x).copied().unwrap_or(CircleElem::ZERO)).collect();
                ensure(table.len() == elems.len() && additive.contains(&row), || {
                    json!({ "module": m.to_string(), "psi": crate::io::dualelem_to_json(&psi), "not_additive": true })
                })?;
                seen.insert(row);
            }
            let size = m.cardinality(ctx).unwrap_or(0) as usize;
            ensure(seen.len() == size && additive.len() == size, || {
                json!({ "module": m.to_string(), "distinct_transports": seen.len(), "additive_maps": additive.len(), "cardinality": size })
            })?;
            tally.cases += 1;
        }
        Ok(tally)
    })
}

pub(super) fn torsion_count(env: &Env) -> Check {
    let mut tally = Tally::default();
    for p in [2u32, 3, 5] {
        let ctx = RingCtx::mixed(p, 8)?;
        for n in 0..=env.budgets.torsion_count_max_n {
            let (count, expected) = flood::torsion_count(&ctx, n)?;
            let direct = (p as u128).pow(n as u32);
            ensure(
                count == direct && expected == direct,
                || json!({ "p": p, "n": n, "enumerated": count.to_string(), "expected": direct.to_string() }),
            )?;
            tally.cases += 1;
        }
    }
    Ok(tally)
}

/// `i(c' . psi) = c' i(psi)` for all `c'` and `psi`, where
/// `(c' . psi)(a) = psi(c' a)`.
pub(super) fn i_iso_linearity(env: &Env) -> Check {
    env.per_ring(
        |ctx| equal(ctx) && ctx.q() <= 64,
        |ctx| {
            let e = ctx.e() as usize;
            let mut tally = Tally::default();
            let basis: Vec<FqElem> = (0..e)
                .map(|j| {
                    let mut c = vec![0u32; e];
                    c[j] = 1;
                    FqElem::new(c)
                })
                .collect();
            for c in 0..ctx.q() {
                let c = ctx.unpack(c);
                let psi = i_inv(ctx, &c)?;
                ensure(i_iso(ctx, &psi)? == c, || json!({ "c": c.coeffs }))?;
                for cp in 0..ctx.q() {
                    let cp = ctx.unpack(cp);
                    let scaled = basis
                        .iter()
                        .map(|t| Ok(flood::character_eval(ctx, &psi, &ctx.fq_mul(&cp, t)?)))
                        .collect::<crate::error::Result<Vec<_>>>()?;
                    let want = ctx.fq_mul(&cp, &c)?;
                    ensure(
                        i_iso(ctx, &scaled)? == want,
                        || json!({ "c": c.coeffs, "c_prime": cp.coeffs }),
                    )?;
                    tally.cases += 1;
                }
            }
            Ok(tally)
        },
    )
}

pub(super) fn zdelta_predicate(_env: &Env) -> Check {
    let mut tally = Tally::default();
    for a in -10i64..=3 {
        for b in -7i64..=7 {
            let accepted = zdelta_validate(a, b).is_ok();
            let disc = b * b + 4 * a;
            let expected = a < 0 && disc < 0;
            ensure(
                accepted == expected,
                || json!({ "a": a, "b": b, "accepted": accepted, "discriminant": disc }),
            )?;
            // delta = (b + sqrt(disc)) / 2 is non-real exactly when disc < 0
            let non_real = (disc as f64) < 0.0;
            ensure(
                !accepted || non_real,
                || json!({ "a": a, "b": b, "discriminant": disc }),
            )?;
            if let Ok(ring) = zdelta_validate(a, b) {
                let (re, im) = ring.delta_complex();
                // delta^2 - b delta - a = 0
                let (sq_re, sq_im) = (re * re - im * im, 2.0 * re * im);
                let residual = ((sq_re - b as f64 * re - a as f64).powi(2)
                    + (sq_im - b as f64 * im).powi(2))
                .sqrt();
                ensure(
                    im > 0.0 && residual < 1e-9,
                    || json!({ "a": a, "b": b, "delta": [re, im], "residual": residual }),
                )?;
            }
            tally.cases += 1;
        }
    }
    Ok(tally)
}

fn random_ring(rng: &mut Rng8) -> ZDeltaRing {
    loop {
        let (a, b) = (rng.random_range(-10i64..=-1), rng.random_range(-7i64..=7));
        if let Ok(r) = zdelta_validate(a, b) {
            return r;
        }
    }
}

fn random_z(rng: &mut Rng8) -> ZDelta {
    ZDelta {
        x: rng.random_range(-1000..=1000),
        y: rng.random_range(-1000..=1000),
    }
}

pub(super) fn zdelta_laws(env: &Env) -> Check {
    let mut rng = env.rng(STREAM_ZDELTA);
    let one = ZDelta { x: 1, y: 0 };
    for _ in 0..env.budgets.zdelta_triples {
        let r = random_ring(&mut rng);
        let (z, w, u) = (random_z(&mut rng), random_z(&mut rng), random_z(&mut rng));
        let witness = || json!({ "a": r.a(), "b": r.b(), "z": [z.x as i64, z.y as i64], "w": [w.x as i64, w.y as i64], "u": [u.x as i64, u.y as i64] });
        ensure(r.add(r.add(z, w), u) == r.add(z, r.add(w, u)), witness)?;
        ensure(r.mul(r.mul(z, w), u) == r.mul(z, r.mul(w, u)), witness)?;
        ensure(
            r.mul(z, r.add(w, u)) == r.add(r.mul(z, w), r.mul(z, u)),
            witness,
        )?;
        ensure(r.mul(z, w) == r.mul(w, z) && r.mul(z, one) == z, witness)?;
    }
    Ok(Tally {
        cases: env.budgets.zdelta_triples as u64,
        skipped: 0,
    })
}

/// `N(zw) = N(z) N(w)` exactly, and `N(z) = |z|^2` against the complex
/// embedding in floating point.
pub(super) fn zdelta_norm(env: &Env) -> Check {
    let mut rng = env.rng(STREAM_NORM);
    for _ in 0..env.budgets.zdelta_triples {
        let r = random_ring(&mut rng);
        let (z, w) = (random_z(&mut rng), random_z(&mut rng));
        let witness = || json!({ "a": r.a(), "b": r.b(), "z": [z.x as i64, z.y as i64], "w": [w.x as i64, w.y as i64] });
        ensure(r.norm(r.mul(z, w)) == r.norm(z) * r.norm(w), witness)?;
        ensure(
            r.norm(z) >= 0 && (r.norm(z) == 0) == (z.x == 0 && z.y == 0),
            witness,
        )?;
        let (re, im) = r.delta_complex();
        let (zr, zi) = (z.x as f64 + z.y as f64 * re, z.y as f64 * im);
        let abs2 = zr * zr + zi * zi;
        let n = r.norm(z) as f64;
        ensure((abs2 - n).abs() <= 1e-9 * n.max(1.0), witness)?;
    }
    Ok(Tally {
        cases: env.budgets.zdelta_triples as u64,
        skipped: 0,
    })
}
