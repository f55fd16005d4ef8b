use dvr_duality::fingen::{
    apply_col_ops, apply_row_ops, snf, ElemOp, InvariantFactors, ModElem, PresMatrix,
};
use dvr_duality::flood::{zdelta_validate, ZDelta};
use dvr_duality::{RElem, RingCtx};
use proptest::prelude::*;

fn z(p: u32) -> RingCtx {
    RingCtx::mixed(p, 8).unwrap()
}

fn elem_of(ctx: &RingCtx, m: &InvariantFactors, seeds: &[i64]) -> ModElem {
    ModElem {
        torsion: m
            .torsion_exps()
            .iter()
            .zip(seeds)
            .map(|(&e, &s)| ctx.r_from_int(s, e))
            .collect(),
        free: vec![],
    }
}

proptest! {
    #[test]
    fn residues_match_integer_arithmetic(p in prop::sample::select(vec![2u32, 3, 5]), a in 0i64..100_000, b in 0i64..100_000) {
        let ctx = z(p);
        let modulus = (p as u128).pow(8);
        let (x, y) = (ctx.r_from_int(a, 8), ctx.r_from_int(b, 8));
        prop_assert_eq!(ctx.r_to_int(&ctx.r_add(&x, &y)), Some((a + b) as u128 % modulus));
        prop_assert_eq!(ctx.r_to_int(&ctx.r_mul(&x, &y)), Some((a as u128 * b as u128) % modulus));
        prop_assert_eq!(ctx.r_to_int(&ctx.r_sub(&x, &y)), Some(((a - b).rem_euclid(modulus as i64)) as u128));
    }

    #[test]
    fn unit_inverse_inverts(a in 0i64..10_000) {
        let ctx = z(3);
        let u = ctx.r_from_int(3 * a + 1, 8);
        let inv = ctx.r_unit_inverse(&u).unwrap();
        prop_assert_eq!(ctx.r_mul(&u, &inv), RElem::one(8));
    }

    #[test]
    fn snf_ignores_unimodular_scrambles(
        entries in prop::collection::vec(-40i64..40, 9),
        ops in prop::collection::vec((0usize..3, 0usize..3, -5i64..5, any::<bool>()), 0..12),
    ) {
        let ctx = z(2);
        let rows: Vec<Vec<RElem>> = entries.chunks(3).map(|r| r.iter().map(|&v| ctx.r_from_int(v, 8)).collect()).collect();
        let base = PresMatrix::new(rows.clone()).unwrap();
        let Ok(before) = snf(&ctx, &base) else { return Ok(()); };
        let mut row_ops = Vec::new();
        let mut col_ops = Vec::new();
        for (src, dst, f, on_rows) in ops {
            let op = if src == dst {
                ElemOp::Swap(src, (src + 1) % 3)
            } else {
                ElemOp::AddMul { src, dst, factor: ctx.r_from_int(f, 8) }
            };
            if on_rows { row_ops.push(op) } else { col_ops.push(op) }
        }
        let mut scrambled = rows;
        apply_row_ops(&ctx, &row_ops, &mut scrambled);
        apply_col_ops(&ctx, &col_ops, &mut scrambled);
        let after = snf(&ctx, &PresMatrix::new(scrambled).unwrap()).unwrap();
        prop_assert_eq!(before.factors, after.factors);
    }

    #[test]
    fn double_dual_is_identity(exps in prop::collection::vec(1usize..5, 1..4), seeds in prop::collection::vec(0i64..1000, 4)) {
        let ctx = z(3);
        let m = InvariantFactors::torsion(&exps).unwrap();
        let x = elem_of(&ctx, &m, &seeds);
        prop_assert_eq!(ctx.double_dual_map(&m, &x).unwrap(), x);
    }

    #[test]
    fn pairing_is_additive(exps in prop::collection::vec(1usize..4, 1..4), s in prop::collection::vec(0i64..100, 4), t in prop::collection::vec(0i64..100, 4), k in 0usize..64) {
        let ctx = z(2);
        let m = InvariantFactors::torsion(&exps).unwrap();
        let phis = ctx.dual_elements(&m, 1 << 12).unwrap();
        let phi = &phis[k % phis.len()];
        let (x, y) = (elem_of(&ctx, &m, &s), elem_of(&ctx, &m, &t));
        let sum = ctx.elem_add(&m, &x, &y).unwrap();
        let lhs = ctx.eval_pairing(&m, phi, &sum).unwrap();
        let rhs = ctx.t_add(&ctx.eval_pairing(&m, phi, &x).unwrap(), &ctx.eval_pairing(&m, phi, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn zdelta_norm_is_multiplicative(a in -10i64..=-1, b in -7i64..=7, xs in prop::collection::vec(-1000i128..1000, 4)) {
        prop_assume!(b * b + 4 * a < 0);
        let ring = zdelta_validate(a, b).unwrap();
        let zz = ZDelta { x: xs[0], y: xs[1] };
        let ww = ZDelta { x: xs[2], y: xs[3] };
        prop_assert_eq!(ring.norm(ring.mul(zz, ww)), ring.norm(zz) * ring.norm(ww));
        prop_assert!(ring.norm(zz) >= 0);
    }
}
