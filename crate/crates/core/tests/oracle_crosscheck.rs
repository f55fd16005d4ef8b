//! Structural computations against the brute-force enumerators.

use dvr_duality::duality::dual_structure;
use dvr_duality::fingen::{snf, InvariantFactors, PresMatrix};
use dvr_duality::oracle::{self, CokernelCount, EnumBudget};
use dvr_duality::{Error, RingCtx};

fn budget() -> EnumBudget {
    EnumBudget::new(1 << 14, 0).unwrap()
}

fn rings() -> Vec<RingCtx> {
    vec![
        RingCtx::mixed(2, 8).unwrap(),
        RingCtx::mixed(3, 8).unwrap(),
        RingCtx::equal_prime(2, 8).unwrap(),
        RingCtx::equal(2, vec![1, 1, 1], 8).unwrap(),
    ]
}

#[test]
fn small_cokernels() {
    let z2 = RingCtx::mixed(2, 8).unwrap();
    let diag = PresMatrix::from_ints(&z2, &[&[2, 0], &[0, 4]], 8).unwrap();
    let c = oracle::cokernel_bruteforce(&z2, &diag, &budget()).unwrap();
    assert_eq!(c.count, 8);
    assert_eq!(
        Some(c),
        CokernelCount::of_module(&z2, &InvariantFactors::torsion(&[1, 2]).unwrap())
    );

    let mixed = PresMatrix::from_ints(&z2, &[&[2, 2], &[2, 4]], 8).unwrap();
    let c = oracle::cokernel_bruteforce(&z2, &mixed, &budget()).unwrap();
    assert_eq!((c.count, c.order_profile), (4, vec![1, 3]));
    assert_eq!(
        snf(&z2, &mixed).unwrap().factors,
        InvariantFactors::torsion(&[1, 1]).unwrap()
    );

    let id = PresMatrix::from_ints(&z2, &[&[1, 0], &[0, 1]], 8).unwrap();
    assert_eq!(
        oracle::cokernel_bruteforce(&z2, &id, &budget())
            .unwrap()
            .count,
        1
    );

    let short = PresMatrix::from_ints(&z2, &[&[2, 1]], 8).unwrap();
    assert!(matches!(
        oracle::cokernel_bruteforce(&z2, &short, &budget()),
        Err(Error::InfiniteCokernel)
    ));
}

#[test]
fn snf_agrees_with_cokernel_enumeration() {
    let table: &[&[&[i64]]] = &[
        &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]],
        &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]],
        &[&[6, 4], &[2, 8]],
        &[&[9, 3], &[3, 0], &[0, 9]],
        &[&[4, 2, 2], &[2, 4, 2], &[2, 2, 4]],
    ];
    let roomy = EnumBudget::new(1 << 18, 0).unwrap();
    let mut checked = 0;
    for ctx in rings() {
        for rows in table {
            let m = PresMatrix::from_ints(&ctx, rows, 8).unwrap();
            let s = snf(&ctx, &m).unwrap();
            let counted = oracle::cokernel_bruteforce(&ctx, &m, &roomy);
            if !s.factors.is_finite() {
                assert!(
                    matches!(
                        counted,
                        Err(Error::InfiniteCokernel | Error::BudgetExceeded { .. })
                    ),
                    "{counted:?}"
                );
                continue;
            }
            let counted = match counted {
                Err(Error::BudgetExceeded { .. }) => continue,
                other => other.unwrap(),
            };
            checked += 1;
            assert_eq!(
                Some(counted),
                CokernelCount::of_module(&ctx, &s.factors),
                "{} {rows:?}",
                ctx.spec_string()
            );
        }
    }
    assert!(checked >= 12, "only {checked} matrices within budget");
}

#[test]
fn r_hom_counts_match_module_size() {
    for ctx in rings() {
        for exps in [vec![], vec![1], vec![2], vec![1, 1], vec![1, 3], vec![2, 2]] {
            let m = InvariantFactors::torsion(&exps).unwrap();
            let size = m.cardinality(&ctx).unwrap();
            if size > 256 {
                continue;
            }
            let homs = oracle::enum_r_homs(&ctx, &m, m.max_exp().max(1), &budget()).unwrap();
            assert_eq!(homs.len() as u128, size);
            assert_eq!(dual_structure(&m).cardinality(&ctx), Some(size));
            assert_eq!(ctx.dual_elements(&m, 1 << 14).unwrap().len() as u128, size);
        }
    }
}

#[test]
fn enumerations_agree_on_order() {
    for ctx in rings() {
        let m = InvariantFactors::torsion(&[1, 2]).unwrap();
        assert_eq!(
            oracle::enum_elements(&ctx, &m, &budget()).unwrap(),
            ctx.module_elements(&m, 1 << 14).unwrap()
        );
    }
}

#[test]
fn z_hom_counts() {
    let f2 = RingCtx::equal_prime(2, 8).unwrap();
    let f4 = RingCtx::equal(2, vec![1, 1, 1], 8).unwrap();
    let one = InvariantFactors::torsion(&[1]).unwrap();
    assert_eq!(oracle::enum_z_homs(&f2, &one, &budget()).unwrap().len(), 2);
    assert_eq!(oracle::enum_z_homs(&f4, &one, &budget()).unwrap().len(), 4);
    assert_eq!(
        oracle::enum_z_homs(&f2, &InvariantFactors::torsion(&[]).unwrap(), &budget())
            .unwrap()
            .len(),
        1
    );
    assert!(matches!(
        oracle::enum_z_homs(&RingCtx::mixed(2, 8).unwrap(), &one, &budget()),
        Err(Error::WrongMode(_))
    ));
}

#[test]
fn budgets_are_enforced() {
    let ctx = RingCtx::mixed(3, 8).unwrap();
    let big = InvariantFactors::torsion(&[5, 5]).unwrap();
    let tiny = EnumBudget::new(100, 0).unwrap();
    assert!(matches!(
        oracle::enum_elements(&ctx, &big, &tiny),
        Err(Error::BudgetExceeded { .. })
    ));
    assert!(EnumBudget::new(0, 0).is_err());
}
