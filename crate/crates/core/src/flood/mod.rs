//! Characters into the circle: the bridge between `R`-linear duals into `T`
//! and additive duals into `R/Z`, the torsion count of `T` over `Z_p`, and the
//! imaginary quadratic orders `Z[delta]`.

mod circle;
mod ell;
mod fq_dual;
mod zdelta;

pub use circle::CircleElem;
pub use ell::ZDualFunctional;
pub use fq_dual::{character_eval, i_inv, i_iso};
pub use zdelta::{zdelta_validate, ZDelta, ZDeltaRing};

use crate::arith::{enumerate_t, Mode, RingCtx};
use crate::error::{Error, Result};

/// `#T[p^n]` by enumeration against the expected `p^n`, for `R = Z_p`.
pub fn torsion_count(ctx: &RingCtx, n: usize) -> Result<(u128, u128)> {
    if ctx.mode() != Mode::Mixed {
        return Err(Error::WrongMode("mixed"));
    }
    let expected = ctx.residue_count(n).ok_or(Error::BudgetExceeded {
        size: u128::MAX,
        budget: 1 << 24,
    })?;
    if expected > 1 << 24 {
        return Err(Error::BudgetExceeded {
            size: expected,
            budget: 1 << 24,
        });
    }
    let count = enumerate_t(ctx, n).len() as u128;
    Ok((count, expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_count_examples() {
        assert_eq!(
            torsion_count(&RingCtx::mixed(3, 4).unwrap(), 2).unwrap(),
            (9, 9)
        );
        assert_eq!(
            torsion_count(&RingCtx::mixed(3, 4).unwrap(), 0).unwrap(),
            (1, 1)
        );
        assert_eq!(
            torsion_count(&RingCtx::mixed(2, 4).unwrap(), 3).unwrap(),
            (8, 8)
        );
        assert!(torsion_count(&RingCtx::equal_prime(2, 4).unwrap(), 2).is_err());
    }
}
