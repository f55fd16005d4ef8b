//! Exact arithmetic for the base ring `R`, its residue field, its fraction
//! field `K`, and the divisible quotient `T = K/R`.

mod ctx;
mod relem;
mod telem;

pub use ctx::{FqElem, Mode, RingCtx};
pub use relem::{RElem, Valuation};
pub use telem::{KElem, TElem};

/// Every canonical element of `T` of level at most `n`, in order of level
/// and then numerator digits. There are exactly `q^n` of them.
pub fn enumerate_t(ctx: &RingCtx, n: usize) -> Vec<TElem> {
    let q = ctx.q();
    let mut out = vec![TElem::zero()];
    for level in 1..=n {
        let mut digits = vec![0u32; level];
        digits[0] = 1;
        loop {
            out.push(
                ctx.t_from_parts(level, digits.clone())
                    .expect("digits in range"),
            );
            // odometer over the numerator, constant digit kept nonzero
            let mut i = level;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = if i == 0 { 1 } else { 0 };
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    out
}
