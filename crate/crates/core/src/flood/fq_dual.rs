//! The identification of additive characters `F_q -> (1/p)Z/Z` with `F_q`.
//!
//! A character is given by its values on the basis `1, t, ..., t^(e-1)`. The
//! base character `psi_0` reads the `t^(e-1)` coefficient and divides by `p`;
//! every character is `c . psi_0` for a unique `c`, where
//! `(c . psi)(a) = psi(c a)`, and `i(psi) = c`.

use super::circle::CircleElem;
use crate::arith::{FqElem, RingCtx};
use crate::error::{Error, Result};

/// Coefficient of `t^(e-1)` in `c * t^j`.
fn top_coeff_of_shift(ctx: &RingCtx, c: &FqElem, j: u32) -> u32 {
    let e = ctx.e() as usize;
    let mut prod = c.clone();
    if e > 1 {
        let mut t = vec![0u32; e];
        t[1] = 1;
        let t = FqElem::new(t);
        for _ in 0..j {
            prod = ctx.fq_mul(&prod, &t).expect("valid element");
        }
    }
    prod.coeffs[e - 1]
}

/// Values of `c . psi_0` on the basis.
pub fn i_inv(ctx: &RingCtx, c: &FqElem) -> Result<Vec<CircleElem>> {
    ctx.pack(c)?;
    (0..ctx.e())
        .map(|j| CircleElem::new(ctx.p(), top_coeff_of_shift(ctx, c, j) as u64, 1))
        .collect()
}

/// The `c` with `psi = c . psi_0`, found by solving an `e x e` system over `F_p`.
pub fn i_iso(ctx: &RingCtx, values: &[CircleElem]) -> Result<FqElem> {
    let e = ctx.e() as usize;
    let p = ctx.p() as u64;
    if values.len() != e {
        return Err(Error::DimensionMismatch {
            expected: e,
            got: values.len(),
        });
    }
    let mut rhs = Vec::with_capacity(e);
    for v in values {
        match v.k {
            0 => rhs.push(0u64),
            1 => rhs.push(v.numerator),
            _ => return Err(Error::NotPTorsion(v.to_string())),
        }
    }
    // column i: the linear map applied to c = t^i
    let mut a = vec![vec![0u64; e + 1]; e];
    for i in 0..e {
        let mut basis = vec![0u32; e];
        basis[i] = 1;
        let basis = FqElem::new(basis);
        for (j, row) in a.iter_mut().enumerate() {
            row[i] = top_coeff_of_shift(ctx, &basis, j as u32) as u64;
        }
    }
    for (row, r) in a.iter_mut().zip(&rhs) {
        row[e] = *r;
    }
    // Gauss-Jordan mod p; the system is nonsingular
    for col in 0..e {
        let piv = (col..e)
            .find(|&r| a[r][col] != 0)
            .expect("pairing matrix is invertible");
        a.swap(col, piv);
        let inv = modpow(a[col][col], p - 2, p);
        for x in a[col].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..e {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..=e {
                    a[r][c] = (a[r][c] + p * p - f * a[col][c] % p) % p;
                }
            }
        }
    }
    Ok(FqElem::new(a.iter().map(|row| row[e] as u32).collect()))
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `psi(a)` for the character with the given basis values.
pub fn character_eval(ctx: &RingCtx, values: &[CircleElem], a: &FqElem) -> CircleElem {
    values
        .iter()
        .zip(&a.coeffs)
        .fold(CircleElem::ZERO, |acc, (v, &c)| {
            acc.add(&v.times(c as u64, ctx.p()), ctx.p())
        })
}
