use std::fmt;

use serde::{Deserialize, Serialize};

use super::ctx::RingCtx;
use super::relem::RElem;
use crate::error::{Error, Result};

/// An element `numerator / pi^n + R` of `T = K/R`.
///
/// `T` is discrete, so this representation is exact. The canonical form has
/// `n = 0` with an empty numerator for zero, and otherwise a numerator of
/// exactly `n` digits whose constant digit is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TElem {
    n: usize,
    #[serde(rename = "num")]
    numerator: Vec<u32>,
}

impl TElem {
    pub fn zero() -> Self {
        TElem {
            n: 0,
            numerator: Vec::new(),
        }
    }

    /// The level: the least `n` with `pi^n t = 0`.
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn numerator(&self) -> &[u32] {
        &self.numerator
    }

    pub fn is_zero(&self) -> bool {
        self.n == 0
    }

    /// Numerator as an element of `R/pi^n`; `None` for zero.
    pub fn numerator_elem(&self) -> Option<RElem> {
        (self.n > 0).then(|| RElem::raw(self.numerator.clone()))
    }

    pub fn is_canonical(&self) -> bool {
        self.numerator.len() == self.n && (self.n == 0 || self.numerator[0] != 0)
    }
}

impl fmt::Display for TElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.numerator.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]/pi^{}", parts.join(","), self.n)
    }
}

/// A nonzero element of `K` is `pi^val_shift * unit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KElem {
    Zero,
    NonZero { val_shift: i64, unit: RElem },
}

impl KElem {
    pub fn valuation(&self) -> Option<i64> {
        match self {
            KElem::Zero => None,
            KElem::NonZero { val_shift, .. } => Some(*val_shift),
        }
    }
}

impl RingCtx {
    /// `a / pi^shift` as an element of `K`. An all-zero `a` is treated as zero.
    pub fn k_from_fraction(&self, a: &RElem, shift: usize) -> KElem {
        let v = self.r_valuation(a);
        if !v.exact {
            return KElem::Zero;
        }
        let unit = a.shift_down(v.value).expect("valuation digits are zero");
        KElem::NonZero {
            val_shift: v.value as i64 - shift as i64,
            unit,
        }
    }

    /// Image of a `K` element in `T = K/R`. Needs the unit known to
    /// `-val_shift` digits.
    pub fn k_to_t(&self, k: &KElem) -> Result<TElem> {
        match k {
            KElem::Zero => Ok(TElem::zero()),
            KElem::NonZero { val_shift, .. } if *val_shift >= 0 => Ok(TElem::zero()),
            KElem::NonZero { val_shift, unit } => {
                let n = (-val_shift) as usize;
                if unit.precision() < n {
                    return Err(Error::InsufficientPrecision {
                        needed: n,
                        have: unit.precision(),
                    });
                }
                Ok(TElem {
                    n,
                    numerator: unit.digits()[..n].to_vec(),
                })
            }
        }
    }

    /// The canonical form of `a / pi^n + R`. Only the low `n` digits of `a`
    /// matter.
    pub fn t_from_fraction(&self, a: &RElem, n: usize) -> Result<TElem> {
        if n == 0 {
            return Ok(TElem::zero());
        }
        if a.precision() < n {
            return Err(Error::InsufficientPrecision {
                needed: n,
                have: a.precision(),
            });
        }
        Ok(canonical(&a.digits()[..n], n))
    }

    /// Validates and canonicalizes user-supplied `(n, numerator)` data.
    pub fn t_from_parts(&self, n: usize, numerator: Vec<u32>) -> Result<TElem> {
        if numerator.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: numerator.len(),
            });
        }
        if let Some(&d) = numerator.iter().find(|&&d| d >= self.q()) {
            return Err(Error::DigitOutOfRange {
                digit: d,
                q: self.q(),
            });
        }
        Ok(canonical(&numerator, n))
    }

    pub fn t_add(&self, s: &TElem, t: &TElem) -> TElem {
        if s.n == 0 {
            return t.clone();
        }
        if t.n == 0 {
            return s.clone();
        }
        let n = s.n.max(t.n);
        let a = RElem::raw(s.numerator.clone()).shift_up(n - s.n);
        let b = RElem::raw(t.numerator.clone()).shift_up(n - t.n);
        let sum = self.r_add(&a, &b);
        canonical(sum.digits(), n)
    }

    pub fn t_neg(&self, t: &TElem) -> TElem {
        match t.numerator_elem() {
            None => TElem::zero(),
            Some(a) => canonical(self.r_neg(&a).digits(), t.n),
        }
    }

    pub fn t_sub(&self, s: &TElem, t: &TElem) -> TElem {
        self.t_add(s, &self.t_neg(t))
    }

    /// `r * t`, which depends only on `r mod pi^(t.level)`.
    pub fn t_scalar_mul(&self, r: &RElem, t: &TElem) -> Result<TElem> {
        if t.n == 0 {
            return Ok(TElem::zero());
        }
        if r.precision() < t.n {
            return Err(Error::InsufficientPrecision {
                needed: t.n,
                have: r.precision(),
            });
        }
        let prod = self.r_mul(&r.truncate(t.n), &RElem::raw(t.numerator.clone()));
        Ok(canonical(prod.digits(), t.n))
    }

    /// `pi^k * t`.
    pub fn t_mul_pi_pow(&self, k: usize, t: &TElem) -> TElem {
        if k >= t.n {
            return TElem::zero();
        }
        TElem {
            n: t.n - k,
            numerator: t.numerator[..t.n - k].to_vec(),
        }
    }
}

/// Strips the common power of `pi` from `digits / pi^n`.
fn canonical(digits: &[u32], n: usize) -> TElem {
    debug_assert_eq!(digits.len(), n);
    match digits.iter().position(|&d| d != 0) {
        None => TElem::zero(),
        Some(v) => TElem {
            n: n - v,
            numerator: digits[v..].to_vec(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32) -> RingCtx {
        RingCtx::mixed(p, 8).unwrap()
    }

    fn t_int(k: &RingCtx, num: i64, n: usize) -> TElem {
        k.t_from_fraction(&k.r_from_int(num, n.max(1)), n).unwrap()
    }

    #[test]
    fn fraction_reduction() {
        let k = z(3);
        let t = t_int(&k, 3, 3);
        assert_eq!((t.level(), t.numerator().to_vec()), (2, vec![1, 0]));
        assert!(t_int(&k, 0, 4).is_zero());
        let t = t_int(&k, 4, 2);
        assert_eq!((t.level(), t.numerator().to_vec()), (2, vec![1, 1]));
        assert!(matches!(
            k.t_from_fraction(&k.r_from_int(1, 1), 2),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn addition() {
        let k = z(2);
        let half = t_int(&k, 1, 1);
        assert!(k.t_add(&half, &half).is_zero());
        let quarter = t_int(&k, 1, 2);
        assert_eq!(k.t_add(&quarter, &half), t_int(&k, 3, 2));
        assert_eq!(k.t_add(&quarter, &TElem::zero()), quarter);
    }

    #[test]
    fn scalar_action() {
        let k = z(3);
        let ninth = t_int(&k, 1, 2);
        assert_eq!(
            k.t_scalar_mul(&k.r_from_int(3, 4), &ninth).unwrap(),
            t_int(&k, 1, 1)
        );
        assert_eq!(k.t_scalar_mul(&RElem::one(2), &ninth).unwrap(), ninth);
        assert!(k
            .t_scalar_mul(&k.r_from_int(9, 4), &ninth)
            .unwrap()
            .is_zero());
        assert!(k.t_scalar_mul(&RElem::one(1), &ninth).is_err());
    }

    #[test]
    fn k_projection() {
        let k = z(2);
        let a = k.r_from_int(12, 6);
        let x = k.k_from_fraction(&a, 5);
        assert_eq!(x.valuation(), Some(-3));
        assert_eq!(k.k_to_t(&x).unwrap(), t_int(&k, 3, 3));
        assert_eq!(k.k_to_t(&k.k_from_fraction(&a, 1)).unwrap(), TElem::zero());
    }
}
