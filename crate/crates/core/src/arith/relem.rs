use std::fmt;

use serde::Serialize;

use super::ctx::{Mode, RingCtx};
use crate::error::{Error, Result};

/// An element of `R` known modulo `pi^precision`, stored as its `pi`-adic
/// digits, least significant first. The precision is the digit count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RElem {
    digits: Vec<u32>,
}

/// The `pi`-adic valuation of a truncated element. When every digit is zero
/// the valuation is only known to be at least the precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub value: usize,
    pub exact: bool,
}

impl RElem {
    /// Unchecked constructor; use [`RingCtx::r_from_digits`] for validation.
    pub(crate) fn raw(digits: Vec<u32>) -> Self {
        debug_assert!(!digits.is_empty());
        RElem { digits }
    }

    pub fn zero(precision: usize) -> Self {
        RElem {
            digits: vec![0; precision.max(1)],
        }
    }

    pub fn one(precision: usize) -> Self {
        let mut digits = vec![0; precision.max(1)];
        digits[0] = 1;
        RElem { digits }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Reduces to a lower precision. Never extends.
    pub fn truncate(&self, precision: usize) -> RElem {
        let n = precision.clamp(1, self.digits.len());
        RElem {
            digits: self.digits[..n].to_vec(),
        }
    }

    /// Extends to a higher precision by padding with zero digits. The result is
    /// one particular lift of the residue.
    pub fn lift(&self, precision: usize) -> RElem {
        let mut digits = self.digits.clone();
        if digits.len() < precision {
            digits.resize(precision, 0);
        }
        RElem { digits }
    }

    /// Multiplication by `pi^k`: prepends `k` zero digits, gaining `k` digits of
    /// precision.
    pub fn shift_up(&self, k: usize) -> RElem {
        let mut digits = vec![0; k];
        digits.extend_from_slice(&self.digits);
        RElem { digits }
    }

    /// Exact division by `pi^k`. Requires the low `k` digits to vanish and
    /// loses `k` digits of precision.
    pub fn shift_down(&self, k: usize) -> Result<RElem> {
        if k >= self.digits.len() {
            return Err(Error::InsufficientPrecision {
                needed: k + 1,
                have: self.digits.len(),
            });
        }
        if self.digits[..k].iter().any(|&d| d != 0) {
            return Err(Error::Inconsistent(format!(
                "element not divisible by pi^{k}"
            )));
        }
        Ok(RElem {
            digits: self.digits[k..].to_vec(),
        })
    }

    /// Congruence at the shared precision.
    pub fn congruent(&self, other: &RElem) -> bool {
        let n = self.precision().min(other.precision());
        self.digits[..n] == other.digits[..n]
    }
}

impl fmt::Display for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl RingCtx {
    pub fn r_from_digits(&self, digits: Vec<u32>) -> Result<RElem> {
        if digits.is_empty() {
            return Err(Error::InsufficientPrecision { needed: 1, have: 0 });
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= self.q()) {
            return Err(Error::DigitOutOfRange {
                digit: d,
                q: self.q(),
            });
        }
        Ok(RElem::raw(digits))
    }

    /// Image of an integer. In mixed characteristic this is the `p`-adic
    /// expansion; in equal characteristic the integer lands in the prime field.
    pub fn r_from_int(&self, value: i64, precision: usize) -> RElem {
        let precision = precision.max(1);
        let p = self.p() as u64;
        match self.mode() {
            Mode::Equal => {
                let mut digits = vec![0; precision];
                digits[0] = value.rem_euclid(p as i64) as u32;
                RElem::raw(digits)
            }
            Mode::Mixed => {
                let mut v = value.unsigned_abs();
                let mut digits = Vec::with_capacity(precision);
                for _ in 0..precision {
                    digits.push((v % p) as u32);
                    v /= p;
                }
                let r = RElem::raw(digits);
                if value < 0 {
                    self.r_neg(&r)
                } else {
                    r
                }
            }
        }
    }

    /// Integer value of the digits in mixed characteristic, if it fits.
    pub fn r_to_int(&self, a: &RElem) -> Option<u128> {
        let p = self.p() as u128;
        let mut acc: u128 = 0;
        for &d in a.digits.iter().rev() {
            acc = acc.checked_mul(p)?.checked_add(d as u128)?;
        }
        Some(acc)
    }

    /// An element of `R` whose constant digit is the given residue-field element.
    pub fn r_from_digit(&self, digit: u32, precision: usize) -> RElem {
        let mut digits = vec![0; precision.max(1)];
        digits[0] = digit;
        RElem::raw(digits)
    }

    pub fn r_add(&self, a: &RElem, b: &RElem) -> RElem {
        let n = a.precision().min(b.precision());
        match self.mode() {
            Mode::Equal => RElem::raw(
                (0..n)
                    .map(|i| self.digit_add(a.digits[i], b.digits[i]))
                    .collect(),
            ),
            Mode::Mixed => {
                let p = self.p();
                let mut carry = 0u32;
                let digits = (0..n)
                    .map(|i| {
                        let s = a.digits[i] + b.digits[i] + carry;
                        carry = s / p;
                        s % p
                    })
                    .collect();
                RElem::raw(digits)
            }
        }
    }

    pub fn r_neg(&self, a: &RElem) -> RElem {
        match self.mode() {
            Mode::Equal => RElem::raw(a.digits.iter().map(|&d| self.digit_neg(d)).collect()),
            Mode::Mixed => {
                // p-adic complement: p - d at the first nonzero digit, p-1-d after
                let p = self.p();
                let mut seen = false;
                let digits = a
                    .digits
                    .iter()
                    .map(|&d| {
                        if seen {
                            p - 1 - d
                        } else if d != 0 {
                            seen = true;
                            p - d
                        } else {
                            0
                        }
                    })
                    .collect();
                RElem::raw(digits)
            }
        }
    }

    pub fn r_sub(&self, a: &RElem, b: &RElem) -> RElem {
        self.r_add(a, &self.r_neg(b))
    }

    /// Product at precision `min(a.precision, b.precision)`.
    pub fn r_mul(&self, a: &RElem, b: &RElem) -> RElem {
        let n = a.precision().min(b.precision());
        match self.mode() {
            Mode::Equal => {
                let mut out = vec![0u32; n];
                for (i, &x) in a.digits[..n].iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.digits[..n - i].iter().enumerate() {
                        if y != 0 {
                            out[i + j] = self.digit_add(out[i + j], self.digit_mul(x, y));
                        }
                    }
                }
                RElem::raw(out)
            }
            Mode::Mixed => {
                let p = self.p() as u128;
                let mut conv = vec![0u128; n];
                for (i, &x) in a.digits[..n].iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.digits[..n - i].iter().enumerate() {
                        conv[i + j] += x as u128 * y as u128;
                    }
                }
                let mut carry = 0u128;
                let digits = conv
                    .into_iter()
                    .map(|c| {
                        let s = c + carry;
                        carry = s / p;
                        (s % p) as u32
                    })
                    .collect();
                RElem::raw(digits)
            }
        }
    }

    pub fn r_valuation(&self, a: &RElem) -> Valuation {
        match a.digits.iter().position(|&d| d != 0) {
            Some(v) => Valuation {
                value: v,
                exact: true,
            },
            None => Valuation {
                value: a.precision(),
                exact: false,
            },
        }
    }

    /// Inverse of a unit by Newton iteration `x <- x (2 - a x)`, which doubles
    /// the number of correct digits each round.
    pub fn r_unit_inverse(&self, a: &RElem) -> Result<RElem> {
        let n = a.precision();
        let d0 = self.digit_inv(a.digits[0]).ok_or(Error::NonUnit)?;
        let mut x = self.r_from_digit(d0, n);
        let two = self.r_from_int(2, n);
        let mut correct = 1;
        while correct < n {
            let ax = self.r_mul(a, &x);
            x = self.r_mul(&x, &self.r_sub(&two, &ax));
            correct *= 2;
        }
        Ok(x)
    }

    /// `pi^k` at the given precision.
    pub fn r_pi_pow(&self, k: usize, precision: usize) -> RElem {
        let mut digits = vec![0; precision.max(1)];
        if k < digits.len() {
            digits[k] = 1;
        }
        RElem::raw(digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32, n: usize) -> RingCtx {
        RingCtx::mixed(p, n).unwrap()
    }

    #[test]
    fn mixed_product_matches_integers() {
        let k = z(5, 3);
        let a = k.r_from_int(7, 3);
        let b = k.r_from_int(8, 3);
        assert_eq!(k.r_mul(&a, &b).digits(), &[1, 1, 2]);
        assert_eq!(k.r_to_int(&k.r_mul(&a, &b)), Some(56));
    }

    #[test]
    fn equal_product_is_truncated_series() {
        let k = RingCtx::equal_prime(2, 4).unwrap();
        let a = k.r_from_digits(vec![1, 1, 0, 0]).unwrap();
        assert_eq!(k.r_mul(&a, &a).digits(), &[1, 0, 1, 0]);
    }

    #[test]
    fn zero_absorbs_at_min_precision() {
        let k = z(3, 5);
        let a = k.r_from_int(17, 5);
        let prod = k.r_mul(&a, &RElem::zero(3));
        assert_eq!(prod, RElem::zero(3));
    }

    #[test]
    fn valuations() {
        let k = z(3, 4);
        assert_eq!(
            k.r_valuation(&k.r_from_int(18, 4)),
            Valuation {
                value: 2,
                exact: true
            }
        );
        assert_eq!(
            k.r_valuation(&RElem::zero(4)),
            Valuation {
                value: 4,
                exact: false
            }
        );
        assert_eq!(
            k.r_valuation(&RElem::one(4)),
            Valuation {
                value: 0,
                exact: true
            }
        );
    }

    #[test]
    fn unit_inverses() {
        let k = z(5, 2);
        assert_eq!(
            k.r_to_int(&k.r_unit_inverse(&k.r_from_int(2, 2)).unwrap()),
            Some(13)
        );
        let f = RingCtx::equal_prime(2, 3).unwrap();
        let inv = f
            .r_unit_inverse(&f.r_from_digits(vec![1, 1, 0]).unwrap())
            .unwrap();
        assert_eq!(inv.digits(), &[1, 1, 1]);
        assert_eq!(k.r_unit_inverse(&RElem::one(2)).unwrap(), RElem::one(2));
        assert_eq!(k.r_unit_inverse(&k.r_from_int(5, 2)), Err(Error::NonUnit));
    }

    #[test]
    fn negative_integers() {
        let k = z(7, 3);
        let m1 = k.r_from_int(-1, 3);
        assert_eq!(m1.digits(), &[6, 6, 6]);
        assert!(k.r_add(&m1, &RElem::one(3)).is_zero());
    }

    #[test]
    fn shifts() {
        let k = z(2, 4);
        let a = k.r_from_int(12, 4);
        let b = a.shift_down(2).unwrap();
        assert_eq!(k.r_to_int(&b), Some(3));
        assert_eq!(b.precision(), 2);
        assert!(a.shift_down(3).is_err());
        assert_eq!(b.shift_up(2), a);
    }
}
