use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A `p`-power torsion point `numerator / p^k + Z` of the circle `R/Z`, with
/// `k` minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CircleElem {
    pub k: u32,
    #[serde(rename = "num")]
    pub numerator: u64,
}

impl CircleElem {
    pub const ZERO: CircleElem = CircleElem { k: 0, numerator: 0 };

    /// `num / p^k` reduced to canonical form.
    pub fn new(p: u32, numerator: u64, k: u32) -> Result<Self> {
        let pk = (p as u64)
            .checked_pow(k)
            .ok_or_else(|| Error::NotPTorsion(format!("{p}^{k} overflows")))?;
        let (mut num, mut k) = (numerator % pk, k);
        if num == 0 {
            return Ok(Self::ZERO);
        }
        while k > 0 && num % p as u64 == 0 {
            num /= p as u64;
            k -= 1;
        }
        Ok(CircleElem { k, numerator: num })
    }

    pub fn is_zero(&self) -> bool {
        self.k == 0
    }

    pub fn add(&self, other: &CircleElem, p: u32) -> CircleElem {
        let k = self.k.max(other.k);
        let pk = (p as u64).pow(k);
        let a = self.numerator * (p as u64).pow(k - self.k);
        let b = other.numerator * (p as u64).pow(k - other.k);
        CircleElem::new(p, (a % pk + b % pk) % pk, k).expect("same denominator")
    }

    pub fn neg(&self, p: u32) -> CircleElem {
        if self.is_zero() {
            return *self;
        }
        CircleElem {
            k: self.k,
            numerator: (p as u64).pow(self.k) - self.numerator,
        }
    }

    /// `n * self` for a non-negative integer `n`.
    pub fn times(&self, n: u64, p: u32) -> CircleElem {
        if self.is_zero() {
            return *self;
        }
        let pk = (p as u64).pow(self.k);
        CircleElem::new(
            p,
            ((self.numerator as u128 * n as u128) % pk as u128) as u64,
            self.k,
        )
        .expect("reduced")
    }

    /// The value as a real number in `[0, 1)`.
    pub fn to_f64(&self, p: u32) -> f64 {
        self.numerator as f64 / (p as f64).powi(self.k as i32)
    }
}

impl fmt::Display for CircleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/p^{}", self.numerator, self.k)
        }
    }
}
