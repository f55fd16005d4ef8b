//! Imaginary quadratic orders `Z[delta]` with `delta^2 = b delta + a`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `Z[delta]` with `a < 0` and `b^2 + 4a < 0`, so `delta` is not real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ZDeltaRing {
    a: i64,
    b: i64,
}

/// `x + y delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ZDelta {
    pub x: i128,
    pub y: i128,
}

impl fmt::Display for ZDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}d", self.x, self.y)
    }
}

pub fn zdelta_validate(a: i64, b: i64) -> Result<ZDeltaRing> {
    if a >= 0 {
        return Err(Error::Rejected(format!("a = {a} must be negative")));
    }
    let disc = (b as i128) * (b as i128) + 4 * a as i128;
    if disc >= 0 {
        return Err(Error::Rejected(format!(
            "b^2 + 4a = {disc} must be negative (|b| < 2 sqrt(-a))"
        )));
    }
    Ok(ZDeltaRing { a, b })
}

impl ZDeltaRing {
    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }

    /// `b^2 + 4a`, negative for every admissible ring.
    pub fn discriminant(&self) -> i128 {
        (self.b as i128).pow(2) + 4 * self.a as i128
    }

    pub fn add(&self, z: ZDelta, w: ZDelta) -> ZDelta {
        ZDelta {
            x: z.x + w.x,
            y: z.y + w.y,
        }
    }

    /// `(x + y d)(u + v d) = (xu + yva) + (xv + yu + yvb) d`.
    pub fn mul(&self, z: ZDelta, w: ZDelta) -> ZDelta {
        let (a, b) = (self.a as i128, self.b as i128);
        ZDelta {
            x: z.x * w.x + z.y * w.y * a,
            y: z.x * w.y + z.y * w.x + z.y * w.y * b,
        }
    }

    /// `|x + y delta|^2 = x^2 + bxy - ay^2`.
    pub fn norm(&self, z: ZDelta) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        z.x * z.x + b * z.x * z.y - a * z.y * z.y
    }

    /// `delta` as a complex number `(re, im)` with positive imaginary part.
    pub fn delta_complex(&self) -> (f64, f64) {
        (
            self.b as f64 / 2.0,
            (-(self.discriminant() as f64)).sqrt() / 2.0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        assert!(zdelta_validate(-1, 0).is_ok());
        assert!(zdelta_validate(-1, 1).is_ok());
        assert!(zdelta_validate(-1, 2).is_err());
        assert!(zdelta_validate(0, 0).is_err());
        assert!(zdelta_validate(3, 0).is_err());
    }

    #[test]
    fn gaussian_integers() {
        let r = zdelta_validate(-1, 0).unwrap();
        let i = ZDelta { x: 0, y: 1 };
        assert_eq!(r.mul(i, i), ZDelta { x: -1, y: 0 });
        assert_eq!(r.norm(ZDelta { x: 3, y: 4 }), 25);
    }
}
