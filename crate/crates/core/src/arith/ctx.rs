use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Characteristic of the base ring.
///
/// `Equal` is `F_q[[x]]` with uniformizer `x`; `Mixed` is `Z_p` with
/// uniformizer `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Equal,
    Mixed,
}

/// An element of the residue field `F_q = F_p[t]/(modulus)`, stored as its
/// `e` coefficients in the basis `1, t, ..., t^(e-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    pub coeffs: Vec<u32>,
}

impl FqElem {
    pub fn new(coeffs: Vec<u32>) -> Self {
        FqElem { coeffs }
    }
}

const TABLE_LIMIT: u32 = 256;

/// The compact DVR we compute over together with its working precision.
///
/// Digits of ring elements are residue-field elements packed as base-`p`
/// integers `c_0 + c_1 p + ... + c_{e-1} p^(e-1)`; in mixed characteristic a
/// digit is simply an integer in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingCtx {
    mode: Mode,
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    precision: usize,
    mul_table: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `num` modulo the monic polynomial `den` over `F_p`.
/// Coefficients are stored lowest degree first.
fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let dd = den.len() - 1;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    while r.len() > dd {
        let top = r.pop().unwrap() % p64;
        if top == 0 {
            continue;
        }
        let shift = r.len() - dd;
        for (j, &c) in den[..dd].iter().enumerate() {
            let sub = top * c as u64 % p64;
            r[shift + j] = (r[shift + j] + p64 - sub) % p64;
        }
    }
    r.resize(dd, 0);
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let e = modulus.len() - 1;
    // every monic divisor candidate of degree 1..e-1
    for deg in 1..e {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(deg + 1);
            let mut v = idx;
            for _ in 0..deg {
                cand.push((v % p as u64) as u32);
                v /= p as u64;
            }
            cand.push(1);
            if poly_rem(p, modulus, &cand).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl RingCtx {
    /// `Z_p` truncated at `precision` digits.
    pub fn mixed(p: u32, precision: usize) -> Result<Self> {
        Self::build(Mode::Mixed, p, vec![0, 1], precision)
    }

    /// `F_q[[x]]` with `F_q = F_p[t]/(modulus)`. `modulus` lists the `e + 1`
    /// coefficients, constant term first, and must be monic and irreducible.
    pub fn equal(p: u32, modulus: Vec<u32>, precision: usize) -> Result<Self> {
        Self::build(Mode::Equal, p, modulus, precision)
    }

    /// `F_p[[x]]`.
    pub fn equal_prime(p: u32, precision: usize) -> Result<Self> {
        Self::build(Mode::Equal, p, vec![0, 1], precision)
    }

    fn build(mode: Mode, p: u32, modulus: Vec<u32>, precision: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if p >= 1 << 16 {
            return Err(Error::InvalidRing(format!(
                "prime {p} too large (limit 2^16)"
            )));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidRing("modulus must have degree >= 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        if mode == Mode::Mixed && e != 1 {
            return Err(Error::InvalidRing(
                "mixed characteristic requires e = 1".into(),
            ));
        }
        if precision == 0 {
            return Err(Error::InvalidRing("precision must be >= 1".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidRing("modulus must be monic".into()));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidRing(format!(
                "modulus coefficient {c} not reduced mod {p}"
            )));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q < (1u64 << 31))
            .ok_or_else(|| Error::InvalidRing("residue field too large".into()))?
            as u32;
        if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidRing(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let mut ctx = RingCtx {
            mode,
            p,
            e,
            q,
            modulus,
            precision,
            mul_table: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = ctx.digit_mul_slow(a, b);
                }
            }
            ctx.mul_table = table;
        }
        Ok(ctx)
    }

    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidRing("precision must be >= 1".into()));
        }
        let mut c = self.clone();
        c.precision = precision;
        Ok(c)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    /// Order of the residue field.
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn pack(&self, a: &FqElem) -> Result<u32> {
        self.check_fq(a)?;
        Ok(a.coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c))
    }

    pub fn unpack(&self, mut d: u32) -> FqElem {
        let mut coeffs = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            coeffs.push(d % self.p);
            d /= self.p;
        }
        FqElem { coeffs }
    }

    fn check_fq(&self, a: &FqElem) -> Result<()> {
        if a.coeffs.len() != self.e as usize {
            return Err(Error::DimensionMismatch {
                expected: self.e as usize,
                got: a.coeffs.len(),
            });
        }
        if let Some(&c) = a.coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::DigitOutOfRange {
                digit: c,
                q: self.p,
            });
        }
        Ok(())
    }

    pub fn fq_add(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        self.check_fq(a)?;
        self.check_fq(b)?;
        Ok(FqElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        })
    }

    /// Product in `F_p[t]/(modulus)`: full polynomial product, then remainder.
    pub fn fq_mul(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        self.check_fq(a)?;
        self.check_fq(b)?;
        let e = self.e as usize;
        let p = self.p as u64;
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        Ok(FqElem {
            coeffs: poly_rem(self.p, &prod, &self.modulus),
        })
    }

    fn digit_mul_slow(&self, a: u32, b: u32) -> u32 {
        let prod = self
            .fq_mul(&self.unpack(a), &self.unpack(b))
            .expect("valid digits");
        self.pack(&prod).expect("reduced")
    }

    // Residue-field arithmetic on packed digits.

    #[inline]
    pub(crate) fn digit_add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub(crate) fn digit_neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub(crate) fn digit_mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if !self.mul_table.is_empty() {
            return self.mul_table[(a * self.q + b) as usize];
        }
        self.digit_mul_slow(a, b)
    }

    /// Inverse in the residue field via `a^(q-2)`.
    pub(crate) fn digit_inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut result = 1u32;
        let mut base = a;
        let mut exp = self.q - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.digit_mul(result, base);
            }
            base = self.digit_mul(base, base);
            exp >>= 1;
        }
        Some(result)
    }

    /// Number of residues modulo `pi^n`, if it fits in a `u128`.
    pub fn residue_count(&self, n: usize) -> Option<u128> {
        (self.q as u128).checked_pow(n as u32)
    }

    /// The canonical ring spec string.
    pub fn spec_string(&self) -> String {
        let mode = match self.mode {
            Mode::Equal => "equal",
            Mode::Mixed => "mixed",
        };
        let mut s = format!("mode={mode},p={},e={}", self.p, self.e);
        if self.e > 1 {
            let poly: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            s.push_str(&format!(",poly={}", poly.join(",")));
        }
        s.push_str(&format!(",prec={}", self.precision));
        s
    }
}

impl fmt::Display for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Mixed => write!(f, "Z_{} (prec {})", self.p, self.precision),
            Mode::Equal => write!(f, "F_{}[[x]] (prec {})", self.q, self.precision),
        }
    }
}

impl FromStr for RingCtx {
    type Err = Error;

    /// Parses `mode=equal|mixed,p=<prime>,e=<deg>,poly=<c0,...,ce>,prec=<N>`.
    /// Tokens without `=` continue the previous key's value, which is how the
    /// comma-separated `poly` list is read.
    fn from_str(s: &str) -> Result<Self> {
        let mut fields: Vec<(String, Vec<String>)> = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.split_once('=') {
                Some((k, v)) => {
                    fields.push((k.trim().to_ascii_lowercase(), vec![v.trim().to_string()]))
                }
                None => match fields.last_mut() {
                    Some((_, vals)) => vals.push(tok.to_string()),
                    None => {
                        return Err(Error::Parse(format!("dangling value '{tok}' in ring spec")))
                    }
                },
            }
        }
        let get = |key: &str| fields.iter().find(|(k, _)| k == key).map(|(_, v)| v);
        let single = |key: &str| -> Result<Option<u64>> {
            match get(key) {
                None => Ok(None),
                Some(v) if v.len() == 1 => v[0]
                    .parse::<u64>()
                    .map(Some)
                    .map_err(|_| Error::Parse(format!("bad integer for '{key}': {}", v[0]))),
                Some(v) => Err(Error::Parse(format!("'{key}' takes one value, got {v:?}"))),
            }
        };
        for (k, _) in &fields {
            if !matches!(k.as_str(), "mode" | "p" | "e" | "poly" | "prec") {
                return Err(Error::Parse(format!("unknown ring spec key '{k}'")));
            }
        }
        let mode = match get("mode").map(|v| v.join(",")) {
            Some(m) if m == "equal" => Mode::Equal,
            Some(m) if m == "mixed" => Mode::Mixed,
            Some(m) => return Err(Error::Parse(format!("unknown mode '{m}'"))),
            None => return Err(Error::Parse("ring spec missing 'mode'".into())),
        };
        let p = single("p")?.ok_or_else(|| Error::Parse("ring spec missing 'p'".into()))?;
        let e = single("e")?.unwrap_or(1);
        let prec = single("prec")?.unwrap_or(8);
        let p = u32::try_from(p).map_err(|_| Error::Parse("p too large".into()))?;
        let modulus = match get("poly") {
            Some(vals) => vals
                .iter()
                .map(|c| {
                    c.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad poly coefficient '{c}'")))
                })
                .collect::<Result<Vec<_>>>()?,
            None if e == 1 => vec![0, 1],
            None => return Err(Error::Parse("'poly' is required when e > 1".into())),
        };
        if modulus.len() as u64 != e + 1 {
            return Err(Error::Parse(format!(
                "poly has {} coefficients, expected e+1 = {}",
                modulus.len(),
                e + 1
            )));
        }
        RingCtx::build(mode, p, modulus, prec as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> RingCtx {
        RingCtx::equal(2, vec![1, 1, 1], 4).unwrap()
    }

    // Independent check: multiply as integers-of-polynomials and reduce by
    // repeated subtraction of shifted modulus, written out by hand for F_4.
    #[test]
    fn f4_products() {
        let k = f4();
        let t = FqElem::new(vec![0, 1]);
        let one = FqElem::new(vec![1, 0]);
        let t1 = FqElem::new(vec![1, 1]);
        assert_eq!(k.fq_mul(&t, &t).unwrap(), t1);
        assert_eq!(k.fq_mul(&one, &t).unwrap(), t);
        assert_eq!(k.fq_mul(&t, &t1).unwrap(), one);
    }

    #[test]
    fn fq_dimension_mismatch() {
        let k = f4();
        let bad = FqElem::new(vec![1]);
        assert!(matches!(
            k.fq_mul(&bad, &bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // t^2 + 1 = (t + 1)^2 over F_2
        assert!(RingCtx::equal(2, vec![1, 0, 1], 4).is_err());
        assert!(RingCtx::equal(3, vec![1, 0, 1], 4).is_ok());
        assert!(RingCtx::mixed(4, 4).is_err());
        assert!(RingCtx::mixed(5, 0).is_err());
    }

    #[test]
    fn digit_inverse_roundtrip() {
        for k in [
            f4(),
            RingCtx::mixed(7, 2).unwrap(),
            RingCtx::equal(3, vec![2, 2, 1], 2).unwrap(),
        ] {
            for a in 1..k.q() {
                let inv = k.digit_inv(a).unwrap();
                assert_eq!(k.digit_mul(a, inv), 1, "{k} digit {a}");
            }
        }
    }

    #[test]
    fn parse_ring_specs() {
        let k: RingCtx = "mode=equal,p=2,e=2,poly=1,1,1,prec=6".parse().unwrap();
        assert_eq!(k.q(), 4);
        assert_eq!(k.precision(), 6);
        assert_eq!(k.spec_string(), "mode=equal,p=2,e=2,poly=1,1,1,prec=6");
        let z: RingCtx = "mode=mixed,p=3,e=1,prec=5".parse().unwrap();
        assert_eq!(z.mode(), Mode::Mixed);
        assert_eq!(z.spec_string().parse::<RingCtx>().unwrap(), z);
        assert!("mode=mixed,p=3,e=2,poly=2,2,1,prec=5"
            .parse::<RingCtx>()
            .is_err());
        assert!("mode=equal,p=2,e=2,prec=5".parse::<RingCtx>().is_err());
        assert!("mode=weird,p=2".parse::<RingCtx>().is_err());
    }
}
