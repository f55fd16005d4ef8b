use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{RElem, RingCtx};
use crate::error::{Error, Result};

/// `M = R/pi^e_1 x ... x R/pi^e_k x R^f` with `e_1 <= ... <= e_k`, all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct InvariantFactors {
    torsion_exps: Vec<usize>,
    free_rank: usize,
}

impl InvariantFactors {
    /// Sorts the exponents. Zero exponents (trivial factors) are rejected.
    pub fn new(mut torsion_exps: Vec<usize>, free_rank: usize) -> Result<Self> {
        if torsion_exps.contains(&0) {
            return Err(Error::Shape("torsion exponents must be positive".into()));
        }
        torsion_exps.sort_unstable();
        Ok(InvariantFactors {
            torsion_exps,
            free_rank,
        })
    }

    pub fn torsion(exps: &[usize]) -> Result<Self> {
        Self::new(exps.to_vec(), 0)
    }

    pub fn free(rank: usize) -> Self {
        InvariantFactors {
            torsion_exps: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn torsion_exps(&self) -> &[usize] {
        &self.torsion_exps
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_exps.is_empty()
    }

    /// Number of components, torsion first.
    pub fn ncomponents(&self) -> usize {
        self.torsion_exps.len() + self.free_rank
    }

    pub fn max_exp(&self) -> usize {
        self.torsion_exps.last().copied().unwrap_or(0)
    }

    /// `sum e_i`, the length of the torsion part.
    pub fn length(&self) -> usize {
        self.torsion_exps.iter().sum()
    }

    /// `|M| = q^(sum e_i)` for finite modules.
    pub fn cardinality(&self, ctx: &RingCtx) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        ctx.residue_count(self.length())
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<String> = self.torsion_exps.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}];f={}", exps.join(","), self.free_rank)
    }
}

impl FromStr for InvariantFactors {
    type Err = Error;

    /// Parses `[e1,e2,...];f=<rank>`. The `;f=` part may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (list, rest) = match s.split_once(';') {
            Some((l, r)) => (l.trim(), Some(r.trim())),
            None => (s, None),
        };
        let inner = list
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("module spec '{s}' must start with [e1,...]")))?;
        let exps = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let free = match rest {
            None => 0,
            Some(r) => r
                .strip_prefix("f=")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("bad free rank '{r}'")))?,
        };
        InvariantFactors::new(exps, free)
    }
}

/// An element of a finitely generated module in invariant-factor
/// coordinates. Torsion coordinate `i` is a residue with exactly `e_i` digits;
/// free coordinates share one precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModElem {
    pub torsion: Vec<RElem>,
    pub free: Vec<RElem>,
}

impl ModElem {
    pub fn zero(m: &InvariantFactors, free_precision: usize) -> Self {
        ModElem {
            torsion: m.torsion_exps.iter().map(|&e| RElem::zero(e)).collect(),
            free: (0..m.free_rank)
                .map(|_| RElem::zero(free_precision))
                .collect(),
        }
    }

    /// The `i`-th standard generator (torsion components first).
    pub fn basis(m: &InvariantFactors, i: usize, free_precision: usize) -> Self {
        let mut z = Self::zero(m, free_precision);
        let k = m.torsion_exps.len();
        if i < k {
            z.torsion[i] = RElem::one(m.torsion_exps[i]);
        } else {
            z.free[i - k] = RElem::one(free_precision);
        }
        z
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(RElem::is_zero)
    }

    pub fn free_precision(&self) -> Option<usize> {
        self.free.iter().map(RElem::precision).min()
    }

    /// All coordinates, torsion first.
    pub fn coords(&self) -> impl Iterator<Item = &RElem> {
        self.torsion.iter().chain(&self.free)
    }
}

impl fmt::Display for ModElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl RingCtx {
    /// Checks shapes and reduces torsion coordinates. Free coordinates are
    /// brought to their common minimum precision.
    pub fn elem_normalize(&self, m: &InvariantFactors, x: &ModElem) -> Result<ModElem> {
        if x.torsion.len() != m.torsion_exps.len() || x.free.len() != m.free_rank {
            return Err(Error::Shape(format!(
                "element has {}+{} coordinates, module {m} needs {}+{}",
                x.torsion.len(),
                x.free.len(),
                m.torsion_exps.len(),
                m.free_rank
            )));
        }
        let mut torsion = Vec::with_capacity(x.torsion.len());
        for (c, &e) in x.torsion.iter().zip(&m.torsion_exps) {
            if c.precision() < e {
                return Err(Error::InsufficientPrecision {
                    needed: e,
                    have: c.precision(),
                });
            }
            torsion.push(c.truncate(e));
        }
        let p = x.free_precision().unwrap_or(0);
        let free = x.free.iter().map(|c| c.truncate(p)).collect();
        Ok(ModElem { torsion, free })
    }

    pub fn elem_add(&self, m: &InvariantFactors, a: &ModElem, b: &ModElem) -> Result<ModElem> {
        let a = self.elem_normalize(m, a)?;
        let b = self.elem_normalize(m, b)?;
        Ok(ModElem {
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .map(|(x, y)| self.r_add(x, y))
                .collect(),
            free: a
                .free
                .iter()
                .zip(&b.free)
                .map(|(x, y)| self.r_add(x, y))
                .collect(),
        })
    }

    pub fn elem_neg(&self, m: &InvariantFactors, a: &ModElem) -> Result<ModElem> {
        let a = self.elem_normalize(m, a)?;
        Ok(ModElem {
            torsion: a.torsion.iter().map(|x| self.r_neg(x)).collect(),
            free: a.free.iter().map(|x| self.r_neg(x)).collect(),
        })
    }

    pub fn elem_sub(&self, m: &InvariantFactors, a: &ModElem, b: &ModElem) -> Result<ModElem> {
        self.elem_add(m, a, &self.elem_neg(m, b)?)
    }

    /// `r * a`. The scalar must be known to at least `max e_i` digits.
    pub fn elem_scalar_mul(&self, m: &InvariantFactors, r: &RElem, a: &ModElem) -> Result<ModElem> {
        let a = self.elem_normalize(m, a)?;
        if r.precision() < m.max_exp() {
            return Err(Error::InsufficientPrecision {
                needed: m.max_exp(),
                have: r.precision(),
            });
        }
        Ok(ModElem {
            torsion: a
                .torsion
                .iter()
                .map(|x| self.r_mul(&r.truncate(x.precision()), x))
                .collect(),
            free: a.free.iter().map(|x| self.r_mul(r, x)).collect(),
        })
    }

    /// `inf: R/pi^a -> R/pi^b`, `r -> r * pi^(b-a)`.
    pub fn inf_map(&self, a: usize, b: usize, r: &RElem) -> Result<RElem> {
        if a > b {
            return Err(Error::ExponentOrder { a, b });
        }
        if r.precision() < a {
            return Err(Error::InsufficientPrecision {
                needed: a,
                have: r.precision(),
            });
        }
        if a == 0 {
            return Ok(RElem::zero(b));
        }
        Ok(r.truncate(a).shift_up(b - a))
    }

    /// `res: R/pi^b -> R/pi^a`, reduction.
    pub fn res_map(&self, b: usize, a: usize, r: &RElem) -> Result<RElem> {
        if a > b {
            return Err(Error::ExponentOrder { a, b });
        }
        if r.precision() < b {
            return Err(Error::InsufficientPrecision {
                needed: b,
                have: r.precision(),
            });
        }
        Ok(r.truncate(a))
    }

    /// Every element of a finite module, coordinates in lexicographic order of
    /// their digit strings.
    pub fn module_elements(&self, m: &InvariantFactors, budget: u128) -> Result<Vec<ModElem>> {
        if !m.is_finite() {
            return Err(Error::Shape(format!("module {m} is not finite")));
        }
        let size = m.cardinality(self).unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::BudgetExceeded { size, budget });
        }
        let exps = m.torsion_exps();
        let q = self.q();
        let mut digits: Vec<Vec<u32>> = exps.iter().map(|&e| vec![0; e]).collect();
        let mut out = Vec::with_capacity(size as usize);
        loop {
            out.push(ModElem {
                torsion: digits.iter().map(|d| RElem::raw(d.clone())).collect(),
                free: Vec::new(),
            });
            let mut carried = true;
            'odometer: for d in digits.iter_mut().rev() {
                for x in d.iter_mut().rev() {
                    *x += 1;
                    if *x < q {
                        carried = false;
                        break 'odometer;
                    }
                    *x = 0;
                }
            }
            if carried {
                break;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let m: InvariantFactors = "[2,1];f=1".parse().unwrap();
        assert_eq!(m.torsion_exps(), &[1, 2]);
        assert_eq!(m.free_rank(), 1);
        assert_eq!(m.to_string(), "[1,2];f=1");
        assert_eq!(
            "[]".parse::<InvariantFactors>().unwrap(),
            InvariantFactors::default()
        );
        assert!("[0,1]".parse::<InvariantFactors>().is_err());
        assert!("1,2".parse::<InvariantFactors>().is_err());
    }

    #[test]
    fn module_laws() {
        let k = RingCtx::mixed(2, 6).unwrap();
        let m = InvariantFactors::torsion(&[2]).unwrap();
        let a = ModElem {
            torsion: vec![k.r_from_int(3, 2)],
            free: vec![],
        };
        let b = ModElem {
            torsion: vec![k.r_from_int(1, 2)],
            free: vec![],
        };
        assert!(k.elem_add(&m, &a, &b).unwrap().is_zero());
        assert_eq!(k.elem_scalar_mul(&m, &RElem::one(4), &a).unwrap(), a);

        let k3 = RingCtx::mixed(3, 6).unwrap();
        let m3 = InvariantFactors::torsion(&[1, 2]).unwrap();
        let x = ModElem {
            torsion: vec![k3.r_from_int(1, 1), k3.r_from_int(4, 2)],
            free: vec![],
        };
        let y = k3.elem_scalar_mul(&m3, &k3.r_from_int(2, 4), &x).unwrap();
        assert_eq!(y.torsion, vec![k3.r_from_int(2, 1), k3.r_from_int(8, 2)]);
        assert!(k3.elem_scalar_mul(&m3, &RElem::one(1), &x).is_err());
    }

    #[test]
    fn inf_and_res() {
        let k = RingCtx::mixed(2, 6).unwrap();
        assert_eq!(
            k.inf_map(1, 3, &k.r_from_int(1, 1)).unwrap(),
            k.r_from_int(4, 3)
        );
        assert_eq!(
            k.inf_map(2, 2, &k.r_from_int(3, 2)).unwrap(),
            k.r_from_int(3, 2)
        );
        assert_eq!(
            k.res_map(3, 1, &k.r_from_int(5, 3)).unwrap(),
            k.r_from_int(1, 1)
        );
        assert!(k.inf_map(3, 1, &k.r_from_int(1, 3)).is_err());
        assert!(k.res_map(1, 3, &k.r_from_int(1, 3)).is_err());
        let k3 = RingCtx::mixed(3, 6).unwrap();
        assert_eq!(
            k3.res_map(2, 1, &k3.r_from_int(7, 2)).unwrap(),
            k3.r_from_int(1, 1)
        );
        let f = RingCtx::equal_prime(2, 6).unwrap();
        assert_eq!(f.inf_map(1, 2, &RElem::one(1)).unwrap().digits(), &[0, 1]);
    }

    #[test]
    fn inf_res_composites_exhaustive() {
        // res . inf and inf . res are both multiplication by pi^(b-a)
        for k in [
            RingCtx::mixed(2, 6).unwrap(),
            RingCtx::equal(2, vec![1, 1, 1], 6).unwrap(),
        ] {
            for b in 1..=5 {
                for a in 1..=b {
                    let pi = k.r_pi_pow(b - a, b);
                    for idx in 0..(k.q() as u64).pow(b as u32) {
                        let mut digits = Vec::new();
                        let mut v = idx;
                        for _ in 0..b {
                            digits.push((v % k.q() as u64) as u32);
                            v /= k.q() as u64;
                        }
                        let r = RElem::raw(digits);
                        let ra = r.truncate(a);
                        let lhs = k.res_map(b, a, &k.inf_map(a, b, &ra).unwrap()).unwrap();
                        assert_eq!(lhs, k.r_mul(&ra, &pi.truncate(a)));
                        let rhs = k.inf_map(a, b, &k.res_map(b, a, &r).unwrap()).unwrap();
                        assert_eq!(rhs, k.r_mul(&r, &pi));
                    }
                }
            }
        }
    }
}
