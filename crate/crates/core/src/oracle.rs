//! Brute-force enumerators used as ground truth.
//!
//! Nothing here calls the structural arithmetic. Residues mod `pi^L` are
//! digit vectors; in mixed characteristic they are turned into integers
//! mod `p^L`, in equal characteristic the residue field gets its own
//! multiplication built by shift-and-reduce and power series are multiplied
//! by schoolbook convolution. Results are converted into the public types
//! only at the very end.

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{Mode, RElem, RingCtx, TElem};
use crate::error::{Error, Result};
use crate::fingen::{InvariantFactors, ModElem, PresMatrix};
use crate::flood::CircleElem;

/// Caps the size of anything an enumerator materializes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumBudget {
    pub max_elements: u128,
    pub seed: u64,
}

impl EnumBudget {
    pub fn new(max_elements: u128, seed: u64) -> Result<Self> {
        if max_elements == 0 {
            return Err(Error::Rejected(
                "budget must allow at least one element".into(),
            ));
        }
        Ok(EnumBudget { max_elements, seed })
    }

    fn check(&self, size: u128) -> Result<()> {
        if size > self.max_elements {
            return Err(Error::BudgetExceeded {
                size,
                budget: self.max_elements,
            });
        }
        Ok(())
    }
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_elements: 1 << 16,
            seed: 0,
        }
    }
}

/// Residue arithmetic mod `pi^L` written from scratch.
struct Naive {
    mixed: bool,
    p: u64,
    deg: usize,
    q: u64,
    modulus: Vec<u64>,
    table: Vec<u32>,
}

impl Naive {
    fn new(ctx: &RingCtx) -> Naive {
        let mut n = Naive {
            mixed: ctx.mode() == Mode::Mixed,
            p: ctx.p() as u64,
            deg: ctx.e() as usize,
            q: ctx.q() as u64,
            modulus: ctx.modulus().iter().map(|&c| c as u64).collect(),
            table: Vec::new(),
        };
        if !n.mixed && n.q <= 256 {
            let q = n.q as u32;
            n.table = (0..q * q).map(|ab| n.fq_mul_slow(ab / q, ab % q)).collect();
        }
        n
    }

    fn coeffs(&self, mut a: u32) -> Vec<u64> {
        (0..self.deg)
            .map(|_| {
                let c = a as u64 % self.p;
                a /= self.p as u32;
                c
            })
            .collect()
    }

    fn pack(&self, c: &[u64]) -> u32 {
        c.iter().rev().fold(0u64, |acc, &x| acc * self.p + x) as u32
    }

    fn fq_add(&self, a: u32, b: u32) -> u32 {
        if self.mixed {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        self.pack(
            &x.iter()
                .zip(&y)
                .map(|(s, t)| (s + t) % self.p)
                .collect::<Vec<_>>(),
        )
    }

    /// Horner in `b`: `acc <- acc t + b_j a`, reducing `t^deg` by the modulus
    /// after every shift.
    fn fq_mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let mut acc = vec![0u64; self.deg];
        for &bj in y.iter().rev() {
            let top = acc[self.deg - 1];
            for i in (1..self.deg).rev() {
                acc[i] = acc[i - 1];
            }
            acc[0] = 0;
            for i in 0..self.deg {
                acc[i] = (acc[i] + p * p - top * self.modulus[i] % p) % p;
            }
            for i in 0..self.deg {
                acc[i] = (acc[i] + bj * x[i]) % p;
            }
        }
        self.pack(&acc)
    }

    fn fq_mul(&self, a: u32, b: u32) -> u32 {
        if self.mixed {
            return ((a as u64 * b as u64) % self.p) as u32;
        }
        if !self.table.is_empty() {
            return self.table[(a as u64 * self.q + b as u64) as usize];
        }
        self.fq_mul_slow(a, b)
    }

    fn to_int(&self, a: &[u32]) -> u128 {
        a.iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.p as u128 + d as u128)
    }

    fn int_digits(&self, mut v: u128, len: usize) -> Vec<u32> {
        (0..len)
            .map(|_| {
                let d = (v % self.p as u128) as u32;
                v /= self.p as u128;
                d
            })
            .collect()
    }

    fn modulus_int(&self, len: usize) -> u128 {
        (self.p as u128).pow(len as u32)
    }

    fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let len = a.len();
        if self.mixed {
            let m = self.modulus_int(len);
            return self.int_digits((self.to_int(a) + self.to_int(b)) % m, len);
        }
        a.iter().zip(b).map(|(&x, &y)| self.fq_add(x, y)).collect()
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let len = a.len().min(b.len());
        if self.mixed {
            let m = self.modulus_int(len);
            return self.int_digits((self.to_int(a) % m) * (self.to_int(b) % m) % m, len);
        }
        let mut out = vec![0u32; len];
        for i in 0..len {
            for j in 0..len - i {
                out[i + j] = self.fq_add(out[i + j], self.fq_mul(a[i], b[j]));
            }
        }
        out
    }

    fn pi_mul(&self, a: &[u32], k: usize) -> Vec<u32> {
        let len = a.len();
        if self.mixed {
            let m = self.modulus_int(len);
            let pk = if k >= len {
                0
            } else {
                (self.p as u128).pow(k as u32)
            };
            return self.int_digits(self.to_int(a) * pk % m, len);
        }
        (0..len)
            .map(|i| if i >= k { a[i - k] } else { 0 })
            .collect()
    }

    fn code(&self, a: &[u32]) -> u64 {
        a.iter().rev().fold(0u64, |acc, &d| acc * self.q + d as u64)
    }

    fn decode(&self, mut c: u64, len: usize) -> Vec<u32> {
        (0..len)
            .map(|_| {
                let d = (c % self.q) as u32;
                c /= self.q;
                d
            })
            .collect()
    }

    fn count(&self, len: usize) -> Option<u128> {
        (self.q as u128).checked_pow(len as u32)
    }
}

/// A finite module `prod R/pi^e_i` with elements encoded as integers.
struct NaiveModule<'a> {
    ring: &'a Naive,
    exps: Vec<usize>,
}

impl NaiveModule<'_> {
    fn size(&self) -> Option<u128> {
        self.ring.count(self.exps.iter().sum())
    }

    fn decode(&self, mut c: u64) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.exps.len()];
        for i in (0..self.exps.len()).rev() {
            let block = self.ring.q.pow(self.exps[i] as u32);
            out[i] = self.ring.decode(c % block, self.exps[i]);
            c /= block;
        }
        out
    }

    fn encode(&self, x: &[Vec<u32>]) -> u64 {
        let mut c = 0u64;
        for (xi, &e) in x.iter().zip(&self.exps) {
            c = c * self.ring.q.pow(e as u32) + self.ring.code(xi);
        }
        c
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.decode(a), self.decode(b));
        self.encode(
            &x.iter()
                .zip(&y)
                .map(|(s, t)| self.ring.add(s, t))
                .collect::<Vec<_>>(),
        )
    }

    fn scale(&self, r: &[u32], a: u64) -> u64 {
        let x = self.decode(a);
        let y: Vec<Vec<u32>> = x
            .iter()
            .map(|xi| {
                let mut r = r.to_vec();
                r.resize(xi.len().max(r.len()), 0);
                self.ring.mul(&r[..xi.len()], xi)
            })
            .collect();
        self.encode(&y)
    }

    fn pi_mul(&self, a: u64, k: usize) -> u64 {
        let x = self.decode(a);
        self.encode(
            &x.iter()
                .map(|xi| self.ring.pi_mul(xi, k))
                .collect::<Vec<_>>(),
        )
    }

    fn code_of(&self, x: &ModElem) -> u64 {
        let coords: Vec<Vec<u32>> = self
            .exps
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let d = x.torsion.get(i).map(|r| r.digits()).unwrap_or(&[]);
                (0..e).map(|k| d.get(k).copied().unwrap_or(0)).collect()
            })
            .collect();
        self.encode(&coords)
    }

    fn to_elem(&self, ctx: &RingCtx, c: u64) -> Result<ModElem> {
        let torsion = self
            .decode(c)
            .into_iter()
            .map(|d| ctx.r_from_digits(d))
            .collect::<Result<_>>()?;
        Ok(ModElem {
            torsion,
            free: Vec::new(),
        })
    }
}

fn require_finite(m: &InvariantFactors) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::Shape(format!("module {m} is not finite")))
    }
}

fn size_of(ring: &Naive, exps: &[usize]) -> u128 {
    ring.count(exps.iter().sum()).unwrap_or(u128::MAX)
}

/// Every element of a finite module, in lexicographic digit order.
pub fn enum_elements(
    ctx: &RingCtx,
    m: &InvariantFactors,
    budget: &EnumBudget,
) -> Result<Vec<ModElem>> {
    require_finite(m)?;
    let ring = Naive::new(ctx);
    budget.check(size_of(&ring, m.torsion_exps()))?;
    let exps = m.torsion_exps();
    let total: usize = exps.iter().sum();
    let size = size_of(&ring, exps) as u64;
    (0..size)
        .map(|idx| {
            // the last digit varies fastest
            let flat: Vec<u32> = (0..total)
                .map(|i| ((idx / ring.q.pow((total - 1 - i) as u32)) % ring.q) as u32)
                .collect();
            let mut off = 0;
            let mut torsion = Vec::with_capacity(exps.len());
            for &e in exps {
                torsion.push(ctx.r_from_digits(flat[off..off + e].to_vec())?);
                off += e;
            }
            Ok(ModElem {
                torsion,
                free: Vec::new(),
            })
        })
        .collect()
}

/// An `R`-linear map `M -> T[pi^level]` by generator images
/// `images[i] / pi^level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RHom {
    pub level: usize,
    pub images: Vec<RElem>,
}

impl RHom {
    pub fn images_in_t(&self, ctx: &RingCtx) -> Result<Vec<TElem>> {
        self.images
            .iter()
            .map(|a| ctx.t_from_parts(self.level, a.digits().to_vec()))
            .collect()
    }

    /// `f(x) = (sum_i x_i a_i) / pi^level`, computed with the oracle's own
    /// residue arithmetic.
    pub fn eval(&self, ctx: &RingCtx, m: &InvariantFactors, x: &ModElem) -> Result<TElem> {
        let ring = Naive::new(ctx);
        let l = self.level;
        let mut acc = vec![0u32; l];
        for (i, a) in self.images.iter().enumerate() {
            let xi = x.torsion.get(i).ok_or(Error::DimensionMismatch {
                expected: m.ncomponents(),
                got: x.torsion.len(),
            })?;
            let xl: Vec<u32> = (0..l)
                .map(|k| {
                    if k < m.torsion_exps()[i] {
                        xi.digits().get(k).copied().unwrap_or(0)
                    } else {
                        0
                    }
                })
                .collect();
            acc = ring.add(&acc, &ring.mul(&xl, a.digits()));
        }
        ctx.t_from_parts(l, acc)
    }
}

/// All `R`-linear maps `M -> T[pi^level]`, found by scanning every candidate
/// image of every generator and keeping those killed by the generator's
/// annihilator.
pub fn enum_r_homs(
    ctx: &RingCtx,
    m: &InvariantFactors,
    level: usize,
    budget: &EnumBudget,
) -> Result<Vec<RHom>> {
    require_finite(m)?;
    if let Some(&e) = m.torsion_exps().iter().find(|&&e| e > level) {
        return Err(Error::NotTorsion {
            level: e,
            exp: level,
        });
    }
    let ring = Naive::new(ctx);
    budget.check(size_of(&ring, m.torsion_exps()))?;
    let scan = ring.count(level).unwrap_or(u128::MAX);
    budget.check(scan)?;
    let mut candidates: Vec<Vec<Vec<u32>>> = Vec::new();
    for &e in m.torsion_exps() {
        let ok = (0..scan as u64)
            .map(|c| ring.decode(c, level))
            .filter(|a| ring.pi_mul(a, e).iter().all(|&d| d == 0))
            .collect();
        candidates.push(ok);
    }
    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    budget.check(total)?;
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; candidates.len()];
    loop {
        let images = idx
            .iter()
            .zip(&candidates)
            .map(|(&i, c)| ctx.r_from_digits(c[i].clone()))
            .collect::<Result<Vec<_>>>()?;
        out.push(RHom { level, images });
        let mut j = idx.len();
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < candidates[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// An additive map `M -> (1/p)Z/Z`, by its values `c/p` on the `F_p`-basis
/// of `M` (component, digit position, residue coefficient).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ZHom {
    pub values: Vec<u32>,
}

impl ZHom {
    pub fn eval(&self, ctx: &RingCtx, m: &InvariantFactors, x: &ModElem) -> Result<CircleElem> {
        let ring = Naive::new(ctx);
        let mut k = 0;
        let mut acc = 0u64;
        for (i, &e) in m.torsion_exps().iter().enumerate() {
            let xi = x.torsion.get(i).ok_or(Error::DimensionMismatch {
                expected: m.ncomponents(),
                got: x.torsion.len(),
            })?;
            for pos in 0..e {
                for c in ring.coeffs(xi.digits().get(pos).copied().unwrap_or(0)) {
                    acc = (acc + c * self.values[k] as u64) % ring.p;
                    k += 1;
                }
            }
        }
        CircleElem::new(ctx.p(), acc, 1)
    }
}

/// All additive maps from a finite module over `F_q[[x]]` into `R/Z`. The
/// module is an `F_p`-vector space, so these are the `F_p`-linear maps into
/// `(1/p)Z/Z`.
pub fn enum_z_homs(ctx: &RingCtx, m: &InvariantFactors, budget: &EnumBudget) -> Result<Vec<ZHom>> {
    if ctx.mode() != Mode::Equal {
        return Err(Error::WrongMode("equal"));
    }
    require_finite(m)?;
    let ring = Naive::new(ctx);
    let rank = m.torsion_exps().iter().sum::<usize>() * ring.deg;
    let total = (ring.p as u128)
        .checked_pow(rank as u32)
        .unwrap_or(u128::MAX);
    budget.check(total)?;
    let p = ring.p as u32;
    Ok((0..total as u64)
        .map(|mut c| {
            let mut values = vec![0u32; rank];
            for v in values.iter_mut().rev() {
                *v = (c % p as u64) as u32;
                c /= p as u64;
            }
            ZHom { values }
        })
        .collect())
}

/// Size of a cokernel and `order_profile[k]`, the number of its elements of
/// exact order `pi^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokernelCount {
    pub count: u128,
    pub order_profile: Vec<u128>,
}

impl CokernelCount {
    /// The count and profile of `prod R/pi^e_i`: `prod q^min(e_i, k)`
    /// elements are killed by `pi^k`.
    pub fn of_module(ctx: &RingCtx, m: &InvariantFactors) -> Option<CokernelCount> {
        if !m.is_finite() {
            return None;
        }
        let q = ctx.q() as u128;
        let killed = |k: usize| -> Option<u128> {
            m.torsion_exps().iter().try_fold(1u128, |acc, &e| {
                acc.checked_mul(q.checked_pow(e.min(k) as u32)?)
            })
        };
        let mut profile = vec![1u128];
        for k in 1..=m.max_exp() {
            profile.push(killed(k)? - killed(k - 1)?);
        }
        Some(CokernelCount {
            count: killed(m.max_exp())?,
            order_profile: profile,
        })
    }
}

/// The cokernel of a relation matrix (rows are relations), enumerated.
///
/// For increasing `L` the row span is closed inside `(R/pi^L)^cols` as an
/// abelian group. Once every coset of the quotient has order below `pi^L`,
/// the quotient is the whole cokernel. A quotient still reaching order
/// `pi^L` at the matrix precision means the cokernel has a free part or a
/// factor beyond what the entries determine.
pub fn cokernel_bruteforce(
    ctx: &RingCtx,
    m: &PresMatrix,
    budget: &EnumBudget,
) -> Result<CokernelCount> {
    let cols = m.ncols();
    if cols == 0 {
        return Ok(CokernelCount {
            count: 1,
            order_profile: vec![1],
        });
    }
    if m.nrows() < cols {
        return Err(Error::InfiniteCokernel);
    }
    let ring = Naive::new(ctx);
    for level in 1..=m.precision() {
        let module = NaiveModule {
            ring: &ring,
            exps: vec![level; cols],
        };
        let total = module.size().unwrap_or(u128::MAX);
        budget.check(total)?;
        let total = total as u64;

        let mut gens = Vec::new();
        for row in m.rows() {
            let row: Vec<Vec<u32>> = row.iter().map(|x| x.digits()[..level].to_vec()).collect();
            if ring.mixed {
                gens.push(module.encode(&row));
                continue;
            }
            for j in 0..ring.deg {
                let tj = ring.pack(&(0..ring.deg).map(|i| u64::from(i == j)).collect::<Vec<_>>());
                let scaled: Vec<Vec<u32>> = row
                    .iter()
                    .map(|x| x.iter().map(|&d| ring.fq_mul(tj, d)).collect())
                    .collect();
                let c = module.encode(&scaled);
                for k in 0..level {
                    gens.push(module.pi_mul(c, k));
                }
            }
        }

        let mut member = vec![false; total as usize];
        member[0] = true;
        let mut span = vec![0u64];
        for g in gens {
            let mut i = 0;
            while i < span.len() {
                let s = module.add(span[i], g);
                if !member[s as usize] {
                    member[s as usize] = true;
                    span.push(s);
                }
                i += 1;
            }
        }

        let mut hist = vec![0u128; level + 1];
        for x in 0..total {
            let mut y = x;
            let mut k = 0;
            while !member[y as usize] {
                y = module.pi_mul(y, 1);
                k += 1;
            }
            hist[k] += 1;
        }
        let h = span.len() as u128;
        if hist[level] == 0 {
            let mut profile: Vec<u128> = hist.iter().map(|c| c / h).collect();
            while profile.len() > 1 && profile.last() == Some(&0) {
                profile.pop();
            }
            return Ok(CokernelCount {
                count: total as u128 / h,
                order_profile: profile,
            });
        }
    }
    Err(Error::InfiniteCokernel)
}

/// Number of `R`-linear maps between finite modules: each generator of `m`
/// may go to any element of `n` killed by its annihilator.
pub fn hom_count(
    ctx: &RingCtx,
    m: &InvariantFactors,
    n: &InvariantFactors,
    budget: &EnumBudget,
) -> Result<u128> {
    Ok(hom_candidates(ctx, m, n, budget)?
        .iter()
        .map(|c| c.len() as u128)
        .product())
}

fn hom_candidates(
    ctx: &RingCtx,
    m: &InvariantFactors,
    n: &InvariantFactors,
    budget: &EnumBudget,
) -> Result<Vec<Vec<u64>>> {
    require_finite(m)?;
    require_finite(n)?;
    let ring = Naive::new(ctx);
    budget.check(size_of(&ring, m.torsion_exps()))?;
    budget.check(size_of(&ring, n.torsion_exps()))?;
    let target = NaiveModule {
        ring: &ring,
        exps: n.torsion_exps().to_vec(),
    };
    let size = target.size().unwrap_or(u128::MAX) as u64;
    Ok(m.torsion_exps()
        .iter()
        .map(|&a| (0..size).filter(|&y| target.pi_mul(y, a) == 0).collect())
        .collect())
}

/// Every `R`-linear map between finite modules as the tuple of generator
/// images.
pub fn enum_homs(
    ctx: &RingCtx,
    m: &InvariantFactors,
    n: &InvariantFactors,
    budget: &EnumBudget,
) -> Result<Vec<Vec<ModElem>>> {
    let candidates = hom_candidates(ctx, m, n, budget)?;
    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    budget.check(total)?;
    let ring = Naive::new(ctx);
    let target = NaiveModule {
        ring: &ring,
        exps: n.torsion_exps().to_vec(),
    };
    let mut out = Vec::with_capacity(total as usize);
    for mut t in 0..total {
        let mut tuple = vec![ModElem::zero(n, 0); candidates.len()];
        for (slot, c) in tuple.iter_mut().zip(&candidates).rev() {
            *slot = target.to_elem(ctx, c[(t % c.len() as u128) as usize])?;
            t /= c.len() as u128;
        }
        out.push(tuple);
    }
    Ok(out)
}

/// `sum_i x_i y_i` for the map sending generator `i` of `m` to `images[i]`.
pub fn apply_images(
    ctx: &RingCtx,
    m: &InvariantFactors,
    n: &InvariantFactors,
    images: &[ModElem],
    x: &ModElem,
) -> Result<ModElem> {
    let ring = Naive::new(ctx);
    let source = NaiveModule {
        ring: &ring,
        exps: m.torsion_exps().to_vec(),
    };
    let target = NaiveModule {
        ring: &ring,
        exps: n.torsion_exps().to_vec(),
    };
    let coords = source.decode(source.code_of(x));
    let top = n.max_exp();
    let mut acc = 0u64;
    for (xi, y) in coords.iter().zip(images) {
        let mut r = xi.clone();
        r.resize(top.max(r.len()), 0);
        acc = target.add(acc, target.scale(&r, target.code_of(y)));
    }
    target.to_elem(ctx, acc)
}

/// The maps `N -> T` on the submodule `N` of `m` generated by `gens`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubmoduleHoms {
    /// `|N|`.
    pub size: u128,
    /// One entry per map: its values on `gens`.
    pub values: Vec<Vec<TElem>>,
}

/// Enumerates `Hom(N, T)` for `N = <gens> <= m`.
///
/// `N` is built one generator at a time. When `g` is adjoined and `pi^k g`
/// is the first multiple already in the span, a value `v` for `g` extends
/// a map `phi` exactly when `pi^k v = phi(pi^k g)`; candidates are found by
/// scanning all of `T[pi^L]`.
pub fn enum_sub_homs(
    ctx: &RingCtx,
    m: &InvariantFactors,
    gens: &[ModElem],
    budget: &EnumBudget,
) -> Result<SubmoduleHoms> {
    require_finite(m)?;
    let ring = Naive::new(ctx);
    budget.check(size_of(&ring, m.torsion_exps()))?;
    let level = m.max_exp();
    let module = NaiveModule {
        ring: &ring,
        exps: m.torsion_exps().to_vec(),
    };
    let scan = ring.count(level).unwrap_or(u128::MAX) as u64;

    // the span with one coefficient tuple per element
    let mut span: HashMap<u64, Vec<Vec<u32>>> = HashMap::from([(0, Vec::new())]);
    let mut steps: Vec<(usize, Vec<Vec<u32>>)> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        let g = module.code_of(g);
        let mut k = 0;
        let mut y = g;
        while !span.contains_key(&y) {
            y = module.pi_mul(y, 1);
            k += 1;
        }
        let mut coeffs = span[&y].clone();
        coeffs.resize(j, vec![0; level]);
        steps.push((k, coeffs));
        let mut next = HashMap::with_capacity(span.len() * ring.q.pow(k as u32) as usize);
        for (&n, c) in &span {
            for r in 0..ring.q.pow(k as u32) {
                let r = ring.decode(r, level);
                let mut c = c.clone();
                c.resize(j, vec![0; level]);
                c.push(r.clone());
                next.insert(module.add(n, module.scale(&r, g)), c);
            }
        }
        span = next;
    }

    // solutions of pi^k v = t, for every k and t
    let mut roots: HashMap<(usize, u64), Vec<u64>> = HashMap::new();
    for &(k, _) in &steps {
        if roots.keys().any(|&(kk, _)| kk == k) {
            continue;
        }
        for v in 0..scan {
            let t = ring.code(&ring.pi_mul(&ring.decode(v, level), k));
            roots.entry((k, t)).or_default().push(v);
        }
    }

    budget.check(span.len() as u128)?;
    let mut maps: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for (k, coeffs) in &steps {
        let mut next = Vec::new();
        for phi in &maps {
            let mut target = vec![0u32; level];
            for (c, v) in coeffs.iter().zip(phi) {
                target = ring.add(&target, &ring.mul(c, v));
            }
            if let Some(vs) = roots.get(&(*k, ring.code(&target))) {
                for &v in vs {
                    let mut ext = phi.clone();
                    ext.push(ring.decode(v, level));
                    next.push(ext);
                }
            }
        }
        maps = next;
    }
    let values = maps
        .into_iter()
        .map(|phi| {
            phi.into_iter()
                .map(|a| ctx.t_from_parts(level, a))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SubmoduleHoms {
        size: span.len() as u128,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tors(e: &[usize]) -> InvariantFactors {
        InvariantFactors::torsion(e).unwrap()
    }

    fn b() -> EnumBudget {
        EnumBudget::default()
    }

    #[test]
    fn element_examples() {
        let z2 = RingCtx::mixed(2, 8).unwrap();
        let elems = enum_elements(&z2, &tors(&[2]), &b()).unwrap();
        let ints: Vec<u128> = elems
            .iter()
            .map(|x| z2.r_to_int(&x.torsion[0]).unwrap())
            .collect();
        assert_eq!(ints, vec![0, 2, 1, 3]);
        assert_eq!(
            enum_elements(&z2, &InvariantFactors::default(), &b())
                .unwrap()
                .len(),
            1
        );
        let f2 = RingCtx::equal_prime(2, 8).unwrap();
        assert_eq!(enum_elements(&f2, &tors(&[1, 1]), &b()).unwrap().len(), 4);
        assert!(enum_elements(&z2, &tors(&[20]), &b()).is_err());
    }

    #[test]
    fn matches_structural_enumeration() {
        for ctx in [
            RingCtx::mixed(3, 6).unwrap(),
            RingCtx::equal(2, vec![1, 1, 1], 6).unwrap(),
        ] {
            let m = tors(&[1, 2, 2]);
            assert_eq!(
                enum_elements(&ctx, &m, &b()).unwrap(),
                ctx.module_elements(&m, 1 << 16).unwrap()
            );
        }
    }

    #[test]
    fn residue_field_matches() {
        let ctx = RingCtx::equal(3, vec![2, 2, 1], 4).unwrap();
        let n = Naive::new(&ctx);
        for a in 0..9 {
            for c in 0..9 {
                assert_eq!(
                    n.fq_mul(a, c),
                    ctx.pack(&ctx.fq_mul(&ctx.unpack(a), &ctx.unpack(c)).unwrap())
                        .unwrap()
                );
            }
        }
    }

    #[test]
    fn r_hom_examples() {
        let z2 = RingCtx::mixed(2, 8).unwrap();
        assert_eq!(enum_r_homs(&z2, &tors(&[2]), 2, &b()).unwrap().len(), 4);
        assert_eq!(
            enum_r_homs(&z2, &InvariantFactors::default(), 0, &b())
                .unwrap()
                .len(),
            1
        );
        assert_eq!(enum_r_homs(&z2, &tors(&[1, 1]), 1, &b()).unwrap().len(), 4);
        assert!(enum_r_homs(&z2, &tors(&[3]), 2, &b()).is_err());
    }

    #[test]
    fn r_homs_are_linear() {
        let ctx = RingCtx::equal(2, vec![1, 1, 1], 6).unwrap();
        let m = tors(&[2]);
        let elems = enum_elements(&ctx, &m, &b()).unwrap();
        for f in enum_r_homs(&ctx, &m, 2, &b()).unwrap() {
            for x in &elems {
                for y in &elems {
                    let lhs = f.eval(&ctx, &m, &ctx.elem_add(&m, x, y).unwrap()).unwrap();
                    let rhs =
                        ctx.t_add(&f.eval(&ctx, &m, x).unwrap(), &f.eval(&ctx, &m, y).unwrap());
                    assert_eq!(lhs, rhs);
                }
                let r = ctx.r_from_digits(vec![2, 3]).unwrap();
                let lhs = f
                    .eval(&ctx, &m, &ctx.elem_scalar_mul(&m, &r, x).unwrap())
                    .unwrap();
                assert_eq!(
                    lhs,
                    ctx.t_scalar_mul(&r, &f.eval(&ctx, &m, x).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn z_hom_examples() {
        let f2 = RingCtx::equal_prime(2, 4).unwrap();
        assert_eq!(enum_z_homs(&f2, &tors(&[1]), &b()).unwrap().len(), 2);
        assert_eq!(
            enum_z_homs(&f2, &InvariantFactors::default(), &b())
                .unwrap()
                .len(),
            1
        );
        let f4 = RingCtx::equal(2, vec![1, 1, 1], 4).unwrap();
        assert_eq!(enum_z_homs(&f4, &tors(&[1]), &b()).unwrap().len(), 4);
        assert!(enum_z_homs(&RingCtx::mixed(2, 4).unwrap(), &tors(&[1]), &b()).is_err());
    }

    #[test]
    fn cokernel_examples() {
        let z2 = RingCtx::mixed(2, 6).unwrap();
        let m = PresMatrix::from_ints(&z2, &[&[2, 0], &[0, 4]], 6).unwrap();
        let c = cokernel_bruteforce(&z2, &m, &b()).unwrap();
        assert_eq!(c.count, 8);
        assert_eq!(Some(c), CokernelCount::of_module(&z2, &tors(&[1, 2])));

        let id = PresMatrix::from_ints(&z2, &[&[1, 0], &[0, 1]], 6).unwrap();
        assert_eq!(cokernel_bruteforce(&z2, &id, &b()).unwrap().count, 1);

        let m = PresMatrix::from_ints(&z2, &[&[2, 2], &[2, 4]], 6).unwrap();
        let c = cokernel_bruteforce(&z2, &m, &b()).unwrap();
        assert_eq!((c.count, c.order_profile), (4, vec![1, 3]));

        let wide = PresMatrix::from_ints(&z2, &[&[2, 0]], 6).unwrap();
        assert!(matches!(
            cokernel_bruteforce(&z2, &wide, &b()),
            Err(Error::InfiniteCokernel)
        ));
        let zero_col = PresMatrix::from_ints(&z2, &[&[2, 0], &[4, 0]], 6).unwrap();
        assert!(matches!(
            cokernel_bruteforce(&z2, &zero_col, &b()),
            Err(Error::InfiniteCokernel)
        ));
    }

    #[test]
    fn cokernel_equal_char() {
        let f4 = RingCtx::equal(2, vec![1, 1, 1], 5).unwrap();
        // [[x, t], [0, x^2]] has cokernel F_4[[x]]/x^3
        let m = PresMatrix::new(vec![
            vec![
                f4.r_from_digits(vec![0, 1, 0, 0, 0]).unwrap(),
                f4.r_from_digits(vec![2, 0, 0, 0, 0]).unwrap(),
            ],
            vec![
                RElem::zero(5),
                f4.r_from_digits(vec![0, 0, 1, 0, 0]).unwrap(),
            ],
        ])
        .unwrap();
        let c = cokernel_bruteforce(&f4, &m, &b()).unwrap();
        assert_eq!(Some(c), CokernelCount::of_module(&f4, &tors(&[3])));
    }

    #[test]
    fn hom_counts() {
        let z2 = RingCtx::mixed(2, 6).unwrap();
        assert_eq!(
            hom_count(&z2, &tors(&[2, 1]), &tors(&[2]), &b()).unwrap(),
            8
        );
        let homs = enum_homs(&z2, &tors(&[1]), &tors(&[2]), &b()).unwrap();
        assert_eq!(homs.len(), 2);
        let x = ModElem {
            torsion: vec![RElem::one(1)],
            free: vec![],
        };
        let y = apply_images(&z2, &tors(&[1]), &tors(&[2]), &homs[1], &x).unwrap();
        assert_eq!(z2.r_to_int(&y.torsion[0]), Some(2));
    }

    #[test]
    fn submodule_homs() {
        let z2 = RingCtx::mixed(2, 6).unwrap();
        let m = tors(&[2]);
        // N = 2M has two elements
        let g = ModElem {
            torsion: vec![z2.r_from_int(2, 2)],
            free: vec![],
        };
        let h = enum_sub_homs(&z2, &m, std::slice::from_ref(&g), &b()).unwrap();
        assert_eq!((h.size, h.values.len()), (2, 2));
        let h = enum_sub_homs(
            &z2,
            &m,
            &[
                g,
                ModElem {
                    torsion: vec![z2.r_from_int(3, 2)],
                    free: vec![],
                },
            ],
            &b(),
        )
        .unwrap();
        assert_eq!((h.size, h.values.len()), (4, 4));
    }
}
