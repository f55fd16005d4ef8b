//! Continuous characters of `F_q[[x]]` and the isomorphism `ell` onto
//! `T = F_q((x))/F_q[[x]]`.
//!
//! A continuous character `phi` is determined by its restrictions to the
//! slices `F_q x^n`, each of which is a character of `F_q` and so an element
//! `c_n = i(phi|F_q x^n)`. Only finitely many `c_n` are nonzero and
//! `ell(phi) = sum_n c_n x^-(n+1)`.

use std::collections::BTreeMap;

use super::circle::CircleElem;
use super::fq_dual::{character_eval, i_inv, i_iso};
use crate::arith::{FqElem, Mode, RElem, RingCtx, TElem};
use crate::duality::DualElem;
use crate::error::{Error, Result};
use crate::fingen::{InvariantFactors, ModElem};

/// A finitely supported character of `F_q[[x]]`, stored as the coefficients
/// `c_n` with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZDualFunctional {
    coeffs: Vec<FqElem>,
}

fn require_equal(ctx: &RingCtx) -> Result<()> {
    match ctx.mode() {
        Mode::Equal => Ok(()),
        Mode::Mixed => Err(Error::WrongMode("equal")),
    }
}

impl ZDualFunctional {
    pub fn new(ctx: &RingCtx, mut coeffs: Vec<FqElem>) -> Result<Self> {
        for c in &coeffs {
            ctx.pack(c)?;
        }
        while coeffs
            .last()
            .is_some_and(|c| c.coeffs.iter().all(|&d| d == 0))
        {
            coeffs.pop();
        }
        Ok(ZDualFunctional { coeffs })
    }

    pub fn zero() -> Self {
        ZDualFunctional { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// One past the largest nonzero index.
    pub fn support_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `phi(s) = sum_n psi_n(s_n)` with `psi_n = i^-1(c_n)`. Digits of `s`
    /// beyond its precision are irrelevant only if the precision covers the
    /// support.
    pub fn evaluate(&self, ctx: &RingCtx, s: &RElem) -> Result<CircleElem> {
        require_equal(ctx)?;
        if s.precision() < self.support_bound() {
            return Err(Error::InsufficientPrecision {
                needed: self.support_bound(),
                have: s.precision(),
            });
        }
        let mut acc = CircleElem::ZERO;
        for (c, &digit) in self.coeffs.iter().zip(s.digits()) {
            let psi = i_inv(ctx, c)?;
            acc = acc.add(&character_eval(ctx, &psi, &ctx.unpack(digit)), ctx.p());
        }
        Ok(acc)
    }

    /// `(r . phi)(s) = phi(r s)`, recomputed slice by slice from evaluations.
    pub fn scale(&self, ctx: &RingCtx, r: &RElem) -> Result<ZDualFunctional> {
        require_equal(ctx)?;
        let bound = self.support_bound();
        if bound == 0 {
            return Ok(Self::zero());
        }
        if r.precision() < bound {
            return Err(Error::InsufficientPrecision {
                needed: bound,
                have: r.precision(),
            });
        }
        let e = ctx.e() as usize;
        let mut coeffs = Vec::with_capacity(bound);
        for n in 0..bound {
            let mut values = Vec::with_capacity(e);
            for j in 0..e {
                let mut basis = vec![0u32; e];
                basis[j] = 1;
                let digit = ctx.pack(&FqElem::new(basis))?;
                let mut s = vec![0u32; bound];
                s[n] = digit;
                let rs = ctx.r_mul(&r.truncate(bound), &ctx.r_from_digits(s)?);
                values.push(self.evaluate(ctx, &rs)?);
            }
            coeffs.push(i_iso(ctx, &values)?);
        }
        Self::new(ctx, coeffs)
    }
}

impl RingCtx {
    /// `ell(phi) = sum_n c_n x^-(n+1)`.
    pub fn ell(&self, phi: &ZDualFunctional) -> Result<TElem> {
        require_equal(self)?;
        let m = phi.support_bound();
        if m == 0 {
            return Ok(TElem::zero());
        }
        // numerator sum_n c_n x^(m-1-n) over x^m
        let mut digits = vec![0u32; m];
        for (n, c) in phi.coeffs.iter().enumerate() {
            digits[m - 1 - n] = self.pack(c)?;
        }
        self.t_from_parts(m, digits)
    }

    pub fn ell_inv(&self, t: &TElem) -> Result<ZDualFunctional> {
        require_equal(self)?;
        let n = t.level();
        let coeffs = (0..n)
            .map(|k| self.unpack(t.numerator()[n - 1 - k]))
            .collect();
        ZDualFunctional::new(self, coeffs)
    }

    /// Transports an `R`-linear functional `psi: M -> T` to the additive
    /// character `m -> ell^-1(psi(m))(1)` of `M`, tabulated on every element.
    pub fn adjoint_transport(
        &self,
        m: &InvariantFactors,
        psi: &DualElem,
        budget: u128,
    ) -> Result<BTreeMap<ModElem, CircleElem>> {
        require_equal(self)?;
        if !m.is_finite() {
            return Err(Error::Shape(format!(
                "module {m} has free rank; enumeration infeasible"
            )));
        }
        let elems = self.module_elements(m, budget)?;
        let one = RElem::one(m.max_exp().max(1));
        let mut table = BTreeMap::new();
        for x in elems {
            let value = self.eval_pairing(m, psi, &x)?;
            let chi = self.ell_inv(&value)?;
            table.insert(x, chi.evaluate(self, &one.lift(chi.support_bound()))?);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> RingCtx {
        RingCtx::equal_prime(2, 8).unwrap()
    }

    fn phi(ctx: &RingCtx, c: &[u32]) -> ZDualFunctional {
        ZDualFunctional::new(ctx, c.iter().map(|&d| ctx.unpack(d)).collect()).unwrap()
    }

    #[test]
    fn ell_examples() {
        let k = f2();
        assert_eq!(
            k.ell(&phi(&k, &[1])).unwrap(),
            k.t_from_parts(1, vec![1]).unwrap()
        );
        assert_eq!(
            k.ell(&phi(&k, &[0, 1])).unwrap(),
            k.t_from_parts(2, vec![1, 0]).unwrap()
        );
        assert!(k.ell(&ZDualFunctional::zero()).unwrap().is_zero());
        assert!(RingCtx::mixed(2, 4)
            .unwrap()
            .ell(&ZDualFunctional::zero())
            .is_err());
    }

    #[test]
    fn ell_inv_examples() {
        let k = f2();
        assert_eq!(
            k.ell_inv(&k.t_from_parts(1, vec![1]).unwrap()).unwrap(),
            phi(&k, &[1])
        );
        assert!(k.ell_inv(&TElem::zero()).unwrap().is_zero());
        // x^-2 + x^-1 = (1 + x)/x^2
        assert_eq!(
            k.ell_inv(&k.t_from_parts(2, vec![1, 1]).unwrap()).unwrap(),
            phi(&k, &[1, 1])
        );
    }

    #[test]
    fn evaluation_and_scaling() {
        let k = f2();
        let f = phi(&k, &[0, 1]);
        // phi(x) = 1/2, phi(1) = 0
        let x = k.r_from_digits(vec![0, 1, 0]).unwrap();
        assert_eq!(
            f.evaluate(&k, &x).unwrap(),
            CircleElem::new(2, 1, 1).unwrap()
        );
        assert_eq!(f.evaluate(&k, &RElem::one(3)).unwrap(), CircleElem::ZERO);
        // x . phi has c_0 = c_1 of phi
        assert_eq!(f.scale(&k, &x).unwrap(), phi(&k, &[1]));
    }

    #[test]
    fn transport_example() {
        let k = f2();
        let m = InvariantFactors::torsion(&[1]).unwrap();
        let psi = DualElem {
            torsion: vec![RElem::one(1)],
            t: vec![],
        };
        let table = k.adjoint_transport(&m, &psi, 1 << 10).unwrap();
        let vals: Vec<CircleElem> = table.values().copied().collect();
        assert_eq!(
            vals,
            vec![CircleElem::ZERO, CircleElem::new(2, 1, 1).unwrap()]
        );
        let zero = k
            .adjoint_transport(&m, &DualElem::zero(&m), 1 << 10)
            .unwrap();
        assert!(zero.values().all(CircleElem::is_zero));
    }
}
