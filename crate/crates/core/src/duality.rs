//! The dual `M^ = Hom(M, T)` of a finitely generated module in explicit
//! coordinates.
//!
//! A functional on `R/pi^e` is determined by `phi(1)`, which is
//! `pi^e`-torsion in `T` and so equals `b / pi^e` for a unique residue
//! `b mod pi^e`; that residue is the coordinate. A functional on `R` is
//! recorded as `phi(1)` in `T` directly.

use serde::Serialize;

use crate::arith::{RElem, RingCtx, TElem};
use crate::error::{Error, Result};
use crate::fingen::{solve_mod, HomMatrix, InvariantFactors, ModElem};

/// `M^` for `M = prod R/pi^e_i x R^f`: the torsion exponents are unchanged and
/// each free factor contributes a copy of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualModule {
    pub source: InvariantFactors,
    pub torsion_exps: Vec<usize>,
    pub t_copies: usize,
}

impl DualModule {
    /// Number of functionals when the source is finite.
    pub fn cardinality(&self, ctx: &RingCtx) -> Option<u128> {
        if self.t_copies > 0 {
            return None;
        }
        ctx.residue_count(self.torsion_exps.iter().sum())
    }
}

/// A functional in dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DualElem {
    /// `b_i mod pi^e_i` with `phi(e_i) = b_i / pi^e_i`.
    pub torsion: Vec<RElem>,
    /// `phi` on each free generator.
    pub t: Vec<TElem>,
}

impl DualElem {
    pub fn zero(m: &InvariantFactors) -> Self {
        DualElem {
            torsion: m.torsion_exps().iter().map(|&e| RElem::zero(e)).collect(),
            t: vec![TElem::zero(); m.free_rank()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(RElem::is_zero) && self.t.iter().all(TElem::is_zero)
    }
}

/// An endomorphism of `T`, which is multiplication by an element of `R`
/// known modulo `pi^scale.precision()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TEndo {
    pub scale: RElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub via_dual_inf: RElem,
    pub via_res: RElem,
}

/// The precomposition map `N^ -> M^` of a hom `M -> N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualHom {
    hom: HomMatrix,
}

impl DualHom {
    pub fn hom(&self) -> &HomMatrix {
        &self.hom
    }
}

pub fn dual_structure(m: &InvariantFactors) -> DualModule {
    DualModule {
        source: m.clone(),
        torsion_exps: m.torsion_exps().to_vec(),
        t_copies: m.free_rank(),
    }
}

impl RingCtx {
    /// Reduces torsion coordinates and checks shape.
    pub fn dual_normalize(&self, m: &InvariantFactors, phi: &DualElem) -> Result<DualElem> {
        if phi.torsion.len() != m.torsion_exps().len() || phi.t.len() != m.free_rank() {
            return Err(Error::Shape(format!(
                "functional has {}+{} coordinates, module {m} needs {}+{}",
                phi.torsion.len(),
                phi.t.len(),
                m.torsion_exps().len(),
                m.free_rank()
            )));
        }
        let torsion = phi
            .torsion
            .iter()
            .zip(m.torsion_exps())
            .map(|(b, &e)| {
                if b.precision() < e {
                    Err(Error::InsufficientPrecision {
                        needed: e,
                        have: b.precision(),
                    })
                } else {
                    Ok(b.truncate(e))
                }
            })
            .collect::<Result<_>>()?;
        Ok(DualElem {
            torsion,
            t: phi.t.clone(),
        })
    }

    /// `i_x` for `x = pi^e`: the residue `b` with `value = b / pi^e`.
    pub fn i_x_forward(&self, e: usize, value: &TElem) -> Result<RElem> {
        if value.level() > e {
            return Err(Error::NotTorsion {
                level: value.level(),
                exp: e,
            });
        }
        match value.numerator_elem() {
            None => Ok(RElem::zero(e.max(1))),
            Some(num) => Ok(num.shift_up(e - value.level())),
        }
    }

    /// Inverse of [`RingCtx::i_x_forward`].
    pub fn i_x_inverse(&self, e: usize, b: &RElem) -> Result<TElem> {
        self.t_from_fraction(b, e)
    }

    /// `phi(m) = sum_i b_i m_i / pi^e_i + sum_j m_j t_j`.
    pub fn eval_pairing(&self, m: &InvariantFactors, phi: &DualElem, x: &ModElem) -> Result<TElem> {
        let phi = self.dual_normalize(m, phi)?;
        let x = self.elem_normalize(m, x)?;
        let mut acc = TElem::zero();
        for ((b, xi), &e) in phi.torsion.iter().zip(&x.torsion).zip(m.torsion_exps()) {
            acc = self.t_add(&acc, &self.t_from_fraction(&self.r_mul(b, xi), e)?);
        }
        for (t, xj) in phi.t.iter().zip(&x.free) {
            acc = self.t_add(&acc, &self.t_scalar_mul(xj, t)?);
        }
        Ok(acc)
    }

    pub fn dual_add(&self, m: &InvariantFactors, a: &DualElem, b: &DualElem) -> Result<DualElem> {
        let a = self.dual_normalize(m, a)?;
        let b = self.dual_normalize(m, b)?;
        Ok(DualElem {
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .map(|(x, y)| self.r_add(x, y))
                .collect(),
            t: a.t
                .iter()
                .zip(&b.t)
                .map(|(x, y)| self.t_add(x, y))
                .collect(),
        })
    }

    /// The functional dual to the `i`-th torsion generator: coordinate 1 there
    /// and 0 elsewhere.
    pub fn dual_basis(&self, m: &InvariantFactors, i: usize) -> DualElem {
        let mut d = DualElem::zero(m);
        d.torsion[i] = RElem::one(m.torsion_exps()[i]);
        d
    }

    /// All functionals on a finite module, in lexicographic coordinate order.
    pub fn dual_elements(&self, m: &InvariantFactors, budget: u128) -> Result<Vec<DualElem>> {
        if !m.is_finite() {
            return Err(Error::Shape(format!("module {m} is not finite")));
        }
        let size = m.cardinality(self).unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::BudgetExceeded { size, budget });
        }
        let q = self.q();
        let exps = m.torsion_exps();
        let total: usize = exps.iter().sum();
        let mut out = Vec::with_capacity(size as usize);
        let mut flat = vec![0u32; total];
        loop {
            let mut torsion = Vec::with_capacity(exps.len());
            let mut off = 0;
            for &e in exps {
                torsion.push(RElem::raw(flat[off..off + e].to_vec()));
                off += e;
            }
            out.push(DualElem {
                torsion,
                t: Vec::new(),
            });
            // odometer, last coordinate's most significant digit fastest
            let mut i = total;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                flat[i] += 1;
                if flat[i] < q {
                    break;
                }
                flat[i] = 0;
            }
        }
    }

    pub fn dual_hom(&self, h: &HomMatrix) -> DualHom {
        DualHom { hom: h.clone() }
    }

    /// `(h^ phi)(m) = phi(h m)`, computed generator by generator.
    pub fn apply_dual_hom(&self, dh: &DualHom, phi: &DualElem) -> Result<DualElem> {
        let h = &dh.hom;
        let (dom, cod) = (h.domain(), h.codomain());
        let phi = self.dual_normalize(cod, phi)?;
        // phi on each codomain generator, as an element of T
        let cod_values: Vec<TElem> = phi
            .torsion
            .iter()
            .zip(cod.torsion_exps())
            .map(|(b, &e)| self.i_x_inverse(e, b))
            .chain(phi.t.iter().cloned().map(Ok))
            .collect::<Result<_>>()?;
        let k_dom = dom.torsion_exps().len();
        let mut torsion = Vec::with_capacity(k_dom);
        let mut t = Vec::with_capacity(dom.free_rank());
        for i in 0..dom.ncomponents() {
            let mut value = TElem::zero();
            for (j, cv) in cod_values.iter().enumerate() {
                let entry = h.entry(i, j);
                if entry.is_zero() {
                    continue;
                }
                value = self.t_add(&value, &self.t_scalar_mul(entry, cv)?);
            }
            if i < k_dom {
                torsion.push(self.i_x_forward(dom.torsion_exps()[i], &value)?);
            } else {
                t.push(value);
            }
        }
        Ok(DualElem { torsion, t })
    }

    /// For finite modules the dual of `h: M -> N` as a hom `N^ -> M^`, both
    /// identified with their sources through `i_x`.
    pub fn dual_hom_matrix(&self, h: &HomMatrix) -> Result<HomMatrix> {
        let (dom, cod) = (h.domain(), h.codomain());
        if !dom.is_finite() || !cod.is_finite() {
            return Err(Error::Shape(
                "dual of a free module is not finitely generated".into(),
            ));
        }
        let dh = self.dual_hom(h);
        let rows = (0..cod.torsion_exps().len())
            .map(|j| Ok(self.apply_dual_hom(&dh, &self.dual_basis(cod, j))?.torsion))
            .collect::<Result<Vec<_>>>()?;
        HomMatrix::new(self, cod.clone(), dom.clone(), rows)
    }

    /// Computes both sides of `i_a . inf^ = res . i_b` for `phi` on `R/pi^b`.
    pub fn inf_res_square(&self, a: usize, b: usize, phi: &DualElem) -> Result<SquareReport> {
        if a > b {
            return Err(Error::ExponentOrder { a, b });
        }
        if a == 0 {
            return Ok(SquareReport {
                via_dual_inf: RElem::zero(1),
                via_res: RElem::zero(1),
            });
        }
        let mb = InvariantFactors::torsion(&[b])?;
        let ma = InvariantFactors::torsion(&[a])?;
        let phi = self.dual_normalize(&mb, phi)?;
        let inf = HomMatrix::new(
            self,
            ma,
            mb,
            vec![vec![self.inf_map(a, b, &RElem::one(a))?]],
        )?;
        let pulled = self.apply_dual_hom(&self.dual_hom(&inf), &phi)?;
        let via_res = self.res_map(
            b,
            a,
            &self.i_x_forward(b, &self.i_x_inverse(b, &phi.torsion[0])?)?,
        )?;
        Ok(SquareReport {
            via_dual_inf: pulled.torsion[0].clone(),
            via_res,
        })
    }

    pub fn check_inf_res_square(&self, a: usize, b: usize, phi: &DualElem) -> Result<bool> {
        let r = self.inf_res_square(a, b, phi)?;
        Ok(r.via_dual_inf == r.via_res)
    }

    pub fn t_endo_apply(&self, phi: &TEndo, t: &TElem) -> Result<TElem> {
        self.t_scalar_mul(&phi.scale, t)
    }

    /// Recovers the endomorphism of `T` (mod `pi^n`) from its value on `1/pi^n`.
    pub fn t_endo_from_value(&self, n: usize, value_at_inv_pi_n: &TElem) -> Result<TEndo> {
        Ok(TEndo {
            scale: self.i_x_forward(n, value_at_inv_pi_n)?,
        })
    }

    /// `d(m): phi -> phi(m)`, evaluated on one functional.
    pub fn double_dual_eval(
        &self,
        m: &InvariantFactors,
        x: &ModElem,
        phi: &DualElem,
    ) -> Result<TElem> {
        self.eval_pairing(m, phi, x)
    }

    /// `d(m)` read back in `M` coordinates: on torsion factors through `i_x`
    /// applied to `d(m)` of the dual generators, on free factors through
    /// `T^ = R` at the precision of `m`'s free coordinates.
    pub fn double_dual_map(&self, m: &InvariantFactors, x: &ModElem) -> Result<ModElem> {
        let x = self.elem_normalize(m, x)?;
        let mut torsion = Vec::with_capacity(m.torsion_exps().len());
        for (i, &e) in m.torsion_exps().iter().enumerate() {
            let value = self.double_dual_eval(m, &x, &self.dual_basis(m, i))?;
            torsion.push(self.i_x_forward(e, &value)?);
        }
        let n = x.free_precision().unwrap_or(0);
        let mut free = Vec::with_capacity(m.free_rank());
        for j in 0..m.free_rank() {
            // the functional 1/pi^n on the j-th free factor
            let mut probe = DualElem::zero(m);
            probe.t[j] = self.t_from_fraction(&RElem::one(n), n)?;
            let value = self.double_dual_eval(m, &x, &probe)?;
            free.push(self.t_endo_from_value(n, &value)?.scale);
        }
        Ok(ModElem { torsion, free })
    }

    /// Extends a functional from the submodule generated by `gens` to all of
    /// the finite module `m`.
    ///
    /// Generators are adjoined one at a time: `gens` in order, then the
    /// standard basis of `m`. For a new generator `g` with `pi^k g` the first
    /// multiple landing in the current submodule, the value `t` must satisfy
    /// `pi^k t = phi(pi^k g)`; for supplied generators this is a consistency
    /// check, for basis generators `t` is chosen with the smallest numerator
    /// at the smallest level, which `T` being divisible makes possible.
    pub fn extend_hom(
        &self,
        m: &InvariantFactors,
        gens: &[ModElem],
        values: &[TElem],
    ) -> Result<DualElem> {
        if !m.is_finite() {
            return Err(Error::Shape(format!("module {m} is not finite")));
        }
        if gens.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} generators but {} values",
                gens.len(),
                values.len()
            )));
        }
        let big_e = m.max_exp();
        let mut span: Vec<ModElem> = Vec::new();
        let mut span_vals: Vec<TElem> = Vec::new();

        for (g, v) in gens.iter().zip(values) {
            let g = self.elem_normalize(m, g)?;
            let (k, image) = self.first_multiple_in_span(m, big_e, &span, &span_vals, &g)?;
            if self.t_mul_pi_pow(k, v) != image {
                return Err(Error::Inconsistent(format!(
                    "value {v} on {g} disagrees with {image} forced on pi^{k} times it"
                )));
            }
            span.push(g);
            span_vals.push(v.clone());
        }
        let mut basis_vals = Vec::with_capacity(m.torsion_exps().len());
        for i in 0..m.torsion_exps().len() {
            let g = ModElem::basis(m, i, 1);
            let (k, image) = self.first_multiple_in_span(m, big_e, &span, &span_vals, &g)?;
            let t = self.divide_by_pi_pow(k, &image)?;
            span.push(g);
            span_vals.push(t.clone());
            basis_vals.push(t);
        }
        let torsion = basis_vals
            .iter()
            .zip(m.torsion_exps())
            .map(|(t, &e)| self.i_x_forward(e, t))
            .collect::<Result<Vec<_>>>()?;
        let psi = DualElem {
            torsion,
            t: Vec::new(),
        };
        for (g, v) in gens.iter().zip(values) {
            if &self.eval_pairing(m, &psi, g)? != v {
                return Err(Error::Inconsistent(format!(
                    "lift disagrees on generator {g}"
                )));
            }
        }
        Ok(psi)
    }

    /// The canonical solution of `pi^k t = u`: zero when `u` is zero, otherwise
    /// `u`'s numerator over `pi^(level + k)`.
    fn divide_by_pi_pow(&self, k: usize, u: &TElem) -> Result<TElem> {
        match u.numerator_elem() {
            None => Ok(TElem::zero()),
            Some(a) => self.t_from_parts(u.level() + k, a.lift(u.level() + k).digits().to_vec()),
        }
    }

    /// Least `k` with `pi^k g` in the span, and the functional's value there.
    fn first_multiple_in_span(
        &self,
        m: &InvariantFactors,
        big_e: usize,
        span: &[ModElem],
        span_vals: &[TElem],
        g: &ModElem,
    ) -> Result<(usize, TElem)> {
        let exps = m.torsion_exps();
        // embed R/pi^e_i into R/pi^E by multiplying with pi^(E - e_i)
        let embed = |x: &ModElem| -> Vec<RElem> {
            x.torsion
                .iter()
                .zip(exps)
                .map(|(c, &e)| c.shift_up(big_e - e).truncate(big_e))
                .collect()
        };
        let cols: Vec<Vec<RElem>> = span.iter().map(&embed).collect();
        let a: Vec<Vec<RElem>> = (0..exps.len())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let mut multiple = g.clone();
        for k in 0..=big_e {
            let target = embed(&multiple);
            let sol = if span.is_empty() {
                target.iter().all(RElem::is_zero).then(Vec::new)
            } else {
                solve_mod(self, &a, span.len(), &target, big_e)?
            };
            if let Some(r) = sol {
                let mut image = TElem::zero();
                for (rl, vl) in r.iter().zip(span_vals) {
                    image = self.t_add(&image, &self.t_scalar_mul(rl, vl)?);
                }
                return Ok((k, image));
            }
            multiple = self.elem_scalar_mul(m, &self.r_pi_pow(1, big_e), &multiple)?;
        }
        unreachable!("pi^E annihilates a module of exponent E")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32) -> RingCtx {
        RingCtx::mixed(p, 8).unwrap()
    }

    fn tf(k: &RingCtx, num: i64, n: usize) -> TElem {
        k.t_from_fraction(&k.r_from_int(num, n.max(1)), n).unwrap()
    }

    fn torsion_elem(k: &RingCtx, m: &InvariantFactors, vals: &[i64]) -> ModElem {
        ModElem {
            torsion: vals
                .iter()
                .zip(m.torsion_exps())
                .map(|(&v, &e)| k.r_from_int(v, e))
                .collect(),
            free: vec![],
        }
    }

    #[test]
    fn structures() {
        let d = dual_structure(&"[1,2];f=1".parse().unwrap());
        assert_eq!((d.torsion_exps.clone(), d.t_copies), (vec![1, 2], 1));
        let d = dual_structure(&InvariantFactors::default());
        assert!(d.torsion_exps.is_empty() && d.t_copies == 0);
        let d = dual_structure(&InvariantFactors::torsion(&[3]).unwrap());
        assert_eq!((d.torsion_exps, d.t_copies), (vec![3], 0));
    }

    #[test]
    fn pairing_examples() {
        let k = z(3);
        let m = InvariantFactors::torsion(&[2]).unwrap();
        let phi = DualElem {
            torsion: vec![k.r_from_int(2, 2)],
            t: vec![],
        };
        assert_eq!(
            k.eval_pairing(&m, &phi, &torsion_elem(&k, &m, &[6]))
                .unwrap(),
            tf(&k, 1, 1)
        );
        assert!(k
            .eval_pairing(&m, &DualElem::zero(&m), &torsion_elem(&k, &m, &[5]))
            .unwrap()
            .is_zero());
        let f = InvariantFactors::free(1);
        let phi = DualElem {
            torsion: vec![],
            t: vec![tf(&k, 1, 1)],
        };
        let x = ModElem {
            torsion: vec![],
            free: vec![k.r_from_int(2, 4)],
        };
        assert_eq!(k.eval_pairing(&f, &phi, &x).unwrap(), tf(&k, 2, 1));
    }

    #[test]
    fn i_x_examples() {
        let k = z(5);
        assert_eq!(k.i_x_forward(2, &tf(&k, 7, 2)).unwrap(), k.r_from_int(7, 2));
        assert!(k.i_x_inverse(2, &RElem::zero(2)).unwrap().is_zero());
        let k2 = z(2);
        assert_eq!(
            k2.i_x_forward(3, &tf(&k2, 1, 1)).unwrap(),
            k2.r_from_int(4, 3)
        );
        assert!(matches!(
            k2.i_x_forward(1, &tf(&k2, 1, 2)),
            Err(Error::NotTorsion { .. })
        ));
    }

    #[test]
    fn dual_of_inf() {
        let k = z(2);
        let a = InvariantFactors::torsion(&[1]).unwrap();
        let b = InvariantFactors::torsion(&[2]).unwrap();
        let inf = HomMatrix::new(&k, a.clone(), b.clone(), vec![vec![k.r_from_int(2, 2)]]).unwrap();
        let phi = DualElem {
            torsion: vec![k.r_from_int(3, 2)],
            t: vec![],
        };
        let pulled = k.apply_dual_hom(&k.dual_hom(&inf), &phi).unwrap();
        assert_eq!(pulled.torsion, vec![k.r_from_int(1, 1)]);
        // the pairing identity over all 8 (phi, m) pairs
        for bv in 0..4 {
            let phi = DualElem {
                torsion: vec![k.r_from_int(bv, 2)],
                t: vec![],
            };
            let pulled = k.apply_dual_hom(&k.dual_hom(&inf), &phi).unwrap();
            for mv in 0..2 {
                let x = torsion_elem(&k, &a, &[mv]);
                let lhs = k.eval_pairing(&a, &pulled, &x).unwrap();
                let rhs = k
                    .eval_pairing(&b, &phi, &k.apply_hom(&inf, &x).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let id = HomMatrix::identity(&b, 8);
        assert_eq!(k.dual_hom_matrix(&id).unwrap(), id);
    }

    #[test]
    fn square_examples() {
        let f = RingCtx::equal_prime(2, 8).unwrap();
        let phi = DualElem {
            torsion: vec![f.r_from_digits(vec![1, 1]).unwrap()],
            t: vec![],
        };
        let r = f.inf_res_square(1, 2, &phi).unwrap();
        assert_eq!(r.via_dual_inf, RElem::one(1));
        assert_eq!(r.via_res, RElem::one(1));
        let k = z(2);
        let phi = DualElem {
            torsion: vec![k.r_from_int(5, 3)],
            t: vec![],
        };
        let r = k.inf_res_square(1, 3, &phi).unwrap();
        assert_eq!(
            (r.via_dual_inf.clone(), r.via_res.clone()),
            (RElem::one(1), RElem::one(1))
        );
        assert!(k.check_inf_res_square(3, 3, &phi).unwrap());
        assert!(k.check_inf_res_square(3, 1, &phi).is_err());
    }

    #[test]
    fn double_dual_examples() {
        let k = z(2);
        let m = InvariantFactors::torsion(&[2]).unwrap();
        let x = torsion_elem(&k, &m, &[3]);
        assert_eq!(k.double_dual_map(&m, &x).unwrap(), x);
        let zero = ModElem::zero(&m, 1);
        assert_eq!(k.double_dual_map(&m, &zero).unwrap(), zero);
        let k3 = RingCtx::mixed(3, 4).unwrap();
        let f = InvariantFactors::free(1);
        let x = ModElem {
            torsion: vec![],
            free: vec![k3.r_from_int(2, 4)],
        };
        assert_eq!(k3.double_dual_map(&f, &x).unwrap(), x);
    }

    #[test]
    fn t_endo_examples() {
        let k = z(3);
        let ninth = tf(&k, 1, 2);
        let e = |s: i64| TEndo {
            scale: k.r_from_int(s, 4),
        };
        assert_eq!(k.t_endo_apply(&e(2), &ninth).unwrap(), tf(&k, 2, 2));
        assert_eq!(k.t_endo_apply(&e(1), &ninth).unwrap(), ninth);
        assert_eq!(k.t_endo_apply(&e(3), &ninth).unwrap(), tf(&k, 1, 1));
    }

    #[test]
    fn extension_examples() {
        let k = z(2);
        let m = InvariantFactors::torsion(&[2]).unwrap();
        let two = torsion_elem(&k, &m, &[2]);
        let psi = k
            .extend_hom(&m, std::slice::from_ref(&two), &[tf(&k, 1, 1)])
            .unwrap();
        assert_eq!(psi.torsion, vec![k.r_from_int(1, 2)]);
        assert_eq!(
            k.eval_pairing(&m, &psi, &ModElem::basis(&m, 0, 1)).unwrap(),
            tf(&k, 1, 2)
        );

        let psi = k
            .extend_hom(&m, std::slice::from_ref(&two), &[TElem::zero()])
            .unwrap();
        assert!(psi.is_zero());

        let one = ModElem::basis(&m, 0, 1);
        let psi = k
            .extend_hom(&m, std::slice::from_ref(&one), &[tf(&k, 3, 2)])
            .unwrap();
        assert_eq!(psi.torsion, vec![k.r_from_int(3, 2)]);

        // 2 has order 2, so its image must be 2-torsion
        assert!(matches!(
            k.extend_hom(&m, std::slice::from_ref(&two), &[tf(&k, 1, 2)]),
            Err(Error::Inconsistent(_))
        ));
        assert!(matches!(
            k.extend_hom(&m, &[two.clone(), two], &[tf(&k, 1, 1), TElem::zero()]),
            Err(Error::Inconsistent(_))
        ));
    }
}
