use crate::arith::{RElem, RingCtx};
use crate::error::{Error, Result};

use super::module::{InvariantFactors, ModElem};

/// An `R`-linear map between finitely generated modules. `entries[i][j]` is
/// the `j`-th codomain coordinate of the image of the `i`-th domain generator
/// (torsion components first on both sides).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMatrix {
    domain: InvariantFactors,
    codomain: InvariantFactors,
    entries: Vec<Vec<RElem>>,
}

enum Comp {
    Torsion(usize),
    Free,
}

fn comp(m: &InvariantFactors, i: usize) -> Comp {
    match m.torsion_exps().get(i) {
        Some(&e) => Comp::Torsion(e),
        None => Comp::Free,
    }
}

impl HomMatrix {
    /// Validates the divisibility constraints and reduces torsion entries.
    ///
    /// * torsion `a` to torsion `b`: the entry lies in `pi^max(0,b-a) R/pi^b`
    /// * torsion to free: zero
    /// * free to torsion `b`: any residue mod `pi^b`
    /// * free to free: any element
    pub fn new(
        ctx: &RingCtx,
        domain: InvariantFactors,
        codomain: InvariantFactors,
        entries: Vec<Vec<RElem>>,
    ) -> Result<Self> {
        if entries.len() != domain.ncomponents() {
            return Err(Error::Shape(format!(
                "{} rows for domain {domain}",
                entries.len()
            )));
        }
        let mut reduced = Vec::with_capacity(entries.len());
        for (i, row) in entries.into_iter().enumerate() {
            if row.len() != codomain.ncomponents() {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries for codomain {codomain}",
                    row.len()
                )));
            }
            let mut out = Vec::with_capacity(row.len());
            for (j, x) in row.into_iter().enumerate() {
                let bad = |reason: String| Error::InvalidHom {
                    row: i,
                    col: j,
                    reason,
                };
                let entry = match (comp(&domain, i), comp(&codomain, j)) {
                    (Comp::Torsion(a), Comp::Torsion(b)) => {
                        if x.precision() < b {
                            return Err(bad(format!("needs {b} digits")));
                        }
                        let x = x.truncate(b);
                        let need = b.saturating_sub(a);
                        if !x.is_zero() && ctx.r_valuation(&x).value < need {
                            return Err(bad(format!("image of a pi^{a}-torsion generator must be divisible by pi^{need}")));
                        }
                        x
                    }
                    (Comp::Torsion(_), Comp::Free) => {
                        if !x.is_zero() {
                            return Err(bad(
                                "torsion cannot map nontrivially to a free module".into()
                            ));
                        }
                        RElem::zero(1)
                    }
                    (Comp::Free, Comp::Torsion(b)) => {
                        if x.precision() < b {
                            return Err(bad(format!("needs {b} digits")));
                        }
                        x.truncate(b)
                    }
                    (Comp::Free, Comp::Free) => x,
                };
                out.push(entry);
            }
            reduced.push(out);
        }
        Ok(HomMatrix {
            domain,
            codomain,
            entries: reduced,
        })
    }

    pub fn identity(m: &InvariantFactors, free_precision: usize) -> Self {
        let n = m.ncomponents();
        let k = m.torsion_exps().len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let prec = match (i < k, j < k) {
                            (_, true) => m.torsion_exps()[j],
                            (true, false) => 1,
                            (false, false) => free_precision,
                        };
                        if i == j {
                            RElem::one(prec)
                        } else {
                            RElem::zero(prec)
                        }
                    })
                    .collect()
            })
            .collect();
        HomMatrix {
            domain: m.clone(),
            codomain: m.clone(),
            entries,
        }
    }

    pub fn zero(
        domain: &InvariantFactors,
        codomain: &InvariantFactors,
        free_precision: usize,
    ) -> Self {
        let k = codomain.torsion_exps().len();
        let entries = (0..domain.ncomponents())
            .map(|_| {
                (0..codomain.ncomponents())
                    .map(|j| {
                        RElem::zero(if j < k {
                            codomain.torsion_exps()[j]
                        } else {
                            free_precision
                        })
                    })
                    .collect()
            })
            .collect();
        HomMatrix {
            domain: domain.clone(),
            codomain: codomain.clone(),
            entries,
        }
    }

    pub fn domain(&self) -> &InvariantFactors {
        &self.domain
    }
    pub fn codomain(&self) -> &InvariantFactors {
        &self.codomain
    }
    pub fn entries(&self) -> &[Vec<RElem>] {
        &self.entries
    }
    pub fn entry(&self, i: usize, j: usize) -> &RElem {
        &self.entries[i][j]
    }
}

/// `Hom(M, N)` as an abstract module together with generators matching its
/// invariant factors one for one (torsion generators first, then free).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub structure: InvariantFactors,
    pub generators: Vec<HomMatrix>,
}

impl RingCtx {
    /// Componentwise: `Hom(R/pi^a, R/pi^b) = R/pi^min(a,b)` generated by
    /// `pi^max(0,b-a)`, `Hom(R, R/pi^b) = R/pi^b`, `Hom(R/pi^a, R) = 0` and
    /// `Hom(R, R) = R`.
    pub fn hom_space(&self, m: &InvariantFactors, n: &InvariantFactors) -> HomSpace {
        let prec = self.precision();
        let mut torsion: Vec<(usize, HomMatrix)> = Vec::new();
        let mut free: Vec<HomMatrix> = Vec::new();
        for i in 0..m.ncomponents() {
            for j in 0..n.ncomponents() {
                let mut h = HomMatrix::zero(m, n, prec);
                match (comp(m, i), comp(n, j)) {
                    (Comp::Torsion(a), Comp::Torsion(b)) => {
                        h.entries[i][j] = self.r_pi_pow(b.saturating_sub(a), b);
                        torsion.push((a.min(b), h));
                    }
                    (Comp::Free, Comp::Torsion(b)) => {
                        h.entries[i][j] = RElem::one(b);
                        torsion.push((b, h));
                    }
                    (Comp::Free, Comp::Free) => {
                        h.entries[i][j] = RElem::one(prec);
                        free.push(h);
                    }
                    (Comp::Torsion(_), Comp::Free) => {}
                }
            }
        }
        torsion.sort_by_key(|(e, _)| *e);
        let structure =
            InvariantFactors::new(torsion.iter().map(|(e, _)| *e).collect(), free.len())
                .expect("exponents are positive");
        let generators = torsion.into_iter().map(|(_, h)| h).chain(free).collect();
        HomSpace {
            structure,
            generators,
        }
    }

    pub fn apply_hom(&self, h: &HomMatrix, x: &ModElem) -> Result<ModElem> {
        let x = self.elem_normalize(&h.domain, x)?;
        let k_dom = h.domain.torsion_exps().len();
        let k_cod = h.codomain.torsion_exps().len();
        let free_prec = x.free_precision();
        let coords: Vec<&RElem> = x.coords().collect();

        let mut torsion = Vec::with_capacity(k_cod);
        for (j, &b) in h.codomain.torsion_exps().iter().enumerate() {
            let mut acc = RElem::zero(b);
            for (i, c) in coords.iter().enumerate() {
                if i >= k_dom && c.precision() < b {
                    return Err(Error::InsufficientPrecision {
                        needed: b,
                        have: c.precision(),
                    });
                }
                let term = self.r_mul(&c.lift(b).truncate(b), &h.entries[i][j]);
                acc = self.r_add(&acc, &term);
            }
            torsion.push(acc);
        }
        let mut free = Vec::with_capacity(h.codomain.free_rank());
        for j in k_cod..h.codomain.ncomponents() {
            let prec = free_prec.unwrap_or(self.precision());
            let mut acc = RElem::zero(prec);
            for i in k_dom..h.domain.ncomponents() {
                acc = self.r_add(&acc, &self.r_mul(coords[i], &h.entries[i][j]));
            }
            free.push(acc);
        }
        Ok(ModElem { torsion, free })
    }

    /// Composite `g . h`.
    pub fn compose_hom(&self, g: &HomMatrix, h: &HomMatrix) -> Result<HomMatrix> {
        if h.codomain != g.domain {
            return Err(Error::Shape(format!(
                "cannot compose {} -> {} after {} -> {}",
                g.domain, g.codomain, h.domain, h.codomain
            )));
        }
        let prec = self.precision();
        let rows = (0..h.domain.ncomponents())
            .map(|i| {
                let gen = ModElem::basis(&h.domain, i, prec);
                let img = self.apply_hom(h, &gen)?;
                Ok(self.apply_hom(g, &img)?.coords().cloned().collect())
            })
            .collect::<Result<Vec<Vec<RElem>>>>()?;
        HomMatrix::new(self, h.domain.clone(), g.codomain.clone(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_space_examples() {
        let k = RingCtx::mixed(2, 6).unwrap();
        let h = k.hom_space(
            &InvariantFactors::torsion(&[2, 1]).unwrap(),
            &InvariantFactors::torsion(&[2]).unwrap(),
        );
        assert_eq!(h.structure, InvariantFactors::torsion(&[1, 2]).unwrap());
        assert_eq!(h.structure.cardinality(&k), Some(8));
        let h = k.hom_space(
            &InvariantFactors::torsion(&[1]).unwrap(),
            &InvariantFactors::free(1),
        );
        assert!(h.structure.is_zero());
        let h = k.hom_space(
            &InvariantFactors::free(1),
            &InvariantFactors::torsion(&[3]).unwrap(),
        );
        assert_eq!(h.structure, InvariantFactors::torsion(&[3]).unwrap());
    }

    #[test]
    fn divisibility_constraints() {
        let k = RingCtx::mixed(2, 6).unwrap();
        let a = InvariantFactors::torsion(&[1]).unwrap();
        let b = InvariantFactors::torsion(&[2]).unwrap();
        assert!(HomMatrix::new(&k, a.clone(), b.clone(), vec![vec![k.r_from_int(1, 2)]]).is_err());
        assert!(HomMatrix::new(&k, a.clone(), b.clone(), vec![vec![k.r_from_int(2, 2)]]).is_ok());
        assert!(HomMatrix::new(
            &k,
            a.clone(),
            InvariantFactors::free(1),
            vec![vec![k.r_from_int(1, 4)]]
        )
        .is_err());
    }

    #[test]
    fn apply_examples() {
        let k = RingCtx::mixed(2, 6).unwrap();
        let m: InvariantFactors = "[1,3];f=1".parse().unwrap();
        let x = ModElem {
            torsion: vec![k.r_from_int(1, 1), k.r_from_int(5, 3)],
            free: vec![k.r_from_int(11, 6)],
        };
        assert_eq!(k.apply_hom(&HomMatrix::identity(&m, 6), &x).unwrap(), x);
        assert!(k
            .apply_hom(&HomMatrix::zero(&m, &m, 6), &x)
            .unwrap()
            .is_zero());

        let a = InvariantFactors::torsion(&[1]).unwrap();
        let b = InvariantFactors::torsion(&[2]).unwrap();
        let inf = HomMatrix::new(&k, a, b, vec![vec![k.r_from_int(2, 2)]]).unwrap();
        let y = k
            .apply_hom(
                &inf,
                &ModElem {
                    torsion: vec![RElem::one(1)],
                    free: vec![],
                },
            )
            .unwrap();
        assert_eq!(y.torsion[0], k.inf_map(1, 2, &RElem::one(1)).unwrap());
    }
}
