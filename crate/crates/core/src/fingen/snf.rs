use crate::arith::{RElem, RingCtx};
use crate::error::{Error, Result};

use super::module::InvariantFactors;

/// A presentation matrix: rows are relations, columns are generators, and the
/// module presented is the cokernel `R^cols / rowspace`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresMatrix {
    rows: Vec<Vec<RElem>>,
    ncols: usize,
    precision: usize,
}

impl PresMatrix {
    pub fn new(rows: Vec<Vec<RElem>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        let precision = rows
            .first()
            .and_then(|r| r.first())
            .map_or(1, RElem::precision);
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::Shape(format!(
                    "ragged matrix: row of length {} vs {ncols}",
                    r.len()
                )));
            }
            if let Some(x) = r.iter().find(|x| x.precision() != precision) {
                return Err(Error::Shape(format!(
                    "entries must share one precision ({} vs {precision})",
                    x.precision()
                )));
            }
        }
        Ok(PresMatrix {
            rows,
            ncols,
            precision,
        })
    }

    /// An empty relation set on `ncols` generators.
    pub fn no_relations(ncols: usize, precision: usize) -> Self {
        PresMatrix {
            rows: Vec::new(),
            ncols,
            precision,
        }
    }

    pub fn from_ints(ctx: &RingCtx, rows: &[&[i64]], precision: usize) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| ctx.r_from_int(v, precision)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn precision(&self) -> usize {
        self.precision
    }
    pub fn rows(&self) -> &[Vec<RElem>] {
        &self.rows
    }
    pub fn get(&self, i: usize, j: usize) -> &RElem {
        &self.rows[i][j]
    }
}

/// An elementary row or column operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemOp {
    Swap(usize, usize),
    /// line `dst` += `factor` * line `src`
    AddMul {
        src: usize,
        dst: usize,
        factor: RElem,
    },
    /// line `idx` *= `unit`
    Scale {
        idx: usize,
        unit: RElem,
    },
}

/// How the elimination chooses its pivot.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotRule {
    /// Minimum valuation, ties broken by lowest `(row, col)`.
    #[default]
    MinValuation,
    /// First nonzero entry in row-major order. Incorrect over a DVR; kept as
    /// a mutation fixture for the verification suite.
    FirstNonzero,
}

/// Result of [`snf`]: `U A V = D` where `U` replays `row_ops`, `V` replays
/// `col_ops`, and `D` is diagonal with entries `pi^pivots[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub factors: InvariantFactors,
    /// Pivot valuations in elimination order, including zeros.
    pub pivots: Vec<usize>,
    pub row_ops: Vec<ElemOp>,
    pub col_ops: Vec<ElemOp>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Smith normal form over the DVR.
///
/// An entry that becomes zero through cancellation might really be a nonzero
/// multiple of `pi^precision`, so when the remaining block is all zero but
/// some of it was ever nonzero the result is `PrecisionExhausted`. Input zeros
/// that no operation touched are taken as exact.
pub fn snf(ctx: &RingCtx, m: &PresMatrix) -> Result<Snf> {
    snf_with(ctx, m, PivotRule::MinValuation, false)
}

#[doc(hidden)]
pub fn snf_with_rule(ctx: &RingCtx, m: &PresMatrix, rule: PivotRule) -> Result<Snf> {
    snf_with(ctx, m, rule, false)
}

fn snf_with(ctx: &RingCtx, m: &PresMatrix, rule: PivotRule, zeros_exact: bool) -> Result<Snf> {
    let (nr, nc, prec) = (m.nrows(), m.ncols(), m.precision());
    let mut a: Vec<Vec<RElem>> = m.rows.clone();
    let mut touched: Vec<Vec<bool>> = a
        .iter()
        .map(|r| r.iter().map(|x| !x.is_zero()).collect())
        .collect();
    let mut row_ops = Vec::new();
    let mut col_ops = Vec::new();
    let mut pivots = Vec::new();

    for t in 0..nr.min(nc) {
        let Some((pi, pj, v)) = find_pivot(ctx, &a, t, rule) else {
            let ambiguous = (t..nr).any(|i| (t..nc).any(|j| touched[i][j]));
            if ambiguous && !zeros_exact {
                return Err(Error::PrecisionExhausted(prec));
            }
            break;
        };
        if pi != t {
            a.swap(pi, t);
            touched.swap(pi, t);
            row_ops.push(ElemOp::Swap(pi, t));
        }
        if pj != t {
            for (row, tr) in a.iter_mut().zip(touched.iter_mut()) {
                row.swap(pj, t);
                tr.swap(pj, t);
            }
            col_ops.push(ElemOp::Swap(pj, t));
        }

        // normalize the pivot to exactly pi^v
        let unit = quotient(&a[t][t], v);
        let inv = ctx.r_unit_inverse(&unit)?.lift(prec);
        if !is_one(&inv) {
            for x in a[t].iter_mut() {
                *x = ctx.r_mul(x, &inv);
            }
            row_ops.push(ElemOp::Scale { idx: t, unit: inv });
        }
        a[t][t] = ctx.r_pi_pow(v, prec);

        for i in t + 1..nr {
            if a[i][t].is_zero() {
                continue;
            }
            let factor = ctx.r_neg(&quotient(&a[i][t], v).lift(prec));
            for j in t..nc {
                let delta = ctx.r_mul(&factor, &a[t][j]);
                if !delta.is_zero() {
                    a[i][j] = ctx.r_add(&a[i][j], &delta);
                    touched[i][j] = true;
                }
            }
            a[i][t] = RElem::zero(prec);
            row_ops.push(ElemOp::AddMul {
                src: t,
                dst: i,
                factor,
            });
        }
        for j in t + 1..nc {
            if a[t][j].is_zero() {
                continue;
            }
            let factor = ctx.r_neg(&quotient(&a[t][j], v).lift(prec));
            for i in t..nr {
                let delta = ctx.r_mul(&factor, &a[i][t]);
                if !delta.is_zero() {
                    a[i][j] = ctx.r_add(&a[i][j], &delta);
                    touched[i][j] = true;
                }
            }
            a[t][j] = RElem::zero(prec);
            col_ops.push(ElemOp::AddMul {
                src: t,
                dst: j,
                factor,
            });
        }
        pivots.push(v);
    }

    let rank = pivots.len();
    let factors = InvariantFactors::new(
        pivots.iter().copied().filter(|&v| v > 0).collect(),
        nc - rank,
    )?;
    Ok(Snf {
        factors,
        pivots,
        row_ops,
        col_ops,
    })
}

fn is_one(x: &RElem) -> bool {
    x.digits()[0] == 1 && x.digits()[1..].iter().all(|&d| d == 0)
}

/// `x / pi^v` dropping the low `v` digits. Exact when `pi^v` divides `x`.
fn quotient(x: &RElem, v: usize) -> RElem {
    RElem::raw(x.digits()[v..].to_vec())
}

fn find_pivot(
    ctx: &RingCtx,
    a: &[Vec<RElem>],
    t: usize,
    rule: PivotRule,
) -> Option<(usize, usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            let v = ctx.r_valuation(x);
            if !v.exact {
                continue;
            }
            match rule {
                PivotRule::FirstNonzero => return Some((i, j, v.value)),
                PivotRule::MinValuation => {
                    if best.is_none_or(|(_, _, bv)| v.value < bv) {
                        best = Some((i, j, v.value));
                    }
                }
            }
        }
    }
    best
}

/// Applies row operations to the rows of `m` in order.
pub fn apply_row_ops(ctx: &RingCtx, ops: &[ElemOp], m: &mut [Vec<RElem>]) {
    for op in ops {
        match op {
            ElemOp::Swap(i, j) => m.swap(*i, *j),
            ElemOp::Scale { idx, unit } => {
                for x in m[*idx].iter_mut() {
                    *x = ctx.r_mul(x, unit);
                }
            }
            ElemOp::AddMul { src, dst, factor } => {
                let src_row = m[*src].clone();
                for (x, s) in m[*dst].iter_mut().zip(&src_row) {
                    *x = ctx.r_add(x, &ctx.r_mul(factor, s));
                }
            }
        }
    }
}

/// Applies column operations to the columns of `m` in order.
pub fn apply_col_ops(ctx: &RingCtx, ops: &[ElemOp], m: &mut [Vec<RElem>]) {
    for op in ops {
        for row in m.iter_mut() {
            match op {
                ElemOp::Swap(i, j) => row.swap(*i, *j),
                ElemOp::Scale { idx, unit } => row[*idx] = ctx.r_mul(&row[*idx], unit),
                ElemOp::AddMul { src, dst, factor } => {
                    row[*dst] = ctx.r_add(&row[*dst], &ctx.r_mul(factor, &row[*src]));
                }
            }
        }
    }
}

/// Replays the recorded transforms on `m`, yielding the diagonal form.
pub fn replay(ctx: &RingCtx, m: &PresMatrix, s: &Snf) -> Vec<Vec<RElem>> {
    let mut rows = m.rows.clone();
    apply_row_ops(ctx, &s.row_ops, &mut rows);
    apply_col_ops(ctx, &s.col_ops, &mut rows);
    rows
}

fn identity(n: usize, prec: usize) -> Vec<Vec<RElem>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RElem::one(prec)
                    } else {
                        RElem::zero(prec)
                    }
                })
                .collect()
        })
        .collect()
}

/// Solves `A x = w` in `(R/pi^level)^cols`, returning one solution (free
/// parameters set to zero) or `None` if the system is inconsistent.
pub fn solve_mod(
    ctx: &RingCtx,
    a: &[Vec<RElem>],
    ncols: usize,
    w: &[RElem],
    level: usize,
) -> Result<Option<Vec<RElem>>> {
    if a.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} equations but {} right-hand sides",
            a.len(),
            w.len()
        )));
    }
    if level == 0 {
        return Ok(Some(vec![RElem::zero(1); ncols]));
    }
    let rows: Vec<Vec<RElem>> = a
        .iter()
        .map(|r| r.iter().map(|x| x.lift(level).truncate(level)).collect())
        .collect();
    let m = if rows.is_empty() {
        PresMatrix::no_relations(ncols, level)
    } else {
        PresMatrix::new(rows)?
    };
    let s = snf_with(ctx, &m, PivotRule::MinValuation, true)?;

    let mut rhs: Vec<Vec<RElem>> = w
        .iter()
        .map(|x| vec![x.lift(level).truncate(level)])
        .collect();
    apply_row_ops(ctx, &s.row_ops, &mut rhs);
    let mut y = vec![RElem::zero(level); ncols];
    for (l, r) in rhs.iter().enumerate() {
        let val = &r[0];
        match s.pivots.get(l) {
            Some(&v) => {
                if ctx.r_valuation(val).value < v {
                    return Ok(None);
                }
                y[l] = if v < level {
                    quotient(val, v).lift(level)
                } else {
                    RElem::zero(level)
                };
            }
            None => {
                if !val.is_zero() {
                    return Ok(None);
                }
            }
        }
    }
    let mut vmat = identity(ncols, level);
    apply_col_ops(ctx, &s.col_ops, &mut vmat);
    let x = (0..ncols)
        .map(|i| {
            (0..ncols).fold(RElem::zero(level), |acc, j| {
                ctx.r_add(&acc, &ctx.r_mul(&vmat[i][j], &y[j]))
            })
        })
        .collect();
    Ok(Some(x))
}
