//! Finitely generated modules in invariant-factor form, Smith normal form,
//! and hom spaces.

mod hom;
mod module;
mod snf;

pub use hom::{HomMatrix, HomSpace};
pub use module::{InvariantFactors, ModElem};
pub use snf::{apply_col_ops, apply_row_ops, replay, snf, solve_mod, ElemOp, PresMatrix, Snf};
#[doc(hidden)]
pub use snf::{snf_with_rule, PivotRule};
