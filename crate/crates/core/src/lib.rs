//! Duality for finitely generated modules over compact discrete valuation
//! rings, computed exactly.
//!
//! The base ring is either `Z_p` or `F_q[[x]]`, truncated at an explicit
//! precision. Torsion modules, the divisible module `T = K/R`, and duals of
//! finitely generated modules are represented exactly.

pub mod arith;
pub mod duality;
pub mod error;
pub mod fingen;
pub mod flood;
pub mod io;
pub mod oracle;
pub mod verify;

pub use arith::{FqElem, KElem, Mode, RElem, RingCtx, TElem, Valuation};
pub use error::{Error, Result};
