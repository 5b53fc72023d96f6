//! Finite computations with free monoidal monads on categories, coends,
//! profunctors and the operad-like structures built from them.
//!
//! Everything works on explicit finite data. Coends are computed as
//! quotients of finite sets ([`fincat::QuotientSet`]), and laws are
//! checked by building comparison maps and testing them for bijectivity.

pub mod bang;
pub mod cokleisli;
pub mod diagrams;
pub mod distlaw;
mod error;
pub mod fincat;
pub mod laws;
pub mod limits;
pub mod operads;
pub mod prof;
pub mod properads;
pub mod samples;
pub mod sweep;

pub use error::{Error, ErrorKind, Result};
