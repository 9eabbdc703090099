//! Exact computer algebra for the group of formal self-maps of `K^d` fixing
//! the origin.
//!
//! Coefficients live in `Z`, `Q` or a prime field `F_c` ([`ring`]). Maps are
//! `d`-tuples of truncated power series ([`series`], [`maps`]) and support
//! composition, inversion and integer iteration. For maps tangent to the
//! identity the coefficients of the iterates `g^k` are sum-functions of `k`
//! ([`sumfn`], [`blockmatrix`]); this makes two extensions possible:
//!
//! * in characteristic zero, iterates `g^a` of rational order ([`fraciter`]);
//! * in characteristic `c`, iterates `g^z` indexed by `c`-adic integers
//!   ([`cadic`]).
//!
//! [`mapfile`] reads and writes the text format used by the command-line tool.

pub mod blockmatrix;
pub mod cadic;
pub mod error;
pub mod fraciter;
pub mod linear;
pub mod mapfile;
pub mod maps;
pub mod monomial;
pub mod ring;
pub mod series;
pub mod sumfn;

pub use cadic::CAdicInt;
pub use error::{Error, ErrorKind, Result};
pub use linear::LinearPart;
pub use mapfile::MapFile;
pub use maps::FormalMap;
pub use monomial::Monomial;
pub use ring::{Elem, Ring, RingKind};
pub use series::Series;
pub use sumfn::SumFunction;
