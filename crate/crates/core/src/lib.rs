//! Jet-level Cauchy-Kowalevski constructions of linear connections with
//! prescribed Ricci tensor, 2D metrics with prescribed Ricci tensor and
//! statistical structures, all in exact rational arithmetic.

// Tensor code indexes several arrays by the same summation index.
#![allow(clippy::needless_range_loop)]

pub mod ck;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod scenario;

pub use error::{Error, Result};
pub use jet::{Jet, Rational, SliceJet};
