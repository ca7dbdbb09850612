//! Heavy sets of circle rotations.
//!
//! A point `x` is heavy for rotation by `α` if every initial segment of its
//! orbit `x, x+α, x+2α, … (mod 1)` visits `A = [0, 1/2]` at least as often as
//! its complement. This crate builds the heavy set `H_α` exactly from the
//! continued fraction of `α` by repeated passage to induced rotations, and
//! derives its dimension, its unique strictly heavy point, and the discrepancy
//! sums of the orbit of zero.
//!
//! All decisions are made in exact arithmetic ([`exactnum`]): rationals and
//! quadratic surds are compared exactly, and only reporting uses floats.

pub mod cli;
pub mod contfrac;
pub mod dimension;
pub mod discrepancy;
pub mod error;
pub mod exactnum;
pub mod figure;
pub mod heavyset;
pub mod renorm;

pub use error::{Error, Result};
