//! Exact computation of global and local Bernstein–Sato ideals of polynomial tuples over ℚ,
//! together with a constructible stratification on which the local ideal is constant.
//!
//! The pipeline runs in four stages: the annihilator of `f^s` in the Weyl algebra
//! ([`weyl::ann_fs`]), its contraction to `ℚ[x, s]` ([`weyl::compute_i2`]), a primary
//! decomposition of that contraction ([`primdec::primary_decompose`]), and elimination of
//! `x` from intersections of selected components ([`bsato`]).

pub mod arith;
pub mod budget;
pub mod bsato;
pub mod error;
pub mod ideals;
pub mod primdec;
pub mod qpoly;
pub mod weyl;

pub use arith::{Int, Rational};
pub use error::{Error, Result};
pub use qpoly::{parse_polynomial, Monomial, Polynomial, TermOrder, VarClass, VarUniverse};
