//! Exact commutative polynomial arithmetic over ℚ: variable universes, monomials, term
//! orders, polynomials and the expression grammar.

mod monomial;
mod order;
mod parse;
mod poly;
mod universe;

pub use monomial::{Exp, Monomial};
pub use order::{Block, OrderKind, TermOrder};
pub use parse::parse_polynomial;
pub use poly::Polynomial;
pub(crate) use poly::same_universe;
pub use universe::{Var, VarClass, VarUniverse};

pub use crate::arith::Rational;

use std::cmp::Ordering;

use crate::error::Result;

/// Compares two monomials under `order`, rejecting monomials of another universe size.
pub fn compare(order: &TermOrder, m1: &Monomial, m2: &Monomial) -> Result<Ordering> {
    order.compare(m1, m2)
}
