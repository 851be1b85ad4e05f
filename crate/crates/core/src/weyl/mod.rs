//! The Weyl algebra `D⟨t,∂t⟩[u,v]`, its subring `D[s]`, the annihilator of `f^s` and the
//! contraction `I₂ = (ann f^s + D[s]·F) ∩ ℚ[x,s]`.

pub(crate) mod algebra;
mod ann;
mod fs;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::arith::Rational;
use crate::error::{usage, Error, Result};
use crate::ideals::engine::{self, EPoly};
use crate::qpoly::{same_universe, Monomial, Polynomial, TermOrder, VarClass, VarUniverse};

pub use ann::{ann_fs, compute_i2, AnnResult, AnnTranscript};
pub use fs::{apply_to_fs, FsElement};

use algebra::WeylAlgebra;

/// Element of a Weyl algebra, stored as a sum of normally ordered monomials
/// (positions to the left of their derivations). Variables outside the `X/Dx` and `T/Dt`
/// pairs are central.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    poly: Polynomial,
}

impl WeylElement {
    /// Wraps a polynomial read as a sum of normally ordered monomials.
    pub fn from_normal_ordered(poly: Polynomial) -> Self {
        WeylElement { poly }
    }

    pub fn zero(universe: &Arc<VarUniverse>) -> Self {
        Self::from_normal_ordered(Polynomial::zero(universe))
    }

    pub fn one(universe: &Arc<VarUniverse>) -> Self {
        Self::from_normal_ordered(Polynomial::one(universe))
    }

    pub fn var(universe: &Arc<VarUniverse>, name: &str) -> Result<Self> {
        let i = universe
            .index_of(name)
            .ok_or_else(|| usage(format!("unknown variable `{name}`")))?;
        Ok(Self::from_normal_ordered(Polynomial::var(universe, i)))
    }

    pub fn constant(universe: &Arc<VarUniverse>, c: Rational) -> Self {
        Self::from_normal_ordered(Polynomial::constant(universe, c))
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        self.poly.universe()
    }

    pub fn as_polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_polynomial(self) -> Polynomial {
        self.poly
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        self.poly.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_normal_ordered(self.poly.scale(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.universe());
        for _ in 0..e {
            acc = weyl_mul(&acc, self);
        }
        acc
    }

    /// Carries the element to another universe with the same pairing structure.
    pub fn remap(&self, target: &Arc<VarUniverse>) -> Result<Self> {
        Ok(Self::from_normal_ordered(self.poly.remap(target)?))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        WeylElement::from_normal_ordered(&self.poly + &rhs.poly)
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        WeylElement::from_normal_ordered(&self.poly - &rhs.poly)
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        WeylElement::from_normal_ordered(-&self.poly)
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        weyl_mul(self, rhs)
    }
}

/// Normally ordered product `P · Q`.
pub fn weyl_mul(p: &WeylElement, q: &WeylElement) -> WeylElement {
    assert!(same_universe(p.universe(), q.universe()), "Weyl elements from different universes");
    let u = p.universe();
    let alg = WeylAlgebra::new(u);
    let mut acc: std::collections::HashMap<Monomial, Rational> = std::collections::HashMap::new();
    for (m, a) in p.terms() {
        for (n, b) in q.terms() {
            let ab = a * b;
            alg.mono_mul(m, n, |mono, k| {
                let v = &ab * &Rational::from_int(k);
                match acc.get_mut(&mono) {
                    Some(e) => *e += &v,
                    None => {
                        acc.insert(mono, v);
                    }
                }
            });
        }
    }
    WeylElement::from_normal_ordered(Polynomial::from_terms(u, acc))
}

fn to_epolys(gens: &[WeylElement], order: &TermOrder) -> Vec<EPoly> {
    gens.iter()
        .filter(|g| !g.is_zero())
        .map(|g| EPoly::from_rational(g.terms(), order))
        .collect()
}

/// Reduced left Gröbner basis, monic and sorted by decreasing leading monomial.
pub fn weyl_buchberger(gens: &[WeylElement], order: &TermOrder) -> Result<Vec<WeylElement>> {
    let Some(first) = gens.first() else { return Ok(Vec::new()) };
    let u = first.universe().clone();
    for g in gens {
        assert!(same_universe(&u, g.universe()), "Weyl elements from different universes");
    }
    let alg = WeylAlgebra::new(&u);
    let basis = engine::groebner(&alg, to_epolys(gens, order), order)?;
    Ok(basis
        .iter()
        .map(|b| WeylElement::from_normal_ordered(Polynomial::from_terms(&u, b.to_monic_rational())))
        .collect())
}

/// Left normal form of `p` modulo a left Gröbner basis, normalized to be monic (zero stays
/// zero). Only vanishing is meaningful for a left remainder up to scaling.
pub fn weyl_reduces_to_zero(p: &WeylElement, basis: &[WeylElement], order: &TermOrder) -> bool {
    if p.is_zero() {
        return true;
    }
    let alg = WeylAlgebra::new(p.universe());
    let red = engine::Reducer { alg: &alg, order };
    let b = to_epolys(basis, order);
    let f = EPoly::from_rational(p.terms(), order);
    red.normal_form(f, &b, None, false).is_zero()
}

/// True when every left S-polynomial of `basis` reduces to zero.
pub fn is_weyl_groebner(basis: &[WeylElement], order: &TermOrder) -> bool {
    let Some(first) = basis.first() else { return true };
    let alg = WeylAlgebra::new(first.universe());
    engine::is_groebner(&alg, &to_epolys(basis, order), order)
}

/// The universes used by the pipeline for a tuple of `p` polynomials in the variables of
/// `x`: `ℚ[x,s]`, `D[s]` and `D⟨t,∂t⟩[u,v]`.
#[derive(Clone, Debug)]
pub struct WeylRings {
    pub n: usize,
    pub p: usize,
    /// `x` only.
    pub x: Arc<VarUniverse>,
    /// `x, s`.
    pub xs: Arc<VarUniverse>,
    /// `s` only.
    pub s: Arc<VarUniverse>,
    /// `x, ∂x, s`.
    pub ds: Arc<VarUniverse>,
    /// `x, ∂x, t, ∂t, u, v`.
    pub dtuv: Arc<VarUniverse>,
}

impl WeylRings {
    /// Builds the rings over the `X`-class universe `x`. Derivations are named `D<var>`,
    /// the others `s<j>`, `t<j>`, `Dt<j>`, `u<j>`, `v<j>` for `j = 1..p`.
    pub fn new(x: &Arc<VarUniverse>, p: usize) -> Result<Self> {
        if x.vars().iter().any(|v| v.class != VarClass::X) {
            return Err(usage("polynomials must live in a ring of x-class variables"));
        }
        let n = x.len();
        let xn: Vec<String> = x.vars().iter().map(|v| v.name.clone()).collect();
        let dn: Vec<String> = xn.iter().map(|v| format!("D{v}")).collect();
        let names = |stem: &str| -> Vec<String> { (1..=p).map(|j| format!("{stem}{j}")).collect() };
        let (sn, tn, dtn, un, vn) = (names("s"), names("t"), names("Dt"), names("u"), names("v"));

        let mut internal: Vec<&String> = Vec::new();
        internal.extend(&dn);
        internal.extend(&sn);
        internal.extend(&tn);
        internal.extend(&dtn);
        internal.extend(&un);
        internal.extend(&vn);
        if let Some(clash) = xn.iter().find(|v| internal.contains(v)) {
            return Err(usage(format!("variable name `{clash}` collides with an internal variable name")));
        }

        let with = |groups: &[(&Vec<String>, VarClass)]| -> Result<Arc<VarUniverse>> {
            VarUniverse::new(groups.iter().flat_map(|(names, class)| names.iter().map(move |n| (n.clone(), *class))))
        };
        Ok(WeylRings {
            n,
            p,
            x: x.clone(),
            xs: with(&[(&xn, VarClass::X), (&sn, VarClass::S)])?,
            s: with(&[(&sn, VarClass::S)])?,
            ds: with(&[(&xn, VarClass::X), (&dn, VarClass::Dx), (&sn, VarClass::S)])?,
            dtuv: with(&[
                (&xn, VarClass::X),
                (&dn, VarClass::Dx),
                (&tn, VarClass::T),
                (&dtn, VarClass::Dt),
                (&un, VarClass::U),
                (&vn, VarClass::V),
            ])?,
        })
    }

    /// Index of `s_j` (0-based `j`) in `xs`.
    pub fn s_index(&self, j: usize) -> usize {
        self.n + j
    }
}

fn computation(msg: impl Into<String>) -> Error {
    Error::Computation(msg.into())
}

#[cfg(test)]
mod tests;
