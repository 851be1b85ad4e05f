use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::arith::{Int, Rational};
use crate::error::{usage, Result};

use super::monomial::{Exp, Monomial};
use super::order::TermOrder;
use super::universe::{VarClass, VarUniverse};

/// Sparse polynomial over ℚ. Terms are kept sorted by decreasing monomial in the universe's
/// canonical order, without zero coefficients, so structural equality is ideal-free equality.
#[derive(Clone)]
pub struct Polynomial {
    universe: Arc<VarUniverse>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_universe(&self.universe, &other.universe) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

pub(crate) fn same_universe(a: &Arc<VarUniverse>, b: &Arc<VarUniverse>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Polynomial {
    pub fn zero(universe: &Arc<VarUniverse>) -> Self {
        Polynomial { universe: universe.clone(), terms: Vec::new() }
    }

    pub fn constant(universe: &Arc<VarUniverse>, c: Rational) -> Self {
        let mut p = Self::zero(universe);
        if !c.is_zero() {
            p.terms.push((Monomial::one(universe.len()), c));
        }
        p
    }

    pub fn one(universe: &Arc<VarUniverse>) -> Self {
        Self::constant(universe, Rational::one())
    }

    pub fn var(universe: &Arc<VarUniverse>, i: usize) -> Self {
        Self::term(universe, Monomial::var(universe.len(), i, 1), Rational::one())
    }

    /// Variable looked up by name; panics when the name is not declared.
    pub fn var_named(universe: &Arc<VarUniverse>, name: &str) -> Self {
        let i = universe
            .index_of(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in universe"));
        Self::var(universe, i)
    }

    pub fn term(universe: &Arc<VarUniverse>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), universe.len());
        let mut p = Self::zero(universe);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms(
        universe: &Arc<VarUniverse>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), universe.len());
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Monomial, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = universe.canonical_order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { universe: universe.clone(), terms }
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.get(i) as u32).max().unwrap_or(0)
    }

    /// Indices of variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.universe.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.get(i) > 0))
            .collect()
    }

    /// True when only variables flagged in `allowed` occur.
    pub fn supported_in(&self, allowed: &[bool]) -> bool {
        self.terms.iter().all(|(m, _)| m.supported_in(allowed))
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Leading term under the canonical order.
    pub fn canonical_leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.universe);
        }
        Polynomial {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.universe);
        }
        Polynomial {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.universe);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by the canonical leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Monic with respect to the leading term of `order`.
    pub fn monic_in(&self, order: &TermOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv();
                self.scale(&inv)
            }
        }
    }

    /// Integer multiple with coprime integer coefficients and positive canonical leading
    /// coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = Int::ONE;
        for (_, c) in &self.terms {
            let d = c.denom();
            let g = den.gcd(d);
            den = &den * &d.div_exact(&g);
        }
        let mut content = Int::ZERO;
        for (_, c) in &self.terms {
            let n = &c.numer().clone() * &den.div_exact(c.denom());
            content = content.gcd(&n);
        }
        if self.terms[0].1.signum() < 0 {
            content = -content;
        }
        let f = Rational::new(den, content);
        self.scale(&f)
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.get(i) > 0).map(|(m, c)| {
            let e = m.get(i);
            let mut m = m.clone();
            m.set(i, e - 1);
            (m, c * &Rational::from(e as i64))
        });
        Self::from_terms(&self.universe, terms)
    }

    /// Formal partial derivative with respect to an `X`-class variable.
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.universe.len() || self.universe.class(i) != VarClass::X {
            return Err(usage("partial derivative is taken with respect to x-class variables"));
        }
        Ok(self.derivative(i))
    }

    /// Substitutes rational values for some variables; the others are untouched.
    pub fn substitute_values(&self, values: &[(usize, Rational)]) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m = m.clone();
            let mut c = c.clone();
            for (i, v) in values {
                let e = m.get(*i);
                if e > 0 {
                    c = &c * &v.pow(e as u32);
                    m.set(*i, 0);
                }
            }
            (m, c)
        });
        Self::from_terms(&self.universe, terms)
    }

    /// Substitutes the coordinates of `point` for the `X`-class variables, in declaration
    /// order. Variables of other classes stay symbolic.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Polynomial> {
        let xs = self.universe.indices_of_class(VarClass::X);
        if point.len() < xs.len() {
            let used = self.variables();
            if let Some(&missing) = xs.iter().skip(point.len()).find(|i| used.contains(i)) {
                return Err(usage(format!(
                    "no coordinate given for variable `{}`",
                    self.universe.name(missing)
                )));
            }
        }
        if point.len() > xs.len() {
            return Err(usage(format!("point has {} coordinates, expected {}", point.len(), xs.len())));
        }
        let values: Vec<(usize, Rational)> = xs.into_iter().zip(point.iter().cloned()).collect();
        Ok(self.substitute_values(&values))
    }

    /// Replaces variable `i` by the polynomial `q`.
    pub fn substitute(&self, i: usize, q: &Polynomial) -> Polynomial {
        assert!(same_universe(&self.universe, &q.universe));
        let maxe = self.degree_in(i);
        let mut powers = vec![Self::one(&self.universe)];
        for k in 1..=maxe as usize {
            let next = &powers[k - 1] * q;
            powers.push(next);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.get(i) as usize;
            let mut base = m.clone();
            base.set(i, 0);
            for (pm, pc) in powers[e].terms() {
                let t = base.mul(pm);
                let v = c * pc;
                match acc.get_mut(&t) {
                    Some(x) => *x += &v,
                    None => {
                        acc.insert(t, v);
                    }
                }
            }
        }
        Self::from_terms(&self.universe, acc)
    }

    /// Moves the polynomial to another universe, matching variables by name.
    pub fn remap(&self, target: &Arc<VarUniverse>) -> Result<Polynomial> {
        if same_universe(&self.universe, target) {
            return Ok(Polynomial { universe: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> = (0..self.universe.len())
            .map(|i| target.index_of(self.universe.name(i)))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut t = Monomial::one(target.len());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => t.set(j, e),
                    None => {
                        return Err(usage(format!(
                            "variable `{}` does not exist in the target ring",
                            self.universe.name(i)
                        )))
                    }
                }
            }
            terms.push((t, c.clone()));
        }
        Ok(Self::from_terms(target, terms))
    }

    /// Coefficients in variable `i`: entry k is the coefficient of `v^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Polynomial> {
        let d = self.degree_in(i) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.get(i) as usize;
            let mut m = m.clone();
            m.set(i, 0);
            buckets[e].push((m, c.clone()));
        }
        buckets.into_iter().map(|t| Self::from_terms(&self.universe, t)).collect()
    }

    /// Dense coefficient vector of a polynomial in at most the single variable `i`.
    pub fn univariate_coeffs(&self, i: usize) -> Option<Vec<Rational>> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Rational::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.get(i) as usize;
            if m.degree() as usize != e {
                return None;
            }
            out[e] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(universe: &Arc<VarUniverse>, i: usize, coeffs: &[Rational]) -> Polynomial {
        let n = universe.len();
        Self::from_terms(
            universe,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(n, i, k as Exp), c.clone())),
        )
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        assert!(
            same_universe(&self.universe, &other.universe),
            "polynomials from different universes"
        );
        let order = self.universe.canonical_order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })));
        Polynomial { universe: self.universe.clone(), terms: out }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        assert!(
            same_universe(&self.universe, &other.universe),
            "polynomials from different universes"
        );
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.universe);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(x) => *x += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_terms(&self.universe, acc)
    }

    /// Exact quotient `self / d` when `d` divides `self`, otherwise `None`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(same_universe(&self.universe, &d.universe));
        let (dm, dc) = d.terms.first()?.clone();
        let mut r = self.clone();
        let mut q: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((m, c)) = r.terms.first().cloned() {
            if !dm.divides(&m) {
                return None;
            }
            let qm = m.div(&dm);
            let qc = &c / &dc;
            r = &r - &d.mul_monomial(&qm, &qc);
            q.push((qm, qc));
        }
        Some(Self::from_terms(&self.universe, q))
    }

    /// Text form with coefficients as rationals, explicit `*` and `^`, terms in canonical order.
    pub fn to_expr_string(&self) -> String {
        self.to_string()
    }

    /// Text form of the primitive integer multiple (positive leading coefficient).
    pub fn to_cleared_string(&self) -> String {
        self.primitive().to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(a.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.universe.name(i).to_string()),
                    _ => parts.push(format!("{}^{}", self.universe.name(i), e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.product(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::parse_polynomial;
    use proptest::prelude::*;

    fn ring() -> Arc<VarUniverse> {
        VarUniverse::new([("x", VarClass::X), ("y", VarClass::X), ("z", VarClass::X), ("s", VarClass::S)]).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &ring()).unwrap()
    }

    #[test]
    fn products_expand() {
        assert_eq!(&p("x+y") * &p("x-y"), p("x^2-y^2"));
        assert_eq!(&p("x^3+y^2") * &p("x^2+y^3"), p("x^5+x^3*y^3+x^2*y^2+y^5"));
        assert_eq!(&p("x+y") + &Polynomial::zero(&ring()), p("x+y"));
    }

    #[test]
    fn derivatives() {
        let x = 0;
        let y = 1;
        assert_eq!(p("x^3+y^2").partial_derivative(x).unwrap(), p("3*x^2"));
        assert_eq!(
            p("x^4+y^4+2*z*x^2*y^2").partial_derivative(y).unwrap(),
            p("4*y^3+4*z*x^2*y")
        );
        assert!(p("7").partial_derivative(x).unwrap().is_zero());
        assert!(p("s").partial_derivative(3).is_err());
    }

    #[test]
    fn evaluation() {
        let r = |v: i64| Rational::from(v);
        assert!(p("1-x-y").evaluate(&[r(0), r(1), r(0)]).unwrap().is_zero());
        assert_eq!(p("x^2+y^3").evaluate(&[r(1), r(0), r(0)]).unwrap(), p("1"));
        assert!(p("x*y+x^2*s").evaluate(&[r(0), r(0), r(0)]).unwrap().is_zero());
        assert_eq!(p("x*s+y").evaluate(&[r(2), r(1), r(0)]).unwrap(), p("2*s+1"));
        assert!(p("x+y").evaluate(&[r(1)]).is_err());
        assert!(p("x").evaluate(&[r(1)]).is_ok());
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(p("y+x^2-1/2").to_string(), "x^2+y-1/2");
        assert_eq!(p("y+x^2-1/2").to_cleared_string(), "2*x^2+2*y-1");
        assert_eq!(p("-3*x*y").to_string(), "-3*x*y");
        assert_eq!(p("0").to_string(), "0");
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("x^2-y^2").div_exact(&p("x+y")), Some(p("x-y")));
        assert_eq!(p("x^2+1").div_exact(&p("x+1")), None);
    }

    #[test]
    fn substitution_and_remap() {
        let q = p("x^2+y").substitute(0, &p("y+1"));
        assert_eq!(q, p("y^2+3*y+1"));
        let small = VarUniverse::polynomial_ring(["y", "x"]).unwrap();
        let r = p("x*y+1").remap(&small).unwrap();
        assert_eq!(r.to_string(), "y*x+1");
        assert!(p("z").remap(&small).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((0u16..3, 0u16..3, 0u16..2, -4i64..5), 0..5).prop_map(|ts| {
            let u = ring();
            Polynomial::from_terms(
                &u,
                ts.into_iter()
                    .map(|(a, b, c, k)| (Monomial::from_exponents(&[a, b, 0, c]), Rational::from(k))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), x in -3i64..4, y in -3i64..4) {
            let pt = [Rational::from(x), Rational::from(y), Rational::from(2)];
            let lhs = (&a * &b).evaluate(&pt).unwrap();
            let rhs = &a.evaluate(&pt).unwrap() * &b.evaluate(&pt).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
