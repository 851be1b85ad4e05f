//! Buchberger's algorithm over ℤ-primitive polynomials, shared by the commutative rings and
//! the Weyl algebra.
//!
//! Polynomials are kept as term vectors sorted by decreasing monomial under the active order,
//! with coprime integer coefficients and a positive leading coefficient. Reductions are
//! fraction-free and run through geobuckets; content is removed along the way.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Debug;

use crate::arith::{Int, Rational};
use crate::budget;
use crate::error::Result;
use crate::qpoly::{Monomial, TermOrder};

pub(crate) type Term<C = Int> = (Monomial, C);

/// Coefficient domain of the engine.
pub(crate) trait Coeff: Clone + Debug + PartialEq {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self · k` for an integer `k`.
    fn mul_int(&self, k: &Int) -> Self;
    /// `(α, β)` with `a·α = b·β`, as small as the domain allows.
    fn cofactors(a: &Self, b: &Self) -> (Self, Self);
    /// Canonical scaling: primitive with positive leading coefficient.
    fn normalize(terms: &mut [Term<Self>]);
    /// Optional common rescaling of the pieces of a partial normal form.
    fn shrink(_parts: &mut [&mut Vec<Term<Self>>]) {}
}

impl Coeff for Int {
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Int::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: &Int) -> Self {
        self * k
    }
    fn cofactors(a: &Self, b: &Self) -> (Self, Self) {
        let g = a.gcd(b);
        (b.div_exact(&g), a.div_exact(&g))
    }
    fn normalize(terms: &mut [Term<Self>]) {
        make_primitive(terms)
    }
    fn shrink(parts: &mut [&mut Vec<Term<Self>>]) {
        let mut g = Int::ZERO;
        for part in parts.iter() {
            g = g.gcd(&content(part));
            if g.is_one() {
                return;
            }
        }
        if !g.is_zero() {
            for part in parts.iter_mut() {
                for d in part.iter_mut() {
                    d.1 = d.1.div_exact(&g);
                }
            }
        }
    }
}

/// Multiplication used for left reduction.
pub(crate) trait Algebra {
    /// Whether the product criterion may be applied.
    fn commutative(&self) -> bool;

    /// `c · m · g`, sorted by decreasing monomial under `order`. The leading monomial of the
    /// result is `m · lm(g)`.
    fn mul_term<C: Coeff>(&self, m: &Monomial, c: &C, g: &[Term<C>], order: &TermOrder) -> Vec<Term<C>>;
}

pub(crate) struct Commutative;

impl Algebra for Commutative {
    fn commutative(&self) -> bool {
        true
    }

    fn mul_term<C: Coeff>(&self, m: &Monomial, c: &C, g: &[Term<C>], _order: &TermOrder) -> Vec<Term<C>> {
        if m.is_one() {
            return g.iter().map(|(t, x)| (t.clone(), x.mul(c))).collect();
        }
        g.iter().map(|(t, x)| (t.mul(m), x.mul(c))).collect()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct EPoly<C = Int> {
    pub terms: Vec<Term<C>>,
    pub sugar: u32,
    sev: u64,
}

pub(crate) fn sev(m: &Monomial) -> u64 {
    let mut s = 0u64;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            s |= 1u64 << (i % 64);
        }
    }
    s
}

impl<C: Coeff> EPoly<C> {
    pub fn new(terms: Vec<Term<C>>, sugar: u32) -> Self {
        let sev = terms.first().map(|t| sev(&t.0)).unwrap_or(0);
        EPoly { terms, sugar, sev }
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &C {
        &self.terms[0].1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl EPoly<Int> {
    /// Converts rational terms (any order) into a sorted primitive polynomial.
    pub fn from_rational(terms: &[(Monomial, Rational)], order: &TermOrder) -> Self {
        let mut den = Int::ONE;
        for (_, c) in terms {
            let g = den.gcd(c.denom());
            den = &den * &c.denom().div_exact(&g);
        }
        let mut t: Vec<Term> = terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.numer() * &den.div_exact(c.denom())))
            .collect();
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let sugar = t.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        let mut p = EPoly::new(t, sugar);
        make_primitive(&mut p.terms);
        p
    }

    /// Monic rational terms.
    pub fn to_monic_rational(&self) -> Vec<(Monomial, Rational)> {
        let lc = self.lc().clone();
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), Rational::new(c.clone(), lc.clone())))
            .collect()
    }
}

pub(crate) fn content(terms: &[Term]) -> Int {
    let mut g = Int::ZERO;
    for (_, c) in terms {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides by the content and makes the leading coefficient positive.
pub(crate) fn make_primitive(terms: &mut [Term]) {
    if terms.is_empty() {
        return;
    }
    let mut g = content(terms);
    if terms[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for t in terms.iter_mut() {
            t.1 = t.1.div_exact(&g);
        }
    }
}

/// `a + b` for term vectors sorted increasingly.
fn merge_add<C: Coeff>(a: Vec<Term<C>>, b: Vec<Term<C>>, order: &TermOrder) -> Vec<Term<C>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut a, mut b) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        let o = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => break,
        };
        match o {
            Ordering::Less => out.push(a.next().unwrap()),
            Ordering::Greater => out.push(b.next().unwrap()),
            Ordering::Equal => {
                let (m, c) = a.next().unwrap();
                let (_, d) = b.next().unwrap();
                let c = c.add(&d);
                if !c.is_zero() {
                    out.push((m, c));
                }
            }
        }
    }
    out
}

/// A polynomial split over buckets of geometrically growing size, each sorted increasingly,
/// so that adding a short polynomial does not rewrite a long one.
struct GeoBucket<C> {
    buckets: Vec<Vec<Term<C>>>,
}

impl<C: Coeff> GeoBucket<C> {
    fn new() -> Self {
        GeoBucket { buckets: Vec::new() }
    }

    fn slot(len: usize) -> usize {
        let mut i = 0;
        let mut cap = 4usize;
        while cap < len {
            cap *= 4;
            i += 1;
        }
        i
    }

    fn add(&mut self, mut p: Vec<Term<C>>, order: &TermOrder) {
        if p.is_empty() {
            return;
        }
        let mut i = Self::slot(p.len());
        loop {
            if i >= self.buckets.len() {
                self.buckets.resize_with(i + 1, Vec::new);
            }
            if self.buckets[i].is_empty() {
                self.buckets[i] = p;
                return;
            }
            p = merge_add(std::mem::take(&mut self.buckets[i]), p, order);
            let j = Self::slot(p.len());
            if j <= i {
                self.buckets[i] = p;
                return;
            }
            i = j;
        }
    }

    fn scale(&mut self, alpha: &C) {
        for b in self.buckets.iter_mut() {
            for t in b.iter_mut() {
                t.1 = t.1.mul(alpha);
            }
        }
    }

    /// Removes and returns the leading term, combining equal heads.
    fn pop_lead(&mut self, order: &TermOrder) -> Option<Term<C>> {
        loop {
            let mut best: Option<usize> = None;
            for (k, b) in self.buckets.iter().enumerate() {
                let Some(last) = b.last() else { continue };
                best = match best {
                    Some(j) if order.cmp(&last.0, &self.buckets[j].last().unwrap().0) != Ordering::Greater => Some(j),
                    _ => Some(k),
                };
            }
            let j = best?;
            let (m, mut c) = self.buckets[j].pop().unwrap();
            for k in 0..self.buckets.len() {
                if k != j && self.buckets[k].last().is_some_and(|t| t.0 == m) {
                    c = c.add(&self.buckets[k].pop().unwrap().1);
                }
            }
            if !c.is_zero() {
                return Some((m, c));
            }
        }
    }
}

/// `a − b` for term vectors sorted decreasingly.
fn merge_sub<C: Coeff>(a: Vec<Term<C>>, b: Vec<Term<C>>, order: &TermOrder) -> Vec<Term<C>> {
    let mut a = a;
    let mut b: Vec<Term<C>> = b.into_iter().map(|(m, c)| (m, c.neg())).collect();
    a.reverse();
    b.reverse();
    let mut out = merge_add(a, b, order);
    out.reverse();
    out
}

/// Collects unsorted terms into a sorted, zero-free vector.
pub(crate) fn collect_sorted<C: Coeff>(acc: HashMap<Monomial, C>, order: &TermOrder) -> Vec<Term<C>> {
    let mut v: Vec<Term<C>> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
    v
}

pub(crate) struct Reducer<'a, A: Algebra> {
    pub alg: &'a A,
    pub order: &'a TermOrder,
}

impl<'a, A: Algebra> Reducer<'a, A> {
    fn find_divisor<'b, C: Coeff>(&self, t: &Monomial, tsev: u64, basis: &'b [EPoly<C>], skip: Option<usize>) -> Option<&'b EPoly<C>> {
        basis
            .iter()
            .enumerate()
            .find(|(k, g)| Some(*k) != skip && g.sev & !tsev == 0 && g.lm().divides(t))
            .map(|(_, g)| g)
    }

    /// Full normal form of `f` modulo `basis`. With `tail_only`, the leading term is kept.
    pub fn normal_form<C: Coeff>(&self, f: EPoly<C>, basis: &[EPoly<C>], skip: Option<usize>, tail_only: bool) -> EPoly<C> {
        let mut sugar = f.sugar;
        let mut done: Vec<Term<C>> = Vec::new();
        let mut rest = GeoBucket::new();
        let mut terms = f.terms;
        if tail_only && !terms.is_empty() {
            done.push(terms.remove(0));
        }
        terms.reverse();
        rest.add(terms, self.order);
        let mut steps = 0u32;
        while let Some((t, a)) = rest.pop_lead(self.order) {
            let Some(g) = self.find_divisor(&t, sev(&t), basis, skip) else {
                done.push((t, a));
                continue;
            };
            let q = t.div(g.lm());
            let (alpha, beta) = C::cofactors(&a, g.lc());
            let mut qg = self.alg.mul_term(&q, &beta.neg(), &g.terms, self.order);
            sugar = sugar.max(g.sugar + q.degree());
            if !alpha.is_one() {
                for d in done.iter_mut() {
                    d.1 = d.1.mul(&alpha);
                }
                rest.scale(&alpha);
            }
            qg.reverse();
            qg.pop();
            rest.add(qg, self.order);
            steps += 1;
            if steps % 16 == 0 {
                let mut parts: Vec<&mut Vec<Term<C>>> = std::iter::once(&mut done).chain(rest.buckets.iter_mut()).collect();
                C::shrink(&mut parts);
            }
        }
        C::normalize(&mut done);
        EPoly::new(done, sugar)
    }

    pub fn spoly<C: Coeff>(&self, f: &EPoly<C>, g: &EPoly<C>) -> EPoly<C> {
        let lcm = f.lm().lcm(g.lm());
        let a = lcm.div(f.lm());
        let b = lcm.div(g.lm());
        let (cf, cg) = C::cofactors(f.lc(), g.lc());
        let pf = self.alg.mul_term(&a, &cf, &f.terms, self.order);
        let pg = self.alg.mul_term(&b, &cg, &g.terms, self.order);
        let terms = merge_sub(pf[1..].to_vec(), pg[1..].to_vec(), self.order);
        let sugar = (f.sugar + a.degree()).max(g.sugar + b.degree());
        let mut p = EPoly::new(terms, sugar);
        C::normalize(&mut p.terms);
        p.sev = p.terms.first().map(|t| sev(&t.0)).unwrap_or(0);
        p
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Computes the reduced Gröbner basis (as primitive integer polynomials, sorted by decreasing
/// leading monomial) of the (left) ideal generated by `gens`.
pub(crate) fn groebner<A: Algebra, C: Coeff>(alg: &A, gens: Vec<EPoly<C>>, order: &TermOrder) -> Result<Vec<EPoly<C>>> {
    let red = Reducer { alg, order };
    let mut polys: Vec<EPoly<C>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // Reduce the inputs against each other first, smallest leading monomials first.
    let mut input: Vec<EPoly<C>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    input.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for g in input {
        budget::check()?;
        let h = red.normal_form(g, &polys, None, false);
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(vec![h]);
        }
        update(alg.commutative(), &mut polys, &mut active, &mut pairs, h);
    }

    while !pairs.is_empty() {
        budget::check()?;
        let k = select(&pairs, order);
        let p = pairs.swap_remove(k);
        let s = red.spoly(&polys[p.i], &polys[p.j]);
        if s.is_zero() {
            continue;
        }
        let h = red.normal_form(s, &polys, None, false);
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(vec![h]);
        }
        update(alg.commutative(), &mut polys, &mut active, &mut pairs, h);
    }

    let mut min: Vec<EPoly<C>> = active_basis(&polys, &active);
    min.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    Ok(interreduce(&red, min))
}

fn active_basis<C: Coeff>(polys: &[EPoly<C>], active: &[bool]) -> Vec<EPoly<C>> {
    polys.iter().zip(active).filter(|(_, a)| **a).map(|(p, _)| p.clone()).collect()
}

fn select(pairs: &[Pair], order: &TermOrder) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let better = match a.sugar.cmp(&b.sugar) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match order.cmp(&a.lcm, &b.lcm) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => (a.j, a.i) < (b.j, b.i),
            },
        };
        if better {
            best = k;
        }
    }
    best
}

/// Gebauer–Möller installation of a new basis element.
fn update<C: Coeff>(commutative: bool, polys: &mut Vec<EPoly<C>>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: EPoly<C>) {
    let hi = polys.len();
    let hlm = h.lm().clone();
    let hsugar = h.sugar;

    // Candidate pairs (g, h).
    let mut cand: Vec<(Pair, bool)> = Vec::new();
    for (g, p) in polys.iter().enumerate() {
        if !active[g] {
            continue;
        }
        let lcm = p.lm().lcm(&hlm);
        let sugar = (p.sugar + lcm.degree() - p.lm().degree()).max(hsugar + lcm.degree() - hlm.degree());
        let coprime = commutative && p.lm().coprime(&hlm);
        cand.push((Pair { i: g, j: hi, lcm, sugar }, coprime));
    }

    // Chain criterion among the new pairs: drop (g,h) if another new pair's lcm properly
    // divides its lcm; among equal lcms keep one, preferring to drop everything if one of
    // them is coprime.
    let mut keep: Vec<(Pair, bool)> = Vec::new();
    for k in 0..cand.len() {
        let (pk, _) = &cand[k];
        let dominated = cand
            .iter()
            .enumerate()
            .any(|(l, (pl, _))| l != k && pl.lcm != pk.lcm && pl.lcm.divides(&pk.lcm));
        if !dominated {
            keep.push(cand[k].clone());
        }
    }
    let mut by_lcm: HashMap<Monomial, (Pair, bool)> = HashMap::new();
    for (p, coprime) in keep {
        match by_lcm.get_mut(&p.lcm) {
            Some(entry) => {
                if coprime {
                    entry.1 = true;
                }
            }
            None => {
                by_lcm.insert(p.lcm.clone(), (p, coprime));
            }
        }
    }
    let mut fresh: Vec<Pair> = by_lcm.into_values().filter(|(_, c)| !c).map(|(p, _)| p).collect();
    fresh.sort_by_key(|p| p.i);

    // Old pairs killed by the chain criterion through h.
    pairs.retain(|p| {
        if !hlm.divides(&p.lcm) {
            return true;
        }
        let l1 = polys[p.i].lm().lcm(&hlm);
        let l2 = polys[p.j].lm().lcm(&hlm);
        l1 == p.lcm || l2 == p.lcm
    });
    pairs.extend(fresh);

    for (g, p) in polys.iter().enumerate() {
        if active[g] && hlm.divides(p.lm()) {
            active[g] = false;
        }
    }
    polys.push(h);
    active.push(true);
}

fn interreduce<A: Algebra, C: Coeff>(red: &Reducer<'_, A>, mut basis: Vec<EPoly<C>>) -> Vec<EPoly<C>> {
    // basis is minimal and sorted by decreasing leading monomial
    for k in (0..basis.len()).rev() {
        let g = basis[k].clone();
        let r = red.normal_form(g, &basis, Some(k), true);
        basis[k] = r;
    }
    basis
}

/// Checks that every S-polynomial of `basis` reduces to zero, skipping the pairs that the
/// Gebauer–Möller criteria discard.
pub(crate) fn is_groebner<A: Algebra, C: Coeff>(alg: &A, basis: &[EPoly<C>], order: &TermOrder) -> bool {
    let red = Reducer { alg, order };
    let mut polys: Vec<EPoly<C>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    for g in basis.iter().filter(|g| !g.is_zero()) {
        update(alg.commutative(), &mut polys, &mut active, &mut pairs, g.clone());
    }
    for p in pairs {
        let s = red.spoly(&polys[p.i], &polys[p.j]);
        if !s.is_zero() && !red.normal_form(s, &polys, None, false).is_zero() {
            return false;
        }
    }
    true
}
