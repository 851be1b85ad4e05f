//! Commutative Gröbner bases over ℚ and the ideal operations built on them.

pub(crate) mod engine;

use std::sync::{Arc, RwLock};

use crate::arith::Rational;
use crate::error::{usage, Result};
use crate::qpoly::{same_universe, Monomial, Polynomial, TermOrder, VarUniverse};

use engine::{Commutative, EPoly};

/// Reduced Gröbner basis of `gens` under `order`: monic, auto-reduced, sorted by decreasing
/// leading monomial. The zero ideal gives `[]` and the unit ideal `[1]`.
pub fn buchberger(universe: &Arc<VarUniverse>, gens: &[Polynomial], order: &TermOrder) -> Result<Vec<Polynomial>> {
    let eps: Vec<EPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            assert!(same_universe(universe, g.universe()), "generator from another universe");
            EPoly::from_rational(g.terms(), order)
        })
        .collect();
    let basis = engine::groebner(&Commutative, eps, order)?;
    Ok(basis
        .iter()
        .map(|b| Polynomial::from_terms(universe, b.to_monic_rational()))
        .collect())
}

/// Remainder of `p` modulo a Gröbner basis for `order` (full reduction, exact over ℚ).
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: &TermOrder) -> Polynomial {
    let universe = p.universe().clone();
    let lead: Vec<(Monomial, Polynomial)> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let m = b.monic_in(order);
            (m.leading_term(order).unwrap().0.clone(), m)
        })
        .collect();
    let mut rest = p.clone();
    let mut done: Vec<(Monomial, Rational)> = Vec::new();
    while let Some((m, c)) = rest.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match lead.iter().find(|(lm, _)| lm.divides(&m)) {
            Some((lm, g)) => {
                rest = &rest - &g.mul_monomial(&m.div(lm), &c);
            }
            None => {
                rest = &rest - &Polynomial::term(&universe, m.clone(), c.clone());
                done.push((m, c));
            }
        }
    }
    Polynomial::from_terms(&universe, done)
}

/// True when every S-polynomial of `basis` reduces to zero under `order`.
pub fn is_groebner(basis: &[Polynomial], order: &TermOrder) -> bool {
    let eps: Vec<EPoly> = basis.iter().filter(|b| !b.is_zero()).map(|b| EPoly::from_rational(b.terms(), order)).collect();
    engine::is_groebner(&Commutative, &eps, order)
}

/// An ideal given by generators, with reduced Gröbner bases cached per term order.
pub struct IdealHandle {
    universe: Arc<VarUniverse>,
    generators: Vec<Polynomial>,
    cache: RwLock<Vec<(TermOrder, Arc<Vec<Polynomial>>)>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            universe: self.universe.clone(),
            generators: self.generators.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl IdealHandle {
    pub fn new(universe: &Arc<VarUniverse>, generators: Vec<Polynomial>) -> Self {
        for g in &generators {
            assert!(same_universe(universe, g.universe()), "generator from another universe");
        }
        IdealHandle {
            universe: universe.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: RwLock::new(Vec::new()),
        }
    }

    /// Builds an ideal whose generators are already a reduced Gröbner basis for `order`.
    pub fn from_basis(universe: &Arc<VarUniverse>, basis: Vec<Polynomial>, order: TermOrder) -> Self {
        let h = IdealHandle::new(universe, basis.clone());
        h.cache.write().unwrap().push((order, Arc::new(basis)));
        h
    }

    pub fn unit(universe: &Arc<VarUniverse>) -> Self {
        Self::from_basis(universe, vec![Polynomial::one(universe)], universe.canonical_order().clone())
    }

    pub fn zero(universe: &Arc<VarUniverse>) -> Self {
        Self::from_basis(universe, Vec::new(), universe.canonical_order().clone())
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Reduced Gröbner basis for `order`, computed at most once per order.
    pub fn basis(&self, order: &TermOrder) -> Result<Arc<Vec<Polynomial>>> {
        if let Some((_, b)) = self.cache.read().unwrap().iter().find(|(o, _)| o == order) {
            return Ok(b.clone());
        }
        let b = Arc::new(buchberger(&self.universe, &self.generators, order)?);
        let mut cache = self.cache.write().unwrap();
        if let Some((_, existing)) = cache.iter().find(|(o, _)| o == order) {
            return Ok(existing.clone());
        }
        cache.push((order.clone(), b.clone()));
        Ok(b)
    }

    /// Reduced Gröbner basis under degrevlex over the declared variable order.
    pub fn canonical_basis(&self) -> Result<Arc<Vec<Polynomial>>> {
        self.basis(self.universe.canonical_order())
    }

    pub fn is_unit(&self) -> Result<bool> {
        let b = self.canonical_basis()?;
        Ok(b.len() == 1 && b[0].is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        let order = self.universe.canonical_order();
        let b = self.basis(order)?;
        Ok(normal_form(p, &b, order).is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sum of ideals.
    pub fn sum(&self, other: &IdealHandle) -> IdealHandle {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        IdealHandle::new(&self.universe, g)
    }

    pub fn with_generators(&self, extra: &[Polynomial]) -> IdealHandle {
        let mut g = self.generators.clone();
        g.extend(extra.iter().cloned());
        IdealHandle::new(&self.universe, g)
    }

    /// Product of ideals.
    pub fn product(&self, other: &IdealHandle) -> IdealHandle {
        let mut g = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                g.push(a * b);
            }
        }
        IdealHandle::new(&self.universe, g)
    }

    /// Same ideal carried to another universe (variables matched by name).
    pub fn remap(&self, target: &Arc<VarUniverse>) -> Result<IdealHandle> {
        let g = self.generators.iter().map(|p| p.remap(target)).collect::<Result<Vec<_>>>()?;
        Ok(IdealHandle::new(target, g))
    }

    /// Maximal dimension and a maximal independent set of variables, read off the leading
    /// monomials of the canonical basis. The unit ideal has dimension -1.
    pub fn dimension(&self) -> Result<(i64, Vec<usize>)> {
        let b = self.canonical_basis()?;
        if b.len() == 1 && b[0].is_constant() {
            return Ok((-1, Vec::new()));
        }
        let order = self.universe.canonical_order();
        let leads: Vec<Monomial> = b.iter().map(|g| g.leading_term(order).unwrap().0.clone()).collect();
        Ok(max_independent_set(&leads, self.universe.len()))
    }
}

/// Largest subset `U` of variables such that no leading monomial lies in `k[U]`. Ties are
/// broken by the smallest bitmask, so the choice is deterministic.
pub(crate) fn max_independent_set(leads: &[Monomial], nvars: usize) -> (i64, Vec<usize>) {
    let masks: Vec<u64> = leads
        .iter()
        .map(|m| {
            let mut s = 0u64;
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    s |= 1 << i;
                }
            }
            s
        })
        .collect();
    assert!(nvars <= 63);
    let mut best: Option<u64> = None;
    let mut best_size = -1i64;
    let full = 1u64 << nvars;
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); nvars + 1];
    for s in 0..full {
        by_size[s.count_ones() as usize].push(s);
    }
    for size in (0..=nvars).rev() {
        for &s in &by_size[size] {
            if masks.iter().all(|&m| m & !s != 0) {
                best = Some(s);
                best_size = size as i64;
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    let s = best.unwrap_or(0);
    (best_size, (0..nvars).filter(|i| s >> i & 1 == 1).collect())
}

fn check_same(a: &IdealHandle, b: &IdealHandle) -> Result<()> {
    if !same_universe(&a.universe, &b.universe) {
        return Err(usage("ideals live in different universes"));
    }
    Ok(())
}

/// Contraction `I ∩ ℚ[remaining variables]`, kept in the same universe.
pub fn eliminate_in_place(ideal: &IdealHandle, kill: &[usize]) -> Result<IdealHandle> {
    let u = &ideal.universe;
    if kill.iter().any(|&k| k >= u.len()) {
        return Err(usage("elimination variable out of range"));
    }
    if kill.is_empty() {
        return Ok(ideal.clone());
    }
    let order = TermOrder::elimination(u.len(), kill);
    let b = ideal.basis(&order)?;
    let allowed: Vec<bool> = (0..u.len()).map(|i| !kill.contains(&i)).collect();
    let kept: Vec<Polynomial> = b.iter().filter(|g| g.supported_in(&allowed)).cloned().collect();
    Ok(IdealHandle::new(u, kept))
}

/// Contraction `I ∩ ℚ[remaining variables]` as an ideal of the smaller ring.
pub fn eliminate(ideal: &IdealHandle, kill: &[usize]) -> Result<IdealHandle> {
    let u = &ideal.universe;
    let keep: Vec<usize> = (0..u.len()).filter(|i| !kill.contains(i)).collect();
    let target = u.restrict(&keep);
    let e = eliminate_in_place(ideal, kill)?;
    let gens = e.generators.iter().map(|g| g.remap(&target)).collect::<Result<Vec<_>>>()?;
    // kill-free members of the block basis are a reduced basis for degrevlex on the rest
    Ok(IdealHandle::from_basis(&target, gens, target.canonical_order().clone()))
}

/// `I ∩ J` via a tag variable `w`: eliminate `w` from `w·I + (1−w)·J`.
pub fn intersect(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    check_same(a, b)?;
    let u = &a.universe;
    if a.is_zero() || b.is_zero() {
        return Ok(IdealHandle::zero(u));
    }
    let ext = u.extend_aux(&["w"]);
    let w = ext.len() - 1;
    let wp = Polynomial::var(&ext, w);
    let one_minus_w = &Polynomial::one(&ext) - &wp;
    let mut gens = Vec::new();
    for g in a.canonical_basis()?.iter() {
        gens.push(&wp * &g.remap(&ext)?);
    }
    for g in b.canonical_basis()?.iter() {
        gens.push(&one_minus_w * &g.remap(&ext)?);
    }
    let big = IdealHandle::new(&ext, gens);
    let e = eliminate(&big, &[w])?;
    let gens = e.generators.iter().map(|g| g.remap(u)).collect::<Result<Vec<_>>>()?;
    Ok(IdealHandle::from_basis(u, gens, u.canonical_order().clone()))
}

/// Ideal quotient `(I : f)`.
pub fn quotient(ideal: &IdealHandle, f: &Polynomial) -> Result<IdealHandle> {
    if f.is_zero() {
        return Err(usage("quotient by the zero polynomial"));
    }
    let u = &ideal.universe;
    let fi = IdealHandle::new(u, vec![f.clone()]);
    let meet = intersect(ideal, &fi)?;
    let mut gens = Vec::new();
    for g in meet.generators() {
        let q = g
            .div_exact(f)
            .ok_or_else(|| crate::error::Error::Computation("intersection generator not divisible by f".into()))?;
        gens.push(q);
    }
    let q = IdealHandle::new(u, gens);
    let b = q.canonical_basis()?;
    Ok(IdealHandle::from_basis(u, (*b).clone(), u.canonical_order().clone()))
}

/// Saturation `(I : f^∞)` via `I + ⟨1 − w·f⟩` with `w` eliminated, together with the least
/// `l` such that `(I : f^l) = (I : f^∞)`.
pub fn saturate(ideal: &IdealHandle, f: &Polynomial) -> Result<(IdealHandle, u32)> {
    let sat = saturation(ideal, f)?;
    let u = &ideal.universe;
    let order = u.canonical_order();
    let basis = ideal.canonical_basis()?;
    // smallest l with f^l · (I : f^∞) ⊆ I
    let fr = normal_form(f, &basis, order);
    let mut pending: Vec<Polynomial> =
        sat.canonical_basis()?.iter().map(|g| normal_form(g, &basis, order)).filter(|g| !g.is_zero()).collect();
    let mut l = 0u32;
    while !pending.is_empty() {
        crate::budget::check()?;
        l += 1;
        pending = pending
            .iter()
            .map(|g| normal_form(&(g * &fr), &basis, order))
            .filter(|g| !g.is_zero())
            .collect();
    }
    Ok((sat, l))
}

/// `(I : f^∞)` without the exponent.
pub fn saturation(ideal: &IdealHandle, f: &Polynomial) -> Result<IdealHandle> {
    if f.is_zero() {
        return Err(usage("saturation by the zero polynomial"));
    }
    let u = &ideal.universe;
    let ext = u.extend_aux(&["w"]);
    let w = ext.len() - 1;
    let mut gens: Vec<Polynomial> = ideal.generators.iter().map(|g| g.remap(&ext)).collect::<Result<_>>()?;
    gens.push(&Polynomial::one(&ext) - &(&Polynomial::var(&ext, w) * &f.remap(&ext)?));
    let e = eliminate(&IdealHandle::new(&ext, gens), &[w])?;
    let gens = e.generators.iter().map(|g| g.remap(u)).collect::<Result<Vec<_>>>()?;
    Ok(IdealHandle::from_basis(u, gens, u.canonical_order().clone()))
}

/// Equality of ideals through their canonical reduced bases.
pub fn equal(a: &IdealHandle, b: &IdealHandle) -> Result<bool> {
    check_same(a, b)?;
    Ok(*a.canonical_basis()? == *b.canonical_basis()?)
}

/// `g ∈ √I`, decided by `1 ∈ I + ⟨1 − w·g⟩`.
pub fn in_radical(g: &Polynomial, ideal: &IdealHandle) -> Result<bool> {
    if g.is_zero() {
        return Ok(true);
    }
    let u = &ideal.universe;
    let ext = u.extend_aux(&["w"]);
    let w = ext.len() - 1;
    let mut gens: Vec<Polynomial> = ideal.generators.iter().map(|p| p.remap(&ext)).collect::<Result<_>>()?;
    gens.push(&Polynomial::one(&ext) - &(&Polynomial::var(&ext, w) * &g.remap(&ext)?));
    IdealHandle::new(&ext, gens).is_unit()
}

#[cfg(test)]
mod tests;
