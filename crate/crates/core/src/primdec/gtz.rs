//! Gianni–Trager–Zacharias primary decomposition over ℚ.

use crate::arith::Rational;
use crate::budget;
use crate::error::{Error, Result};
use crate::ideals::{eliminate_in_place, equal, intersect, saturate, saturation, IdealHandle};
use crate::qpoly::{Monomial, Polynomial, TermOrder};

use super::mpoly::{self, factor_in, primitive_in};

/// Leading coefficient of `g` as a polynomial in the `params` variables, for a block order in
/// which every other variable dominates.
fn leading_param_coefficient(g: &Polynomial, params: &[bool], order: &TermOrder) -> Polynomial {
    let (lm, _) = g.leading_term(order).expect("nonzero basis element");
    let strip = |m: &Monomial| {
        let mut m = m.clone();
        for (i, &p) in params.iter().enumerate() {
            if p {
                m.set(i, 0);
            }
        }
        m
    };
    let head = strip(lm);
    Polynomial::from_terms(
        g.universe(),
        g.terms().iter().filter(|(m, _)| strip(m) == head).map(|(m, c)| {
            let mut u = m.clone();
            for (i, &p) in params.iter().enumerate() {
                if !p {
                    u.set(i, 0);
                }
            }
            (u, c.clone())
        }),
    )
}

fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let g = mpoly::gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides").monic()
}

/// Least common multiple of the leading `params`-coefficients of the basis under the block
/// order `others ≫ params`.
fn param_lcm(ideal: &IdealHandle, params: &[usize]) -> Result<Polynomial> {
    let u = ideal.universe();
    let n = u.len();
    let others: Vec<usize> = (0..n).filter(|i| !params.contains(i)).collect();
    let order = TermOrder::elimination(n, &others);
    let mask: Vec<bool> = (0..n).map(|i| params.contains(&i)).collect();
    let basis = ideal.basis(&order)?;
    let mut h = Polynomial::one(u);
    for g in basis.iter() {
        let c = leading_param_coefficient(g, &mask, &order);
        if !c.is_constant() {
            h = lcm(&h, &c);
        }
    }
    Ok(h)
}

/// `I·ℚ(params)[others] ∩ ℚ[all]`.
fn contract(ideal: &IdealHandle, params: &[usize]) -> Result<IdealHandle> {
    if params.is_empty() {
        return Ok(ideal.clone());
    }
    let h = param_lcm(ideal, params)?;
    if h.is_constant() {
        return Ok(ideal.clone());
    }
    saturation(ideal, &h)
}

/// Minimal polynomial over `ℚ(params)` of the linear form `ell` modulo `ideal`, as a
/// polynomial in `params` and the fresh last variable `w` of the returned universe.
fn minimal_polynomial(ideal: &IdealHandle, vars: &[usize], params: &[usize], ell: &Polynomial) -> Result<Polynomial> {
    let u = ideal.universe();
    let ext = u.extend_aux(&["w"]);
    let w = ext.len() - 1;
    let mut gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.remap(&ext)).collect::<Result<_>>()?;
    gens.push(&Polynomial::var(&ext, w) - &ell.remap(&ext)?);
    let order = TermOrder::blocks_degrevlex(ext.len(), &[vars.to_vec(), vec![w], params.to_vec()]);
    let big = IdealHandle::new(&ext, gens);
    let basis = big.basis(&order)?;
    let allowed: Vec<bool> = (0..ext.len()).map(|i| !vars.contains(&i)).collect();
    let best = basis
        .iter()
        .filter(|g| g.supported_in(&allowed) && g.degree_in(w) > 0)
        .min_by_key(|g| g.degree_in(w))
        .ok_or_else(|| Error::Computation("ideal is not zero-dimensional over the parameters".into()))?;
    Ok(primitive_in(best, w))
}

/// Number of standard monomials in `vars` for the block order `vars ≫ rest`, i.e. the
/// dimension over `ℚ(rest)` of the quotient.
fn vector_space_dimension(ideal: &IdealHandle, vars: &[usize]) -> Result<usize> {
    let u = ideal.universe();
    let n = u.len();
    let order = TermOrder::elimination(n, vars);
    let basis = ideal.basis(&order)?;
    let leads: Vec<Vec<u16>> = basis
        .iter()
        .map(|g| {
            let m = g.leading_term(&order).unwrap().0;
            vars.iter().map(|&v| m.get(v)).collect()
        })
        .collect();
    if leads.iter().any(|l| l.iter().all(|&e| e == 0)) {
        return Ok(0);
    }
    // walk the staircase
    let k = vars.len();
    let mut count = 0usize;
    let mut stack: Vec<Vec<u16>> = vec![vec![0; k]];
    let mut seen = std::collections::HashSet::new();
    while let Some(m) = stack.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        if leads.iter().any(|l| l.iter().zip(&m).all(|(a, b)| a <= b)) {
            continue;
        }
        count += 1;
        if count > 100_000 {
            return Err(Error::Computation("quotient is not finite over the parameters".into()));
        }
        for i in 0..k {
            let mut next = m.clone();
            next[i] += 1;
            stack.push(next);
        }
    }
    Ok(count)
}

/// Whether the zero-dimensional (over `ℚ(params)`) contracted ideal `q` has a radical of
/// dimension `degree` over `ℚ(params)`, which for a split along an irreducible factor of
/// that degree means the radical is prime.
fn radical_has_dimension(q: &IdealHandle, vars: &[usize], params: &[usize], degree: usize) -> Result<bool> {
    let u = q.universe();
    let mut extra = Vec::new();
    for &v in vars {
        let mu = minimal_polynomial(q, vars, params, &Polynomial::var(u, v))?;
        let ext = mu.universe().clone();
        let w = ext.len() - 1;
        let mut sqfree = Polynomial::one(&ext);
        for (f, _) in mpoly::squarefree_in(&mu, w) {
            sqfree = &sqfree * &f;
        }
        if sqfree.degree_in(w) as usize != mu.degree_in(w) as usize {
            // substitute w := x_v and return to the original universe
            let back = sqfree.substitute(w, &Polynomial::var(&ext, v));
            extra.push(back.remap(u)?);
        }
    }
    let radical = q.with_generators(&extra);
    Ok(vector_space_dimension(&radical, vars)? == degree)
}

/// Deterministic coefficient vectors for separating linear forms.
fn linear_form(u: &std::sync::Arc<crate::qpoly::VarUniverse>, vars: &[usize], index: usize) -> Option<Polynomial> {
    let m = vars.len();
    let coeffs = mpoly::evaluation_points(m - 1).nth(index)?;
    let mut ell = Polynomial::var(u, vars[m - 1]);
    for (k, c) in coeffs.iter().enumerate() {
        if *c != 0 {
            ell = &ell + &Polynomial::var(u, vars[k]).scale(&Rational::from(*c));
        }
    }
    Some(ell)
}

/// Primary components of a contracted ideal that is zero-dimensional over `ℚ(params)`.
fn zero_dimensional(j: &IdealHandle, vars: &[usize], params: &[usize], start: usize) -> Result<Vec<IdealHandle>> {
    let u = j.universe().clone();
    let mut index = start;
    loop {
        budget::check()?;
        let ell = linear_form(&u, vars, index)
            .filter(|_| index <= 200)
            .ok_or_else(|| Error::Computation("no separating linear form found".into()))?;
        let mu = minimal_polynomial(j, vars, params, &ell)?;
        let ext = mu.universe().clone();
        let w = ext.len() - 1;
        let facs = factor_in(&mu, w)?;
        let ell_ext = ell.remap(&ext)?;
        let mut pieces = Vec::new();
        for (f, e) in &facs {
            let g = f.pow(*e).substitute(w, &ell_ext).remap(&u)?;
            let q = contract(&j.with_generators(&[g]), params)?;
            pieces.push((q, f.degree_in(w) as usize));
        }
        if pieces.len() == 1 {
            let (q, d) = pieces.pop().unwrap();
            if radical_has_dimension(&q, vars, params, d)? {
                return Ok(vec![q]);
            }
            index += 1;
            continue;
        }
        let mut out = Vec::new();
        for (q, d) in pieces {
            if radical_has_dimension(&q, vars, params, d)? {
                out.push(q);
            } else {
                out.extend(zero_dimensional(&q, vars, params, index + 1)?);
            }
        }
        return Ok(out);
    }
}

/// Adds `c` unless it contains a kept component, dropping kept components that contain it.
fn absorb(kept: &mut Vec<IdealHandle>, c: IdealHandle) -> Result<()> {
    if c.is_unit()? {
        return Ok(());
    }
    for k in kept.iter() {
        if c.contains_ideal(k)? {
            return Ok(());
        }
    }
    let mut i = 0;
    while i < kept.len() {
        if kept[i].contains_ideal(&c)? {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept.push(c);
    Ok(())
}

fn intersect_all(ideals: &[IdealHandle]) -> Result<IdealHandle> {
    let mut acc = ideals[0].clone();
    for c in &ideals[1..] {
        acc = intersect(&acc, c)?;
    }
    Ok(acc)
}

/// Product of the distinct irreducible factors of `h`.
fn squarefree_part(h: &Polynomial) -> Result<Polynomial> {
    let mut out = Polynomial::one(h.universe());
    for (f, _) in super::factor_multivariate(h)? {
        out = &out * &f;
    }
    Ok(out)
}

/// Primary components (possibly redundant) of a proper nonzero ideal.
fn decompose(ideal: &IdealHandle) -> Result<Vec<IdealHandle>> {
    let mut kept: Vec<IdealHandle> = Vec::new();
    let mut work = ideal.clone();
    loop {
        budget::check()?;
        if work.is_unit()? {
            return Ok(kept);
        }
        let (_, params) = work.dimension()?;
        let n = work.universe().len();
        let vars: Vec<usize> = (0..n).filter(|i| !params.contains(i)).collect();
        if params.is_empty() {
            for c in zero_dimensional(&work, &vars, &params, 0)? {
                absorb(&mut kept, c)?;
            }
            return Ok(kept);
        }
        let h = squarefree_part(&param_lcm(&work, &params)?)?;
        let (j, l) = saturate(&work, &h)?;
        let found = zero_dimensional(&j, &vars, &params, 0)?;
        for c in found {
            absorb(&mut kept, c)?;
        }
        if l == 0 || h.is_constant() {
            return Ok(kept);
        }
        // the remainder only carries components already accounted for
        if !kept.is_empty() && equal(&intersect_all(&kept)?, ideal)? {
            return Ok(kept);
        }
        work = work.with_generators(&[h.pow(l)]);
    }
}

/// Irreducible factors of the reducible elements of the canonical basis and of the
/// contractions to each variable class, simplest first.
fn split_candidates(ideal: &IdealHandle) -> Result<Vec<Polynomial>> {
    let u = ideal.universe();
    let mut sources: Vec<Polynomial> = ideal.canonical_basis()?.to_vec();
    let mut classes: Vec<_> = u.vars().iter().map(|v| v.class).collect();
    classes.sort();
    classes.dedup();
    if classes.len() > 1 {
        for class in classes {
            let kill: Vec<usize> = (0..u.len()).filter(|&i| u.class(i) != class).collect();
            for g in eliminate_in_place(ideal, &kill)?.generators() {
                sources.push(g.clone());
            }
        }
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for g in sources {
        budget::check()?;
        if g.is_constant() {
            continue;
        }
        let facs = super::factor_multivariate(&g)?;
        if facs.len() < 2 {
            continue;
        }
        for (q, _) in facs {
            let q = q.monic();
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out.sort_by_key(|q| (q.degree(), q.variables().len(), q.len()));
    Ok(out)
}

/// Primary components (possibly redundant) of a proper nonzero ideal. Before falling back to
/// the general algorithm, splits `I = (I : q^∞) ∩ (I + ⟨q^l⟩)` along factors `q` of basis
/// elements that are neither zero divisors nor nilpotent modulo `I`.
pub(crate) fn split_decompose(ideal: &IdealHandle) -> Result<Vec<IdealHandle>> {
    budget::check()?;
    if ideal.is_unit()? {
        return Ok(Vec::new());
    }
    for q in split_candidates(ideal)? {
        let (j, l) = saturate(ideal, &q)?;
        if l == 0 || j.is_unit()? {
            continue;
        }
        let mut kept = Vec::new();
        for c in split_decompose(&j)? {
            absorb(&mut kept, c)?;
        }
        if kept.is_empty() || !equal(&intersect_all(&kept)?, ideal)? {
            for c in split_decompose(&ideal.with_generators(&[q.pow(l)]))? {
                absorb(&mut kept, c)?;
            }
        }
        return Ok(kept);
    }
    decompose(ideal)
}
