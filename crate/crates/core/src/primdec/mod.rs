//! Primary decomposition in `ℚ[x,s]` and the factorization machinery behind it.

mod gtz;
mod mpoly;
mod upoly;

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Rational;
use crate::error::{usage, Result};
use crate::ideals::{eliminate, equal, intersect, normal_form, IdealHandle};
use crate::qpoly::{Polynomial, VarClass};

pub use mpoly::gcd;

/// A primary ideal together with its contractions to `ℚ[x]` and `ℚ[s]`.
#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    pub component: IdealHandle,
    pub x_part: IdealHandle,
    pub s_part: IdealHandle,
}

impl PrimaryComponent {
    /// Computes both contractions of `component`.
    pub fn new(component: IdealHandle) -> Result<Self> {
        let u = component.universe();
        let s_vars = u.indices_of_class(VarClass::S);
        let non_s: Vec<usize> = (0..u.len()).filter(|i| !s_vars.contains(i)).collect();
        let x_part = eliminate(&component, &s_vars)?;
        let s_part = eliminate(&component, &non_s)?;
        Ok(PrimaryComponent { component, x_part, s_part })
    }
}

/// Irreducible factorization `constant · ∏ factor^mult` of a univariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateFactorization {
    pub constant: Rational,
    /// Monic irreducible factors, sorted by degree then coefficients.
    pub factors: Vec<(Polynomial, u32)>,
}

impl UnivariateFactorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self, like: &Polynomial) -> Polynomial {
        let mut p = Polynomial::constant(like.universe(), self.constant.clone());
        for (f, e) in &self.factors {
            p = &p * &f.pow(*e);
        }
        p
    }
}

fn univariate_variable(p: &Polynomial) -> Result<Option<usize>> {
    if p.is_zero() {
        return Err(usage("cannot factor the zero polynomial"));
    }
    let vars = p.variables();
    match vars.len() {
        0 => Ok(None),
        1 => Ok(Some(vars[0])),
        _ => Err(usage(format!("{p} is not univariate"))),
    }
}

/// Squarefree decomposition: pairwise coprime monic squarefree factors with multiplicities,
/// whose product is `p` up to a constant.
pub fn squarefree_decompose(p: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    let Some(v) = univariate_variable(p)? else {
        return Ok(Vec::new());
    };
    let q = p.univariate_coeffs(v).expect("univariate");
    Ok(upoly::q_squarefree(&q)
        .into_iter()
        .map(|(f, e)| (Polynomial::from_univariate(p.universe(), v, &upoly::q_monic(&f)), e))
        .collect())
}

/// Factorization over `ℚ` into monic irreducibles and a leading constant.
pub fn factor_univariate(p: &Polynomial) -> Result<UnivariateFactorization> {
    let Some(v) = univariate_variable(p)? else {
        return Ok(UnivariateFactorization { constant: p.constant_term(), factors: Vec::new() });
    };
    let q = p.univariate_coeffs(v).expect("univariate");
    let (constant, facs) = upoly::q_factor(&q);
    Ok(UnivariateFactorization {
        constant,
        factors: facs.into_iter().map(|(f, e)| (Polynomial::from_univariate(p.universe(), v, &f), e)).collect(),
    })
}

/// Irreducible factors over `ℚ` of a multivariate polynomial, with multiplicities; constants
/// are dropped.
pub fn factor_multivariate(p: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    if p.is_zero() {
        return Err(usage("cannot factor the zero polynomial"));
    }
    let mut out = Vec::new();
    factor_into(p, &mut out)?;
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
    // merge equal factors coming from different contents
    let mut merged: Vec<(Polynomial, u32)> = Vec::new();
    for (f, e) in out {
        match merged.last_mut() {
            Some((g, k)) if *g == f => *k += e,
            _ => merged.push((f, e)),
        }
    }
    Ok(merged)
}

fn factor_into(p: &Polynomial, out: &mut Vec<(Polynomial, u32)>) -> Result<()> {
    let Some(&v) = p.variables().first() else {
        return Ok(());
    };
    let content = mpoly::content_in(p, v);
    factor_into(&content, out)?;
    let prim = p.div_exact(&content).expect("content divides");
    out.extend(mpoly::factor_in(&prim, v)?);
    Ok(())
}

/// Primary decomposition of a proper nonzero ideal. Components are sorted by dimension
/// (largest first) and then by their canonical basis, and redundant ones are dropped.
pub fn primary_decompose(ideal: &IdealHandle) -> Result<Vec<PrimaryComponent>> {
    if ideal.is_zero() || ideal.canonical_basis()?.is_empty() {
        return Err(usage("cannot decompose the zero ideal"));
    }
    if ideal.is_unit()? {
        return Err(usage("cannot decompose the unit ideal"));
    }
    let raw = gtz::split_decompose(ideal)?;
    let mut keyed = Vec::new();
    for c in raw {
        if c.is_unit()? {
            continue;
        }
        let c = IdealHandle::from_basis(c.universe(), (*c.canonical_basis()?).clone(), c.universe().canonical_order().clone());
        let key = (-c.dimension()?.0, basis_key(&c)?);
        keyed.push((key, c));
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    let mut comps: Vec<IdealHandle> = keyed.into_iter().map(|(_, c)| c).collect();

    // a component containing another one is redundant
    let mut i = 0;
    while i < comps.len() {
        let mut redundant = false;
        for j in 0..comps.len() {
            if j != i && comps[i].contains_ideal(&comps[j])? {
                redundant = true;
                break;
            }
        }
        if redundant {
            comps.remove(i);
        } else {
            i += 1;
        }
    }
    // drop components whose removal keeps the intersection, scanning from the back
    if comps.len() > 1 {
        let mut i = comps.len();
        while i > 0 {
            i -= 1;
            if comps.len() == 1 {
                break;
            }
            let rest: Vec<IdealHandle> = comps.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, c)| c.clone()).collect();
            if equal(&intersect_all(&rest)?, ideal)? {
                comps.remove(i);
            }
        }
    }
    comps.into_iter().map(PrimaryComponent::new).collect()
}

fn basis_key(c: &IdealHandle) -> Result<Vec<String>> {
    Ok(c.canonical_basis()?.iter().map(|g| g.to_string()).collect())
}

fn intersect_all(ideals: &[IdealHandle]) -> Result<IdealHandle> {
    let mut acc = ideals[0].clone();
    for c in &ideals[1..] {
        acc = intersect(&acc, c)?;
    }
    Ok(acc)
}

/// Outcome of [`verify_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// The components intersect exactly to the input.
    pub intersection: bool,
    /// Every component contains the input.
    pub containment: bool,
    /// No primarity probe failed.
    pub primarity: bool,
    pub probes_run: usize,
    pub failures: Vec<String>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.intersection && self.containment && self.primarity
    }
}

impl fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "pass" } else { "fail" };
        write!(
            f,
            "intersection: {}, containment: {}, primarity: {} ({} probes)",
            mark(self.intersection),
            mark(self.containment),
            mark(self.primarity),
            self.probes_run
        )
    }
}

const MAX_PROBES: usize = 50;

/// Checks a proposed decomposition: exact intersection, containment of the input, and
/// randomized primarity probes built from factorizations of the component generators.
pub fn verify_decomposition(ideal: &IdealHandle, comps: &[PrimaryComponent]) -> Result<DecompositionReport> {
    let mut report = DecompositionReport {
        intersection: false,
        containment: true,
        primarity: true,
        probes_run: 0,
        failures: Vec::new(),
    };
    if comps.is_empty() {
        report.intersection = ideal.is_unit()?;
        return Ok(report);
    }
    let ideals: Vec<IdealHandle> = comps.iter().map(|c| c.component.clone()).collect();
    report.intersection = equal(&intersect_all(&ideals)?, ideal)?;
    if !report.intersection {
        report.failures.push("intersection differs from the input".into());
    }
    for (k, c) in ideals.iter().enumerate() {
        if !c.contains_ideal(ideal)? {
            report.containment = false;
            report.failures.push(format!("component {k} does not contain the input"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
    let per = (MAX_PROBES / ideals.len()).max(1);
    for (k, c) in ideals.iter().enumerate() {
        for (g, h) in probe_pairs(c, per, &mut rng)? {
            if report.probes_run >= MAX_PROBES {
                break;
            }
            report.probes_run += 1;
            if !power_in(&h, c)? {
                report.primarity = false;
                report.failures.push(format!("component {k}: ({g})·({h}) lies in it but no power of {h} does"));
            }
        }
    }
    Ok(report)
}

/// Pairs `(g,h)` with `gh ∈ c` and `g ∉ c`.
fn probe_pairs(c: &IdealHandle, limit: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(Polynomial, Polynomial)>> {
    let u = c.universe();
    let mut candidates = Vec::new();
    for gen in c.canonical_basis()?.iter() {
        let facs = factor_multivariate(gen)?;
        let mut flat: Vec<Polynomial> = Vec::new();
        for (f, e) in &facs {
            for _ in 0..*e {
                flat.push(f.clone());
            }
        }
        if flat.len() < 2 {
            continue;
        }
        // every proper split of the factor list, capped
        let n = flat.len().min(10);
        for mask in 1..(1u32 << n) - 1 {
            let mut g = Polynomial::one(u);
            let mut h = Polynomial::one(u);
            for (i, f) in flat.iter().enumerate() {
                if i < n && mask >> i & 1 == 1 {
                    g = &g * f;
                } else {
                    h = &h * f;
                }
            }
            candidates.push((g, h));
        }
    }
    candidates.shuffle(rng);
    let mut out = Vec::new();
    for (g, h) in candidates {
        if out.len() >= limit {
            break;
        }
        // optionally spoil g by a random linear form so that h must carry the membership
        let g = if rng.gen_bool(0.5) && !u.is_empty() {
            let i = rng.gen_range(0..u.len());
            let c = Rational::from(rng.gen_range(-3i64..=3));
            &g * &(&Polynomial::var(u, i) + &Polynomial::constant(u, c))
        } else {
            g
        };
        if !c.contains(&g)? {
            out.push((g, h));
        }
    }
    Ok(out)
}

/// Whether `h^N ∈ c` for some `N ≤ 1 + (max generator degree)²`.
fn power_in(h: &Polynomial, c: &IdealHandle) -> Result<bool> {
    let basis = c.canonical_basis()?;
    let order = c.universe().canonical_order();
    let d = basis.iter().map(|g| g.degree()).max().unwrap_or(0);
    let bound = 1 + d * d;
    let h0 = normal_form(h, &basis, order);
    let mut acc = h0.clone();
    for _ in 0..bound {
        if acc.is_zero() {
            return Ok(true);
        }
        crate::budget::check()?;
        acc = normal_form(&(&acc * &h0), &basis, order);
    }
    Ok(acc.is_zero())
}

#[cfg(test)]
mod tests;
