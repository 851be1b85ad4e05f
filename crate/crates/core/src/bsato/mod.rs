//! Global and local Bernstein–Sato ideals and the stratification on which the local ideal is
//! constant.

mod present;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::arith::Rational;
use crate::budget;
use crate::error::{usage, Result};
use crate::ideals::{eliminate, equal, in_radical, intersect, is_groebner, IdealHandle};
use crate::primdec::{primary_decompose, verify_decomposition, DecompositionReport, PrimaryComponent};
use crate::qpoly::{parse_polynomial, same_universe, Polynomial, VarUniverse};
use crate::weyl::{ann_fs, apply_to_fs, compute_i2, AnnResult, WeylRings};

pub use present::{factored, present_ideal};

/// A tuple `f = (f_1, …, f_p)` of nonzero polynomials in `ℚ[x_1, …, x_n]`.
#[derive(Clone, Debug)]
pub struct Problem {
    rings: WeylRings,
    f: Vec<Polynomial>,
    big_f: Polynomial,
}

impl Problem {
    /// Validates the tuple; the variable names must not collide with the internal ones
    /// (`s<j>`, `t<j>`, `u<j>`, `v<j>`, `Dt<j>`, `D<var>`).
    pub fn new(f: Vec<Polynomial>) -> Result<Self> {
        let Some(first) = f.first() else {
            return Err(usage("at least one polynomial is required"));
        };
        let x = first.universe().clone();
        if f.iter().any(|q| !same_universe(&x, q.universe())) {
            return Err(usage("the polynomials must share one ring"));
        }
        if f.iter().any(|q| q.is_zero()) {
            return Err(usage("the polynomials must be nonzero"));
        }
        if x.is_empty() {
            return Err(usage("at least one variable is required"));
        }
        let rings = WeylRings::new(&x, f.len())?;
        let mut big_f = Polynomial::one(&x);
        for q in &f {
            big_f = &big_f * q;
        }
        Ok(Problem { rings, f, big_f })
    }

    /// Parses `polys` over the polynomial ring in `vars`.
    pub fn parse(vars: &[&str], polys: &[&str]) -> Result<Self> {
        let x = VarUniverse::polynomial_ring(vars.iter().copied())?;
        let f = polys.iter().map(|p| parse_polynomial(p, &x)).collect::<Result<Vec<_>>>()?;
        Self::new(f)
    }

    pub fn n(&self) -> usize {
        self.rings.n
    }

    pub fn p(&self) -> usize {
        self.rings.p
    }

    pub fn f(&self) -> &[Polynomial] {
        &self.f
    }

    /// `F = f_1 ⋯ f_p`.
    pub fn big_f(&self) -> &Polynomial {
        &self.big_f
    }

    pub fn rings(&self) -> &WeylRings {
        &self.rings
    }

    /// Parses a point given as comma-separated rationals.
    pub fn parse_point(&self, text: &str) -> Result<Vec<Rational>> {
        let coords = text
            .split(',')
            .map(|c| c.trim().parse::<Rational>().map_err(|_| usage(format!("`{}` is not a rational number", c.trim()))))
            .collect::<Result<Vec<_>>>()?;
        self.check_point(&coords)?;
        Ok(coords)
    }

    fn check_point(&self, a: &[Rational]) -> Result<()> {
        if a.len() != self.n() {
            return Err(usage(format!("point has {} coordinates, expected {}", a.len(), self.n())));
        }
        Ok(())
    }
}

/// A piece `W_σ` of the stratification: the points where exactly the components in `σ`
/// have vanishing `x`-part.
#[derive(Clone, Debug)]
pub struct Stratum {
    /// Indices (from 0) into the component list.
    pub sigma: Vec<usize>,
    /// Generators of `Σ_{i∈σ} (Υ_i ∩ ℚ[x])`; `W_σ` lies in their common zero set.
    pub closed_conditions: Vec<Polynomial>,
    /// For every `i ∉ σ`, generators of `Υ_i ∩ ℚ[x]`, one of which must be nonzero.
    pub open_conditions: Vec<Vec<Polynomial>>,
    /// The local Bernstein–Sato ideal at every point of `W_σ`.
    pub bideal: IdealHandle,
    /// `W_σ` is known to have a point over `ℚ̄`.
    pub nonempty: bool,
}

impl Stratum {
    /// Whether `a` satisfies the membership conditions of this stratum.
    pub fn contains(&self, a: &[Rational]) -> Result<bool> {
        for g in &self.closed_conditions {
            if !vanishes(g, a)? {
                return Ok(false);
            }
        }
        for set in &self.open_conditions {
            let mut some_nonzero = false;
            for g in set {
                if !vanishes(g, a)? {
                    some_nonzero = true;
                    break;
                }
            }
            if !some_nonzero {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn vanishes(g: &Polynomial, a: &[Rational]) -> Result<bool> {
    Ok(g.evaluate(a)?.is_zero())
}

/// Everything the pipeline computes for one problem.
#[derive(Clone, Debug)]
pub struct BsatoResult {
    pub i2: IdealHandle,
    pub components: Vec<PrimaryComponent>,
    pub global: IdealHandle,
    pub strata: Vec<Stratum>,
}

/// Lazily runs the pipeline stages, caching each and recording its wall-clock time.
pub struct Analysis {
    prob: Problem,
    ann: Option<AnnResult>,
    i2: Option<IdealHandle>,
    global: Option<IdealHandle>,
    components: Option<Vec<PrimaryComponent>>,
    strata: Option<Vec<Stratum>>,
    timings: Vec<(String, f64)>,
}

impl Analysis {
    pub fn new(prob: Problem) -> Self {
        Analysis { prob, ann: None, i2: None, global: None, components: None, strata: None, timings: Vec::new() }
    }

    pub fn problem(&self) -> &Problem {
        &self.prob
    }

    /// Seconds spent in each completed stage, in execution order.
    pub fn timings(&self) -> &[(String, f64)] {
        &self.timings
    }

    fn timed<T>(&mut self, stage: &str, run: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        budget::enter_stage(stage)?;
        let start = Instant::now();
        let out = run(self)?;
        self.timings.push((stage.to_string(), start.elapsed().as_secs_f64()));
        Ok(out)
    }

    /// `I₁ = ann_{D[s]} f^s`.
    pub fn annihilator(&mut self) -> Result<&AnnResult> {
        if self.ann.is_none() {
            let ann = self.timed("annihilator", |s| ann_fs(&s.prob.f))?;
            self.ann = Some(ann);
        }
        Ok(self.ann.as_ref().unwrap())
    }

    /// `I₂ = (I₁ + D[s]·F) ∩ ℚ[x,s]`.
    pub fn i2(&mut self) -> Result<&IdealHandle> {
        if self.i2.is_none() {
            self.annihilator()?;
            let i2 = self.timed("contraction", |s| compute_i2(s.ann.as_ref().unwrap(), &s.prob.f))?;
            self.i2 = Some(i2);
        }
        Ok(self.i2.as_ref().unwrap())
    }

    /// `B_glob(f) = I₂ ∩ ℚ[s]`.
    pub fn global(&mut self) -> Result<&IdealHandle> {
        if self.global.is_none() {
            self.i2()?;
            let g = self.timed("global", |s| {
                let x: Vec<usize> = (0..s.prob.n()).collect();
                let e = eliminate(s.i2.as_ref().unwrap(), &x)?;
                e.remap(&s.prob.rings.s)
            })?;
            self.global = Some(g);
        }
        Ok(self.global.as_ref().unwrap())
    }

    /// Primary decomposition of `I₂`.
    pub fn components(&mut self) -> Result<&[PrimaryComponent]> {
        if self.components.is_none() {
            self.i2()?;
            let c = self.timed("decomposition", |s| primary_decompose(s.i2.as_ref().unwrap()))?;
            self.components = Some(c);
        }
        Ok(self.components.as_ref().unwrap())
    }

    /// `B_loc,a(f)`: the unit ideal if no component's `x`-part vanishes at `a`, otherwise the
    /// contraction to `ℚ[s]` of the intersection of those components.
    pub fn local(&mut self, a: &[Rational]) -> Result<IdealHandle> {
        self.prob.check_point(a)?;
        self.components()?;
        let s = self.prob.rings.s.clone();
        self.timed("local", |me| {
            let comps = me.components.as_ref().unwrap();
            let sigma = select_sigma(comps, a)?;
            sigma_bideal(comps, &sigma, &s)
        })
    }

    /// The strata `W_σ` that have a point over `ℚ̄`, each with its local ideal.
    pub fn strata(&mut self) -> Result<&[Stratum]> {
        if self.strata.is_none() {
            self.components()?;
            let s = self.prob.rings.s.clone();
            let x = self.prob.rings.x.clone();
            let strata = self.timed("stratification", |me| build_strata(me.components.as_ref().unwrap(), &x, &s))?;
            self.strata = Some(strata);
        }
        Ok(self.strata.as_ref().unwrap())
    }

    /// Runs every stage.
    pub fn result(&mut self) -> Result<BsatoResult> {
        self.global()?;
        self.strata()?;
        Ok(BsatoResult {
            i2: self.i2.clone().unwrap(),
            components: self.components.clone().unwrap(),
            global: self.global.clone().unwrap(),
            strata: self.strata.clone().unwrap(),
        })
    }

    /// Consistency checks on whatever stages have run.
    pub fn verify(&mut self) -> Result<VerificationReport> {
        self.timed("verification", |me| {
            let mut report = VerificationReport::default();
            if let Some(ann) = &me.ann {
                let mut ok = true;
                for g in &ann.i1 {
                    budget::check()?;
                    ok &= apply_to_fs(g, &me.prob.f)?.is_zero();
                }
                report.annihilates = Some(ok);
            }
            if let Some(i2) = &me.i2 {
                let basis = i2.canonical_basis()?;
                let mut ok = is_groebner(&basis, i2.universe().canonical_order());
                if let Some(g) = &me.global {
                    let gb = g.canonical_basis()?;
                    ok &= is_groebner(&gb, g.universe().canonical_order());
                }
                report.groebner = Some(ok);
            }
            if let (Some(i2), Some(comps)) = (&me.i2, &me.components) {
                report.decomposition = Some(verify_decomposition(i2, comps)?);
            }
            if let (Some(global), Some(comps)) = (&me.global, &me.components) {
                // contraction commutes with intersection
                let all: Vec<usize> = (0..comps.len()).collect();
                report.global_matches_components = Some(equal(&sigma_bideal(comps, &all, global.universe())?, global)?);
            }
            Ok(report)
        })
    }
}

/// Results of [`Analysis::verify`]; `None` marks checks whose stage did not run.
#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    /// Every annihilator generator kills `f^s`.
    pub annihilates: Option<bool>,
    /// The stored bases pass the S-polynomial criterion.
    pub groebner: Option<bool>,
    pub decomposition: Option<DecompositionReport>,
    /// `I₂ ∩ ℚ[s]` equals the intersection of the `s`-parts of all components.
    pub global_matches_components: Option<bool>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.annihilates != Some(false)
            && self.groebner != Some(false)
            && self.global_matches_components != Some(false)
            && self.decomposition.as_ref().is_none_or(|d| d.passed())
    }
}

/// `B_glob(f)`.
pub fn global_bideal(prob: &Problem) -> Result<IdealHandle> {
    Ok(Analysis::new(prob.clone()).global()?.clone())
}

/// `B_loc,a(f)`.
pub fn local_bideal(prob: &Problem, a: &[Rational]) -> Result<IdealHandle> {
    Analysis::new(prob.clone()).local(a)
}

/// The nonempty strata with their local ideals.
pub fn stratify(prob: &Problem) -> Result<Vec<Stratum>> {
    Ok(Analysis::new(prob.clone()).strata()?.to_vec())
}

/// Indices of the components whose `x`-part vanishes at `a`.
pub fn select_sigma(components: &[PrimaryComponent], a: &[Rational]) -> Result<Vec<usize>> {
    let mut sigma = Vec::new();
    for (i, c) in components.iter().enumerate() {
        let n = c.x_part.universe().len();
        if a.len() != n {
            return Err(usage(format!("point has {} coordinates, expected {n}", a.len())));
        }
        let mut all = true;
        for g in c.x_part.generators() {
            if !vanishes(g, a)? {
                all = false;
                break;
            }
        }
        if all {
            sigma.push(i);
        }
    }
    Ok(sigma)
}

/// `(⋂_{i∈σ} Υ_i) ∩ ℚ[s]`, computed as `⋂_{i∈σ} (Υ_i ∩ ℚ[s])`; the unit ideal for empty `σ`.
fn sigma_bideal(components: &[PrimaryComponent], sigma: &[usize], s: &Arc<VarUniverse>) -> Result<IdealHandle> {
    let mut acc: Option<IdealHandle> = None;
    for &i in sigma {
        budget::check()?;
        let part = components[i].s_part.remap(s)?;
        acc = Some(match acc {
            None => part,
            Some(a) => intersect(&a, &part)?,
        });
    }
    let ideal = acc.unwrap_or_else(|| IdealHandle::unit(s));
    let basis = ideal.canonical_basis()?;
    Ok(IdealHandle::from_basis(s, (*basis).clone(), s.canonical_order().clone()))
}

struct Strata<'a> {
    components: &'a [PrimaryComponent],
    x: Arc<VarUniverse>,
    x_parts: Vec<IdealHandle>,
    closed: HashMap<Vec<usize>, IdealHandle>,
}

impl Strata<'_> {
    fn closed_ideal(&mut self, sigma: &[usize]) -> IdealHandle {
        if let Some(c) = self.closed.get(sigma) {
            return c.clone();
        }
        let gens: Vec<Polynomial> = sigma.iter().flat_map(|&i| self.x_parts[i].generators().to_vec()).collect();
        let c = IdealHandle::new(&self.x, gens);
        self.closed.insert(sigma.to_vec(), c.clone());
        c
    }

    /// `x`-part contained in the radical of `closed`, i.e. `V(closed) ⊆ V(x_part)`.
    fn vanishes_on(&self, i: usize, closed: &IdealHandle) -> Result<bool> {
        for g in self.x_parts[i].generators() {
            if !in_radical(g, closed)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest `τ ⊇ σ` with `V(closed(τ)) = V(closed(σ))` and every `x`-part vanishing there
    /// included.
    fn closure(&mut self, sigma: &BTreeSet<usize>) -> Result<Vec<usize>> {
        let base: Vec<usize> = sigma.iter().copied().collect();
        let closed = self.closed_ideal(&base);
        let mut out = Vec::new();
        for i in 0..self.components.len() {
            budget::check()?;
            if sigma.contains(&i) || self.vanishes_on(i, &closed)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `W_σ ≠ ∅` over `ℚ̄` iff `⋂_{k∉σ} x_part_k ⊄ √closed(σ)`.
    fn nonempty(&mut self, sigma: &[usize]) -> Result<bool> {
        let closed = self.closed_ideal(sigma);
        if closed.is_unit()? {
            return Ok(false);
        }
        let rest: Vec<usize> = (0..self.components.len()).filter(|k| !sigma.contains(k)).collect();
        let Some((&first, others)) = rest.split_first() else {
            return Ok(true);
        };
        let mut meet = self.x_parts[first].clone();
        for &k in others {
            budget::check()?;
            meet = intersect(&meet, &self.x_parts[k])?;
        }
        for g in meet.generators() {
            if !in_radical(g, &closed)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn build_strata(components: &[PrimaryComponent], x: &Arc<VarUniverse>, s: &Arc<VarUniverse>) -> Result<Vec<Stratum>> {
    let x_parts = components.iter().map(|c| c.x_part.remap(x)).collect::<Result<Vec<_>>>()?;
    let mut st = Strata { components, x: x.clone(), x_parts, closed: HashMap::new() };

    // every σ with W_σ ≠ ∅ is closed; walk the closed sets upward from the closure of ∅
    let start = st.closure(&BTreeSet::new())?;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = vec![start];
    let mut closed_sets = Vec::new();
    while let Some(sigma) = queue.pop() {
        if !seen.insert(sigma.clone()) {
            continue;
        }
        if st.closed_ideal(&sigma).is_unit()? {
            continue;
        }
        for i in 0..components.len() {
            if sigma.contains(&i) {
                continue;
            }
            let mut bigger: BTreeSet<usize> = sigma.iter().copied().collect();
            bigger.insert(i);
            let next = st.closure(&bigger)?;
            if !seen.contains(&next) {
                queue.push(next);
            }
        }
        closed_sets.push(sigma);
    }
    closed_sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut strata = Vec::new();
    for sigma in closed_sets {
        if !st.nonempty(&sigma)? {
            continue;
        }
        let closed_ideal = st.closed_ideal(&sigma);
        let closed_conditions = if sigma.is_empty() { Vec::new() } else { (*closed_ideal.canonical_basis()?).clone() };
        let open_conditions = (0..components.len())
            .filter(|k| !sigma.contains(k))
            .map(|k| st.x_parts[k].canonical_basis().map(|b| (*b).clone()))
            .collect::<Result<Vec<_>>>()?;
        let bideal = sigma_bideal(components, &sigma, s)?;
        strata.push(Stratum { sigma, closed_conditions, open_conditions, bideal, nonempty: true });
    }
    Ok(strata)
}

/// Outcome of comparing the global ideal with the intersection of the local ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Equal,
    NotEqual,
    /// Some retained stratum is not known to be nonempty, so a mismatch is not conclusive.
    Inconclusive,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckOutcome::Equal => "equal",
            CheckOutcome::NotEqual => "not-equal",
            CheckOutcome::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub outcome: CheckOutcome,
    /// Intersection of the stratum ideals.
    pub intersection: IdealHandle,
    pub global: IdealHandle,
}

/// Compares `B_glob(f)` with `⋂_σ B_σ` over the retained strata.
pub fn check_global_local(result: &BsatoResult) -> Result<CheckReport> {
    let s = result.global.universe().clone();
    let mut acc = IdealHandle::unit(&s);
    for st in &result.strata {
        acc = intersect(&acc, &st.bideal)?;
    }
    let same = equal(&acc, &result.global)?;
    let outcome = if same {
        CheckOutcome::Equal
    } else if result.strata.iter().all(|st| st.nonempty) {
        CheckOutcome::NotEqual
    } else {
        CheckOutcome::Inconclusive
    };
    Ok(CheckReport { outcome, intersection: acc, global: result.global.clone() })
}

/// Deterministic rational sample points: the integer grid `[−3,3]ⁿ`, then the same with
/// denominators 2 and 3.
pub fn sample_points(n: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for den in [1i64, 2, 3] {
        let vals: Vec<Rational> = (-3 * den..=3 * den)
            .filter(|k| den == 1 || k % den != 0)
            .map(|k| &Rational::from(k) / &Rational::from(den))
            .collect();
        let mut pts: Vec<Vec<Rational>> = vec![Vec::new()];
        for _ in 0..n {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(pts);
    }
    out
}
