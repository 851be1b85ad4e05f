//! `ann_{D[s]} f^s` through the `u,v`-elimination route, and its contraction to `ℚ[x,s]`.

use crate::arith::Rational;
use crate::budget;
use crate::error::{usage, Result};
use crate::ideals::IdealHandle;
use crate::qpoly::{same_universe, Monomial, Polynomial, TermOrder};

use super::{apply_to_fs, computation, weyl_buchberger, weyl_mul, WeylElement, WeylRings};

/// Intermediate data of the annihilator computation.
#[derive(Clone, Debug)]
pub struct AnnTranscript {
    /// `u,v`-free elements of the eliminating basis, in `D⟨t,∂t⟩`.
    pub eliminated: Vec<WeylElement>,
    /// Weight (`t_j ↦ +1`, `∂t_j ↦ −1`) of each eliminated element.
    pub multidegrees: Vec<Vec<i64>>,
}

/// Generators of `I₁ = ann_{D[s]} f^s`.
#[derive(Clone, Debug)]
pub struct AnnResult {
    pub rings: WeylRings,
    /// The input tuple, in `ℚ[x]`.
    pub f: Vec<Polynomial>,
    /// Generators in `D[s]`.
    pub i1: Vec<WeylElement>,
    pub transcript: AnnTranscript,
}

fn validate(f: &[Polynomial]) -> Result<()> {
    if f.is_empty() {
        return Err(usage("at least one polynomial is required"));
    }
    if f.iter().any(|q| q.is_zero()) {
        return Err(usage("the polynomials must be nonzero"));
    }
    let u = f[0].universe();
    if f.iter().any(|q| !same_universe(u, q.universe())) {
        return Err(usage("the polynomials must share one ring"));
    }
    if u.is_empty() {
        return Err(usage("at least one variable is required"));
    }
    Ok(())
}

struct Layout {
    n: usize,
    p: usize,
}

impl Layout {
    fn dx(&self, i: usize) -> usize {
        self.n + i
    }
    fn t(&self, j: usize) -> usize {
        2 * self.n + j
    }
    fn dt(&self, j: usize) -> usize {
        2 * self.n + self.p + j
    }
    fn u(&self, j: usize) -> usize {
        2 * self.n + 2 * self.p + j
    }
    fn v(&self, j: usize) -> usize {
        2 * self.n + 3 * self.p + j
    }
}

/// The generators `t_j − u_j f_j`, `∂x_i + Σ_j u_j (∂f_j/∂x_i) ∂t_j` and `1 − u_j v_j`.
pub(crate) fn uv_generators(rings: &WeylRings, f: &[Polynomial]) -> Result<Vec<WeylElement>> {
    let u = &rings.dtuv;
    let lay = Layout { n: rings.n, p: rings.p };
    let var = |i: usize| Polynomial::var(u, i);
    let fx: Vec<Polynomial> = f.iter().map(|q| q.remap(u)).collect::<Result<_>>()?;
    let mut gens = Vec::new();
    for j in 0..lay.p {
        gens.push(&var(lay.t(j)) - &(&var(lay.u(j)) * &fx[j]));
    }
    for i in 0..lay.n {
        let mut g = var(lay.dx(i));
        for j in 0..lay.p {
            let d = fx[j].derivative(i);
            g = &g + &(&(&var(lay.u(j)) * &d) * &var(lay.dt(j)));
        }
        gens.push(g);
    }
    for j in 0..lay.p {
        gens.push(&Polynomial::one(u) - &(&var(lay.u(j)) * &var(lay.v(j))));
    }
    Ok(gens.into_iter().map(WeylElement::from_normal_ordered).collect())
}

fn weight(m: &Monomial, lay: &Layout) -> Vec<i64> {
    (0..lay.p).map(|j| m.get(lay.t(j)) as i64 - m.get(lay.dt(j)) as i64).collect()
}

/// Rewrites a weight-zero element of `D⟨t,∂t⟩` into `D[s]` using
/// `t_j^a ∂t_j^a = ∏_{k<a} (−s_j − 1 − k)`.
fn to_ds(e: &WeylElement, rings: &WeylRings, lay: &Layout) -> Result<WeylElement> {
    let ds = &rings.ds;
    let (n, p) = (lay.n, lay.p);
    let mut acc = Polynomial::zero(ds);
    let mut falling: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(ds)]; p];
    for (m, c) in e.terms() {
        let mut base = Monomial::one(ds.len());
        for i in 0..n {
            base.set(i, m.get(i));
            base.set(n + i, m.get(lay.dx(i)));
        }
        let mut term = Polynomial::term(ds, base, c.clone());
        for j in 0..p {
            let a = m.get(lay.t(j)) as usize;
            if a != m.get(lay.dt(j)) as usize {
                return Err(computation("normalized annihilator term has nonzero weight"));
            }
            let s = Polynomial::var(ds, 2 * n + j);
            while falling[j].len() <= a {
                let k = falling[j].len() - 1;
                let factor = &(-&s) - &Polynomial::constant(ds, Rational::from(1 + k as i64));
                let next = &falling[j][k] * &factor;
                falling[j].push(next);
            }
            term = &term * &falling[j][a];
        }
        acc = &acc + &term;
    }
    Ok(WeylElement::from_normal_ordered(acc))
}

/// Generators of `ann_{D[s]} f^s`. Every returned generator is checked to annihilate `f^s`.
pub fn ann_fs(f: &[Polynomial]) -> Result<AnnResult> {
    validate(f)?;
    budget::enter_stage("annihilator")?;
    let rings = WeylRings::new(f[0].universe(), f.len())?;
    let lay = Layout { n: rings.n, p: rings.p };
    let u = rings.dtuv.clone();

    let gens = uv_generators(&rings, f)?;
    let uv: Vec<usize> = (0..lay.p).flat_map(|j| [lay.u(j), lay.v(j)]).collect();
    let order = TermOrder::elimination(u.len(), &uv);
    let basis = weyl_buchberger(&gens, &order)?;

    let allowed: Vec<bool> = (0..u.len()).map(|i| !uv.contains(&i)).collect();
    let mut eliminated = Vec::new();
    let mut multidegrees = Vec::new();
    let mut i1 = Vec::new();
    for g in basis.into_iter().filter(|g| g.as_polynomial().supported_in(&allowed)) {
        let d = weight(&g.terms()[0].0, &lay);
        if g.terms().iter().any(|(m, _)| weight(m, &lay) != d) {
            return Err(computation(format!("eliminated element {g} is not weight-homogeneous")));
        }
        let mut left = WeylElement::one(&u);
        for (j, &dj) in d.iter().enumerate() {
            let (var, e) = if dj > 0 { (lay.dt(j), dj) } else { (lay.t(j), -dj) };
            if e > 0 {
                let m = WeylElement::from_normal_ordered(Polynomial::term(
                    &u,
                    Monomial::var(u.len(), var, e as u16),
                    Rational::one(),
                ));
                left = weyl_mul(&left, &m);
            }
        }
        let normalized = weyl_mul(&left, &g);
        let h = to_ds(&normalized, &rings, &lay)?;
        if !h.is_zero() {
            i1.push(h);
        }
        eliminated.push(g);
        multidegrees.push(d);
    }

    for g in &i1 {
        budget::check()?;
        if !apply_to_fs(g, f)?.is_zero() {
            return Err(computation(format!("annihilator generator {g} does not annihilate f^s")));
        }
    }
    Ok(AnnResult {
        rings,
        f: f.to_vec(),
        i1,
        transcript: AnnTranscript { eliminated, multidegrees },
    })
}

/// `I₂ = (I₁ + D[s]·F) ∩ ℚ[x,s]`, as an ideal of `ℚ[x,s]` whose generators are its reduced
/// degrevlex basis.
pub fn compute_i2(ann: &AnnResult, f: &[Polynomial]) -> Result<IdealHandle> {
    validate(f)?;
    budget::enter_stage("contraction")?;
    let rings = &ann.rings;
    if !same_universe(f[0].universe(), &rings.x) || f.len() != rings.p {
        return Err(usage("annihilator was computed for another tuple"));
    }
    let ds = &rings.ds;
    let mut big_f = Polynomial::one(ds);
    for q in f {
        big_f = &big_f * &q.remap(ds)?;
    }
    let mut gens = ann.i1.clone();
    gens.push(WeylElement::from_normal_ordered(big_f));
    let dx: Vec<usize> = (rings.n..2 * rings.n).collect();
    let order = TermOrder::weighted_elimination(ds.len(), &dx);
    let basis = weyl_buchberger(&gens, &order)?;
    let allowed: Vec<bool> = (0..ds.len()).map(|i| !dx.contains(&i)).collect();
    let kept: Vec<Polynomial> = basis
        .into_iter()
        .filter(|g| g.as_polynomial().supported_in(&allowed))
        .map(|g| g.into_polynomial().remap(&rings.xs))
        .collect::<Result<_>>()?;
    Ok(IdealHandle::from_basis(&rings.xs, kept, rings.xs.canonical_order().clone()))
}
