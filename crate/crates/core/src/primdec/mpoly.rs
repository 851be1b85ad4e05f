//! Multivariate gcd, squarefree decomposition and factorization over ℚ(U)[w], where `w` is
//! one chosen variable and `U` all others.

use std::collections::HashMap;

use crate::arith::Rational;
use crate::budget;
use crate::error::Result;
use crate::qpoly::{Monomial, Polynomial};

use super::upoly::{q_divrem, q_ext_gcd, q_factor, q_mul, q_squarefree, QPoly};

/// Normalizes a nonzero polynomial to leading coefficient 1 under the canonical order.
fn normalize(p: Polynomial) -> Polynomial {
    if p.is_zero() {
        p
    } else {
        p.monic()
    }
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
fn prem(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = b.degree_in(v);
    let lb = b.coefficients_in(v).pop().unwrap();
    let u = a.universe().clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coefficients_in(v).pop().unwrap();
        let shift = Polynomial::term(&u, Monomial::var(u.len(), v, (dr - db) as u16), Rational::one());
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

/// Content of `p` with respect to `v`: gcd of its coefficients.
pub(crate) fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut g = Polynomial::zero(p.universe());
    for c in p.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Polynomial::one(p.universe());
        }
    }
    g
}

/// Primitive part with respect to `v`.
pub(crate) fn primitive_in(p: &Polynomial, v: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    normalize(p.div_exact(&c).expect("content divides"))
}

/// Greatest common divisor over ℚ, normalized to leading coefficient 1 (zero for two zeros).
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.universe());
    }
    let va = a.variables();
    let vb = b.variables();
    let v = *va.iter().find(|v| vb.contains(v)).unwrap_or(&va[0]);
    if !vb.contains(&v) {
        return gcd(&content_in(a, v), b);
    }
    if !va.contains(&v) {
        return gcd(a, &content_in(b, v));
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = primitive_in(&a.div_exact(&ca).unwrap(), v);
    let mut q = primitive_in(&b.div_exact(&cb).unwrap(), v);
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(v) == 0 {
            // q is a nonzero element free of v while p is primitive in v
            return normalize(c);
        }
        let r = prem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_in(&r, v) };
    }
    normalize(&c * &p)
}

/// Squarefree decomposition over ℚ(U)[w] of a polynomial primitive in `w`: factors of
/// positive `w`-degree, primitive in `w`, with multiplicities.
pub(crate) fn squarefree_in(f: &Polynomial, w: usize) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    if f.degree_in(w) == 0 {
        return out;
    }
    let f = primitive_in(f, w);
    let df = f.derivative(w);
    let a0 = gcd(&f, &df);
    let mut b = f.div_exact(&a0).unwrap();
    let c = df.div_exact(&a0).unwrap();
    let mut d = &c - &b.derivative(w);
    let mut i = 1u32;
    while b.degree_in(w) > 0 {
        let a = gcd(&b, &d);
        let nb = b.div_exact(&a).unwrap();
        let nc = d.div_exact(&a).unwrap();
        d = &nc - &nb.derivative(w);
        b = nb;
        if a.degree_in(w) > 0 {
            out.push((primitive_in(&a, w), i));
        }
        i += 1;
    }
    out
}

/// Irreducible factors over ℚ(U) of `f`, with multiplicities; each factor has positive
/// `w`-degree, is primitive in `w` and has leading coefficient 1 in the canonical order.
pub(crate) fn factor_in(f: &Polynomial, w: usize) -> Result<Vec<(Polynomial, u32)>> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_in(f, w) {
        for g in factor_squarefree_in(&part, w)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| a.0.degree_in(w).cmp(&b.0.degree_in(w)).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
    Ok(out)
}

fn u_degree(m: &Monomial, w: usize) -> u32 {
    m.degree() - m.get(w) as u32
}

fn truncate(p: &Polynomial, w: usize, k: u32) -> Polynomial {
    Polynomial::from_terms(
        p.universe(),
        p.terms().iter().filter(|(m, _)| u_degree(m, w) <= k).cloned(),
    )
}

fn mul_trunc(a: &Polynomial, b: &Polynomial, w: usize, k: u32) -> Polynomial {
    let mut acc: HashMap<Monomial, Rational> = HashMap::new();
    for (ma, ca) in a.terms() {
        let da = u_degree(ma, w);
        if da > k {
            continue;
        }
        for (mb, cb) in b.terms() {
            if da + u_degree(mb, w) > k {
                continue;
            }
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
    Polynomial::from_terms(a.universe(), acc)
}

fn from_q(universe: &std::sync::Arc<crate::qpoly::VarUniverse>, w: usize, q: &QPoly) -> Polynomial {
    Polynomial::from_univariate(universe, w, q)
}

/// Deterministic evaluation points: the origin, then points of growing height.
pub(crate) fn evaluation_points(nu: usize) -> impl Iterator<Item = Vec<i64>> {
    let mut height = 0i64;
    let mut queue: Vec<Vec<i64>> = vec![vec![0; nu]];
    std::iter::from_fn(move || loop {
        if let Some(p) = queue.pop() {
            return Some(p);
        }
        height += 1;
        if height > 64 {
            return None;
        }
        // all points with max |coordinate| == height, in a fixed order
        let vals: Vec<i64> = (-height..=height).collect();
        let mut pts = vec![vec![]];
        for _ in 0..nu {
            let mut next = Vec::new();
            for p in &pts {
                for &v in &vals {
                    let mut q: Vec<i64> = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            pts = next;
        }
        pts.retain(|p| p.iter().any(|v| v.abs() == height));
        pts.sort_by_key(|p| (p.iter().map(|v| v.abs()).sum::<i64>(), p.clone()));
        pts.reverse();
        queue = pts;
    })
}

fn factor_squarefree_in(f: &Polynomial, w: usize) -> Result<Vec<Polynomial>> {
    let u = f.universe().clone();
    let d = f.degree_in(w);
    if d <= 1 {
        return Ok(vec![normalize(f.clone())]);
    }
    let params: Vec<usize> = f.variables().into_iter().filter(|&v| v != w).collect();
    if params.is_empty() {
        let q = f.univariate_coeffs(w).unwrap();
        let (_, facs) = q_factor(&q);
        return Ok(facs.into_iter().map(|(g, _)| normalize(from_q(&u, w, &g))).collect());
    }

    // monic transform: F̃(w) = lc^{d-1} F(w / lc)
    let coeffs = f.coefficients_in(w);
    let lc = coeffs[d as usize].clone();
    let mut tilde = Polynomial::zero(&u);
    let mut lc_pows = vec![Polynomial::one(&u)];
    for k in 1..d as usize {
        let next = &lc_pows[k - 1] * &lc;
        lc_pows.push(next);
    }
    for (k, c) in coeffs.iter().enumerate() {
        if k == d as usize {
            tilde = &tilde + &Polynomial::term(&u, Monomial::var(u.len(), w, d as u16), Rational::one());
        } else if !c.is_zero() {
            let t = &(c * &lc_pows[d as usize - 1 - k]) * &Polynomial::term(&u, Monomial::var(u.len(), w, k as u16), Rational::one());
            tilde = &tilde + &t;
        }
    }

    // degree bound for coefficients of monic factors
    let tc = tilde.coefficients_in(w);
    let mut rho = 0f64;
    for (k, c) in tc.iter().enumerate().take(d as usize) {
        if !c.is_zero() {
            rho = rho.max(c.degree() as f64 / (d as f64 - k as f64));
        }
    }
    let bound = (rho * d as f64 + 1e-9).floor() as u32;

    // evaluation point keeping the image squarefree; prefer few univariate factors
    let mut best: Option<(Vec<i64>, Vec<QPoly>)> = None;
    let mut found = 0;
    for pt in evaluation_points(params.len()) {
        budget::check()?;
        let vals: Vec<(usize, Rational)> = params.iter().zip(&pt).map(|(&v, &a)| (v, Rational::from(a))).collect();
        let img = tilde.substitute_values(&vals).univariate_coeffs(w).unwrap();
        let sf = q_squarefree(&img);
        if sf.len() != 1 || sf[0].1 != 1 {
            continue;
        }
        let (_, facs) = q_factor(&img);
        if facs.len() == 1 {
            return Ok(vec![primitive_in(f, w)]);
        }
        let facs: Vec<QPoly> = facs.into_iter().map(|(g, _)| g).collect();
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((pt, facs));
        }
        found += 1;
        if found == 3 {
            break;
        }
    }
    let (pt, facs) = best.expect("a squarefree specialization exists");

    // shift the point to the origin
    let mut g = tilde.clone();
    for (&v, &a) in params.iter().zip(&pt) {
        if a != 0 {
            let shifted = &Polynomial::var(&u, v) + &Polynomial::constant(&u, Rational::from(a));
            g = g.substitute(v, &shifted);
        }
    }

    let lifted = lift(&g, &facs, w, bound)?;

    // recombination
    let mut remaining = lifted;
    let mut target = g.clone();
    let mut found_factors = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= remaining.len() {
        let idx: Vec<usize> = (0..remaining.len()).collect();
        for comb in combos(&idx, s) {
            budget::check()?;
            let mut cand = Polynomial::one(&u);
            for &i in &comb {
                cand = mul_trunc(&cand, &remaining[i], w, bound);
            }
            if let Some(q) = target.div_exact(&cand) {
                found_factors.push(cand);
                target = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !comb.contains(i))
                    .map(|(_, g)| g)
                    .collect();
                continue 'outer;
            }
        }
        s += 1;
    }
    if target.degree_in(w) > 0 {
        found_factors.push(target);
    }

    // undo the shift and the monic transform
    let lcw = &lc * &Polynomial::var(&u, w);
    let mut out = Vec::new();
    for mut h in found_factors {
        for (&v, &a) in params.iter().zip(&pt) {
            if a != 0 {
                let shifted = &Polynomial::var(&u, v) - &Polynomial::constant(&u, Rational::from(a));
                h = h.substitute(v, &shifted);
            }
        }
        let h = h.substitute(w, &lcw);
        out.push(primitive_in(&h, w));
    }
    Ok(out)
}

fn combos(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Lifts monic univariate factors of `g(w, 0)` to factors of `g` modulo `⟨U⟩^(bound+1)`.
fn lift(g: &Polynomial, facs: &[QPoly], w: usize, bound: u32) -> Result<Vec<Polynomial>> {
    let u = g.universe().clone();
    let r = facs.len();
    let mut cof = Vec::with_capacity(r);
    for i in 0..r {
        let mut prod: QPoly = vec![Rational::one()];
        for (j, f) in facs.iter().enumerate() {
            if j != i {
                prod = q_mul(&prod, f);
            }
        }
        cof.push(prod);
    }
    let mut s: Vec<QPoly> = vec![vec![Rational::one()]];
    let mut acc = cof[0].clone();
    for c in cof.iter().skip(1) {
        let (gg, a, b) = q_ext_gcd(&acc, c);
        for x in s.iter_mut() {
            *x = q_mul(x, &a);
        }
        s.push(b);
        acc = gg;
    }
    debug_assert_eq!(acc.len(), 1);
    let s: Vec<QPoly> = s.iter().zip(facs).map(|(x, f)| q_divrem(x, f).1).collect();

    let mut lifted: Vec<Polynomial> = facs.iter().map(|f| from_q(&u, w, f)).collect();
    for k in 1..=bound {
        budget::check()?;
        let mut prod = Polynomial::one(&u);
        for h in &lifted {
            prod = mul_trunc(&prod, h, w, k);
        }
        let err = &truncate(g, w, k) - &prod;
        // degree-k part grouped by U-monomial
        let mut groups: HashMap<Monomial, QPoly> = HashMap::new();
        for (m, c) in err.terms() {
            if u_degree(m, w) != k {
                continue;
            }
            let e = m.get(w) as usize;
            let mut key = m.clone();
            key.set(w, 0);
            let q = groups.entry(key).or_default();
            if q.len() <= e {
                q.resize(e + 1, Rational::zero());
            }
            q[e] = c.clone();
        }
        let mut keys: Vec<&Monomial> = groups.keys().collect();
        keys.sort_by(|a, b| a.exps().cmp(b.exps()));
        let mut updates: Vec<Polynomial> = vec![Polynomial::zero(&u); r];
        for key in keys {
            let c = super::upoly::q_trim(groups[key].clone());
            for i in 0..r {
                let sigma = q_divrem(&q_mul(&c, &s[i]), &facs[i]).1;
                if sigma.is_empty() {
                    continue;
                }
                let t = from_q(&u, w, &sigma).mul_monomial(key, &Rational::one());
                updates[i] = &updates[i] + &t;
            }
        }
        for (h, up) in lifted.iter_mut().zip(updates) {
            *h = &*h + &up;
        }
    }
    Ok(lifted)
}
