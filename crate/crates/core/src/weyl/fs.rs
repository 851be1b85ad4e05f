//! Symbolic action of `D⟨t,∂t⟩[s]` on `f^s` inside `ℚ[x, 1/F, s]·f^s`.

use std::collections::HashMap;
use std::fmt;

use crate::arith::Rational;
use crate::error::{usage, Result};
use crate::qpoly::{Monomial, Polynomial, VarClass};

use super::{WeylElement, WeylRings};

/// `(numerator / F^m) · f^s` with the numerator in `ℚ[x,s]`.
#[derive(Clone, PartialEq, Eq)]
pub struct FsElement {
    numerator: Polynomial,
    m: u32,
}

impl FsElement {
    /// Builds `num / F^m · f^s`, cancelling powers of `F` from the numerator.
    pub fn new(numerator: Polynomial, m: u32, big_f: &Polynomial) -> Self {
        let mut e = FsElement { numerator, m };
        e.canonicalize(big_f);
        e
    }

    fn canonicalize(&mut self, big_f: &Polynomial) {
        if self.numerator.is_zero() {
            self.m = 0;
            return;
        }
        while self.m > 0 {
            match self.numerator.div_exact(big_f) {
                Some(q) => {
                    self.numerator = q;
                    self.m -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

impl fmt::Debug for FsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / F^{} · f^s", self.numerator, self.m)
    }
}

struct Action<'a> {
    rings: &'a WeylRings,
    f: Vec<Polynomial>,
    big_f: Polynomial,
    /// `F / f_j`
    cofactor: Vec<Polynomial>,
    /// `∂F/∂x_i` and `∂f_j/∂x_i`
    d_big_f: Vec<Polynomial>,
    df: Vec<Vec<Polynomial>>,
    f_pows: Vec<Polynomial>,
    memo: HashMap<Vec<u16>, FsElement>,
}

impl<'a> Action<'a> {
    fn new(rings: &'a WeylRings, f: &[Polynomial]) -> Result<Self> {
        let f: Vec<Polynomial> = f.iter().map(|q| q.remap(&rings.xs)).collect::<Result<_>>()?;
        let mut big_f = Polynomial::one(&rings.xs);
        for q in &f {
            big_f = &big_f * q;
        }
        let cofactor = f.iter().map(|q| big_f.div_exact(q).expect("f_j divides F")).collect();
        let d_big_f = (0..rings.n).map(|i| big_f.derivative(i)).collect();
        let df = (0..rings.n).map(|i| f.iter().map(|q| q.derivative(i)).collect()).collect();
        Ok(Action {
            rings,
            f,
            big_f: big_f.clone(),
            cofactor,
            d_big_f,
            df,
            f_pows: vec![Polynomial::one(&rings.xs)],
            memo: HashMap::new(),
        })
    }

    fn f_pow(&mut self, k: u32) -> Polynomial {
        while self.f_pows.len() <= k as usize {
            let next = self.f_pows.last().unwrap() * &self.big_f;
            self.f_pows.push(next);
        }
        self.f_pows[k as usize].clone()
    }

    fn make(&self, num: Polynomial, m: u32) -> FsElement {
        FsElement::new(num, m, &self.big_f)
    }

    /// `∂x_i · (g / F^m) f^s`
    fn dx(&self, e: &FsElement, i: usize) -> FsElement {
        let g = &e.numerator;
        let mut num = &g.derivative(i) * &self.big_f;
        if e.m > 0 {
            let c = Rational::from(e.m as i64);
            num = &num - &(g * &self.d_big_f[i]).scale(&c);
        }
        for j in 0..self.rings.p {
            let s = Polynomial::var(&self.rings.xs, self.rings.s_index(j));
            num = &num + &(&(&s * &self.df[i][j]) * &(g * &self.cofactor[j]));
        }
        self.make(num, e.m + 1)
    }

    fn shift(&self, g: &Polynomial, j: usize, by: i64) -> Polynomial {
        let si = self.rings.s_index(j);
        let s = Polynomial::var(&self.rings.xs, si);
        let shifted = &s + &Polynomial::constant(&self.rings.xs, Rational::from(by));
        g.substitute(si, &shifted)
    }

    /// `t_j · g(s) f^s = g(s + e_j) f_j f^s`
    fn t(&self, e: &FsElement, j: usize) -> FsElement {
        let num = &self.shift(&e.numerator, j, 1) * &self.f[j];
        self.make(num, e.m)
    }

    /// `∂t_j · g(s) f^s = −s_j g(s − e_j) f_j^{-1} f^s`
    fn dt(&self, e: &FsElement, j: usize) -> FsElement {
        let s = Polynomial::var(&self.rings.xs, self.rings.s_index(j));
        let num = -&(&(&s * &self.shift(&e.numerator, j, -1)) * &self.cofactor[j]);
        self.make(num, e.m + 1)
    }

    /// `∂x^β t^γ ∂t^δ · f^s`, keyed by the concatenated exponents `(β, γ, δ)`.
    fn operator(&mut self, key: &[u16]) -> FsElement {
        if let Some(v) = self.memo.get(key) {
            return v.clone();
        }
        let (n, p) = (self.rings.n, self.rings.p);
        let out = match key.iter().position(|&e| e > 0) {
            None => self.make(Polynomial::one(&self.rings.xs), 0),
            Some(k) => {
                let mut rest = key.to_vec();
                rest[k] -= 1;
                let inner = self.operator(&rest);
                if k < n {
                    self.dx(&inner, k)
                } else if k < n + p {
                    self.t(&inner, k - n)
                } else {
                    // only ∂t left: every earlier slot is zero
                    self.dt(&inner, k - n - p)
                }
            }
        };
        self.memo.insert(key.to_vec(), out.clone());
        out
    }
}

/// Image of `f^s` under `P`, for `P` in a universe with classes among `X, Dx, T, Dt, S`.
/// A monomial `x^α s^η ∂x^β t^γ ∂t^δ` acts as `∂t^δ` first, then `t^γ`, then `∂x^β`, then
/// multiplication by `x^α s^η`. Position variables are matched to `f` by name, the `k`-th
/// derivation, `t`, `∂t` and `s` variable of `P` by rank.
pub fn apply_to_fs(op: &WeylElement, f: &[Polynomial]) -> Result<FsElement> {
    if f.is_empty() || f.iter().any(|q| q.is_zero()) {
        return Err(usage("f must be a nonempty tuple of nonzero polynomials"));
    }
    let rings = WeylRings::new(f[0].universe(), f.len())?;
    let (n, p) = (rings.n, rings.p);
    let pu = op.universe().clone();

    // x and s multiply (index in xs); the others are operator slots
    enum Slot {
        Mult(usize),
        Op(usize),
    }
    let mut slots = Vec::with_capacity(pu.len());
    let mut rank = HashMap::<VarClass, usize>::new();
    for v in pu.vars() {
        let r = rank.entry(v.class).or_insert(0);
        let k = *r;
        *r += 1;
        let slot = match v.class {
            VarClass::X => Slot::Mult(
                rings
                    .xs
                    .index_of(&v.name)
                    .filter(|&i| i < n)
                    .ok_or_else(|| usage(format!("variable `{}` does not occur in f's ring", v.name)))?,
            ),
            VarClass::S if k < p => Slot::Mult(rings.s_index(k)),
            VarClass::Dx => {
                let partner = &pu.var(v.partner.expect("paired derivation")).name;
                let i = rings.x.index_of(partner).ok_or_else(|| usage(format!("no variable `{partner}` in f's ring")))?;
                Slot::Op(i)
            }
            VarClass::T if k < p => Slot::Op(n + k),
            VarClass::Dt if k < p => Slot::Op(n + p + k),
            _ => return Err(usage(format!("variable `{}` cannot act on f^s", v.name))),
        };
        slots.push(slot);
    }

    let mut act = Action::new(&rings, f)?;
    let mut parts: Vec<(Polynomial, u32)> = Vec::new();
    for (mono, c) in op.terms() {
        let mut key = vec![0u16; n + 2 * p];
        let mut mult = Monomial::one(rings.xs.len());
        for (i, &e) in mono.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            match slots[i] {
                Slot::Mult(j) => mult.set(j, mult.get(j) + e),
                Slot::Op(j) => key[j] += e,
            }
        }
        let base = act.operator(&key);
        if base.is_zero() {
            continue;
        }
        parts.push((base.numerator.mul_monomial(&mult, c), base.m));
    }
    let top = parts.iter().map(|(_, m)| *m).max().unwrap_or(0);
    let mut num = Polynomial::zero(&rings.xs);
    for (q, m) in parts {
        let lift = act.f_pow(top - m);
        num = &num + &(&q * &lift);
    }
    Ok(act.make(num, top))
}
