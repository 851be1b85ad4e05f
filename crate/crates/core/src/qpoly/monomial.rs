use std::fmt;

use smallvec::SmallVec;

pub type Exp = u16;

/// Power product over a fixed universe, stored as a dense exponent vector.
#[derive(PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[Exp; 24]>);

impl Clone for Monomial {
    #[inline]
    fn clone(&self) -> Self {
        Monomial(SmallVec::from_slice(&self.0))
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize, e: Exp) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn from_exponents(exps: &[Exp]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn exps(&self) -> &[Exp] {
        &self.0
    }

    #[inline]
    pub fn exps_mut(&mut self) -> &mut [Exp] {
        &mut self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> Exp {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, e: Exp) {
        self.0[i] = e;
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| self.0[i] as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    #[inline]
    fn zip_with(&self, other: &Monomial, f: impl Fn(Exp, Exp) -> Exp) -> Monomial {
        let mut r = self.clone();
        for (a, b) in r.0.iter_mut().zip(&other.0) {
            *a = f(*a, *b);
        }
        r
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a + b)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a.max(b))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a.min(b))
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// True when no variable outside `allowed` occurs.
    pub fn supported_in(&self, allowed: &[bool]) -> bool {
        self.0.iter().zip(allowed).all(|(e, ok)| *ok || *e == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}
