//! Normally ordered multiplication in the Weyl algebra, as a reduction algebra for the shared
//! Buchberger engine.

use std::collections::HashMap;

use crate::arith::Int;
use crate::ideals::engine::{collect_sorted, Algebra, Coeff, Term};
use crate::qpoly::{Monomial, TermOrder, VarUniverse};

/// Multiplication rule `∂^b · x^c = Σ_k k!·C(b,k)·C(c,k) · x^(c−k) ∂^(b−k)` for every
/// `(position, derivation)` pair of a universe; all other variables commute.
#[derive(Clone, Debug)]
pub(crate) struct WeylAlgebra {
    pairs: Vec<(usize, usize)>,
}

fn binomial(n: u32, k: u32) -> Int {
    let mut acc = Int::ONE;
    for i in 0..k {
        acc = (&acc * &Int::from((n - i) as i64)).div_exact(&Int::from((i + 1) as i64));
    }
    acc
}

fn factorial(k: u32) -> Int {
    let mut acc = Int::ONE;
    for i in 2..=k {
        acc = &acc * &Int::from(i as i64);
    }
    acc
}

impl WeylAlgebra {
    pub fn new(universe: &VarUniverse) -> Self {
        WeylAlgebra { pairs: universe.weyl_pairs() }
    }

    /// True when `m · n` involves no reordering.
    fn commutes(&self, m: &Monomial, n: &Monomial) -> bool {
        self.pairs.iter().all(|&(x, d)| m.get(d) == 0 || n.get(x) == 0)
    }

    /// Calls `emit` on every term of the normally ordered product `m · n`.
    pub fn mono_mul(&self, m: &Monomial, n: &Monomial, mut emit: impl FnMut(Monomial, Int)) {
        let base = m.mul(n);
        let active: Vec<(usize, usize, u32, u32)> = self
            .pairs
            .iter()
            .filter_map(|&(x, d)| {
                let (b, c) = (m.get(d) as u32, n.get(x) as u32);
                (b > 0 && c > 0).then_some((x, d, b, c))
            })
            .collect();
        if active.is_empty() {
            emit(base, Int::ONE);
            return;
        }
        let coeffs: Vec<Vec<Int>> = active
            .iter()
            .map(|&(_, _, b, c)| {
                (0..=b.min(c))
                    .map(|k| &(&factorial(k) * &binomial(b, k)) * &binomial(c, k))
                    .collect()
            })
            .collect();
        let mut ks = vec![0usize; active.len()];
        loop {
            let mut mono = base.clone();
            let mut coef = Int::ONE;
            for (a, &(x, d, _, _)) in active.iter().enumerate() {
                let k = ks[a];
                if k > 0 {
                    mono.set(x, mono.get(x) - k as u16);
                    mono.set(d, mono.get(d) - k as u16);
                    coef = &coef * &coeffs[a][k];
                }
            }
            emit(mono, coef);
            // next multi-index
            let mut a = 0;
            loop {
                if a == ks.len() {
                    return;
                }
                ks[a] += 1;
                if ks[a] < coeffs[a].len() {
                    break;
                }
                ks[a] = 0;
                a += 1;
            }
        }
    }
}

impl Algebra for WeylAlgebra {
    fn commutative(&self) -> bool {
        false
    }

    fn mul_term<C: Coeff>(&self, m: &Monomial, c: &C, g: &[Term<C>], order: &TermOrder) -> Vec<Term<C>> {
        if g.iter().all(|(t, _)| self.commutes(m, t)) {
            return g.iter().map(|(t, x)| (m.mul(t), x.mul(c))).collect();
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(g.len() * 2);
        for (t, x) in g {
            let scaled = x.mul(c);
            self.mono_mul(m, t, |mono, k| {
                let v = if k.is_one() { scaled.clone() } else { scaled.mul_int(&k) };
                match acc.get_mut(&mono) {
                    Some(e) => *e = e.add(&v),
                    None => {
                        acc.insert(mono, v);
                    }
                }
            });
        }
        collect_sorted(acc, order)
    }
}
