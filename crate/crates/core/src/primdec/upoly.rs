//! Dense univariate polynomials over ℚ, ℤ and ℤ/p, and factorization over ℚ
//! (squarefree decomposition, Cantor–Zassenhaus modulo a word-size prime, Hensel lifting,
//! recombination of lifted factors).

use rug::ops::Pow;
use rug::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Int, Rational};

/// Coefficients from the constant term up; no trailing zeros.
pub(crate) type QPoly = Vec<Rational>;
pub(crate) type ZPoly = Vec<Int>;
type PPoly = Vec<u64>;

// ---- ℚ[x] ---------------------------------------------------------------------------------

pub(crate) fn q_trim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn q_deg(a: &QPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    q_trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

pub(crate) fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    q_trim(out)
}

pub(crate) fn q_scale(a: &QPoly, c: &Rational) -> QPoly {
    q_trim(a.iter().map(|x| x * c).collect())
}

/// Quotient and remainder; `b` nonzero.
pub(crate) fn q_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = q_deg(b).expect("division by zero polynomial");
    let inv = b[db].inv();
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while let Some(dr) = q_deg(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &inv;
        let shift = dr - db;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &(&c * y);
        }
        q[shift] = c;
        r = q_trim(r);
    }
    (q_trim(q), r)
}

pub(crate) fn q_monic(a: &QPoly) -> QPoly {
    match a.last() {
        Some(lc) => q_scale(a, &lc.inv()),
        None => Vec::new(),
    }
}

/// Monic gcd (zero if both are zero).
pub(crate) fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = q_divrem(&a, &b);
        a = b;
        b = r;
    }
    q_monic(&a)
}

/// `(g, s, t)` with `s·a + t·b = g` and `g` the monic gcd.
pub(crate) fn q_ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = q_divrem(&r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = q_sub(&s0, &q_mul(&q, &s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = q_sub(&t0, &q_mul(&q, &t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        Some(lc) => {
            let inv = lc.inv();
            (q_scale(&r0, &inv), q_scale(&s0, &inv), q_scale(&t0, &inv))
        }
        None => (r0, s0, t0),
    }
}

pub(crate) fn q_derivative(a: &QPoly) -> QPoly {
    q_trim(a.iter().enumerate().skip(1).map(|(i, c)| c * &Rational::from(i as i64)).collect())
}

/// Yun's algorithm: monic, pairwise coprime squarefree factors with multiplicities.
pub(crate) fn q_squarefree(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    if q_deg(f).unwrap_or(0) == 0 {
        return out;
    }
    let f = q_monic(f);
    let df = q_derivative(&f);
    let a0 = q_gcd(&f, &df);
    let mut b = q_divrem(&f, &a0).0;
    let c = q_divrem(&df, &a0).0;
    let mut d = q_sub(&c, &q_derivative(&b));
    let mut i = 1u32;
    while q_deg(&b).unwrap_or(0) > 0 {
        let a = q_gcd(&b, &d);
        let nb = q_divrem(&b, &a).0;
        let nc = q_divrem(&d, &a).0;
        d = q_sub(&nc, &q_derivative(&nb));
        b = nb;
        if q_deg(&a).unwrap_or(0) > 0 {
            out.push((q_monic(&a), i));
        }
        i += 1;
    }
    out
}

/// Primitive integer polynomial with positive leading coefficient.
pub(crate) fn q_to_z(a: &QPoly) -> ZPoly {
    let mut den = Int::ONE;
    for c in a {
        let g = den.gcd(c.denom());
        den = &den * &c.denom().div_exact(&g);
    }
    let z: ZPoly = a.iter().map(|c| c.numer() * &den.div_exact(c.denom())).collect();
    z_primitive(&z)
}

pub(crate) fn z_to_q(a: &ZPoly) -> QPoly {
    q_trim(a.iter().map(|c| Rational::from_int(c.clone())).collect())
}

// ---- ℤ[x] ---------------------------------------------------------------------------------

fn z_trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn z_primitive(a: &ZPoly) -> ZPoly {
    let mut g = Int::ZERO;
    for c in a {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return Vec::new();
    }
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    z_trim(a.iter().map(|c| c.div_exact(&g)).collect())
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    z_trim(out)
}

/// Exact quotient over ℤ, if any.
fn z_div_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut q = vec![Int::ZERO; r.len() - db];
    while !r.is_empty() {
        let dr = r.len() - 1;
        if dr < db {
            return None;
        }
        let (c, rem) = r[dr].div_rem_euclid(lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = dr - db;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &(&c * y);
        }
        q[shift] = c;
        r = z_trim(r);
    }
    Some(z_trim(q))
}

fn z_mod(a: &ZPoly, m: &Int) -> ZPoly {
    z_trim(a.iter().map(|c| c.div_rem_euclid(m).1).collect())
}

fn z_symmetric(a: &ZPoly, m: &Int) -> ZPoly {
    z_trim(a.iter().map(|c| c.symmetric_mod(m)).collect())
}

// ---- ℤ/p[x] -------------------------------------------------------------------------------

fn p_trim(mut a: PPoly) -> PPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn p_from_z(a: &ZPoly, p: u64) -> PPoly {
    p_trim(a.iter().map(|c| c.mod_u64(p)).collect())
}

fn p_to_z(a: &PPoly) -> ZPoly {
    a.iter().map(|&c| Int::from(c)).collect()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn p_sub(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let n = a.len().max(b.len());
    p_trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn p_mul(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    p_trim(out)
}

fn p_divrem(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * inv % p;
        let shift = dr - db;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * y % p) % p;
        }
        q[shift] = c;
        r = p_trim(r);
    }
    (p_trim(q), r)
}

fn p_monic(a: &PPoly, p: u64) -> PPoly {
    match a.last() {
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
        None => Vec::new(),
    }
}

fn p_gcd(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = p_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    p_monic(&a, p)
}

fn p_ext_gcd(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly, PPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = p_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = p_sub(&s0, &p_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = p_sub(&t0, &p_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &PPoly| p_trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn p_derivative(a: &PPoly, p: u64) -> PPoly {
    p_trim(a.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect())
}

fn p_powmod(base: &PPoly, e: &Integer, m: &PPoly, p: u64) -> PPoly {
    let mut r: PPoly = vec![1];
    let b = p_divrem(base, m, p).1;
    for i in (0..e.significant_bits()).rev() {
        r = p_divrem(&p_mul(&r, &r, p), m, p).1;
        if e.get_bit(i) {
            r = p_divrem(&p_mul(&r, &b, p), m, p).1;
        }
    }
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn p_ddf(f: &PPoly, p: u64) -> Vec<(PPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: PPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    let pe = Integer::from(p);
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.clone(), f.len() - 1));
            break;
        }
        h = p_powmod(&h, &pe, &f, p);
        let g = p_gcd(&p_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = p_divrem(&f, &g, p).0;
            h = p_divrem(&h, &f, p).1;
        }
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus, odd `p`).
fn p_edf(f: &PPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<PPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (Integer::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: PPoly = p_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let g = p_gcd(&a, f, p);
        let split = if g.len() > 1 && g.len() < f.len() {
            Some(g)
        } else {
            let b = p_sub(&p_powmod(&a, &e, f, p), &vec![1], p);
            let g = p_gcd(&b, f, p);
            (g.len() > 1 && g.len() < f.len()).then_some(g)
        };
        if let Some(g) = split {
            let h = p_monic(&p_divrem(f, &g, p).0, p);
            let mut out = p_edf(&g, d, p, rng);
            out.extend(p_edf(&h, d, p, rng));
            return out;
        }
    }
}

fn p_factor(f: &PPoly, p: u64) -> Vec<PPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, d) in p_ddf(&p_monic(f, p), p) {
        out.extend(p_edf(&g, d, p, &mut rng));
    }
    out.sort();
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Word-size primes below `2^31`, largest first.
fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..1u64 << 31).rev().filter(|&n| n % 2 == 1 && is_prime(n))
}

// ---- factorization over ℤ -----------------------------------------------------------------

/// Irreducible factors of a primitive squarefree polynomial of positive degree.
pub(crate) fn z_factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f[n].clone();
    // choose the prime giving the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<PPoly>)> = None;
    let mut tried = 0;
    for p in primes() {
        if lc.mod_u64(p) == 0 {
            continue;
        }
        let fp = p_from_z(f, p);
        if p_gcd(&fp, &p_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = p_factor(&fp, p);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried == 3 {
            break;
        }
    }
    let (p, facs) = best.expect("a suitable prime exists");

    // Landau–Mignotte style bound on the coefficients of any factor, times lc
    let norm2: Int = f.iter().fold(Int::ZERO, |acc, c| &acc + &(c * c));
    let bound = &(&(&norm2.isqrt() + &Int::ONE) * &Int::from(2).pow(n as u32)) * &lc.abs();
    let target = &bound * &Int::from(2);
    let pi = Int::from(p);
    let mut k = 1u32;
    let mut modulus = pi.clone();
    while modulus <= target {
        modulus = &modulus * &pi;
        k += 1;
    }
    let lifted = hensel_lift(f, &facs, p, k);

    // recombination
    let mut remaining: Vec<ZPoly> = lifted;
    let mut f = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= remaining.len() {
        let idx: Vec<usize> = (0..remaining.len()).collect();
        for comb in combinations(&idx, s) {
            let lcf = f.last().unwrap().clone();
            let mut cand: ZPoly = vec![lcf];
            for &i in &comb {
                cand = z_mod(&z_mul(&cand, &remaining[i]), &modulus);
            }
            let cand = z_primitive(&z_symmetric(&cand, &modulus));
            if let Some(q) = z_div_exact(&f, &cand) {
                out.push(cand);
                f = z_primitive(&q);
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
    if f.len() > 1 {
        out.push(f);
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Lifts monic modular factors of `f / lc(f)` from `p` to `p^k`.
fn hensel_lift(f: &ZPoly, facs: &[PPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let r = facs.len();
    // s_i with Σ s_i · ∏_{j≠i} g_j ≡ 1 (mod p)
    let mut cof: Vec<PPoly> = Vec::with_capacity(r);
    for i in 0..r {
        let mut prod: PPoly = vec![1];
        for (j, g) in facs.iter().enumerate() {
            if j != i {
                prod = p_mul(&prod, g, p);
            }
        }
        cof.push(prod);
    }
    let mut s: Vec<PPoly> = Vec::with_capacity(r);
    {
        // incremental extended gcd: 1 = Σ s_i cof_i
        let mut acc_s: Vec<PPoly> = vec![vec![1]];
        let mut acc_g = cof[0].clone();
        for i in 1..r {
            let (g, a, b) = p_ext_gcd(&acc_g, &cof[i], p);
            for x in acc_s.iter_mut() {
                *x = p_mul(x, &a, p);
            }
            acc_s.push(b);
            acc_g = g;
        }
        debug_assert_eq!(acc_g, vec![1u64]);
        for (i, x) in acc_s.into_iter().enumerate() {
            s.push(p_divrem(&x, &facs[i], p).1);
        }
    }

    let pk = Int::from(p).pow(k);
    let lc = f.last().unwrap();
    let lc_inv = Int::from(lc.to_big().invert(&pk.to_big()).expect("leading coefficient is a unit modulo p^k"));
    let fm = z_mod(&f.iter().map(|c| c * &lc_inv).collect(), &pk);

    let mut g: Vec<ZPoly> = facs.iter().map(p_to_z).collect();
    let pi = Int::from(p);
    let mut m = pi.clone();
    for _ in 1..k {
        let next = &m * &pi;
        let mut prod: ZPoly = vec![Int::ONE];
        for gi in &g {
            prod = z_mod(&z_mul(&prod, gi), &next);
        }
        let e = z_mod(&z_sub(&fm, &prod), &next);
        if !e.is_empty() {
            let c: PPoly = p_trim(e.iter().map(|x| x.div_exact(&m).mod_u64(p)).collect());
            for i in 0..r {
                let sigma = p_divrem(&p_mul(&c, &s[i], p), &facs[i], p).1;
                let upd: ZPoly = sigma.iter().map(|&x| &Int::from(x) * &m).collect();
                g[i] = z_mod(&z_add(&g[i], &upd), &next);
            }
        }
        m = next;
    }
    g
}

fn z_add(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    z_trim((0..n).map(|i| a.get(i).unwrap_or(&Int::ZERO) + b.get(i).unwrap_or(&Int::ZERO)).collect())
}

fn z_sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    z_trim((0..n).map(|i| a.get(i).unwrap_or(&Int::ZERO) - b.get(i).unwrap_or(&Int::ZERO)).collect())
}

/// Irreducible monic factors over ℚ with multiplicities, sorted by degree then
/// coefficients, and the leading coefficient.
pub(crate) fn q_factor(f: &QPoly) -> (Rational, Vec<(QPoly, u32)>) {
    let Some(lc) = f.last().cloned() else { return (Rational::zero(), Vec::new()) };
    let mut out = Vec::new();
    for (part, mult) in q_squarefree(f) {
        for z in z_factor_squarefree(&q_to_z(&part)) {
            out.push((q_monic(&z_to_q(&z)), mult));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    (lc, out)
}
