use super::*;

use std::sync::Arc;

use proptest::prelude::*;

use crate::qpoly::VarUniverse;
use crate::weyl::{ann_fs, compute_i2};
use crate::{parse_polynomial, Int};

fn ring(names: &[&str]) -> Arc<VarUniverse> {
    VarUniverse::polynomial_ring(names.iter().copied()).unwrap()
}

fn xs_ring(x: &[&str], s: &[&str]) -> Arc<VarUniverse> {
    VarUniverse::new(
        x.iter()
            .map(|n| (n.to_string(), VarClass::X))
            .chain(s.iter().map(|n| (n.to_string(), VarClass::S))),
    )
    .unwrap()
}

fn p(u: &Arc<VarUniverse>, s: &str) -> Polynomial {
    parse_polynomial(s, u).unwrap()
}

fn ideal(u: &Arc<VarUniverse>, gens: &[&str]) -> IdealHandle {
    IdealHandle::new(u, gens.iter().map(|g| p(u, g)).collect())
}

fn strings(fs: &[(Polynomial, u32)]) -> Vec<(String, u32)> {
    fs.iter().map(|(f, e)| (f.to_string(), *e)).collect()
}

#[test]
fn squarefree_examples() {
    let u = ring(&["x"]);
    assert_eq!(strings(&squarefree_decompose(&p(&u, "x^2")).unwrap()), vec![("x".into(), 2)]);
    assert_eq!(strings(&squarefree_decompose(&p(&u, "x^3-x")).unwrap()), vec![("x^3-x".into(), 1)]);
    let s = ring(&["s"]);
    let sq = squarefree_decompose(&p(&s, "(s+1)^2*(2*s+1)")).unwrap();
    let mut got = strings(&sq);
    got.sort_by_key(|(_, e)| *e);
    assert_eq!(got, vec![("s+1/2".into(), 1), ("s+1".into(), 2)]);
}

#[test]
fn factor_examples() {
    let u = ring(&["x"]);
    let f = factor_univariate(&p(&u, "x^2-1")).unwrap();
    assert_eq!(f.constant, Rational::one());
    assert_eq!(strings(&f.factors), vec![("x-1".into(), 1), ("x+1".into(), 1)]);
    let g = factor_univariate(&p(&u, "x^2+1")).unwrap();
    assert_eq!(strings(&g.factors), vec![("x^2+1".into(), 1)]);

    let s = ring(&["s"]);
    let h = factor_univariate(&p(&s, "4*s^2+16*s+15")).unwrap();
    assert_eq!(h.constant, Rational::from(4));
    assert_eq!(strings(&h.factors), vec![("s+3/2".into(), 1), ("s+5/2".into(), 1)]);
}

#[test]
fn factor_rejects_multivariate_and_zero() {
    let u = ring(&["x", "y"]);
    assert!(matches!(factor_univariate(&p(&u, "x*y+1")), Err(crate::Error::Usage(_))));
    assert!(factor_univariate(&Polynomial::zero(&u)).is_err());
    let c = factor_univariate(&p(&u, "7")).unwrap();
    assert_eq!(c.constant, Rational::from(7));
    assert!(c.factors.is_empty());
}

#[test]
fn factor_harder_univariate() {
    let u = ring(&["x"]);
    // Swinnerton-Dyer polynomial: irreducible over ℚ, splits into quadratics mod every prime
    let sd = p(&u, "x^4-10*x^2+1");
    assert_eq!(factor_univariate(&sd).unwrap().factors.len(), 1);
    let prod = p(&u, "(x^4-10*x^2+1)*(x^2-2)^2*(3*x+7)^3*(x^5-x-1)");
    let f = factor_univariate(&prod).unwrap();
    assert_eq!(f.expand(&prod), prod);
    let degs: Vec<(u32, u32)> = f.factors.iter().map(|(g, e)| (g.degree(), *e)).collect();
    assert_eq!(degs, vec![(1, 3), (2, 2), (4, 1), (5, 1)]);
    // large coefficients
    let big = p(&u, "(1234567*x-7654321)*(x^2+99991*x+1000003)");
    let f = factor_univariate(&big).unwrap();
    assert_eq!(f.factors.len(), 2);
    assert_eq!(f.expand(&big), big);
}

/// Integer coefficients of a primitive integer multiple, constant term first.
fn integer_coeffs(f: &Polynomial) -> Vec<i64> {
    let c = f.primitive().univariate_coeffs(0).unwrap();
    c.iter().map(|r| r.numer().to_i64().unwrap()).collect()
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|d| n % d == 0).flat_map(|d| [d, -d]).collect()
}

/// Brute-force reducibility for integer polynomials of degree ≤ 4: rational roots and
/// quadratic factors with coefficients of absolute value at most `bound`.
fn brute_force_reducible(c: &[i64], bound: i64) -> bool {
    let deg = c.len() - 1;
    if deg <= 1 {
        return false;
    }
    let lc = c[deg];
    let c0 = c[0];
    if c0 == 0 {
        return true;
    }
    let eval = |num: i64, den: i64| -> i128 {
        // den^deg · f(num/den)
        let mut acc: i128 = 0;
        for (k, &a) in c.iter().enumerate() {
            acc += a as i128 * (num as i128).pow(k as u32) * (den as i128).pow((deg - k) as u32);
        }
        acc
    };
    for q in divisors(lc).into_iter().filter(|d| *d > 0) {
        for r in divisors(c0) {
            if eval(r, q) == 0 {
                return true;
            }
        }
    }
    if deg == 4 {
        let u = ring(&["x"]);
        let f = Polynomial::from_univariate(&u, 0, &c.iter().map(|&a| Rational::from(a)).collect::<Vec<_>>());
        for a2 in divisors(lc).into_iter().filter(|d| *d > 0) {
            for a0 in divisors(c0) {
                for a1 in -bound..=bound {
                    let q = Polynomial::from_univariate(&u, 0, &[Rational::from(a0), Rational::from(a1), Rational::from(a2)]);
                    if f.div_exact(&q).is_some() {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn small_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 2..=4).prop_filter("nonconstant", |v| *v.last().unwrap() != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factorization_reproduces_and_is_irreducible(parts in prop::collection::vec(small_poly(), 1..=3), k in 1i64..=3) {
        let u = ring(&["x"]);
        let mut prod = Polynomial::constant(&u, Rational::from(k));
        for c in &parts {
            let q = Polynomial::from_univariate(&u, 0, &c.iter().map(|&a| Rational::from(a)).collect::<Vec<_>>());
            prod = &prod * &q;
        }
        let f = factor_univariate(&prod).unwrap();
        prop_assert_eq!(f.expand(&prod), prod.clone());
        for (g, _) in &f.factors {
            prop_assert_eq!(g.canonical_leading().unwrap().1.clone(), Rational::one());
            if g.degree() <= 4 {
                prop_assert!(!brute_force_reducible(&integer_coeffs(g), 40), "{} is reducible", g);
            }
        }
        // pairwise distinct factors
        for i in 0..f.factors.len() {
            for j in i + 1..f.factors.len() {
                prop_assert_ne!(&f.factors[i].0, &f.factors[j].0);
            }
        }
    }

    #[test]
    fn squarefree_parts_are_coprime(parts in prop::collection::vec(small_poly(), 1..=3), e in prop::collection::vec(1u32..=3, 3)) {
        let u = ring(&["x"]);
        let mut prod = Polynomial::one(&u);
        for (c, &k) in parts.iter().zip(&e) {
            let q = Polynomial::from_univariate(&u, 0, &c.iter().map(|&a| Rational::from(a)).collect::<Vec<_>>());
            prod = &prod * &q.pow(k);
        }
        let sq = squarefree_decompose(&prod).unwrap();
        let mut back = Polynomial::one(&u);
        for (f, k) in &sq {
            back = &back * &f.pow(*k);
            prop_assert!(gcd(f, &f.derivative(0)).is_constant());
        }
        prop_assert_eq!(back, prod.monic());
        for i in 0..sq.len() {
            for j in i + 1..sq.len() {
                prop_assert!(gcd(&sq[i].0, &sq[j].0).is_constant());
            }
        }
    }

    #[test]
    fn multivariate_gcd_finds_common_factor(a in small_mpoly(), b in small_mpoly(), c in small_mpoly()) {
        let u = ring(&["x", "y", "z"]);
        let (a, b, c) = (mpoly_from(&u, &a), mpoly_from(&u, &b), mpoly_from(&u, &c));
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let ac = &a * &c;
        let bc = &b * &c;
        let g = gcd(&ac, &bc);
        prop_assert!(g.div_exact(&c).is_some());
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
    }

    #[test]
    fn multivariate_factorization_reproduces(a in small_mpoly(), b in small_mpoly()) {
        let u = ring(&["x", "y", "z"]);
        let (a, b) = (mpoly_from(&u, &a), mpoly_from(&u, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let prod = &(&a * &b) * &b;
        let facs = factor_multivariate(&prod).unwrap();
        let mut back = Polynomial::one(&u);
        for (f, e) in &facs {
            back = &back * &f.pow(*e);
        }
        prop_assert_eq!(back.monic(), prod.monic());
        let total: u32 = facs.iter().map(|(_, e)| *e).sum();
        let nonconst = |q: &Polynomial| u32::from(!q.is_constant());
        prop_assert!(total >= nonconst(&a) + 2 * nonconst(&b));
    }
}

fn small_mpoly() -> impl Strategy<Value = Vec<(i64, [u16; 3])>> {
    prop::collection::vec((-3i64..=3, [0u16..=2, 0u16..=2, 0u16..=1]), 1..=3)
}

fn mpoly_from(u: &Arc<VarUniverse>, terms: &[(i64, [u16; 3])]) -> Polynomial {
    Polynomial::from_terms(
        u,
        terms.iter().map(|(c, e)| (crate::Monomial::from_exponents(e), Rational::from(*c))),
    )
}

#[test]
fn multivariate_factorization_examples() {
    let u = ring(&["x", "y", "s"]);
    let f = p(&u, "(x^2+y^2)*(x-y*s)^2*(s+1)*(2*s+3)");
    let facs = factor_multivariate(&f).unwrap();
    let degs: Vec<(u32, u32)> = facs.iter().map(|(g, e)| (g.degree(), *e)).collect();
    assert_eq!(facs.len(), 4, "{facs:?}");
    assert!(degs.contains(&(2, 2)));
    assert!(degs.contains(&(2, 1)));
    // a polynomial irreducible over ℚ but with a univariate specialization that splits
    let g = p(&u, "x^2-y*s-1");
    assert_eq!(factor_multivariate(&g).unwrap().len(), 1);
}

fn component_strings(comps: &[PrimaryComponent]) -> Vec<Vec<String>> {
    comps
        .iter()
        .map(|c| c.component.canonical_basis().unwrap().iter().map(|g| g.to_string()).collect())
        .collect()
}

#[test]
fn decompose_product_of_variables() {
    let u = ring(&["x", "y"]);
    let i = ideal(&u, &["x*y"]);
    let comps = primary_decompose(&i).unwrap();
    let mut got = component_strings(&comps);
    got.sort();
    assert_eq!(got, vec![vec!["x".to_string()], vec!["y".to_string()]]);
    assert!(verify_decomposition(&i, &comps).unwrap().passed());
}

#[test]
fn decompose_embedded_component() {
    let u = ring(&["x", "y"]);
    let i = ideal(&u, &["x^2", "x*y"]);
    let comps = primary_decompose(&i).unwrap();
    assert_eq!(comps.len(), 2);
    let report = verify_decomposition(&i, &comps).unwrap();
    assert!(report.passed(), "{report}");
    // one component is the line x = 0, the other is supported at the origin
    assert_eq!(comps[0].component.dimension().unwrap().0, 1);
    assert_eq!(comps[1].component.dimension().unwrap().0, 0);
    assert!(crate::ideals::in_radical(&p(&u, "y"), &comps[1].component).unwrap());
}

#[test]
fn decompose_rejects_unit_and_zero() {
    let u = ring(&["x"]);
    assert!(matches!(primary_decompose(&IdealHandle::unit(&u)), Err(crate::Error::Usage(_))));
    assert!(matches!(primary_decompose(&IdealHandle::zero(&u)), Err(crate::Error::Usage(_))));
}

#[test]
fn decompose_over_irreducible_factors() {
    let u = ring(&["x", "y"]);
    let i = ideal(&u, &["(x^2+1)*(x-1)^2", "y^2-2"]);
    let comps = primary_decompose(&i).unwrap();
    assert_eq!(comps.len(), 2);
    let report = verify_decomposition(&i, &comps).unwrap();
    assert!(report.passed(), "{report}");
    // the points with x = 1 form a doubled component
    let one = comps.iter().find(|c| c.component.contains(&p(&u, "(x-1)^2")).unwrap()).unwrap();
    assert!(!one.component.contains(&p(&u, "x-1")).unwrap());
}

#[test]
fn decompose_needs_coordinate_change() {
    // x and y alone separate nothing: x^2 = y^2 = 2 with xy = ±2
    let u = ring(&["x", "y"]);
    let i = ideal(&u, &["x^2-2", "y^2-2"]);
    let comps = primary_decompose(&i).unwrap();
    assert_eq!(comps.len(), 2);
    assert!(verify_decomposition(&i, &comps).unwrap().passed());
    let mut got = component_strings(&comps);
    got.sort();
    assert_eq!(got, vec![vec!["y^2-2".to_string(), "x+y".to_string()], vec!["y^2-2".to_string(), "x-y".to_string()]]);
}

#[test]
fn decompose_positive_dimensional_with_parameters() {
    let u = ring(&["x", "y", "z"]);
    let i = ideal(&u, &["x*z-y^2", "x^3-y*z", "x*y-z"]);
    let comps = primary_decompose(&i).unwrap();
    let report = verify_decomposition(&i, &comps).unwrap();
    assert!(report.passed(), "{report}");
    assert!(comps.len() >= 2);
}

#[test]
fn verify_detects_missing_component() {
    let u = ring(&["x", "y"]);
    let i = ideal(&u, &["x*y"]);
    let only_x = vec![PrimaryComponent::new(ideal(&u, &["x"])).unwrap()];
    let r = verify_decomposition(&i, &only_x).unwrap();
    assert!(!r.intersection);
    assert!(!r.passed());
    let both = vec![PrimaryComponent::new(ideal(&u, &["x"])).unwrap(), PrimaryComponent::new(ideal(&u, &["y"])).unwrap()];
    assert!(verify_decomposition(&i, &both).unwrap().passed());
}

#[test]
fn verify_detects_non_primary_component() {
    let u = ring(&["x", "y"]);
    let i = ideal(&u, &["x*y"]);
    let fake = vec![PrimaryComponent::new(i.clone()).unwrap()];
    let r = verify_decomposition(&i, &fake).unwrap();
    assert!(r.intersection && r.containment);
    assert!(!r.primarity);
}

#[test]
fn example_one_components() {
    let x = ring(&["x", "y"]);
    let f: Vec<Polynomial> = ["x", "y", "1-x-y"].iter().map(|s| p(&x, s)).collect();
    let ann = ann_fs(&f).unwrap();
    let i2 = compute_i2(&ann, &f).unwrap();
    let comps = primary_decompose(&i2).unwrap();
    assert_eq!(comps.len(), 3);
    assert!(verify_decomposition(&i2, &comps).unwrap().passed());
    let xs = &ann.rings.xs;
    let mut pairs: Vec<(Vec<String>, Vec<String>)> = comps
        .iter()
        .map(|c| {
            let xp = c.x_part.canonical_basis().unwrap().iter().map(|g| g.to_string()).collect();
            let sp = c.s_part.canonical_basis().unwrap().iter().map(|g| g.to_string()).collect();
            (xp, sp)
        })
        .collect();
    pairs.sort();
    assert_eq!(
        pairs,
        vec![
            (vec!["x".to_string()], vec!["s1+1".to_string()]),
            (vec!["x+y-1".to_string()], vec!["s3+1".to_string()]),
            (vec!["y".to_string()], vec!["s2+1".to_string()]),
        ]
    );
    // each component is ⟨s_j + 1, f_j⟩
    for (j, fj) in f.iter().enumerate() {
        let sj = Polynomial::var(xs, ann.rings.s_index(j));
        let expect = IdealHandle::new(xs, vec![fj.remap(xs).unwrap(), &sj + &Polynomial::one(xs)]);
        assert!(comps.iter().any(|c| equal(&c.component, &expect).unwrap()));
    }
}

#[test]
fn contractions_live_in_smaller_rings() {
    let u = xs_ring(&["x"], &["s1"]);
    let i = ideal(&u, &["x^2", "(s1+1)*(2*s1+1)"]);
    let comps = primary_decompose(&i).unwrap();
    assert_eq!(comps.len(), 2);
    for c in &comps {
        assert_eq!(c.x_part.universe().len(), 1);
        assert_eq!(c.x_part.universe().name(0), "x");
        assert_eq!(c.s_part.universe().name(0), "s1");
        assert_eq!(c.x_part.canonical_basis().unwrap()[0].to_string(), "x^2");
    }
}

#[test]
fn decomposition_is_deterministic() {
    let u = ring(&["x", "y", "z"]);
    let gens = ["x^2*y-z^2", "x*z^2-y^3", "y*z*(x-1)"];
    let a = component_strings(&primary_decompose(&ideal(&u, &gens)).unwrap());
    let b = component_strings(&primary_decompose(&ideal(&u, &gens)).unwrap());
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_point_configurations_decompose(pts in prop::collection::vec((-3i64..=3, -3i64..=3, 1u32..=2), 1..=3)) {
        // ideal of a union of (possibly fattened) rational points in the plane
        let u = ring(&["x", "y"]);
        let mut acc: Option<IdealHandle> = None;
        for (a, b, m) in &pts {
            let lx = &Polynomial::var(&u, 0) - &Polynomial::constant(&u, Rational::from(*a));
            let ly = &Polynomial::var(&u, 1) - &Polynomial::constant(&u, Rational::from(*b));
            let pt = IdealHandle::new(&u, vec![lx.pow(*m), ly]);
            acc = Some(match acc {
                None => pt,
                Some(i) => intersect(&i, &pt).unwrap(),
            });
        }
        let i = acc.unwrap();
        let comps = primary_decompose(&i).unwrap();
        let report = verify_decomposition(&i, &comps).unwrap();
        prop_assert!(report.passed(), "{}", report);
        let mut distinct: Vec<(i64, i64)> = pts.iter().map(|(a, b, _)| (*a, *b)).collect();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(comps.len(), distinct.len());
    }
}

#[test]
fn integer_helpers_sanity() {
    assert_eq!(divisors(6).len(), 8);
    assert!(brute_force_reducible(&[-1, 0, 1], 5));
    assert!(!brute_force_reducible(&[1, 0, 1], 5));
    assert!(brute_force_reducible(&[4, 0, 0, 0, 1], 5)); // x^4+4 = (x^2+2x+2)(x^2-2x+2)
    let _ = Int::from(0i64);
}
