use super::*;
use crate::qpoly::{parse_polynomial, VarClass};
use proptest::prelude::*;

fn ring(names: &[&str]) -> Arc<VarUniverse> {
    VarUniverse::polynomial_ring(names.iter().copied()).unwrap()
}

fn polys(u: &Arc<VarUniverse>, src: &[&str]) -> Vec<Polynomial> {
    src.iter().map(|s| parse_polynomial(s, u).unwrap()).collect()
}

fn ideal(u: &Arc<VarUniverse>, src: &[&str]) -> IdealHandle {
    IdealHandle::new(u, polys(u, src))
}

fn strs(b: &[Polynomial]) -> Vec<String> {
    b.iter().map(|p| p.to_string()).collect()
}

#[test]
fn buchberger_examples() {
    let u = ring(&["x", "y"]);
    let lex = TermOrder::lex(2);
    assert_eq!(strs(&buchberger(&u, &polys(&u, &["x"]), &lex).unwrap()), ["x"]);
    assert_eq!(strs(&buchberger(&u, &polys(&u, &["x", "3"]), &lex).unwrap()), ["1"]);
    // S(x^2-1, xy-1) = y(x^2-1) - x(xy-1) = x - y; then y^2 - 1 from reducing xy - 1
    let g = buchberger(&u, &polys(&u, &["x^2-1", "x*y-1"]), &lex).unwrap();
    assert_eq!(strs(&g), ["x-y", "y^2-1"]);
    assert!(is_groebner(&g, &lex));
    assert!(buchberger(&u, &[], &lex).unwrap().is_empty());
}

#[test]
fn normal_form_examples() {
    let u = ring(&["x", "y"]);
    let lex = TermOrder::lex(2);
    let gx = polys(&u, &["x"]);
    assert!(normal_form(&polys(&u, &["x*y"])[0], &gx, &lex).is_zero());
    assert_eq!(normal_form(&polys(&u, &["y+1"])[0], &gx, &lex).to_string(), "y+1");
    let g = polys(&u, &["x-y", "y^2-1"]);
    assert_eq!(normal_form(&polys(&u, &["x^2"])[0], &g, &lex).to_string(), "1");
}

#[test]
fn elimination_examples() {
    let u = VarUniverse::new([("x", VarClass::X), ("s", VarClass::S)]).unwrap();
    let e = eliminate(&ideal(&u, &["x-s", "x^2"]), &[0]).unwrap();
    assert_eq!(strs(e.generators()), ["s^2"]);
    assert_eq!(e.universe().len(), 1);
    let v = ring(&["x", "y"]);
    let e = eliminate(&ideal(&v, &["x*y-1"]), &[0]).unwrap();
    assert!(e.is_zero());
}

#[test]
fn intersection_examples() {
    let u = ring(&["x", "y"]);
    let m = intersect(&ideal(&u, &["x"]), &ideal(&u, &["y"])).unwrap();
    assert_eq!(strs(m.generators()), ["x*y"]);
    let i = ideal(&u, &["x^2-y", "x*y"]);
    assert!(equal(&intersect(&i, &i).unwrap(), &i).unwrap());

    let w = VarUniverse::new([("x", VarClass::X), ("y", VarClass::X), ("s1", VarClass::S), ("s2", VarClass::S)]).unwrap();
    let a = ideal(&w, &["x", "s1+1"]);
    let b = ideal(&w, &["y", "s2+1"]);
    let m = intersect(&a, &b).unwrap();
    for q in polys(&w, &["x*y", "x*(s2+1)", "y*(s1+1)", "(s1+1)*(s2+1)"]) {
        // oracle: each product lies in both ideals by construction
        assert!(a.contains(&q).unwrap() && b.contains(&q).unwrap());
        assert!(m.contains(&q).unwrap(), "{q}");
    }
    assert!(equal(&m, &ideal(&w, &["x*y", "x*(s2+1)", "y*(s1+1)", "(s1+1)*(s2+1)"])).unwrap());
}

#[test]
fn quotient_and_saturation_examples() {
    let u = ring(&["x", "y"]);
    let x = &polys(&u, &["x"])[0];
    let y = &polys(&u, &["y"])[0];
    assert!(equal(&quotient(&ideal(&u, &["x^2"]), x).unwrap(), &ideal(&u, &["x"])).unwrap());
    let (s, l) = saturate(&ideal(&u, &["x^2*y"]), x).unwrap();
    assert!(equal(&s, &ideal(&u, &["y"])).unwrap());
    assert_eq!(l, 2);
    assert!(equal(&quotient(&ideal(&u, &["x"]), y).unwrap(), &ideal(&u, &["x"])).unwrap());
    assert!(quotient(&ideal(&u, &["x"]), &Polynomial::zero(&u)).is_err());
    assert!(saturate(&ideal(&u, &["x"]), &Polynomial::zero(&u)).is_err());
}

#[test]
fn equality_examples() {
    let u = ring(&["x", "y", "s"]);
    assert!(equal(&ideal(&u, &["x", "y"]), &ideal(&u, &["y", "x"])).unwrap());
    assert!(!equal(&ideal(&u, &["x"]), &ideal(&u, &["x^2"])).unwrap());
    assert!(equal(&ideal(&u, &["2*s+2"]), &ideal(&u, &["s+1"])).unwrap());
    let other = ring(&["x", "y"]);
    assert!(equal(&ideal(&u, &["x"]), &ideal(&other, &["x"])).is_err());
}

#[test]
fn radical_membership_and_dimension() {
    let u = ring(&["x", "y"]);
    let i = ideal(&u, &["x^3", "y^2"]);
    assert!(in_radical(&polys(&u, &["x+y"])[0], &i).unwrap());
    assert!(!in_radical(&polys(&u, &["x+1"])[0], &i).unwrap());
    assert_eq!(ideal(&u, &["x*y"]).dimension().unwrap().0, 1);
    assert_eq!(i.dimension().unwrap().0, 0);
    assert_eq!(ideal(&u, &["x", "x-1"]).dimension().unwrap().0, -1);
}

// ---- randomized properties -------------------------------------------------

fn arb_ideal() -> impl Strategy<Value = Vec<Vec<(u16, u16, u16, i64)>>> {
    proptest::collection::vec(proptest::collection::vec((0u16..3, 0u16..3, 0u16..3, -3i64..4), 1..4), 1..4)
}

fn build(u: &Arc<VarUniverse>, raw: &[Vec<(u16, u16, u16, i64)>]) -> Vec<Polynomial> {
    raw.iter()
        .map(|ts| {
            Polynomial::from_terms(
                u,
                ts.iter()
                    .filter(|(a, b, c, _)| a + b + c <= 2)
                    .map(|&(a, b, c, k)| (Monomial::from_exponents(&[a, b, c]), Rational::from(k))),
            )
        })
        .filter(|p| !p.is_zero())
        .collect()
}

/// Dense Gaussian elimination: returns a basis of `span(rows) ∩ {coordinates in `kill` vanish}`.
fn kill_free_span(rows: Vec<Vec<Rational>>, kill_cols: &[usize]) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rows = rows;
    let mut col_order: Vec<usize> = kill_cols.to_vec();
    col_order.extend((0..ncols).filter(|c| !kill_cols.contains(c)));
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for &c in &col_order {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][c].inv();
        let pr: Vec<Rational> = rows[pivot_row].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for k in 0..ncols {
                    rows[r][k] = &rows[r][k] - &(&f * &pr[k]);
                }
            }
        }
        rows[pivot_row] = pr;
        pivots.push(c);
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows.into_iter()
        .filter(|r| kill_cols.iter().all(|&c| r[c].is_zero()))
        .collect()
}

fn monomials_up_to(nvars: usize, deg: u16) -> Vec<Monomial> {
    let mut out = vec![];
    for a in 0..=deg {
        for b in 0..=deg - a {
            for c in 0..=deg - a - b {
                let e = [a, b, c];
                out.push(Monomial::from_exponents(&e[..nvars]));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bases_are_groebner_and_unique(raw in arb_ideal(), seed in 0usize..6) {
        let u = ring(&["x", "y", "z"]);
        let gens = build(&u, &raw);
        for order in [TermOrder::degrevlex(3), TermOrder::lex(3), TermOrder::elimination(3, &[0])] {
            let g = buchberger(&u, &gens, &order).unwrap();
            prop_assert!(is_groebner(&g, &order));
            let mut shuffled = gens.clone();
            if !shuffled.is_empty() {
                let k = seed % shuffled.len();
                shuffled.rotate_left(k);
                shuffled.reverse();
            }
            prop_assert_eq!(&g, &buchberger(&u, &shuffled, &order).unwrap());
            for p in &gens {
                prop_assert!(normal_form(p, &g, &order).is_zero());
            }
        }
    }

    #[test]
    fn elimination_matches_linear_algebra(raw in arb_ideal()) {
        let u = ring(&["x", "y", "z"]);
        let gens = build(&u, &raw);
        let i = IdealHandle::new(&u, gens.clone());
        let e = eliminate_in_place(&i, &[0]).unwrap();
        for g in e.generators() {
            prop_assert!(i.contains(g).unwrap());
            prop_assert_eq!(g.degree_in(0), 0);
        }
        // degree-4 truncation of the ideal, then its x-free part
        let cols = monomials_up_to(3, 4);
        let col_of = |m: &Monomial| cols.iter().position(|c| c == m).unwrap();
        let mut rows = Vec::new();
        for g in &gens {
            for m in monomials_up_to(3, 4) {
                if m.degree() + g.degree() > 4 { continue; }
                let mut row = vec![Rational::zero(); cols.len()];
                for (t, c) in g.mul_monomial(&m, &Rational::one()).terms() {
                    row[col_of(t)] = c.clone();
                }
                rows.push(row);
            }
        }
        let kill: Vec<usize> = cols.iter().enumerate().filter(|(_, m)| m.get(0) > 0).map(|(k, _)| k).collect();
        for row in kill_free_span(rows, &kill) {
            let p = Polynomial::from_terms(&u, cols.iter().cloned().zip(row));
            prop_assert!(e.contains(&p).unwrap(), "{} not in elimination ideal", p);
        }
    }

    #[test]
    fn intersection_bounds(a in arb_ideal(), b in arb_ideal()) {
        let u = ring(&["x", "y", "z"]);
        let i = IdealHandle::new(&u, build(&u, &a));
        let j = IdealHandle::new(&u, build(&u, &b));
        let m = intersect(&i, &j).unwrap();
        prop_assert!(i.contains_ideal(&m).unwrap());
        prop_assert!(j.contains_ideal(&m).unwrap());
        prop_assert!(m.contains_ideal(&i.product(&j)).unwrap());
    }

    #[test]
    fn saturation_bounds(a in arb_ideal(), f in 0usize..3) {
        let u = ring(&["x", "y", "z"]);
        let i = IdealHandle::new(&u, build(&u, &a));
        let f = polys(&u, &["x", "y+1", "x*y-z"])[f].clone();
        let (s, l) = saturate(&i, &f).unwrap();
        prop_assert!(s.contains_ideal(&i).unwrap());
        let fl = f.pow(l);
        for g in s.generators() {
            prop_assert!(i.contains(&(&fl * g)).unwrap());
        }
    }
}
