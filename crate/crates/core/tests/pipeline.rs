use bsato_core::bsato::{global_bideal, local_bideal, Analysis, Problem};
use bsato_core::ideals::{equal, IdealHandle};
use bsato_core::{parse_polynomial, Rational};

fn principal(like: &IdealHandle, g: &str) -> IdealHandle {
    IdealHandle::new(like.universe(), vec![parse_polynomial(g, like.universe()).unwrap()])
}

fn assert_global(vars: &[&str], polys: &[&str], b: &str) {
    let prob = Problem::parse(vars, polys).unwrap();
    let g = global_bideal(&prob).unwrap();
    assert!(equal(&g, &principal(&g, b)).unwrap(), "{polys:?}: got {:?}", g.generators());
}

#[test]
fn classical_b_functions() {
    assert_global(&["x"], &["x"], "s1+1");
    assert_global(&["x"], &["x^2"], "(s1+1)*(2*s1+1)");
    assert_global(&["x", "y"], &["x*y"], "(s1+1)^2");
    assert_global(&["x", "y"], &["x^2+y^3"], "(s1+1)*(6*s1+5)*(6*s1+7)");
}

#[test]
fn normal_crossings_tuple() {
    assert_global(&["x", "y"], &["x", "y"], "(s1+1)*(s2+1)");
}

#[test]
fn local_ideal_sees_only_the_germ() {
    let prob = Problem::parse(&["x", "y"], &["x*y"]).unwrap();
    let at = |a: i64, b: i64| local_bideal(&prob, &[Rational::from(a), Rational::from(b)]).unwrap();
    let origin = at(0, 0);
    assert!(equal(&origin, &principal(&origin, "(s1+1)^2")).unwrap());
    let axis = at(1, 0);
    assert!(equal(&axis, &principal(&axis, "s1+1")).unwrap());
    assert!(at(1, 1).is_unit().unwrap());
}

#[test]
fn strata_cover_the_space_and_verify() {
    let mut an = Analysis::new(Problem::parse(&["x", "y"], &["x*y"]).unwrap());
    let result = an.result().unwrap();
    assert!(!result.strata.is_empty());
    assert!(an.verify().unwrap().passed());
}
