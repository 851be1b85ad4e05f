//! Factored text presentation of ideals in `ℚ[s]`.

use crate::arith::Rational;
use crate::error::Result;
use crate::ideals::IdealHandle;
use crate::primdec::factor_multivariate;
use crate::qpoly::Polynomial;

fn factor_key(f: &Polynomial) -> (u32, usize, Vec<usize>, Vec<Rational>) {
    let vars = f.variables();
    (f.degree(), vars.len(), vars, f.terms().iter().map(|(_, c)| c.clone()).collect())
}

/// Irreducible factors as primitive integer polynomials with positive leading coefficient,
/// and the rational constant that restores `p`.
fn integer_factors(p: &Polynomial) -> Result<(Rational, Vec<(Polynomial, u32)>)> {
    let mut facs: Vec<(Polynomial, u32)> =
        factor_multivariate(p)?.into_iter().map(|(f, e)| (f.primitive(), e)).collect();
    facs.sort_by(|a, b| factor_key(&a.0).cmp(&factor_key(&b.0)));
    let mut prod = Polynomial::one(p.universe());
    for (f, e) in &facs {
        prod = &prod * &f.pow(*e);
    }
    let c = &p.terms()[0].1 / &prod.terms()[0].1;
    Ok((c, facs))
}

fn join(facs: &[(Polynomial, u32)]) -> String {
    facs.iter()
        .map(|(f, e)| {
            let body = if f.len() > 1 { format!("({f})") } else { f.to_string() };
            if *e > 1 {
                format!("{body}^{e}")
            } else {
                body
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// `p` as a product of irreducible integer factors, with a leading constant when it is not 1.
pub fn factored(p: &Polynomial) -> Result<String> {
    if p.is_constant() {
        return Ok(p.to_string());
    }
    let (c, facs) = integer_factors(p)?;
    let body = join(&facs);
    Ok(if c.is_one() {
        body
    } else if (-&c).is_one() {
        format!("-{body}")
    } else {
        format!("{c}*{body}")
    })
}

/// Generators of the reduced degrevlex basis, each written as a product of integer factors
/// (generators of an ideal are only defined up to a constant, so none is printed).
pub fn present_ideal(ideal: &IdealHandle) -> Result<Vec<String>> {
    let basis = ideal.canonical_basis()?;
    basis
        .iter()
        .map(|g| {
            if g.is_constant() {
                return Ok("1".to_string());
            }
            let (_, facs) = integer_factors(g)?;
            Ok(join(&facs))
        })
        .collect()
}
