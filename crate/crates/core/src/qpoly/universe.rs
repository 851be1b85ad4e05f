use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{usage, Result};

use super::order::TermOrder;

/// Role of a variable inside the rings used by the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarClass {
    /// Position variable `x_i`.
    X,
    /// Derivation `∂x_i`, paired with the `X` variable of the same rank.
    Dx,
    /// Malgrange variable `t_j`.
    T,
    /// Derivation `∂t_j`, paired with the `T` variable of the same rank.
    Dt,
    /// Commutative homogenization variable `u_j`.
    U,
    /// Commutative inverse `v_j` of `u_j`.
    V,
    /// Central parameter `s_j`.
    S,
    /// Auxiliary variable added by an extension operation (tag, minimal polynomial slot, ...).
    Aux,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub class: VarClass,
    /// For derivations, index of the paired position variable; for positions, index of
    /// the paired derivation when one exists.
    pub partner: Option<usize>,
}

/// Ordered list of distinct named variables.
#[derive(Clone)]
pub struct VarUniverse {
    vars: Vec<Var>,
    by_name: HashMap<String, usize>,
    canonical: TermOrder,
}

impl PartialEq for VarUniverse {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for VarUniverse {}

impl fmt::Debug for VarUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vars.iter().map(|v| &v.name)).finish()
    }
}

impl VarUniverse {
    /// Builds a universe. Derivations are paired with position variables by rank: the k-th
    /// `Dx` goes with the k-th `X`, the k-th `Dt` with the k-th `T`.
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, VarClass)>) -> Result<Arc<Self>> {
        let mut out: Vec<Var> = Vec::new();
        let mut by_name = HashMap::new();
        for (name, class) in vars {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(usage(format!("invalid variable name `{name}`")));
            }
            if by_name.insert(name.clone(), out.len()).is_some() {
                return Err(usage(format!("duplicate variable `{name}`")));
            }
            out.push(Var { name, class, partner: None });
        }
        for (pos, der) in [(VarClass::X, VarClass::Dx), (VarClass::T, VarClass::Dt)] {
            let ps: Vec<usize> = (0..out.len()).filter(|&i| out[i].class == pos).collect();
            let ds: Vec<usize> = (0..out.len()).filter(|&i| out[i].class == der).collect();
            if ds.is_empty() {
                continue;
            }
            if ds.len() != ps.len() {
                return Err(usage(format!(
                    "{} derivation variables but {} position variables",
                    ds.len(),
                    ps.len()
                )));
            }
            for (&p, &d) in ps.iter().zip(&ds) {
                out[p].partner = Some(d);
                out[d].partner = Some(p);
            }
        }
        let canonical = TermOrder::degrevlex(out.len());
        Ok(Arc::new(VarUniverse { vars: out, by_name, canonical }))
    }

    /// Universe of commuting `X`-class variables.
    pub fn polynomial_ring<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        Self::new(names.into_iter().map(|n| (n, VarClass::X)))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &Var {
        &self.vars[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn class(&self, i: usize) -> VarClass {
        self.vars[i].class
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn indices_of_class(&self, class: VarClass) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.vars[i].class == class).collect()
    }

    /// Degrevlex over the declared variable order; fixes canonical term order and printing.
    pub fn canonical_order(&self) -> &TermOrder {
        &self.canonical
    }

    /// `(position, derivation)` index pairs, i.e. the non-commuting pairs of the Weyl algebra.
    pub fn weyl_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.vars.len())
            .filter(|&i| matches!(self.vars[i].class, VarClass::Dx | VarClass::Dt))
            .map(|d| (self.vars[d].partner.unwrap(), d))
            .collect()
    }

    /// Returns a copy of this universe with extra auxiliary variables appended, choosing
    /// names that do not collide with existing ones.
    pub fn extend_aux(&self, stems: &[&str]) -> Arc<VarUniverse> {
        let mut vars: Vec<(String, VarClass)> =
            self.vars.iter().map(|v| (v.name.clone(), v.class)).collect();
        for stem in stems {
            let mut k = 0usize;
            let name = loop {
                let cand = if k == 0 { format!("_{stem}") } else { format!("_{stem}{k}") };
                if !vars.iter().any(|(n, _)| *n == cand) {
                    break cand;
                }
                k += 1;
            };
            vars.push((name, VarClass::Aux));
        }
        VarUniverse::new(vars).expect("extension keeps the universe valid")
    }

    /// Sub-universe made of the listed variables, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Arc<VarUniverse> {
        VarUniverse::new(keep.iter().map(|&i| (self.vars[i].name.clone(), self.vars[i].class)))
            .expect("restriction keeps the universe valid")
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_by_rank() {
        let u = VarUniverse::new([
            ("x", VarClass::X),
            ("y", VarClass::X),
            ("dx", VarClass::Dx),
            ("dy", VarClass::Dx),
            ("s1", VarClass::S),
        ])
        .unwrap();
        assert_eq!(u.weyl_pairs(), vec![(0, 2), (1, 3)]);
        assert_eq!(u.var(0).partner, Some(2));
    }

    #[test]
    fn rejects_duplicates_and_unpaired() {
        assert!(VarUniverse::polynomial_ring(["x", "x"]).is_err());
        assert!(VarUniverse::new([("x", VarClass::X), ("dx", VarClass::Dx), ("dy", VarClass::Dx)]).is_err());
        assert!(VarUniverse::polynomial_ring(["1x"]).is_err());
    }

    #[test]
    fn aux_names_avoid_collisions() {
        let u = VarUniverse::new([("_w", VarClass::X)]).unwrap();
        let e = u.extend_aux(&["w"]);
        assert_eq!(e.name(1), "_w1");
        assert_eq!(e.class(1), VarClass::Aux);
    }
}
