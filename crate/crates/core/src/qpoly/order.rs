use std::cmp::Ordering;

use crate::error::{usage, Result};

use super::monomial::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegRevLex,
}

/// A group of variables compared with one inner order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub vars: Vec<usize>,
    pub kind: OrderKind,
}

/// Monomial order: an optional non-negative weight vector compared first, then a sequence
/// of blocks. Every monomial involving an earlier block dominates any monomial that agrees
/// with it on that block's exponents and is free of it, which realizes elimination orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    nvars: usize,
    weight: Option<Vec<i64>>,
    blocks: Vec<Block>,
}

impl TermOrder {
    pub fn lex(nvars: usize) -> Self {
        TermOrder {
            nvars,
            weight: None,
            blocks: vec![Block { vars: (0..nvars).collect(), kind: OrderKind::Lex }],
        }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        TermOrder {
            nvars,
            weight: None,
            blocks: vec![Block { vars: (0..nvars).collect(), kind: OrderKind::DegRevLex }],
        }
    }

    /// Lex on an explicit variable precedence (first listed is largest).
    pub fn lex_by(nvars: usize, precedence: Vec<usize>) -> Result<Self> {
        Self::block(nvars, vec![Block { vars: precedence, kind: OrderKind::Lex }], None)
    }

    /// Block order; the blocks must partition `0..nvars`.
    pub fn block(nvars: usize, blocks: Vec<Block>, weight: Option<Vec<i64>>) -> Result<Self> {
        let mut seen = vec![false; nvars];
        for b in &blocks {
            for &v in &b.vars {
                if v >= nvars || seen[v] {
                    return Err(usage(format!("block order: variable {v} repeated or out of range")));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(usage("block order must cover every variable"));
        }
        if let Some(w) = &weight {
            if w.len() != nvars || w.iter().any(|&x| x < 0) {
                return Err(usage("weight vector must be non-negative with one entry per variable"));
            }
        }
        let blocks = blocks.into_iter().filter(|b| !b.vars.is_empty()).collect();
        Ok(TermOrder { nvars, weight, blocks })
    }

    /// Two-block elimination order: `first` strictly dominates the rest, degrevlex inside both.
    pub fn elimination(nvars: usize, first: &[usize]) -> Self {
        let rest: Vec<usize> = (0..nvars).filter(|v| !first.contains(v)).collect();
        Self::block(
            nvars,
            vec![
                Block { vars: first.to_vec(), kind: OrderKind::DegRevLex },
                Block { vars: rest, kind: OrderKind::DegRevLex },
            ],
            None,
        )
        .expect("elimination blocks partition the variables")
    }

    /// Elimination order for `first`: the total degree in `first` is compared first, then
    /// degrevlex over all variables. Restricted to the other variables it is their degrevlex.
    pub fn weighted_elimination(nvars: usize, first: &[usize]) -> Self {
        let weight = (0..nvars).map(|v| i64::from(first.contains(&v))).collect();
        Self::block(nvars, vec![Block { vars: (0..nvars).collect(), kind: OrderKind::DegRevLex }], Some(weight))
            .expect("one block over every variable")
    }

    /// Degrevlex blocks in the listed order.
    pub fn blocks_degrevlex(nvars: usize, groups: &[Vec<usize>]) -> Self {
        Self::block(
            nvars,
            groups
                .iter()
                .map(|g| Block { vars: g.clone(), kind: OrderKind::DegRevLex })
                .collect(),
            None,
        )
        .expect("groups partition the variables")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Orders two monomials of the same length.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exps(), b.exps());
        if let Some(w) = &self.weight {
            let wa: i64 = ea.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum();
            let wb: i64 = eb.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum();
            match wa.cmp(&wb) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        for block in &self.blocks {
            let o = match block.kind {
                OrderKind::Lex => {
                    let mut o = Ordering::Equal;
                    for &v in &block.vars {
                        if ea[v] != eb[v] {
                            o = ea[v].cmp(&eb[v]);
                            break;
                        }
                    }
                    o
                }
                OrderKind::DegRevLex => {
                    let da: u32 = block.vars.iter().map(|&v| ea[v] as u32).sum();
                    let db: u32 = block.vars.iter().map(|&v| eb[v] as u32).sum();
                    if da != db {
                        da.cmp(&db)
                    } else {
                        let mut o = Ordering::Equal;
                        for &v in block.vars.iter().rev() {
                            if ea[v] != eb[v] {
                                o = eb[v].cmp(&ea[v]);
                                break;
                            }
                        }
                        o
                    }
                }
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    /// Checked comparison that reports monomials from a different universe size.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != self.nvars || b.nvars() != self.nvars {
            return Err(usage("monomials and order belong to different universes"));
        }
        Ok(self.cmp(a, b))
    }
}
