//! Atom bookkeeping: which subformulas get signs, and which of them form the
//! carrier alphabet of one-step models.

use std::collections::BTreeMap;

use super::{render, Formula};
use crate::error::{Error, Result};

/// A guessed truth value for each atom (variables and modal nodes).
pub type SignMap = BTreeMap<Formula, bool>;

/// Atom structure of a formula.
///
/// The alphabet holds the atoms that occur strictly inside some modal
/// operator. Each letter stands for itself, so the substitution mapping
/// letters back to formulas is the identity on this representation and is
/// trivially injective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    /// All atoms, distinct, in preorder of first occurrence.
    pub atoms: Vec<Formula>,
    /// Atoms under at least one modal operator, in preorder of first
    /// occurrence.
    pub alphabet: Vec<Formula>,
    /// Atoms with an occurrence outside every modal operator.
    pub top_level: Vec<Formula>,
}

impl Analysis {
    pub fn letter_index(&self, atom: &Formula) -> Option<usize> {
        self.alphabet.iter().position(|a| a == atom)
    }
}

pub fn analyze(f: &Formula) -> Analysis {
    let mut a = Analysis {
        atoms: Vec::new(),
        alphabet: Vec::new(),
        top_level: Vec::new(),
    };
    walk(f, 0, &mut a);
    a
}

fn push_unique(v: &mut Vec<Formula>, f: &Formula) {
    if !v.contains(f) {
        v.push(f.clone());
    }
}

fn walk(f: &Formula, depth: usize, a: &mut Analysis) {
    if f.is_atom() {
        push_unique(&mut a.atoms, f);
        if depth == 0 {
            push_unique(&mut a.top_level, f);
        } else {
            push_unique(&mut a.alphabet, f);
        }
    }
    let inner = depth + usize::from(matches!(f, Formula::Modal(..)));
    for c in f.children() {
        walk(c, inner, a);
    }
}

/// Evaluates `f` with every atom replaced by its sign.
pub fn skeleton_entails(s: &SignMap, f: &Formula) -> Result<bool> {
    let mut missing = None;
    let value = f.eval_with(&mut |atom| match s.get(atom) {
        Some(&b) => b,
        None => {
            missing.get_or_insert_with(|| render(atom));
            false
        }
    });
    match missing {
        Some(atom) => Err(Error::MissingAtom(atom)),
        None => Ok(value),
    }
}
