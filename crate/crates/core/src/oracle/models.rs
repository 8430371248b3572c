//! Explicit finite models with their own evaluators.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{Formula, ModalOp};

/// A Kripke model on states `0..n`; state 0 is the point of evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub valuation: Vec<BTreeSet<String>>,
    pub succ: Vec<BTreeSet<usize>>,
}

/// A conditional model: each state selects a set for finitely many
/// antecedent sets. Unlisted antecedents select nothing, or, under modus
/// ponens, the current state when it belongs to the antecedent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondModel {
    pub valuation: Vec<BTreeSet<String>>,
    pub select: Vec<BTreeMap<BTreeSet<usize>, BTreeSet<usize>>>,
    pub modus_ponens: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteModel {
    Kripke(KripkeModel),
    Cond(CondModel),
}

type Set = BTreeSet<usize>;

fn extension(
    n: usize,
    valuation: &[BTreeSet<String>],
    f: &Formula,
    modal: &dyn Fn(usize, &ModalOp, &[Set]) -> bool,
) -> Set {
    let ext = |g: &Formula| extension(n, valuation, g, modal);
    let all = || (0..n).collect::<Set>();
    match f {
        Formula::True => all(),
        Formula::False => Set::new(),
        Formula::Var(v) => (0..n).filter(|&x| valuation[x].contains(v)).collect(),
        Formula::Not(g) => all().difference(&ext(g)).copied().collect(),
        Formula::And(l, r) => ext(l).intersection(&ext(r)).copied().collect(),
        Formula::Or(l, r) => ext(l).union(&ext(r)).copied().collect(),
        Formula::Implies(l, r) => {
            let (a, b) = (ext(l), ext(r));
            (0..n).filter(|x| !a.contains(x) || b.contains(x)).collect()
        }
        Formula::Iff(l, r) => {
            let (a, b) = (ext(l), ext(r));
            (0..n).filter(|x| a.contains(x) == b.contains(x)).collect()
        }
        Formula::Modal(op, args) => {
            let exts: Vec<Set> = args.iter().map(ext).collect();
            (0..n).filter(|&x| modal(x, op, &exts)).collect()
        }
    }
}

impl KripkeModel {
    pub fn len(&self) -> usize {
        self.valuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuation.is_empty()
    }

    pub fn extension(&self, f: &Formula) -> Set {
        extension(self.len(), &self.valuation, f, &|x, op, exts| match op {
            ModalOp::Box => self.succ[x].is_subset(&exts[0]),
            other => panic!("`{}` in a Kripke model", other.spelling()),
        })
    }

    pub fn holds(&self, x: usize, f: &Formula) -> bool {
        self.extension(f).contains(&x)
    }
}

impl CondModel {
    pub fn len(&self) -> usize {
        self.valuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuation.is_empty()
    }

    pub fn selection(&self, x: usize, a: &Set) -> Set {
        match self.select[x].get(a) {
            Some(s) => s.clone(),
            None if self.modus_ponens && a.contains(&x) => [x].into(),
            None => Set::new(),
        }
    }

    pub fn extension(&self, f: &Formula) -> Set {
        extension(self.len(), &self.valuation, f, &|x, op, exts| match op {
            ModalOp::Cond => self.selection(x, &exts[0]).is_subset(&exts[1]),
            other => panic!("`{}` in a conditional model", other.spelling()),
        })
    }

    pub fn holds(&self, x: usize, f: &Formula) -> bool {
        self.extension(f).contains(&x)
    }
}

impl FiniteModel {
    pub fn len(&self) -> usize {
        match self {
            FiniteModel::Kripke(m) => m.len(),
            FiniteModel::Cond(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn holds(&self, x: usize, f: &Formula) -> bool {
        match self {
            FiniteModel::Kripke(m) => m.holds(x, f),
            FiniteModel::Cond(m) => m.holds(x, f),
        }
    }
}
