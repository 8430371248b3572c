//! Formula AST, concrete syntax, structural measures and propositional
//! skeleton reasoning.

mod analysis;
mod parse;
mod render;

use std::collections::BTreeSet;

pub use analysis::{analyze, skeleton_entails, Analysis, SignMap};
pub use parse::parse;
pub use render::render;

use crate::arith::Rat;

/// A modal formula. Propositional variables are kept apart from [`ModalOp`]
/// even though semantically they are nullary operators: they contribute 0 to
/// the rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Modal(ModalOp, Vec<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalOp {
    /// `[]` of K and T.
    Box,
    /// The binary conditional `=>`.
    Cond,
    /// Agency: the agent brings about.
    Effect,
    /// Agency: the agent is capable of realising.
    Capable,
    /// `sum a_i #(phi_i) ~ b`.
    Count(CountAtom),
    /// `sum a_i l(phi_i) >= b`.
    Likelihood(LikelihoodAtom),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountAtom {
    pub coeffs: Vec<i64>,
    pub rel: CountRel,
    pub bound: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CountRel {
    Lt,
    Gt,
    Eq,
    /// Congruence modulo `modulus`; invariant `modulus >= 1`, `residue < modulus`.
    Mod { modulus: u64, residue: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LikelihoodAtom {
    pub coeffs: Vec<Rat>,
    pub bound: Rat,
}

impl ModalOp {
    pub fn arity(&self) -> usize {
        match self {
            ModalOp::Box | ModalOp::Effect | ModalOp::Capable => 1,
            ModalOp::Cond => 2,
            ModalOp::Count(c) => c.coeffs.len(),
            ModalOp::Likelihood(l) => l.coeffs.len(),
        }
    }

    /// Surface spelling, used in diagnostics.
    pub fn spelling(&self) -> &'static str {
        match self {
            ModalOp::Box => "[]",
            ModalOp::Cond => "=>",
            ModalOp::Effect => "E",
            ModalOp::Capable => "C",
            ModalOp::Count(_) => "#{...}",
            ModalOp::Likelihood(_) => "L{...}",
        }
    }
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn modal(op: ModalOp, args: Vec<Formula>) -> Formula {
        Formula::Modal(op, args)
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Modal(ModalOp::Box, vec![f])
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Atoms are the nodes that a sign map assigns: variables and modal nodes.
    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Var(_) | Formula::Modal(..))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => vec![],
            Formula::Not(c) => vec![c],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                vec![l, r]
            }
            Formula::Modal(_, args) => args.iter().collect(),
        }
    }

    /// Evaluates the boolean skeleton, consulting `atom` for variables and
    /// modal nodes.
    pub fn eval_with(&self, atom: &mut impl FnMut(&Formula) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(_) | Formula::Modal(..) => atom(self),
            Formula::Not(c) => !c.eval_with(atom),
            Formula::And(l, r) => l.eval_with(atom) && r.eval_with(atom),
            Formula::Or(l, r) => l.eval_with(atom) || r.eval_with(atom),
            Formula::Implies(l, r) => !l.eval_with(atom) || r.eval_with(atom),
            Formula::Iff(l, r) => l.eval_with(atom) == r.eval_with(atom),
        }
    }

    /// Kleene evaluation of the skeleton under a partial atom assignment.
    pub fn eval_partial(&self, atom: &impl Fn(&Formula) -> Option<bool>) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Var(_) | Formula::Modal(..) => atom(self),
            Formula::Not(c) => c.eval_partial(atom).map(|b| !b),
            Formula::And(l, r) => match (l.eval_partial(atom), r.eval_partial(atom)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Formula::Or(l, r) => match (l.eval_partial(atom), r.eval_partial(atom)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Implies(l, r) => match (l.eval_partial(atom), r.eval_partial(atom)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Iff(l, r) => match (l.eval_partial(atom), r.eval_partial(atom)) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            },
        }
    }

    /// Variables occurring anywhere in the formula.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Formula::Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Distinct modal subformulas in preorder.
    pub fn modal_atoms(&self) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = Vec::new();
        self.collect_modal(&mut out);
        out
    }

    fn collect_modal<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        if matches!(self, Formula::Modal(..)) && !out.contains(&self) {
            out.push(self);
        }
        for c in self.children() {
            c.collect_modal(out);
        }
    }
}

/// Maximal nesting depth of modal operators; variables have rank 0.
pub fn rank(f: &Formula) -> usize {
    match f {
        Formula::Modal(_, args) => 1 + args.iter().map(rank).max().unwrap_or(0),
        _ => f.children().into_iter().map(rank).max().unwrap_or(0),
    }
}

/// Token-count size measure; integer and rational parameters count with their
/// binary length.
pub fn size(f: &Formula) -> usize {
    fn bits_i(v: i64) -> usize {
        (64 - v.unsigned_abs().leading_zeros()).max(1) as usize
    }
    fn bits_r(r: &Rat) -> usize {
        (r.numer().bits() + r.denom().bits()).max(1) as usize
    }
    let own = match f {
        Formula::Modal(ModalOp::Count(c), _) => {
            let rel = match c.rel {
                CountRel::Mod { modulus, residue } => {
                    bits_i(modulus as i64) + bits_i(residue as i64)
                }
                _ => 1,
            };
            1 + c.coeffs.iter().map(|&a| bits_i(a)).sum::<usize>() + rel + bits_i(c.bound)
        }
        Formula::Modal(ModalOp::Likelihood(l), _) => {
            1 + l.coeffs.iter().map(bits_r).sum::<usize>() + bits_r(&l.bound)
        }
        _ => 1,
    };
    own + f.children().into_iter().map(size).sum::<usize>()
}
