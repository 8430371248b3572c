//! Shallow witness models: an independent model checker, a verifier for the
//! shape guarantees of solver output, and a JSON encoding.

mod json;

use std::collections::{BTreeSet, HashMap};

pub use json::{from_json, to_json};

use crate::arith::IlpOptions;
use crate::error::{Error, Result};
use crate::formula::{rank, Formula, ModalOp};
use crate::logic::Logic;
use crate::logics::engine_for;
use crate::onestep::{ClauseShape, Engine, Extension, Frame, Structure};

/// One state of a witness. Its structure ranges over `children`, in order;
/// a looped state is among its own children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub vars: BTreeSet<String>,
    pub looped: bool,
    pub children: Vec<usize>,
    pub structure: Structure,
}

impl State {
    /// The successor frame: the children, with the state itself designated
    /// when it loops.
    pub fn frame(&self, id: usize) -> Frame {
        Frame {
            size: self.children.len(),
            designated: if self.looped {
                self.children.iter().position(|&c| c == id)
            } else {
                None
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShallowModel {
    pub logic: Logic,
    pub root: usize,
    pub states: Vec<State>,
}

impl ShallowModel {
    /// Edges of the supporting frame, loops included.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.states
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.children.iter().map(move |&c| (i, c)))
            .collect()
    }

    /// Length of the longest loop-free path from the root.
    pub fn depth(&self) -> usize {
        fn go(m: &ShallowModel, i: usize, seen: &mut Vec<bool>) -> usize {
            if std::mem::replace(&mut seen[i], true) {
                return 0;
            }
            m.states[i]
                .children
                .iter()
                .filter(|&&c| c != i)
                .map(|&c| 1 + go(m, c, seen))
                .max()
                .unwrap_or(0)
        }
        go(self, self.root, &mut vec![false; self.states.len()])
    }

    /// Checks indices, loop flags and that structures live on the children.
    pub fn check_well_formed(&self) -> Result<()> {
        let n = self.states.len();
        if self.root >= n {
            return Err(Error::MalformedModel(format!("root {} out of range", self.root)));
        }
        for (i, s) in self.states.iter().enumerate() {
            if let Some(c) = s.children.iter().find(|&&c| c >= n) {
                return Err(Error::MalformedModel(format!("state {i} has unknown child {c}")));
            }
            let distinct: BTreeSet<_> = s.children.iter().collect();
            if distinct.len() != s.children.len() {
                return Err(Error::MalformedModel(format!("state {i} repeats a child")));
            }
            if s.looped != s.children.contains(&i) {
                return Err(Error::MalformedModel(format!(
                    "state {i}: loop flag disagrees with its children"
                )));
            }
            let size = s.children.len();
            let ok = match &s.structure {
                Structure::Kripke { succ } => succ.universe() == size,
                Structure::Cond { entries } => entries
                    .iter()
                    .all(|(p, v)| p.universe() == size && v.universe() == size),
                Structure::Agency { entries } => entries.iter().all(|(p, _)| p.universe() == size),
                Structure::Count { weights } => weights.len() == size,
                Structure::Prob { mass } => mass.len() == size,
            };
            if !ok {
                return Err(Error::MalformedModel(format!(
                    "state {i}: structure does not range over its {size} children"
                )));
            }
        }
        Ok(())
    }
}

/// Truth of `f` at `state`. Modal atoms are evaluated by the logic's
/// predicate lifting over the state's children.
pub fn model_check(m: &ShallowModel, state: usize, f: &Formula) -> Result<bool> {
    m.check_well_formed()?;
    if state >= m.states.len() {
        return Err(Error::MalformedModel(format!("state {state} out of range")));
    }
    let engine = engine_for(&m.logic, &IlpOptions::default());
    let mut checker = Checker {
        m,
        engine: engine.as_ref(),
        memo: HashMap::new(),
    };
    checker.holds(state, f)
}

struct Checker<'a> {
    m: &'a ShallowModel,
    engine: &'a dyn Engine,
    memo: HashMap<(usize, *const Formula), bool>,
}

impl Checker<'_> {
    fn holds(&mut self, x: usize, f: &Formula) -> Result<bool> {
        let key = (x, f as *const Formula);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(v) => self.m.states[x].vars.contains(v),
            Formula::Not(g) => !self.holds(x, g)?,
            Formula::And(l, r) => self.holds(x, l)? && self.holds(x, r)?,
            Formula::Or(l, r) => self.holds(x, l)? || self.holds(x, r)?,
            Formula::Implies(l, r) => !self.holds(x, l)? || self.holds(x, r)?,
            Formula::Iff(l, r) => self.holds(x, l)? == self.holds(x, r)?,
            Formula::Modal(op, args) => self.modal(x, op, args)?,
        };
        self.memo.insert(key, v);
        Ok(v)
    }

    fn modal(&mut self, x: usize, op: &ModalOp, args: &[Formula]) -> Result<bool> {
        let state = &self.m.states[x];
        let mut exts = Vec::with_capacity(args.len());
        for a in args {
            let mut e = Extension::empty(state.children.len());
            for (k, &c) in state.children.iter().enumerate() {
                if self.holds(c, a)? {
                    e.insert(k);
                }
            }
            exts.push(e);
        }
        let kind_matches = matches!(
            (&state.structure, op),
            (Structure::Kripke { .. }, ModalOp::Box)
                | (Structure::Cond { .. }, ModalOp::Cond)
                | (Structure::Agency { .. }, ModalOp::Effect | ModalOp::Capable)
                | (Structure::Count { .. }, ModalOp::Count(_))
                | (Structure::Prob { .. }, ModalOp::Likelihood(_))
        );
        if !kind_matches {
            return Err(Error::MalformedModel(format!(
                "`{}` cannot be evaluated on a {} structure",
                op.spelling(),
                state.structure.kind()
            )));
        }
        Ok(self
            .engine
            .eval_atom(&state.structure, &state.frame(x), op, &exts))
    }
}

/// One named check of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

/// A clause shape covering every one-step clause the solver can build for
/// `f`: all modal subformulas, each possibly negated.
pub fn query_shape(f: &Formula) -> ClauseShape {
    let atoms = f.modal_atoms();
    let literals: Vec<crate::onestep::Literal> = atoms
        .iter()
        .filter_map(|a| match a {
            Formula::Modal(op, _) => Some(crate::onestep::Literal {
                positive: false,
                op: op.clone(),
                args: vec![],
            }),
            _ => None,
        })
        .collect();
    crate::onestep::OneStepClause::new(literals).shape()
}

/// Re-checks a witness for `f`: well-formedness, root satisfaction, frame
/// conditions at every state, tree shape after removing loops, depth at
/// most the rank of `f`, and, when `small` is set, the engine's size bounds
/// at every state.
pub fn verify(m: &ShallowModel, f: &Formula, small: bool) -> VerifyReport {
    let mut report = VerifyReport::default();
    if let Err(e) = m.check_well_formed() {
        report.record("well-formed", false, e.to_string());
        return report;
    }
    report.record("well-formed", true, "");

    match model_check(m, m.root, f) {
        Ok(v) => report.record("root-satisfies", v, if v { "" } else { "query false at root" }),
        Err(e) => report.record("root-satisfies", false, e.to_string()),
    }

    let engine = engine_for(&m.logic, &IlpOptions::default());
    let bad: Vec<usize> = (0..m.states.len())
        .filter(|&i| !engine.check_structure(&m.states[i].structure, &m.states[i].frame(i)))
        .collect();
    report.record("frame-conditions", bad.is_empty(), format!("violated at {bad:?}"));

    let mut parents = vec![0usize; m.states.len()];
    for (i, c) in m.edges() {
        if i != c {
            parents[c] += 1;
        }
    }
    let mut reached = vec![false; m.states.len()];
    let mut stack = vec![m.root];
    while let Some(i) = stack.pop() {
        if !std::mem::replace(&mut reached[i], true) {
            stack.extend(m.states[i].children.iter().copied());
        }
    }
    let tree = parents[m.root] == 0
        && (0..m.states.len()).all(|i| reached[i] && (i == m.root || parents[i] == 1));
    report.record("tree-with-loops", tree, "");

    let loops_ok = engine.capabilities().copointed
        || matches!(m.logic, Logic::Prob)
        || m.states.iter().all(|s| !s.looped);
    report.record("loops-only-where-copointed", loops_ok, "");

    let (depth, r) = (m.depth(), rank(f));
    report.record("depth", depth <= r, format!("depth {depth}, rank {r}"));

    if small {
        let shape = query_shape(f);
        let mut over = Vec::new();
        for (i, s) in m.states.iter().enumerate() {
            let bounds = engine.size_bounds(&shape, s.children.len());
            let carrier_ok = bounds.carrier.is_none_or(|b| s.children.len() <= b);
            let structure_ok = bounds
                .structure
                .is_none_or(|b| engine.structure_size(&s.structure) <= b);
            if !(carrier_ok && structure_ok) {
                over.push(i);
            }
        }
        report.record("size-bounds", over.is_empty(), format!("exceeded at {over:?}"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn state(vars: &[&str], children: Vec<usize>, looped: bool, structure: Structure) -> State {
        State {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            looped,
            children,
            structure,
        }
    }

    fn kripke(succ: Vec<usize>, size: usize) -> Structure {
        Structure::Kripke {
            succ: Extension::from_indices(size, succ),
        }
    }

    #[test]
    fn empty_successors_satisfy_box_false() {
        let m = ShallowModel {
            logic: Logic::K,
            root: 0,
            states: vec![state(&[], vec![], false, kripke(vec![], 0))],
        };
        assert!(model_check(&m, 0, &parse("[]false", &Logic::K).unwrap()).unwrap());
    }

    #[test]
    fn diamond_along_an_edge() {
        let m = ShallowModel {
            logic: Logic::K,
            root: 0,
            states: vec![
                state(&[], vec![1], false, kripke(vec![0], 1)),
                state(&["p"], vec![], false, kripke(vec![], 0)),
            ],
        };
        assert!(model_check(&m, 0, &parse("<>p", &Logic::K).unwrap()).unwrap());
        assert!(verify(&m, &parse("<>p", &Logic::K).unwrap(), true).passed());
    }

    fn t_loop(looped: bool) -> ShallowModel {
        let (children, succ) = if looped { (vec![0], vec![0]) } else { (vec![], vec![]) };
        ShallowModel {
            logic: Logic::T,
            root: 0,
            states: vec![state(&[], children.clone(), looped, kripke(succ, children.len()))],
        }
    }

    #[test]
    fn reflexive_loop_sees_the_state_itself() {
        let m = t_loop(true);
        assert!(!model_check(&m, 0, &parse("[]p", &Logic::T).unwrap()).unwrap());
    }

    #[test]
    fn dropped_loop_breaks_the_frame_condition() {
        let f = parse("~[]p", &Logic::T).unwrap();
        let report = verify(&t_loop(false), &f, false);
        assert!(report.failures().any(|c| c.name == "frame-conditions"));
    }

    #[test]
    fn depth_is_bounded_by_rank() {
        let m = ShallowModel {
            logic: Logic::K,
            root: 0,
            states: vec![
                state(&[], vec![1], false, kripke(vec![0], 1)),
                state(&[], vec![2], false, kripke(vec![0], 1)),
                state(&["p"], vec![], false, kripke(vec![], 0)),
            ],
        };
        let two = parse("<><>p", &Logic::K).unwrap();
        assert!(verify(&m, &two, false).passed());
        let one = parse("<>true", &Logic::K).unwrap();
        let report = verify(&m, &one, false);
        assert_eq!(report.failures().map(|c| c.name).collect::<Vec<_>>(), vec!["depth"]);
    }

    #[test]
    fn shared_children_are_not_a_tree() {
        let m = ShallowModel {
            logic: Logic::K,
            root: 0,
            states: vec![
                state(&[], vec![1, 2], false, kripke(vec![0, 1], 2)),
                state(&[], vec![2], false, kripke(vec![0], 1)),
                state(&[], vec![], false, kripke(vec![], 0)),
            ],
        };
        let f = parse("<><>true", &Logic::K).unwrap();
        assert!(verify(&m, &f, false).failures().any(|c| c.name == "tree-with-loops"));
    }

    #[test]
    fn malformed_models_are_rejected() {
        let m = ShallowModel {
            logic: Logic::K,
            root: 0,
            states: vec![state(&[], vec![3], false, kripke(vec![], 1))],
        };
        assert!(matches!(
            model_check(&m, 0, &Formula::True),
            Err(Error::MalformedModel(_))
        ));
    }
}
