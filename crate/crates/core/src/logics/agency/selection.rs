//! Translations between three-valued agency models and selection function
//! models, where `f(x)(A) ⊆ X`, `E a` holds at `x` iff `x ∈ f(x)(⟦a⟧)` and
//! `C a` iff `f(x)(⟦a⟧) ≠ ∅`.

use std::collections::{BTreeMap, BTreeSet};

use super::{closure_eval, conditions_hold, Three};
use crate::error::{Error, Result};
use crate::formula::{Formula, ModalOp};
use crate::logic::Logic;
use crate::onestep::{Extension, Frame, Structure};
use crate::witness::{model_check, ShallowModel};

type StateSet = BTreeSet<usize>;

/// A finite selection function model. Each state lists its selections on
/// finitely many sets; every unlisted set selects nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionModel {
    pub valuation: Vec<BTreeSet<String>>,
    pub table: Vec<BTreeMap<StateSet, StateSet>>,
}

impl SelectionModel {
    pub fn len(&self) -> usize {
        self.valuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuation.is_empty()
    }

    pub fn select(&self, x: usize, a: &StateSet) -> StateSet {
        self.table[x].get(a).cloned().unwrap_or_default()
    }

    /// Checks that the whole state set selects nothing, that selections
    /// are closed under intersection and that `f(x)(A) ⊆ A`.
    pub fn check_conditions(&self) -> Result<()> {
        let all: StateSet = (0..self.len()).collect();
        for (x, table) in self.table.iter().enumerate() {
            if !self.select(x, &all).is_empty() {
                return Err(Error::FrameCondition(format!(
                    "state {x} selects from the whole state set"
                )));
            }
            for (a, fa) in table {
                if !fa.is_subset(a) {
                    return Err(Error::FrameCondition(format!(
                        "state {x} selects outside the argument {a:?}"
                    )));
                }
                for (b, fb) in table {
                    let meet: StateSet = a.intersection(b).copied().collect();
                    let both: StateSet = fa.intersection(fb).copied().collect();
                    if !both.is_subset(&self.select(x, &meet)) {
                        return Err(Error::FrameCondition(format!(
                            "state {x}: selections on {a:?} and {b:?} are not preserved by their intersection"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// States satisfying `f`.
    pub fn extension(&self, f: &Formula) -> Result<StateSet> {
        extension_with(f, self.len(), &self.valuation, &mut |x, op, arg| {
            let chosen = self.select(x, arg);
            Ok(match op {
                ModalOp::Effect => chosen.contains(&x),
                _ => !chosen.is_empty(),
            })
        })
    }
}

/// A three-valued agency coalgebra on an explicit state set, each state
/// carrying a partial map over subsets of all states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgencyCoalgebra {
    pub valuation: Vec<BTreeSet<String>>,
    pub entries: Vec<Vec<(StateSet, Three)>>,
}

impl AgencyCoalgebra {
    pub fn len(&self) -> usize {
        self.valuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuation.is_empty()
    }

    fn partial_map(&self, x: usize) -> Vec<(Extension, Three)> {
        let n = self.len();
        self.entries[x]
            .iter()
            .map(|(a, v)| (to_extension(a, n), *v))
            .collect()
    }

    pub fn extension(&self, f: &Formula) -> Result<StateSet> {
        let n = self.len();
        extension_with(f, n, &self.valuation, &mut |x, op, arg| {
            let v = closure_eval(&self.partial_map(x), &to_extension(arg, n));
            Ok(match op {
                ModalOp::Effect => v == Three::Top,
                _ => v != Three::Bot,
            })
        })
    }
}

fn to_extension(a: &StateSet, n: usize) -> Extension {
    Extension::from_indices(n, a.iter().copied())
}

fn extension_with(
    f: &Formula,
    n: usize,
    valuation: &[BTreeSet<String>],
    modal: &mut dyn FnMut(usize, &ModalOp, &StateSet) -> Result<bool>,
) -> Result<StateSet> {
    let all = || (0..n).collect::<StateSet>();
    let rec = |g: &Formula, modal: &mut dyn FnMut(usize, &ModalOp, &StateSet) -> Result<bool>| {
        extension_with(g, n, valuation, modal)
    };
    Ok(match f {
        Formula::True => all(),
        Formula::False => StateSet::new(),
        Formula::Var(v) => (0..n).filter(|&x| valuation[x].contains(v)).collect(),
        Formula::Not(g) => {
            let e = rec(g, modal)?;
            all().difference(&e).copied().collect()
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            let (a, b) = (rec(l, modal)?, rec(r, modal)?);
            (0..n)
                .filter(|x| {
                    let (p, q) = (a.contains(x), b.contains(x));
                    match f {
                        Formula::And(..) => p && q,
                        Formula::Or(..) => p || q,
                        Formula::Implies(..) => !p || q,
                        _ => p == q,
                    }
                })
                .collect()
        }
        Formula::Modal(op @ (ModalOp::Effect | ModalOp::Capable), args) => {
            let arg = rec(&args[0], modal)?;
            let mut out = StateSet::new();
            for x in 0..n {
                if modal(x, op, &arg)? {
                    out.insert(x);
                }
            }
            out
        }
        Formula::Modal(op, _) => {
            return Err(Error::LogicMismatch {
                op: op.spelling().into(),
                logic: Logic::Agency.to_string(),
            })
        }
    })
}

/// Arguments of agency operators in `f`, in preorder.
fn modal_arguments(f: &Formula) -> Vec<&Formula> {
    f.modal_atoms()
        .into_iter()
        .filter_map(|m| match m {
            Formula::Modal(_, args) => args.first(),
            _ => None,
        })
        .collect()
}

/// `sets` together with the whole state set, closed under intersection.
fn meet_closure(mut sets: BTreeSet<StateSet>, n: usize) -> BTreeSet<StateSet> {
    sets.insert((0..n).collect());
    loop {
        let mut added = false;
        let snapshot: Vec<StateSet> = sets.iter().cloned().collect();
        for a in &snapshot {
            for b in &snapshot {
                if sets.insert(a.intersection(b).copied().collect()) {
                    added = true;
                }
            }
        }
        if !added {
            return sets;
        }
    }
}

/// Builds a selection function model from an agency witness.
///
/// Every state `i` becomes twins `2i` and `2i + 1`, so that no state is the
/// only member of a formula's extension. A set valued `⊤` selects itself,
/// `*` selects itself minus the selecting state and `⊥` selects nothing.
/// Selections are tabulated on the extensions of the arguments of modal
/// operators in `f` and the intersections of those.
pub fn to_selection(m: &ShallowModel, f: &Formula) -> Result<SelectionModel> {
    if m.logic != Logic::Agency {
        return Err(Error::Precondition(format!(
            "selection models need an agency witness, not {}",
            m.logic
        )));
    }
    let n = m.states.len();
    let mut relevant = BTreeSet::new();
    for arg in modal_arguments(f) {
        let mut ext = StateSet::new();
        for i in 0..n {
            if model_check(m, i, arg)? {
                ext.insert(2 * i);
                ext.insert(2 * i + 1);
            }
        }
        relevant.insert(ext);
    }
    let table_sets = meet_closure(relevant, 2 * n);

    let mut valuation = Vec::with_capacity(2 * n);
    let mut table = Vec::with_capacity(2 * n);
    for (i, state) in m.states.iter().enumerate() {
        let Structure::Agency { entries } = &state.structure else {
            return Err(Error::MalformedModel(format!(
                "state {i} carries a {} structure",
                state.structure.kind()
            )));
        };
        for copy in 0..2 {
            let g = 2 * i + copy;
            let mut row = BTreeMap::new();
            for a in &table_sets {
                let trace = Extension::from_indices(
                    state.children.len(),
                    state
                        .children
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| a.contains(&(2 * c + copy)))
                        .map(|(k, _)| k),
                );
                let chosen: StateSet = match closure_eval(entries, &trace) {
                    Three::Top => a.clone(),
                    Three::Star => a.iter().copied().filter(|&y| y != g).collect(),
                    Three::Bot => StateSet::new(),
                };
                row.insert(a.clone(), chosen);
            }
            valuation.push(state.vars.clone());
            table.push(row);
        }
    }
    Ok(SelectionModel { valuation, table })
}

/// Reads a three-valued coalgebra off a selection function model, pointwise
/// on the extensions relevant to `f`: `⊤` if the state selects itself, `*`
/// if it selects something else, `⊥` if it selects nothing.
///
/// The pointwise map need not respect intersections in the three-valued
/// sense (two sets may each select a different state while their
/// intersection selects nothing); such models are rejected with
/// [`Error::FrameCondition`].
pub fn from_selection(sm: &SelectionModel, f: &Formula) -> Result<AgencyCoalgebra> {
    sm.check_conditions()?;
    let n = sm.len();
    let mut relevant = BTreeSet::new();
    for arg in modal_arguments(f) {
        relevant.insert(sm.extension(arg)?);
    }
    let sets = meet_closure(relevant, n);
    let mut entries = Vec::with_capacity(n);
    for x in 0..n {
        let row: Vec<(StateSet, Three)> = sets
            .iter()
            .map(|a| {
                let chosen = sm.select(x, a);
                let v = if chosen.contains(&x) {
                    Three::Top
                } else if chosen.is_empty() {
                    Three::Bot
                } else {
                    Three::Star
                };
                (a.clone(), v)
            })
            .collect();
        let partial: Vec<(Extension, Three)> =
            row.iter().map(|(a, v)| (to_extension(a, n), *v)).collect();
        for (a, v) in &partial {
            if closure_eval(&partial, a) != *v {
                return Err(Error::FrameCondition(format!(
                    "state {x}: pointwise values are not closed under intersection at {:?}",
                    a.iter().collect::<Vec<_>>()
                )));
            }
        }
        let frame = Frame {
            size: n,
            designated: Some(x),
        };
        if !conditions_hold(&partial, &frame) {
            return Err(Error::FrameCondition(format!(
                "state {x}: pointwise values violate the agency frame conditions"
            )));
        }
        entries.push(row);
    }
    Ok(AgencyCoalgebra {
        valuation: sm.valuation.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::witness::State;

    fn agency(text: &str) -> Formula {
        parse(text, &Logic::Agency).unwrap()
    }

    fn leaf(vars: &[&str], id: usize) -> State {
        State {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            looped: true,
            children: vec![id],
            structure: Structure::Agency { entries: vec![] },
        }
    }

    #[test]
    fn single_state_model_selects_nothing() {
        let m = ShallowModel {
            logic: Logic::Agency,
            root: 0,
            states: vec![leaf(&["p"], 0)],
        };
        let sm = to_selection(&m, &agency("C p")).unwrap();
        assert_eq!(sm.len(), 2);
        assert!(sm.table.iter().all(|row| row.values().all(|s| s.is_empty())));
        sm.check_conditions().unwrap();
    }

    /// Root 0 with children [1, 2, 0] (a loop); `p` holds at 0 and 1.
    fn model(value: Three) -> ShallowModel {
        let p = Extension::from_indices(3, [0, 2]);
        ShallowModel {
            logic: Logic::Agency,
            root: 0,
            states: vec![
                State {
                    vars: ["p".to_string()].into(),
                    looped: true,
                    children: vec![1, 2, 0],
                    structure: Structure::Agency {
                        entries: vec![(p, value)],
                    },
                },
                leaf(&["p"], 1),
                leaf(&[], 2),
            ],
        }
    }

    #[test]
    fn effect_selects_the_state_itself() {
        let f = agency("E p");
        let m = model(Three::Top);
        assert!(model_check(&m, 0, &f).unwrap());
        let sm = to_selection(&m, &f).unwrap();
        sm.check_conditions().unwrap();
        let ext = sm.extension(&f).unwrap();
        assert!(ext.contains(&0) && ext.contains(&1));
    }

    #[test]
    fn bare_capability_selects_a_twin() {
        let f = agency("C p & ~E p");
        let m = model(Three::Star);
        assert!(model_check(&m, 0, &f).unwrap());
        let sm = to_selection(&m, &f).unwrap();
        let p = sm.extension(&agency("p")).unwrap();
        let chosen = sm.select(0, &p);
        assert!(!chosen.is_empty() && !chosen.contains(&0));
        assert!(sm.extension(&f).unwrap().contains(&0));
    }

    #[test]
    fn round_trip_preserves_truth() {
        let f = agency("(C p & ~E p) | E ~p");
        for value in [Three::Star, Three::Top, Three::Bot] {
            let m = model(value);
            if value == Three::Top {
                // Not a model: ⊤ must contain the current state, which it does.
                assert!(m.states[0].children[2] == 0);
            }
            let sm = to_selection(&m, &f).unwrap();
            let back = from_selection(&sm, &f).unwrap();
            for sub in [agency("C p"), agency("E p"), agency("E ~p"), f.clone()] {
                for i in 0..m.states.len() {
                    let truth = model_check(&m, i, &sub).unwrap();
                    for g in [2 * i, 2 * i + 1] {
                        assert_eq!(sm.extension(&sub).unwrap().contains(&g), truth);
                        assert_eq!(back.extension(&sub).unwrap().contains(&g), truth);
                    }
                }
            }
        }
    }

    #[test]
    fn violated_inclusion_is_rejected() {
        let sm = SelectionModel {
            valuation: vec![BTreeSet::new(), ["p".to_string()].into()],
            table: vec![
                [([1].into(), [0].into())].into_iter().collect(),
                BTreeMap::new(),
            ],
        };
        assert!(matches!(
            from_selection(&sm, &agency("C p")),
            Err(Error::FrameCondition(_))
        ));
    }

    #[test]
    fn pointwise_values_can_break_intersections() {
        // State 0 selects {1} from p and {2} from q but nothing from p & q.
        // This satisfies the selection conditions, yet C p & C q holds at 0
        // while C (p & q) does not, which no three-valued model allows.
        let p: StateSet = [1, 3].into();
        let q: StateSet = [2, 3].into();
        let sm = SelectionModel {
            valuation: vec![
                BTreeSet::new(),
                ["p".to_string()].into(),
                ["q".to_string()].into(),
                ["p".to_string(), "q".to_string()].into(),
            ],
            table: vec![
                [
                    (p.clone(), [1].into()),
                    (q.clone(), [2].into()),
                    ([3].into(), StateSet::new()),
                ]
                .into_iter()
                .collect(),
                BTreeMap::new(),
                BTreeMap::new(),
                BTreeMap::new(),
            ],
        };
        sm.check_conditions().unwrap();
        let f = agency("C p & C q & ~C (p & q)");
        assert!(sm.extension(&f).unwrap().contains(&0));
        assert!(matches!(from_selection(&sm, &f), Err(Error::FrameCondition(_))));
    }
}
