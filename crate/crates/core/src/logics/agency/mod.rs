//! The single-agent logic of agency over the three-valued neighbourhood
//! functor.
//!
//! A structure is a partial map `f0` from subsets of the carrier to
//! `⊥ < * < ⊤`; its total extension `f` assigns to `A` the best value
//! reachable as the minimum over a family of defined sets intersecting to
//! exactly `A`. `E a` holds iff `f(⟦a⟧) = ⊤`, and `C a` iff `f(⟦a⟧) ≠ ⊥`.

mod selection;

use std::fmt;

pub use selection::{from_selection, to_selection, AgencyCoalgebra, SelectionModel};

use crate::error::{Error, Result};
use crate::formula::ModalOp;
use crate::logic::Logic;
use crate::onestep::{
    Capabilities, Carrier, ClauseShape, Engine, Extension, Frame, OneStepClause, OneStepModel,
    SizeBounds, Strategy, Structure,
};

use super::cells;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Three {
    Bot,
    Star,
    Top,
}

impl Three {
    pub const ALL: [Three; 3] = [Three::Bot, Three::Star, Three::Top];

    pub fn name(self) -> &'static str {
        match self {
            Three::Bot => "bot",
            Three::Star => "star",
            Three::Top => "top",
        }
    }

    pub fn from_name(s: &str) -> Option<Three> {
        Three::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Three {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The value of the total map at `a`: `f(a) >= b` iff the defined sets
/// containing `a` with value at least `b` form a nonempty family whose
/// intersection is exactly `a`.
pub fn closure_eval(entries: &[(Extension, Three)], a: &Extension) -> Three {
    for b in [Three::Top, Three::Star] {
        let mut meet: Option<Extension> = None;
        for (set, v) in entries {
            if *v >= b && a.is_subset(set) {
                meet = Some(match meet {
                    None => set.clone(),
                    Some(m) => m.intersect(set),
                });
            }
        }
        if meet.as_ref() == Some(a) {
            return b;
        }
    }
    Three::Bot
}

/// Frame conditions on a partial map: the full carrier is not effected, the
/// sets with positive value have a common point (so the empty set stays at
/// `⊥`), and every set valued `⊤` contains the current state.
pub fn conditions_hold(entries: &[(Extension, Three)], frame: &Frame) -> bool {
    let Some(x) = frame.designated else {
        return false;
    };
    let full = Extension::full(frame.size);
    let mut meet = full.clone();
    for (i, (set, v)) in entries.iter().enumerate() {
        if set.universe() != frame.size || entries[..i].iter().any(|(s, _)| s == set) {
            return false;
        }
        if *v > Three::Bot {
            if *set == full {
                return false;
            }
            meet = meet.intersect(set);
        }
        if *v == Three::Top && !set.contains(x) {
            return false;
        }
    }
    !meet.is_empty() || entries.iter().all(|(_, v)| *v == Three::Bot)
}

pub struct AgencyEngine {
    logic: Logic,
}

impl AgencyEngine {
    pub fn new() -> Self {
        AgencyEngine {
            logic: Logic::Agency,
        }
    }
}

impl Default for AgencyEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine for AgencyEngine {
    fn logic(&self) -> &Logic {
        &self.logic
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            supports_small: true,
            supports_carrier: true,
            copointed: true,
        }
    }

    fn size_bounds(&self, shape: &ClauseShape, _carrier_size: usize) -> SizeBounds {
        let n = shape.atoms;
        SizeBounds {
            carrier: Some(n * n + n + 2),
            structure: Some(n),
        }
    }

    fn check_structure(&self, s: &Structure, frame: &Frame) -> bool {
        match s {
            Structure::Agency { entries } => conditions_hold(entries, frame),
            _ => false,
        }
    }

    fn eval_atom_traced(
        &self,
        s: &Structure,
        _frame: &Frame,
        op: &ModalOp,
        args: &[Extension],
    ) -> (bool, Option<usize>) {
        let Structure::Agency { entries } = s else {
            panic!("agency engine given a {} structure", s.kind());
        };
        let v = closure_eval(entries, &args[0]);
        let holds = match op {
            ModalOp::Effect => v == Three::Top,
            ModalOp::Capable => v != Three::Bot,
            other => panic!("agency engine given `{}`", other.spelling()),
        };
        (holds, None)
    }

    fn sat(
        &self,
        clause: &OneStepClause,
        carrier: &Carrier,
        strategy: Strategy,
    ) -> Result<Option<OneStepModel>> {
        let Some(x) = carrier.designated else {
            return Err(Error::Precondition("agency needs a designated point".into()));
        };
        let frame = carrier.frame();
        let groups = cells(&clause.literals);
        let mut intervals = Vec::with_capacity(groups.len());
        for (_, lits) in &groups {
            let (mut lo, mut hi) = (Three::Bot, Three::Top);
            for l in lits {
                match (&l.op, l.positive) {
                    (ModalOp::Effect, true) => lo = lo.max(Three::Top),
                    (ModalOp::Effect, false) => hi = hi.min(Three::Star),
                    (ModalOp::Capable, true) => lo = lo.max(Three::Star),
                    (ModalOp::Capable, false) => hi = hi.min(Three::Bot),
                    (op, _) => {
                        return Err(Error::Precondition(format!(
                            "`{}` is not an agency operator",
                            op.spelling()
                        )))
                    }
                }
            }
            if lo > hi {
                return Ok(None);
            }
            intervals.push((lo, hi));
        }

        let mut choice: Vec<Three> = intervals.iter().map(|(lo, _)| *lo).collect();
        let entries = loop {
            if let Some(entries) = self.try_assignment(&groups, &intervals, &choice, &frame) {
                break entries;
            }
            // Next assignment, first cell varying fastest.
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(None);
                }
                if choice[k] < intervals[k].1 {
                    choice[k] = Three::ALL[choice[k] as usize + 1];
                    break;
                }
                choice[k] = intervals[k].0;
                k += 1;
            }
        };

        let model = match strategy {
            Strategy::Carrier => OneStepModel::over(carrier, Structure::Agency { entries }),
            Strategy::Small => {
                let keep = small_carrier(&groups, &entries, carrier.len(), x);
                let entries = entries
                    .iter()
                    .map(|(p, v)| (p.restrict(&keep), *v))
                    .collect();
                OneStepModel::on(carrier, keep, Structure::Agency { entries })
            }
        };
        Ok(Some(model))
    }

    fn structure_size(&self, s: &Structure) -> usize {
        match s {
            Structure::Agency { entries } => entries.len(),
            _ => 0,
        }
    }

    fn leaf(&self) -> (Structure, bool) {
        (Structure::Agency { entries: vec![] }, true)
    }
}

type Cells<'a> = [(Extension, Vec<&'a crate::onestep::Literal>)];

impl AgencyEngine {
    /// Closes the chosen cell values and checks bounds and frame conditions;
    /// returns the closed entries with positive value.
    fn try_assignment(
        &self,
        groups: &Cells<'_>,
        intervals: &[(Three, Three)],
        choice: &[Three],
        frame: &Frame,
    ) -> Option<Vec<(Extension, Three)>> {
        let f0: Vec<(Extension, Three)> = groups
            .iter()
            .zip(choice)
            .filter(|(_, v)| **v > Three::Bot)
            .map(|((p, _), v)| (p.clone(), *v))
            .collect();
        let mut closed = Vec::new();
        for ((p, _), (_, hi)) in groups.iter().zip(intervals) {
            let v = closure_eval(&f0, p);
            if v > *hi {
                return None;
            }
            if v > Three::Bot {
                closed.push((p.clone(), v));
            }
        }
        conditions_hold(&closed, frame).then_some(closed)
    }
}

/// The current state, a separator for every ordered pair of distinct cells
/// (and between every cell and the full carrier), a point per cell below `⊤`
/// that keeps the closure from rising, and a common point of all positive
/// cells.
fn small_carrier(
    groups: &Cells<'_>,
    entries: &[(Extension, Three)],
    size: usize,
    x: usize,
) -> Vec<usize> {
    let full = Extension::full(size);
    let value = |p: &Extension| {
        entries
            .iter()
            .find(|(q, _)| q == p)
            .map_or(Three::Bot, |(_, v)| *v)
    };
    let mut keep = vec![x];
    let sets: Vec<&Extension> = groups.iter().map(|(p, _)| p).chain([&full]).collect();
    for p in &sets {
        for q in &sets {
            keep.extend(p.minus(q).first());
        }
    }
    for (p, _) in groups {
        let v = value(p);
        if v == Three::Top {
            continue;
        }
        let mut meet = full.clone();
        for (q, w) in entries {
            if *w > v && p.is_subset(q) && q != p {
                meet = meet.intersect(q);
            }
        }
        keep.extend(meet.minus(p).first());
    }
    let mut common = full.clone();
    for (q, w) in entries {
        if *w > Three::Bot {
            common = common.intersect(q);
        }
    }
    if entries.iter().any(|(_, w)| *w > Three::Bot) {
        keep.extend(common.first());
    }
    keep.sort_unstable();
    keep.dedup();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::onestep::{model_check_clause, Literal, PointClass};

    fn set(len: usize, idx: &[usize]) -> Extension {
        Extension::from_indices(len, idx.iter().copied())
    }

    fn frame(size: usize, x: usize) -> Frame {
        Frame {
            size,
            designated: Some(x),
        }
    }

    fn lit(positive: bool, op: ModalOp, e: Extension) -> Literal {
        Literal {
            positive,
            op,
            args: vec![e],
        }
    }

    /// Classes over {a, b} followed by the current state, of class {a}.
    fn carrier() -> Carrier {
        Carrier::new(
            vec![Formula::var("a"), Formula::var("b")],
            (0..4).map(PointClass).collect(),
        )
        .with_designated(PointClass(1))
    }

    #[test]
    fn closure_examples() {
        let a = set(4, &[0, 1, 2]);
        let b = set(4, &[1, 2, 3]);
        let f0 = vec![(a.clone(), Three::Top), (b.clone(), Three::Top)];
        assert_eq!(closure_eval(&f0, &a.intersect(&b)), Three::Top);
        assert_eq!(closure_eval(&[], &a), Three::Bot);
        let f0 = vec![(a.clone(), Three::Star)];
        assert_eq!(closure_eval(&f0, &a), Three::Star);
        assert_eq!(closure_eval(&f0, &b), Three::Bot);
    }

    #[test]
    fn closure_is_not_monotone_but_respects_meets() {
        let a = set(3, &[0, 1]);
        let b = set(3, &[0]);
        let f0 = vec![(a.clone(), Three::Top)];
        // Neither direction of monotonicity holds in general.
        assert!(closure_eval(&f0, &b) < closure_eval(&f0, &a));
        let f0 = vec![(b.clone(), Three::Top)];
        assert!(closure_eval(&f0, &a) < closure_eval(&f0, &b));
    }

    #[test]
    fn frame_condition_examples() {
        let full = Extension::full(4);
        assert!(!conditions_hold(&[(full, Three::Star)], &frame(4, 0)));
        assert!(!conditions_hold(&[(set(4, &[1]), Three::Top)], &frame(4, 0)));
        assert!(!conditions_hold(
            &[(set(4, &[0]), Three::Star), (set(4, &[1]), Three::Star)],
            &frame(4, 0)
        ));
        assert!(conditions_hold(&[], &frame(4, 0)));
    }

    #[test]
    fn atoms() {
        let e = AgencyEngine::new();
        let a = set(4, &[0, 1]);
        let top = Structure::Agency {
            entries: vec![(a.clone(), Three::Top)],
        };
        let star = Structure::Agency {
            entries: vec![(a.clone(), Three::Star)],
        };
        let none = Structure::Agency { entries: vec![] };
        let f = frame(4, 0);
        assert!(e.eval_atom(&top, &f, &ModalOp::Effect, std::slice::from_ref(&a)));
        assert!(e.eval_atom(&star, &f, &ModalOp::Capable, std::slice::from_ref(&a)));
        assert!(!e.eval_atom(&star, &f, &ModalOp::Effect, std::slice::from_ref(&a)));
        assert!(!e.eval_atom(&none, &f, &ModalOp::Capable, &[a]));
    }

    #[test]
    fn capability_for_everything_or_nothing_is_refuted() {
        let e = AgencyEngine::new();
        let c = carrier();
        for target in [Extension::full(5), Extension::empty(5)] {
            let cl = OneStepClause::new(vec![lit(true, ModalOp::Capable, target)]);
            assert!(e.sat(&cl, &c, Strategy::Carrier).unwrap().is_none());
        }
    }

    #[test]
    fn effects_are_closed_under_intersection() {
        let e = AgencyEngine::new();
        let p = set(5, &[1, 3, 4]);
        let q = set(5, &[1, 2, 4]);
        let cl = OneStepClause::new(vec![
            lit(true, ModalOp::Effect, p.clone()),
            lit(true, ModalOp::Effect, q.clone()),
            lit(false, ModalOp::Effect, p.intersect(&q)),
        ]);
        assert!(e.sat(&cl, &carrier(), Strategy::Carrier).unwrap().is_none());
    }

    #[test]
    fn effect_on_a_proper_set_through_the_current_state() {
        let e = AgencyEngine::new();
        let cl = OneStepClause::new(vec![lit(true, ModalOp::Effect, set(5, &[1, 3, 4]))]);
        for strategy in [Strategy::Small, Strategy::Carrier] {
            let m = e.sat(&cl, &carrier(), strategy).unwrap().unwrap();
            assert!(model_check_clause(&e, &m, &cl).unwrap());
            if strategy == Strategy::Small {
                assert!(m.carrier.len() <= e.size_bounds(&cl.shape(), 5).carrier.unwrap());
            }
        }
    }

    #[test]
    fn small_carrier_keeps_upper_bounds() {
        // E(P) and E(Q) but not E of the intersection-superset chain: the
        // small carrier must keep a point separating them.
        let e = AgencyEngine::new();
        let p = set(5, &[1, 3, 4]);
        let q = set(5, &[1, 2, 3, 4]);
        let cl = OneStepClause::new(vec![
            lit(true, ModalOp::Effect, q),
            lit(false, ModalOp::Effect, p.clone()),
            lit(true, ModalOp::Capable, p),
        ]);
        let m = e.sat(&cl, &carrier(), Strategy::Small).unwrap().unwrap();
        assert!(model_check_clause(&e, &m, &cl).unwrap());
    }
}
