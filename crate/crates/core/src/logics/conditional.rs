//! CK, CK+ID and CK+MP over partial conditional structures.
//!
//! A structure lists `antecedent -> value` for finitely many antecedents.
//! Undefined antecedents map to the empty set, except in CK+MP where `P`
//! maps to `P ∩ {x}` for the current state `x`; both defaults satisfy the
//! frame conditions by construction.

use super::{cells, quadratic_bound};
use crate::error::{Error, Result};
use crate::formula::ModalOp;
use crate::logic::Logic;
use crate::onestep::{
    Capabilities, Carrier, ClauseShape, Engine, Extension, Frame, OneStepClause, OneStepModel,
    SizeBounds, Strategy, Structure,
};

pub struct ConditionalEngine {
    logic: Logic,
}

impl ConditionalEngine {
    pub fn new(logic: Logic) -> Self {
        assert!(matches!(logic, Logic::Ck | Logic::CkId | Logic::CkMp));
        ConditionalEngine { logic }
    }

    fn identity(&self) -> bool {
        self.logic == Logic::CkId
    }

    fn modus_ponens(&self) -> bool {
        self.logic == Logic::CkMp
    }

    /// The value of the structure at `p`, applying the default when undefined.
    pub fn value(&self, entries: &[(Extension, Extension)], frame: &Frame, p: &Extension) -> Extension {
        if let Some((_, v)) = entries.iter().find(|(a, _)| a == p) {
            return v.clone();
        }
        let mut v = Extension::empty(frame.size);
        if self.modus_ponens() {
            if let Some(x) = frame.designated.filter(|&x| p.contains(x)) {
                v.insert(x);
            }
        }
        v
    }
}

impl Engine for ConditionalEngine {
    fn logic(&self) -> &Logic {
        &self.logic
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            supports_small: true,
            supports_carrier: true,
            copointed: self.modus_ponens(),
        }
    }

    fn size_bounds(&self, shape: &ClauseShape, _carrier_size: usize) -> SizeBounds {
        let n = quadratic_bound(shape.atoms, self.modus_ponens());
        SizeBounds {
            carrier: Some(n),
            structure: Some(2 * shape.atoms * n),
        }
    }

    fn check_structure(&self, s: &Structure, frame: &Frame) -> bool {
        let Structure::Cond { entries } = s else {
            return false;
        };
        if self.modus_ponens() && frame.designated.is_none() {
            return false;
        }
        entries.iter().enumerate().all(|(i, (p, v))| {
            p.universe() == frame.size
                && v.universe() == frame.size
                && entries[..i].iter().all(|(q, _)| q != p)
                && (!self.identity() || v.is_subset(p))
                && (!self.modus_ponens()
                    || frame.designated.is_some_and(|x| !p.contains(x) || v.contains(x)))
        })
    }

    fn eval_atom_traced(
        &self,
        s: &Structure,
        frame: &Frame,
        op: &ModalOp,
        args: &[Extension],
    ) -> (bool, Option<usize>) {
        let Structure::Cond { entries } = s else {
            panic!("conditional engine given a {} structure", s.kind());
        };
        assert_eq!(*op, ModalOp::Cond);
        (self.value(entries, frame, &args[0]).is_subset(&args[1]), None)
    }

    fn sat(
        &self,
        clause: &OneStepClause,
        carrier: &Carrier,
        strategy: Strategy,
    ) -> Result<Option<OneStepModel>> {
        let x = carrier.designated;
        if self.modus_ponens() && x.is_none() {
            return Err(Error::Precondition("CK+MP needs a designated point".into()));
        }
        let full = Extension::full(carrier.len());
        let groups = cells(&clause.literals);

        // Per cell: the largest admissible value and one witness per negative.
        let mut plans: Vec<(Extension, Vec<usize>)> = Vec::new();
        for (p, lits) in &groups {
            let mut allow = full.clone();
            for l in lits.iter().filter(|l| l.positive) {
                allow = allow.intersect(&l.args[1]);
            }
            if self.identity() {
                allow = allow.intersect(p);
            }
            let forced = x.filter(|&x| self.modus_ponens() && p.contains(x));
            if let Some(x) = forced {
                if !allow.contains(x) {
                    return Ok(None);
                }
            }
            let mut witnesses = Vec::new();
            for l in lits.iter().filter(|l| !l.positive) {
                match allow.minus(&l.args[1]).first() {
                    Some(w) => witnesses.push(w),
                    None => return Ok(None),
                }
            }
            witnesses.extend(forced);
            plans.push((allow, witnesses));
        }

        let model = match strategy {
            Strategy::Carrier => OneStepModel::over(
                carrier,
                Structure::Cond {
                    entries: groups
                        .iter()
                        .zip(plans)
                        .map(|((p, _), (allow, _))| (p.clone(), allow))
                        .collect(),
                },
            ),
            Strategy::Small => {
                let mut keep: Vec<usize> = plans.iter().flat_map(|(_, w)| w.iter().copied()).collect();
                // Distinct antecedents must stay distinct on the small carrier.
                for i in 0..groups.len() {
                    for j in i + 1..groups.len() {
                        let diff = groups[i].0.minus(&groups[j].0).union(&groups[j].0.minus(&groups[i].0));
                        keep.extend(diff.first());
                    }
                }
                keep.extend(x);
                keep.sort_unstable();
                keep.dedup();
                let entries = groups
                    .iter()
                    .zip(&plans)
                    .map(|((p, _), (_, w))| {
                        let v = Extension::from_indices(carrier.len(), w.iter().copied());
                        (p.restrict(&keep), v.restrict(&keep))
                    })
                    .collect();
                OneStepModel::on(carrier, keep, Structure::Cond { entries })
            }
        };
        Ok(Some(model))
    }

    fn structure_size(&self, s: &Structure) -> usize {
        match s {
            Structure::Cond { entries } => entries.iter().map(|(p, v)| p.count() + v.count()).sum(),
            _ => 0,
        }
    }

    fn leaf(&self) -> (Structure, bool) {
        (Structure::Cond { entries: vec![] }, self.modus_ponens())
    }
}
