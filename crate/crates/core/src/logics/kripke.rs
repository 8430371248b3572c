//! K and T: successor sets, with the current state among its own successors
//! in T.

use crate::error::{Error, Result};
use crate::formula::ModalOp;
use crate::logic::Logic;
use crate::onestep::{
    Capabilities, Carrier, ClauseShape, Engine, Extension, Frame, OneStepClause, OneStepModel,
    SizeBounds, Strategy, Structure,
};

pub struct KripkeEngine {
    logic: Logic,
}

impl KripkeEngine {
    pub fn new(logic: Logic) -> Self {
        assert!(matches!(logic, Logic::K | Logic::T));
        KripkeEngine { logic }
    }

    fn reflexive(&self) -> bool {
        self.logic == Logic::T
    }
}

impl Engine for KripkeEngine {
    fn logic(&self) -> &Logic {
        &self.logic
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            supports_small: true,
            supports_carrier: true,
            copointed: self.reflexive(),
        }
    }

    fn size_bounds(&self, shape: &ClauseShape, _carrier_size: usize) -> SizeBounds {
        let bound = shape.negatives + usize::from(self.reflexive());
        SizeBounds {
            carrier: Some(bound),
            structure: Some(bound),
        }
    }

    fn check_structure(&self, s: &Structure, frame: &Frame) -> bool {
        let Structure::Kripke { succ } = s else {
            return false;
        };
        if succ.universe() != frame.size {
            return false;
        }
        !self.reflexive() || frame.designated.is_some_and(|d| succ.contains(d))
    }

    fn eval_atom_traced(
        &self,
        s: &Structure,
        _frame: &Frame,
        op: &ModalOp,
        args: &[Extension],
    ) -> (bool, Option<usize>) {
        let Structure::Kripke { succ } = s else {
            panic!("Kripke engine given a {} structure", s.kind());
        };
        assert_eq!(*op, ModalOp::Box);
        (succ.is_subset(&args[0]), None)
    }

    fn sat(
        &self,
        clause: &OneStepClause,
        carrier: &Carrier,
        strategy: Strategy,
    ) -> Result<Option<OneStepModel>> {
        let designated = carrier.designated;
        if self.reflexive() && designated.is_none() {
            return Err(Error::Precondition("T needs a designated point".into()));
        }
        let mut allowed = Extension::full(carrier.len());
        for l in clause.literals.iter().filter(|l| l.positive) {
            allowed = allowed.intersect(&l.args[0]);
        }
        if self.reflexive() && !allowed.contains(designated.unwrap()) {
            return Ok(None);
        }
        let mut witnesses = Vec::new();
        for l in clause.literals.iter().filter(|l| !l.positive) {
            match allowed.minus(&l.args[0]).first() {
                Some(w) => witnesses.push(w),
                None => return Ok(None),
            }
        }
        let mut keep: Vec<usize> = match strategy {
            Strategy::Carrier => allowed.iter().collect(),
            Strategy::Small => witnesses,
        };
        if self.reflexive() {
            keep.push(designated.unwrap());
        }
        keep.sort_unstable();
        keep.dedup();
        let succ = Extension::full(keep.len());
        Ok(Some(OneStepModel::on(carrier, keep, Structure::Kripke { succ })))
    }

    fn structure_size(&self, s: &Structure) -> usize {
        match s {
            Structure::Kripke { succ } => succ.count(),
            _ => 0,
        }
    }

    fn leaf(&self) -> (Structure, bool) {
        let size = usize::from(self.reflexive());
        (
            Structure::Kripke {
                succ: Extension::full(size),
            },
            self.reflexive(),
        )
    }
}
