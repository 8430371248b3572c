//! The modal logic of probability over finitely supported distributions,
//! optionally with the stationary condition that the current state keeps at
//! least mass `rho`. One-step satisfiability is rational feasibility.

use num_traits::{One, Zero};

use crate::arith::{int, lp_feasible, minimize_support, Domain, LinConstraint, LinSystem, Rat, Relation};
use crate::error::{Error, Result};
use crate::formula::{LikelihoodAtom, ModalOp};
use crate::logic::Logic;
use crate::onestep::{
    Capabilities, Carrier, ClauseShape, Engine, Extension, Frame, OneStepClause, OneStepModel,
    SizeBounds, Strategy, Structure,
};

pub struct ProbabilityEngine {
    logic: Logic,
}

impl ProbabilityEngine {
    pub fn new(logic: Logic) -> Self {
        assert!(matches!(logic, Logic::Prob | Logic::ProbStat(_)));
        ProbabilityEngine { logic }
    }

    fn stationary(&self) -> Option<&Rat> {
        match &self.logic {
            Logic::ProbStat(rho) => Some(rho),
            _ => None,
        }
    }
}

/// Whether `sum a_i P(E_i) >= b`, accumulating all `P(E_i)` in one pass;
/// also returns the number of points visited.
fn evaluate(mass: &[Rat], atom: &LikelihoodAtom, args: &[Extension]) -> (bool, usize) {
    let mut sums = vec![Rat::zero(); args.len()];
    let mut visits = 0;
    for (j, m) in mass.iter().enumerate() {
        visits += 1;
        for (sum, e) in sums.iter_mut().zip(args) {
            if e.contains(j) {
                *sum += m;
            }
        }
    }
    let lhs = atom
        .coeffs
        .iter()
        .zip(&sums)
        .fold(Rat::zero(), |acc, (a, s)| acc + a * s);
    (lhs >= atom.bound, visits)
}

impl Engine for ProbabilityEngine {
    fn logic(&self) -> &Logic {
        &self.logic
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            supports_small: true,
            supports_carrier: true,
            copointed: self.stationary().is_some(),
        }
    }

    /// The support is at most the number of constraints: one per atom, the
    /// normalization, and the stationary bound.
    fn size_bounds(&self, shape: &ClauseShape, _carrier_size: usize) -> SizeBounds {
        SizeBounds {
            carrier: Some(shape.atoms + 2),
            structure: None,
        }
    }

    fn check_structure(&self, s: &Structure, frame: &Frame) -> bool {
        let Structure::Prob { mass } = s else {
            return false;
        };
        if mass.len() != frame.size || mass.iter().any(|m| *m < Rat::zero()) {
            return false;
        }
        if mass.iter().fold(Rat::zero(), |a, m| a + m) != Rat::one() {
            return false;
        }
        match self.stationary() {
            Some(rho) => frame.designated.is_some_and(|d| mass[d] >= *rho),
            None => true,
        }
    }

    fn eval_atom_traced(
        &self,
        s: &Structure,
        _frame: &Frame,
        op: &ModalOp,
        args: &[Extension],
    ) -> (bool, Option<usize>) {
        let Structure::Prob { mass } = s else {
            panic!("probability engine given a {} structure", s.kind());
        };
        let ModalOp::Likelihood(atom) = op else {
            panic!("probability engine given `{}`", op.spelling());
        };
        let (holds, visits) = evaluate(mass, atom, args);
        (holds, Some(visits))
    }

    fn sat(
        &self,
        clause: &OneStepClause,
        carrier: &Carrier,
        strategy: Strategy,
    ) -> Result<Option<OneStepModel>> {
        let n = carrier.len();
        let d = carrier.designated;
        let mut sys = LinSystem::new(n, Domain::NonNegRational);
        sys.push(LinConstraint::new((0..n).map(|j| (j, int(1))), Relation::Eq, int(1)));
        if let Some(rho) = self.stationary() {
            let Some(d) = d else {
                return Err(Error::Precondition(format!(
                    "{} needs a designated point",
                    self.logic
                )));
            };
            if *rho > Rat::zero() {
                sys.push(LinConstraint::new([(d, int(1))], Relation::Ge, rho.clone()));
            }
        }
        for l in &clause.literals {
            let ModalOp::Likelihood(atom) = &l.op else {
                return Err(Error::Precondition(format!(
                    "`{}` is not a likelihood operator",
                    l.op.spelling()
                )));
            };
            let coeffs = (0..n).map(|j| {
                let c = atom
                    .coeffs
                    .iter()
                    .zip(&l.args)
                    .filter(|(_, e)| e.contains(j))
                    .fold(Rat::zero(), |acc, (a, _)| acc + a);
                (j, c)
            });
            let rel = if l.positive { Relation::Ge } else { Relation::Lt };
            sys.push(LinConstraint::new(coeffs, rel, atom.bound.clone()));
        }
        let Some(mut mass) = lp_feasible(&sys)? else {
            return Ok(None);
        };
        if strategy == Strategy::Small {
            mass = minimize_support(&sys, &mass)?;
        }
        let keep: Vec<usize> = (0..n)
            .filter(|&j| !mass[j].is_zero() || Some(j) == d)
            .collect();
        let mass = keep.iter().map(|&j| mass[j].clone()).collect();
        Ok(Some(OneStepModel::on(carrier, keep, Structure::Prob { mass })))
    }

    fn structure_size(&self, s: &Structure) -> usize {
        match s {
            Structure::Prob { mass } => mass
                .iter()
                .map(|m| (m.numer().bits() + m.denom().bits()) as usize)
                .max()
                .unwrap_or(0),
            _ => 0,
        }
    }

    /// A state without obligations still needs a distribution; it keeps all
    /// of its mass on itself.
    fn leaf(&self) -> (Structure, bool) {
        (Structure::Prob { mass: vec![Rat::one()] }, true)
    }
}
