//! One-step engines, one per logic family.

pub mod agency;
pub mod conditional;
pub mod counting;
pub mod kripke;
pub mod probability;

use crate::arith::IlpOptions;
use crate::logic::Logic;
use crate::onestep::{Engine, Extension, Literal};

pub fn engine_for(logic: &Logic, ilp: &IlpOptions) -> Box<dyn Engine> {
    match logic {
        Logic::K | Logic::T => Box::new(kripke::KripkeEngine::new(logic.clone())),
        Logic::Ck | Logic::CkId | Logic::CkMp => {
            Box::new(conditional::ConditionalEngine::new(logic.clone()))
        }
        Logic::Agency => Box::new(agency::AgencyEngine::new()),
        Logic::Presburger | Logic::PresburgerT | Logic::PresburgerHalf => {
            Box::new(counting::CountingEngine::new(logic.clone(), ilp.clone()))
        }
        Logic::Prob | Logic::ProbStat(_) => {
            Box::new(probability::ProbabilityEngine::new(logic.clone()))
        }
    }
}

/// Literals grouped by the extension of their first argument, in order of
/// first appearance.
pub(crate) fn cells(literals: &[Literal]) -> Vec<(Extension, Vec<&Literal>)> {
    let mut out: Vec<(Extension, Vec<&Literal>)> = Vec::new();
    for l in literals {
        match out.iter_mut().find(|(p, _)| *p == l.args[0]) {
            Some((_, group)) => group.push(l),
            None => out.push((l.args[0].clone(), vec![l])),
        }
    }
    out
}

/// `n^2 + n`, but at least 1 when a designated point must be present.
pub(crate) fn quadratic_bound(n: usize, copointed: bool) -> usize {
    (n * n + n).max(usize::from(copointed))
}
