//! Independent deciders used to cross-check the solver: propositional
//! encodings of bounded Kripke and conditional models, exhaustive one-step
//! structure enumeration, and random corpora.
//!
//! Nothing here uses the solver's clause machinery; the one-step search
//! shares only the engines' frame conditions and atom evaluation.

pub mod corpus;
mod encode;
mod models;
mod onestep;

pub use encode::{bounded_model_search, kripke_brute};
pub use models::{CondModel, FiniteModel, KripkeModel};
pub use onestep::onestep_brute;

/// Caps for the brute-force searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest number of states of a searched model.
    pub max_states: usize,
    /// Largest multiplicity tried for counting structures.
    pub max_weight: u64,
    /// Largest denominator of the probability grid.
    pub max_denominator: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_states: 64,
            max_weight: 4,
            max_denominator: 6,
        }
    }
}
