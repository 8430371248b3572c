//! Satisfiability and validity checking for non-iterative coalgebraic modal
//! logics by shallow model construction.
//!
//! A query is decided by guessing the truth of every modal atom at the root,
//! computing the set of *admissible* point classes (assignments to the
//! in-scope atoms whose theories are recursively satisfiable), and handing the
//! resulting one-step clause to a logic-specific engine. Every satisfiable
//! verdict comes with a [`witness::ShallowModel`]: a tree of depth at most the
//! rank of the query, possibly with self loops for copointed logics, that can
//! be re-checked by the independent model checker in [`witness`].
//!
//! Supported logics (see [`Logic`]): K, T, the conditional logics CK, CK+ID
//! and CK+MP, the single-agent logic of agency, Presburger/graded modal logic
//! (plain, reflexive, half-loop) and the modal logic of probability (plain and
//! stationary).
//!
//! ```
//! use cosat::{parse, valid, Logic, LogicConfig};
//!
//! let cfg = LogicConfig::new(Logic::T);
//! let f = parse("[]p -> p", &Logic::T).unwrap();
//! assert!(valid(&f, &cfg).unwrap());
//! ```

pub mod arith;
mod error;
pub mod formula;
pub mod logic;
pub mod logics;
pub mod onestep;
pub mod oracle;
pub mod solver;
pub mod witness;

pub use arith::Rat;
pub use error::{Error, Result};
pub use formula::{analyze, parse, rank, render, Analysis, CountRel, Formula, ModalOp, SignMap};
pub use logic::Logic;
pub use solver::{sat, valid, LogicConfig, SolveStats, Solver, Strategy, Verdict};
pub use witness::{model_check, verify, ShallowModel, VerifyReport};
