//! Logic identifiers as accepted on the command line and stored in witnesses.

use std::fmt;
use std::str::FromStr;

use crate::arith::{parse_rat, Rat};
use crate::error::{Error, Result};

/// The logics this crate decides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Logic {
    K,
    T,
    Ck,
    CkId,
    CkMp,
    Agency,
    Presburger,
    /// Presburger modal logic over reflexive frames (`B(x) > 0`).
    PresburgerT,
    /// At least half of all transitions are loops (`B(x) >= B(X - {x})`).
    PresburgerHalf,
    Prob,
    /// Probability with the stationary axiom `a -> l(a) >= rho`.
    ProbStat(Rat),
}

/// Operator family; decides which surface operators parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Kripke,
    Conditional,
    Agency,
    Counting,
    Probability,
}

impl Logic {
    pub const ALL_IDS: &'static [&'static str] = &[
        "k",
        "t",
        "ck",
        "ckid",
        "ckmp",
        "agency",
        "presburger",
        "presburger-t",
        "presburger-half",
        "prob",
        "prob-stat:<rat>",
    ];

    pub fn family(&self) -> Family {
        match self {
            Logic::K | Logic::T => Family::Kripke,
            Logic::Ck | Logic::CkId | Logic::CkMp => Family::Conditional,
            Logic::Agency => Family::Agency,
            Logic::Presburger | Logic::PresburgerT | Logic::PresburgerHalf => Family::Counting,
            Logic::Prob | Logic::ProbStat(_) => Family::Probability,
        }
    }

    /// Whether models carry a designated point (the current state) subject to
    /// a frame condition relating it to its successor structure.
    pub fn is_copointed(&self) -> bool {
        matches!(
            self,
            Logic::T
                | Logic::CkMp
                | Logic::Agency
                | Logic::PresburgerT
                | Logic::PresburgerHalf
                | Logic::ProbStat(_)
        )
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Logic::K => f.write_str("k"),
            Logic::T => f.write_str("t"),
            Logic::Ck => f.write_str("ck"),
            Logic::CkId => f.write_str("ckid"),
            Logic::CkMp => f.write_str("ckmp"),
            Logic::Agency => f.write_str("agency"),
            Logic::Presburger => f.write_str("presburger"),
            Logic::PresburgerT => f.write_str("presburger-t"),
            Logic::PresburgerHalf => f.write_str("presburger-half"),
            Logic::Prob => f.write_str("prob"),
            Logic::ProbStat(rho) => write!(f, "prob-stat:{rho}"),
        }
    }
}

impl FromStr for Logic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let logic = match s.trim() {
            "k" => Logic::K,
            "t" => Logic::T,
            "ck" => Logic::Ck,
            "ckid" => Logic::CkId,
            "ckmp" => Logic::CkMp,
            "agency" => Logic::Agency,
            "presburger" => Logic::Presburger,
            "presburger-t" => Logic::PresburgerT,
            "presburger-half" => Logic::PresburgerHalf,
            "prob" => Logic::Prob,
            other => {
                let rho = other
                    .strip_prefix("prob-stat:")
                    .and_then(parse_rat)
                    .ok_or_else(|| Error::UnknownLogic(other.to_string()))?;
                if rho < Rat::from_integer(0.into()) || rho > Rat::from_integer(1.into()) {
                    return Err(Error::UnknownLogic(other.to_string()));
                }
                Logic::ProbStat(rho)
            }
        };
        Ok(logic)
    }
}
