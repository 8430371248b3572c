//! The one-step layer shared by all logics: carriers of assignment classes,
//! argument extensions, one-step clauses and models, and the engine contract.

mod extension;

use std::fmt;

pub use extension::Extension;

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::formula::{Formula, ModalOp};
use crate::logic::Logic;
use crate::logics::agency::Three;

/// A truth assignment to the letters of a carrier alphabet, as a bitmask:
/// bit `i` is set iff letter `i` is true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointClass(pub u64);

impl PointClass {
    pub fn has(self, letter: usize) -> bool {
        self.0 >> letter & 1 == 1
    }

    pub fn with(self, letter: usize, value: bool) -> PointClass {
        if value {
            PointClass(self.0 | 1 << letter)
        } else {
            PointClass(self.0 & !(1 << letter))
        }
    }

    /// Letters set in this class, rendered as a list of formulas.
    pub fn letters<'a>(self, alphabet: &'a [Formula]) -> impl Iterator<Item = &'a Formula> + 'a {
        alphabet
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.has(*i))
            .map(|(_, f)| f)
    }
}

/// Points of a one-step model together with the alphabet they assign.
///
/// For copointed logics the designated point (the current state) is a
/// separate entry; its class may also occur among the other points, which
/// then stand for different states of the same class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    pub alphabet: Vec<Formula>,
    pub points: Vec<PointClass>,
    pub designated: Option<usize>,
}

impl Carrier {
    pub fn new(alphabet: Vec<Formula>, points: Vec<PointClass>) -> Self {
        Carrier {
            alphabet,
            points,
            designated: None,
        }
    }

    /// Appends `class` as the designated point.
    pub fn with_designated(mut self, class: PointClass) -> Self {
        self.points.push(class);
        self.designated = Some(self.points.len() - 1);
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frame(&self) -> Frame {
        Frame {
            size: self.points.len(),
            designated: self.designated,
        }
    }

    /// The sub-carrier made of `keep` (old indices, in the given order).
    pub fn restrict(&self, keep: &[usize]) -> Carrier {
        Carrier {
            alphabet: self.alphabet.clone(),
            points: keep.iter().map(|&i| self.points[i]).collect(),
            designated: self
                .designated
                .and_then(|d| keep.iter().position(|&i| i == d)),
        }
    }
}

/// The shape of a successor set as seen by a structure: its size and which
/// member, if any, is the current state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub size: usize,
    pub designated: Option<usize>,
}

/// Points of `carrier` satisfying the propositional combination `phi` of
/// alphabet letters. Letters may themselves be modal formulas; they are
/// looked up, never evaluated.
pub fn extension(phi: &Formula, carrier: &Carrier) -> Result<Extension> {
    let mut unknown = None;
    let mut ext = Extension::empty(carrier.len());
    for (i, point) in carrier.points.iter().enumerate() {
        let holds = phi.eval_with(&mut |atom| {
            match carrier.alphabet.iter().position(|a| a == atom) {
                Some(letter) => point.has(letter),
                None => {
                    unknown.get_or_insert_with(|| crate::formula::render(atom));
                    false
                }
            }
        });
        if let Some(letter) = unknown {
            return Err(Error::UnknownLetter(letter));
        }
        if holds {
            ext.insert(i);
        }
    }
    if carrier.is_empty() {
        // Still reject foreign letters on an empty carrier.
        let mut foreign = None;
        phi.eval_with(&mut |atom| {
            if !carrier.alphabet.contains(atom) {
                foreign.get_or_insert_with(|| crate::formula::render(atom));
            }
            false
        });
        if let Some(letter) = foreign {
            return Err(Error::UnknownLetter(letter));
        }
    }
    Ok(ext)
}

/// A signed modal atom with its arguments given as extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub positive: bool,
    pub op: ModalOp,
    pub args: Vec<Extension>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OneStepClause {
    pub literals: Vec<Literal>,
}

impl OneStepClause {
    pub fn new(literals: Vec<Literal>) -> Self {
        OneStepClause { literals }
    }

    pub fn shape(&self) -> ClauseShape {
        ClauseShape {
            atoms: self.literals.len(),
            negatives: self.literals.iter().filter(|l| !l.positive).count(),
            parameter_bits: self.literals.iter().map(|l| parameter_bits(&l.op)).sum(),
        }
    }
}

fn parameter_bits(op: &ModalOp) -> usize {
    fn bits(v: u64) -> usize {
        (64 - v.leading_zeros()).max(1) as usize
    }
    match op {
        ModalOp::Count(c) => {
            let rel = match c.rel {
                crate::formula::CountRel::Mod { modulus, residue } => bits(modulus) + bits(residue),
                _ => 0,
            };
            c.coeffs.iter().map(|a| bits(a.unsigned_abs())).sum::<usize>()
                + bits(c.bound.unsigned_abs())
                + rel
        }
        ModalOp::Likelihood(l) => {
            let r = |q: &Rat| (q.numer().bits() + q.denom().bits()) as usize;
            l.coeffs.iter().map(r).sum::<usize>() + r(&l.bound)
        }
        _ => 0,
    }
}

/// Per-logic successor structure over the points of a carrier (or over the
/// children of a witness state).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    /// The successor set.
    Kripke { succ: Extension },
    /// Defined entries `antecedent -> value`; undefined antecedents take the
    /// logic's default.
    Cond { entries: Vec<(Extension, Extension)> },
    /// Defined entries of the partial three-valued neighbourhood map.
    Agency { entries: Vec<(Extension, Three)> },
    /// Multiplicity of each point.
    Count { weights: Vec<u64> },
    /// Probability of each point.
    Prob { mass: Vec<Rat> },
}

impl Structure {
    /// The structure seen through the sub-carrier `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Structure {
        match self {
            Structure::Kripke { succ } => Structure::Kripke {
                succ: succ.restrict(keep),
            },
            Structure::Cond { entries } => Structure::Cond {
                entries: entries
                    .iter()
                    .map(|(p, v)| (p.restrict(keep), v.restrict(keep)))
                    .collect(),
            },
            Structure::Agency { entries } => Structure::Agency {
                entries: entries.iter().map(|(p, t)| (p.restrict(keep), *t)).collect(),
            },
            Structure::Count { weights } => Structure::Count {
                weights: keep.iter().map(|&i| weights[i]).collect(),
            },
            Structure::Prob { mass } => Structure::Prob {
                mass: keep.iter().map(|&i| mass[i].clone()).collect(),
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Kripke { .. } => "kripke",
            Structure::Cond { .. } => "cond",
            Structure::Agency { .. } => "agency",
            Structure::Count { .. } => "count",
            Structure::Prob { .. } => "prob",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneStepModel {
    pub carrier: Carrier,
    pub structure: Structure,
    /// For each point of `carrier`, its index in the carrier the engine was
    /// given.
    pub origin: Vec<usize>,
}

impl OneStepModel {
    /// A model over the sub-carrier `keep` of `carrier`; `structure` is
    /// already expressed over the sub-carrier.
    pub fn on(carrier: &Carrier, keep: Vec<usize>, structure: Structure) -> Self {
        OneStepModel {
            carrier: carrier.restrict(&keep),
            structure,
            origin: keep,
        }
    }

    /// A model over the whole of `carrier`.
    pub fn over(carrier: &Carrier, structure: Structure) -> Self {
        OneStepModel {
            carrier: carrier.clone(),
            structure,
            origin: (0..carrier.len()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Polynomially small carriers.
    Small,
    /// The full admissible carrier.
    Carrier,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Small => "small",
            Strategy::Carrier => "carrier",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub supports_small: bool,
    pub supports_carrier: bool,
    pub copointed: bool,
}

/// Measures of a one-step clause that size bounds are stated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClauseShape {
    /// Number of literals.
    pub atoms: usize,
    pub negatives: usize,
    /// Binary length of all numeric operator parameters.
    pub parameter_bits: usize,
}

/// Bounds a model returned by the small strategy must respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SizeBounds {
    /// Maximal carrier size.
    pub carrier: Option<usize>,
    /// Maximal [`Engine::structure_size`].
    pub structure: Option<usize>,
}

/// A one-step decision procedure for one logic.
pub trait Engine: Send + Sync {
    fn logic(&self) -> &Logic;

    fn capabilities(&self) -> Capabilities;

    /// Bounds on small-strategy models of clauses of the given shape over a
    /// carrier of `carrier_size` admissible points.
    fn size_bounds(&self, shape: &ClauseShape, carrier_size: usize) -> SizeBounds;

    /// The logic's frame condition.
    fn check_structure(&self, s: &Structure, frame: &Frame) -> bool;

    /// Evaluates one atom, also reporting how many carrier points were
    /// visited when the engine evaluates in a single pass.
    fn eval_atom_traced(
        &self,
        s: &Structure,
        frame: &Frame,
        op: &ModalOp,
        args: &[Extension],
    ) -> (bool, Option<usize>);

    fn eval_atom(&self, s: &Structure, frame: &Frame, op: &ModalOp, args: &[Extension]) -> bool {
        self.eval_atom_traced(s, frame, op, args).0
    }

    /// Finds a one-step model of `clause` over (a sub-carrier of) `carrier`.
    /// The designated point, when present, is always kept.
    fn sat(
        &self,
        clause: &OneStepClause,
        carrier: &Carrier,
        strategy: Strategy,
    ) -> Result<Option<OneStepModel>>;

    /// Size of a structure's representation: entry counts for set-valued
    /// structures, the largest binary length of a number for weighted ones.
    fn structure_size(&self, s: &Structure) -> usize;

    /// The structure of a state without modal obligations, and whether that
    /// state loops to itself (its single child is then itself).
    fn leaf(&self) -> (Structure, bool);
}

/// Whether every literal of `cl` has the required truth value in `m`. The
/// clause is stated over the carrier `m` was computed from.
pub fn model_check_clause(engine: &dyn Engine, m: &OneStepModel, cl: &OneStepClause) -> Result<bool> {
    let frame = m.carrier.frame();
    if !engine.check_structure(&m.structure, &frame) {
        return Err(Error::Internal(format!(
            "{} structure violates the frame condition of {}",
            m.structure.kind(),
            engine.logic()
        )));
    }
    Ok(cl.literals.iter().all(|l| {
        let args: Vec<Extension> = l.args.iter().map(|a| a.restrict(&m.origin)).collect();
        engine.eval_atom(&m.structure, &frame, &l.op, &args) == l.positive
    }))
}
