//! Bounded model search by propositional encoding: a model on exactly `n`
//! states satisfying the query at state 0 exists iff the encoding is
//! satisfiable. Extra states may stay unreachable, so this also covers
//! every smaller model.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use varisat::{ExtendFormula, Lit, Solver};

use super::models::{CondModel, FiniteModel, KripkeModel};
use super::SearchBounds;
use crate::error::{Error, Result};
use crate::formula::{rank, Formula, ModalOp};
use crate::logic::Logic;
use crate::logics::engine_for;
use crate::solver::LogicConfig;
use crate::witness::query_shape;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Frames {
    Kripke { reflexive: bool },
    Cond { identity: bool, modus_ponens: bool },
}

struct Encoder {
    sat: Solver<'static>,
    n: usize,
    frames: Frames,
    top: Lit,
    memo: HashMap<(Formula, usize), Lit>,
    vars: BTreeMap<String, Vec<Lit>>,
    edges: Vec<Vec<Lit>>,
    /// Per antecedent and state `x`: whether `y` is selected, for all `y`.
    selections: BTreeMap<Formula, BTreeMap<usize, Vec<Lit>>>,
}

impl Encoder {
    fn new(n: usize, frames: Frames) -> Self {
        let mut sat = Solver::new();
        let top = sat.new_lit();
        sat.add_clause(&[top]);
        let mut enc = Encoder {
            sat,
            n,
            frames,
            top,
            memo: HashMap::new(),
            vars: BTreeMap::new(),
            edges: Vec::new(),
            selections: BTreeMap::new(),
        };
        if let Frames::Kripke { reflexive } = frames {
            enc.edges = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| {
                            if reflexive && x == y {
                                enc.top
                            } else {
                                enc.sat.new_lit()
                            }
                        })
                        .collect()
                })
                .collect();
        }
        enc
    }

    fn and(&mut self, ins: &[Lit]) -> Lit {
        let out = self.sat.new_lit();
        let mut back = vec![out];
        for &i in ins {
            self.sat.add_clause(&[!out, i]);
            back.push(!i);
        }
        self.sat.add_clause(&back);
        out
    }

    fn or(&mut self, ins: &[Lit]) -> Lit {
        let negated: Vec<Lit> = ins.iter().map(|&l| !l).collect();
        !self.and(&negated)
    }

    fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let out = self.sat.new_lit();
        self.sat.add_clause(&[!out, !a, b]);
        self.sat.add_clause(&[!out, a, !b]);
        self.sat.add_clause(&[out, a, b]);
        self.sat.add_clause(&[out, !a, !b]);
        out
    }

    fn var(&mut self, name: &str, x: usize) -> Lit {
        if !self.vars.contains_key(name) {
            let lits = (0..self.n).map(|_| self.sat.new_lit()).collect();
            self.vars.insert(name.to_string(), lits);
        }
        self.vars[name][x]
    }

    fn selection(&mut self, antecedent: &Formula, x: usize) -> Vec<Lit> {
        if let Some(s) = self.selections.get(antecedent).and_then(|m| m.get(&x)) {
            return s.clone();
        }
        let Frames::Cond {
            identity,
            modus_ponens,
        } = self.frames
        else {
            unreachable!()
        };
        let s: Vec<Lit> = (0..self.n).map(|_| self.sat.new_lit()).collect();
        for y in 0..self.n {
            let member = self.holds(antecedent, y);
            if identity {
                self.sat.add_clause(&[!s[y], member]);
            }
            if modus_ponens && y == x {
                self.sat.add_clause(&[!member, s[x]]);
            }
        }
        self.selections
            .entry(antecedent.clone())
            .or_default()
            .insert(x, s.clone());
        s
    }

    fn holds(&mut self, f: &Formula, x: usize) -> Lit {
        let key = (f.clone(), x);
        if let Some(&l) = self.memo.get(&key) {
            return l;
        }
        let l = match f {
            Formula::True => self.top,
            Formula::False => !self.top,
            Formula::Var(v) => self.var(v, x),
            Formula::Not(g) => !self.holds(g, x),
            Formula::And(a, b) => {
                let ins = [self.holds(a, x), self.holds(b, x)];
                self.and(&ins)
            }
            Formula::Or(a, b) => {
                let ins = [self.holds(a, x), self.holds(b, x)];
                self.or(&ins)
            }
            Formula::Implies(a, b) => {
                let ins = [!self.holds(a, x), self.holds(b, x)];
                self.or(&ins)
            }
            Formula::Iff(a, b) => {
                let (p, q) = (self.holds(a, x), self.holds(b, x));
                self.iff(p, q)
            }
            Formula::Modal(ModalOp::Box, args) => {
                let mut all = Vec::with_capacity(self.n);
                for y in 0..self.n {
                    let ins = [!self.edges[x][y], self.holds(&args[0], y)];
                    all.push(self.or(&ins));
                }
                self.and(&all)
            }
            Formula::Modal(ModalOp::Cond, args) => {
                let s = self.selection(&args[0], x);
                let mut all = Vec::with_capacity(self.n);
                for (y, &sel) in s.iter().enumerate() {
                    let ins = [!sel, self.holds(&args[1], y)];
                    all.push(self.or(&ins));
                }
                self.and(&all)
            }
            Formula::Modal(op, _) => unreachable!("`{}` is checked before encoding", op.spelling()),
        };
        self.memo.insert(key, l);
        l
    }

    /// Antecedents with equal extensions select the same set.
    fn functionality(&mut self) {
        let antecedents: Vec<Formula> = self.selections.keys().cloned().collect();
        for (i, a) in antecedents.iter().enumerate() {
            for b in &antecedents[i + 1..] {
                let mut same = Vec::with_capacity(self.n);
                for y in 0..self.n {
                    let (p, q) = (self.holds(a, y), self.holds(b, y));
                    same.push(self.iff(p, q));
                }
                let equal = self.and(&same);
                let states: Vec<usize> = self.selections[a]
                    .keys()
                    .filter(|x| self.selections[b].contains_key(x))
                    .copied()
                    .collect();
                for x in states {
                    for y in 0..self.n {
                        let (s, t) = (self.selections[a][&x][y], self.selections[b][&x][y]);
                        self.sat.add_clause(&[!equal, !s, t]);
                        self.sat.add_clause(&[!equal, s, !t]);
                    }
                }
            }
        }
    }

    fn solve(mut self, f: &Formula) -> Result<Option<FiniteModel>> {
        let root = self.holds(f, 0);
        self.sat.add_clause(&[root]);
        if matches!(self.frames, Frames::Cond { .. }) {
            // Every antecedent is already encoded at every state, so this
            // creates no further selections.
            self.functionality();
        }
        for v in f.vars() {
            self.var(&v, 0);
        }
        let sat = self
            .sat
            .solve()
            .map_err(|e| Error::Internal(format!("propositional solver failed: {e}")))?;
        if !sat {
            return Ok(None);
        }
        let assignment: BTreeSet<Lit> = self.sat.model().unwrap_or_default().into_iter().collect();
        let value = |l: Lit| assignment.contains(&l);
        let valuation: Vec<BTreeSet<String>> = (0..self.n)
            .map(|x| {
                self.vars
                    .iter()
                    .filter(|(_, lits)| value(lits[x]))
                    .map(|(v, _)| v.clone())
                    .collect()
            })
            .collect();
        Ok(Some(match self.frames {
            Frames::Kripke { .. } => FiniteModel::Kripke(KripkeModel {
                succ: (0..self.n)
                    .map(|x| (0..self.n).filter(|&y| value(self.edges[x][y])).collect())
                    .collect(),
                valuation,
            }),
            Frames::Cond { modus_ponens, .. } => {
                let mut select = vec![BTreeMap::new(); self.n];
                for (a, per_state) in &self.selections {
                    let ext: BTreeSet<usize> =
                        (0..self.n).filter(|&y| value(self.memo[&(a.clone(), y)])).collect();
                    for (&x, lits) in per_state {
                        let chosen = (0..self.n).filter(|&y| value(lits[y])).collect();
                        select[x].insert(ext.clone(), chosen);
                    }
                }
                FiniteModel::Cond(CondModel {
                    valuation,
                    select,
                    modus_ponens,
                })
            }
        }))
    }
}

fn check_operators(f: &Formula, allowed: &ModalOp) -> Result<()> {
    for m in f.modal_atoms() {
        if let Formula::Modal(op, _) = m {
            if std::mem::discriminant(op) != std::mem::discriminant(allowed) {
                return Err(Error::Precondition(format!(
                    "`{}` is not supported by this oracle",
                    op.spelling()
                )));
            }
        }
    }
    Ok(())
}

/// A Kripke model with at most `n` states (all reflexive if asked)
/// satisfying `f` at state 0.
pub fn kripke_brute(f: &Formula, n: usize, reflexive: bool) -> Result<Option<KripkeModel>> {
    check_operators(f, &ModalOp::Box)?;
    let n = n.max(1);
    match Encoder::new(n, Frames::Kripke { reflexive }).solve(f)? {
        Some(FiniteModel::Kripke(m)) => Ok(Some(m)),
        Some(_) => unreachable!(),
        None => Ok(None),
    }
}

/// Searches all models up to the shallow-model size bound for `f`: a tree
/// of depth `rank(f)` whose branching is the engine's carrier bound.
/// Supports the Kripke and conditional logics.
pub fn bounded_model_search(
    f: &Formula,
    cfg: &LogicConfig,
    bounds: &SearchBounds,
) -> Result<Option<FiniteModel>> {
    let frames = match cfg.logic {
        Logic::K | Logic::T => Frames::Kripke {
            reflexive: cfg.logic == Logic::T,
        },
        Logic::Ck | Logic::CkId | Logic::CkMp => Frames::Cond {
            identity: cfg.logic == Logic::CkId,
            modus_ponens: cfg.logic == Logic::CkMp,
        },
        ref other => {
            return Err(Error::Precondition(format!(
                "no bounded model search for {other}"
            )))
        }
    };
    let op = match frames {
        Frames::Kripke { .. } => ModalOp::Box,
        Frames::Cond { .. } => ModalOp::Cond,
    };
    check_operators(f, &op)?;
    let engine = engine_for(&cfg.logic, &cfg.ilp);
    let branching = engine
        .size_bounds(&query_shape(f), 0)
        .carrier
        .unwrap_or(bounds.max_states);
    let mut total: usize = 0;
    let mut level: usize = 1;
    for _ in 0..=rank(f) {
        total = total.saturating_add(level);
        level = level.saturating_mul(branching.max(1));
    }
    if total > bounds.max_states {
        return Err(Error::ResourceLimit(format!(
            "model size bound {total} exceeds the cap of {}",
            bounds.max_states
        )));
    }
    Encoder::new(total, frames).solve(f)
}
