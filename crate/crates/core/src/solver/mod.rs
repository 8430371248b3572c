//! The shallow-model search: guess the truth of the top-level atoms, compute
//! the admissible point classes recursively, hand the resulting one-step
//! clause to the logic's engine, and glue the sub-witnesses under a fresh
//! root.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::arith::IlpOptions;
use crate::error::{Error, Result};
use crate::formula::{analyze, rank, render, Analysis, Formula};
use crate::logic::Logic;
use crate::logics::engine_for;
use crate::onestep::{self, extension, Carrier, Engine, Literal, OneStepClause, PointClass};
use crate::witness::{ShallowModel, State};

/// How one-step models are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Polynomially small carriers.
    Small,
    /// The full admissible carrier.
    Carrier,
    /// Both, failing if their verdicts differ; witnesses come from `Small`.
    Both,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Small => "small",
            Strategy::Carrier => "carrier",
            Strategy::Both => "both",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Strategy::Small),
            "carrier" => Ok(Strategy::Carrier),
            "both" => Ok(Strategy::Both),
            other => Err(Error::Precondition(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LogicConfig {
    pub logic: Logic,
    /// `None` picks the engine's preferred strategy.
    pub strategy: Option<Strategy>,
    pub ilp: IlpOptions,
    /// Memoize verdicts of subproblems by their canonical text.
    pub cache: bool,
}

impl LogicConfig {
    pub fn new(logic: Logic) -> Self {
        LogicConfig {
            logic,
            strategy: None,
            ilp: IlpOptions::default(),
            cache: true,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = Some(strategy);
        self
    }

    /// The strategy actually used: small where the engine supports it.
    pub fn effective_strategy(&self) -> Strategy {
        let caps = engine_for(&self.logic, &self.ilp).capabilities();
        match self.strategy {
            Some(Strategy::Both) if !caps.supports_small => Strategy::Carrier,
            Some(s) => s,
            None if caps.supports_small => Strategy::Small,
            None => Strategy::Carrier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Unsat,
    Sat(ShallowModel),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn model(&self) -> Option<&ShallowModel> {
        match self {
            Verdict::Sat(m) => Some(m),
            Verdict::Unsat => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    /// Satisfiability checks, including those answered from the cache.
    pub sat_calls: u64,
    pub cache_hits: u64,
    /// Calls to the one-step engine.
    pub onestep_calls: u64,
    /// Deepest nesting of recursive calls below the query.
    pub max_depth: usize,
    /// Largest carrier of a one-step model used in a witness.
    pub max_carrier: usize,
    /// Largest structure size of a one-step model used in a witness.
    pub max_structure: usize,
}

/// A query-local solver; the cache lives as long as the solver.
pub struct Solver {
    cfg: LogicConfig,
    engine: Box<dyn Engine>,
    strategy: onestep::Strategy,
    cache: HashMap<String, Option<ShallowModel>>,
    stats: SolveStats,
}

impl Solver {
    /// A solver for one fixed strategy. `Strategy::Both` is handled by
    /// [`sat`], which runs two solvers.
    pub fn new(cfg: LogicConfig) -> Result<Self> {
        let engine = engine_for(&cfg.logic, &cfg.ilp);
        let caps = engine.capabilities();
        let strategy = match cfg.effective_strategy() {
            Strategy::Small if caps.supports_small => onestep::Strategy::Small,
            Strategy::Small => {
                return Err(Error::Precondition(format!(
                    "{} does not support the small strategy",
                    cfg.logic
                )))
            }
            Strategy::Carrier => onestep::Strategy::Carrier,
            Strategy::Both => {
                return Err(Error::Precondition(
                    "a single solver runs one strategy".into(),
                ))
            }
        };
        Ok(Solver {
            cfg,
            engine,
            strategy,
            cache: HashMap::new(),
            stats: SolveStats::default(),
        })
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    pub fn engine(&self) -> &dyn Engine {
        self.engine.as_ref()
    }

    pub fn sat(&mut self, f: &Formula) -> Result<Verdict> {
        Ok(match self.solve(f, 0, rank(f))? {
            Some(m) => Verdict::Sat(m),
            None => Verdict::Unsat,
        })
    }

    /// Point classes over the alphabet of `a` whose theories are
    /// satisfiable, in ascending bitmask order. Letters are fixed one at a
    /// time; an unsatisfiable prefix prunes all of its completions.
    pub fn admissible(&mut self, a: &Analysis) -> Result<Vec<PointClass>> {
        self.admissible_at(a, 0, usize::MAX)
    }

    fn admissible_at(&mut self, a: &Analysis, depth: usize, budget: usize) -> Result<Vec<PointClass>> {
        let letters = &a.alphabet;
        if letters.len() > 63 {
            return Err(Error::ResourceLimit(format!(
                "{} alphabet letters exceed the limit of 63",
                letters.len()
            )));
        }
        let mut out = Vec::new();
        let mut stack = vec![(0usize, PointClass(0))];
        // Depth-first with `false` explored first gives ascending bitmasks.
        while let Some((k, class)) = stack.pop() {
            let theory = theory(letters, class, k);
            if self.solve(&theory, depth + 1, budget.saturating_sub(1))?.is_none() {
                continue;
            }
            if k == letters.len() {
                out.push(class);
            } else {
                stack.push((k + 1, class.with(k, true)));
                stack.push((k + 1, class.with(k, false)));
            }
        }
        out.sort();
        Ok(out)
    }

    fn solve(&mut self, f: &Formula, depth: usize, budget: usize) -> Result<Option<ShallowModel>> {
        self.stats.sat_calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if rank(f) > budget {
            return Err(Error::Internal(format!(
                "recursion reached rank {} with budget {budget}",
                rank(f)
            )));
        }
        let key = self.cfg.cache.then(|| render(f));
        if let Some(hit) = key.as_ref().and_then(|k| self.cache.get(k)) {
            self.stats.cache_hits += 1;
            return Ok(hit.clone());
        }
        let result = self.decide(f, depth, budget)?;
        if let Some(k) = key {
            self.cache.insert(k, result.clone());
        }
        Ok(result)
    }

    fn decide(&mut self, f: &Formula, depth: usize, budget: usize) -> Result<Option<ShallowModel>> {
        let a = analyze(f);
        let mut search = SignSearch {
            f,
            a: &a,
            fixed: vec![None; a.top_level.len()],
            admissible: None,
            depth,
            budget,
        };
        self.search_signs(&mut search, 0)
    }

    /// Depth-first over the top-level atoms, `true` before `false`, cutting
    /// branches the skeleton already refutes.
    fn search_signs(&mut self, s: &mut SignSearch<'_>, k: usize) -> Result<Option<ShallowModel>> {
        let value = {
            let (atoms, fixed) = (&s.a.top_level, &s.fixed);
            s.f.eval_partial(&|atom: &Formula| {
                atoms.iter().position(|t| t == atom).and_then(|i| fixed[i])
            })
        };
        if value == Some(false) {
            return Ok(None);
        }
        if k == s.fixed.len() {
            return self.try_signs(s);
        }
        for b in [true, false] {
            s.fixed[k] = Some(b);
            if let Some(m) = self.search_signs(s, k + 1)? {
                s.fixed[k] = None;
                return Ok(Some(m));
            }
        }
        s.fixed[k] = None;
        Ok(None)
    }

    fn try_signs(&mut self, s: &mut SignSearch<'_>) -> Result<Option<ShallowModel>> {
        let a = s.a;
        let signs: Vec<(&Formula, bool)> = a
            .top_level
            .iter()
            .zip(&s.fixed)
            .map(|(t, b)| (t, b.expect("complete sign map")))
            .collect();
        let top_vars: BTreeSet<String> = signs
            .iter()
            .filter_map(|(t, b)| match t {
                Formula::Var(v) if *b => Some(v.clone()),
                _ => None,
            })
            .collect();
        if signs.iter().all(|(t, _)| matches!(t, Formula::Var(_))) {
            let (structure, looped) = self.engine.leaf();
            return Ok(Some(ShallowModel {
                logic: self.cfg.logic.clone(),
                root: 0,
                states: vec![State {
                    vars: top_vars,
                    looped,
                    children: if looped { vec![0] } else { vec![] },
                    structure,
                }],
            }));
        }

        if s.admissible.is_none() {
            s.admissible = Some(self.admissible_at(a, s.depth, s.budget)?);
        }
        let points = s.admissible.clone().unwrap();
        let base = Carrier::new(a.alphabet.clone(), points.clone());
        let top_modal: Vec<(&Formula, bool)> = signs
            .iter()
            .filter(|(t, _)| matches!(t, Formula::Modal(..)))
            .copied()
            .collect();

        if !self.engine.capabilities().copointed {
            let clause = clause(&top_modal, &base)?;
            let vars = top_vars;
            return self.build(&clause, &base, vars, s.depth, s.budget);
        }

        // The current state is a point of its own one-step model: its class
        // must agree with the guessed signs, and its modal letters must come
        // out true or false in that model exactly as the class says.
        for theta in points {
            let agrees = a.alphabet.iter().enumerate().all(|(i, letter)| {
                signs
                    .iter()
                    .find(|(t, _)| *t == letter)
                    .is_none_or(|(_, b)| *b == theta.has(i))
            });
            if !agrees {
                continue;
            }
            let carrier = base.clone().with_designated(theta);
            let mut literals = top_modal.clone();
            for (i, letter) in a.alphabet.iter().enumerate() {
                if matches!(letter, Formula::Modal(..)) && !literals.iter().any(|(t, _)| *t == letter) {
                    literals.push((letter, theta.has(i)));
                }
            }
            let clause = clause(&literals, &carrier)?;
            let mut vars = top_vars.clone();
            vars.extend(theta.letters(&a.alphabet).filter_map(|l| match l {
                Formula::Var(v) => Some(v.clone()),
                _ => None,
            }));
            if let Some(m) = self.build(&clause, &carrier, vars, s.depth, s.budget)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// Solves the one-step clause and glues witnesses of the used classes
    /// under a fresh root.
    fn build(
        &mut self,
        clause: &OneStepClause,
        carrier: &Carrier,
        vars: BTreeSet<String>,
        depth: usize,
        budget: usize,
    ) -> Result<Option<ShallowModel>> {
        self.stats.onestep_calls += 1;
        let Some(model) = self.engine.sat(clause, carrier, self.strategy)? else {
            return Ok(None);
        };
        self.stats.max_carrier = self.stats.max_carrier.max(model.carrier.len());
        self.stats.max_structure = self
            .stats
            .max_structure
            .max(self.engine.structure_size(&model.structure));

        let mut states = vec![State {
            vars,
            looped: model.carrier.designated.is_some(),
            children: vec![],
            structure: model.structure.clone(),
        }];
        let mut children = Vec::with_capacity(model.carrier.len());
        for (k, &class) in model.carrier.points.iter().enumerate() {
            if model.carrier.designated == Some(k) {
                children.push(0);
                continue;
            }
            let letters = &model.carrier.alphabet;
            let th = theory(letters, class, letters.len());
            let sub = self.solve(&th, depth + 1, budget.saturating_sub(1))?.ok_or_else(|| {
                Error::Internal(format!("admissible class `{}` has no witness", render(&th)))
            })?;
            children.push(graft(&mut states, &sub));
        }
        states[0].children = children;
        Ok(Some(ShallowModel {
            logic: self.cfg.logic.clone(),
            root: 0,
            states,
        }))
    }
}

struct SignSearch<'a> {
    f: &'a Formula,
    a: &'a Analysis,
    fixed: Vec<Option<bool>>,
    admissible: Option<Vec<PointClass>>,
    depth: usize,
    budget: usize,
}

/// The conjunction fixing the first `k` letters as `class` says.
fn theory(letters: &[Formula], class: PointClass, k: usize) -> Formula {
    Formula::conj(letters[..k].iter().enumerate().map(|(i, l)| {
        if class.has(i) {
            l.clone()
        } else {
            Formula::not(l.clone())
        }
    }))
}

fn clause(literals: &[(&Formula, bool)], carrier: &Carrier) -> Result<OneStepClause> {
    let mut out = Vec::with_capacity(literals.len());
    for (atom, positive) in literals {
        let Formula::Modal(op, args) = atom else {
            unreachable!("clauses are built from modal atoms");
        };
        out.push(Literal {
            positive: *positive,
            op: op.clone(),
            args: args
                .iter()
                .map(|arg| extension(arg, carrier))
                .collect::<Result<_>>()?,
        });
    }
    Ok(OneStepClause::new(out))
}

/// Appends a copy of `sub` (whose root is its first state) and returns the
/// id of the copied root.
fn graft(states: &mut Vec<State>, sub: &ShallowModel) -> usize {
    let offset = states.len();
    debug_assert_eq!(sub.root, 0);
    for s in &sub.states {
        states.push(State {
            children: s.children.iter().map(|c| c + offset).collect(),
            ..s.clone()
        });
    }
    offset + sub.root
}

/// Decides satisfiability of `f`. With [`Strategy::Both`] the small and
/// carrier strategies are run separately and must agree.
pub fn sat(f: &Formula, cfg: &LogicConfig) -> Result<Verdict> {
    sat_with_stats(f, cfg).map(|(v, _)| v)
}

pub fn sat_with_stats(f: &Formula, cfg: &LogicConfig) -> Result<(Verdict, SolveStats)> {
    if cfg.effective_strategy() == Strategy::Both {
        let mut small = Solver::new(cfg.clone().with_strategy(Strategy::Small))?;
        let mut full = Solver::new(cfg.clone().with_strategy(Strategy::Carrier))?;
        let v = small.sat(f)?;
        if v.is_sat() != full.sat(f)?.is_sat() {
            return Err(Error::StrategyDisagreement(render(f)));
        }
        return Ok((v, small.stats()));
    }
    let mut solver = Solver::new(cfg.clone())?;
    let v = solver.sat(f)?;
    Ok((v, solver.stats()))
}

/// Whether `f` holds in every model: its negation is unsatisfiable.
pub fn valid(f: &Formula, cfg: &LogicConfig) -> Result<bool> {
    Ok(!sat(&Formula::not(f.clone()), cfg)?.is_sat())
}
