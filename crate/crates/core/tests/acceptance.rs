//! End-to-end acceptance criteria. Each test prints one line
//! `acceptance N: PASS|FAIL ...`; limits and tolerances are pinned below.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use cosat::arith::{rat, IlpOptions};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use cosat::formula::{Formula, ModalOp};
use cosat::logics::agency::{from_selection, to_selection};
use cosat::logics::engine_for;
use cosat::onestep::{
    model_check_clause, Capabilities, Carrier, ClauseShape, Engine, Extension, Frame,
    OneStepClause, OneStepModel, SizeBounds, Strategy as StepStrategy, Structure,
};
use cosat::oracle::corpus::{carriers, clause_space, materialize, random_formulas};
use cosat::oracle::{bounded_model_search, kripke_brute, onestep_brute, SearchBounds};
use cosat::solver::sat_with_stats;
use cosat::witness::to_json;
use cosat::{model_check, parse, rank, sat, verify, Logic, LogicConfig, ShallowModel, Strategy, Verdict};

const SUITE1_LIMIT: Duration = Duration::from_secs(10);
const SUITE2_LIMIT: Duration = Duration::from_secs(300);
const SUITE2_FORMULAS_PER_LOGIC: usize = 250;
const SUITE2_MAX_RANK: usize = 3;
const SUITE2_MAX_ATOMS: usize = 6;
const SUITE2_STATES: usize = 6;
const SUITE3_LIMIT_PER_ENGINE: Duration = Duration::from_secs(300);
const SUITE3_MAX_LITERALS: usize = 3;
/// Clause sizes with more clauses than this are sampled, per family.
const SUITE3_CAP_KRIPKE_AGENCY: usize = 20_000;
const SUITE3_CAP_CONDITIONAL: usize = 4_000;
const SUITE3_CAP_NUMERIC: usize = 600;
const SUITE7_LIMIT: Duration = Duration::from_secs(600);
const SUITE7_FORMULAS_PER_LOGIC: usize = 200;
const SUITE7_MAX_RANK: usize = 2;
const SUITE7_MAX_ATOMS: usize = 5;
const SUITE7_MAX_STATES: usize = 400;

/// Writes to the stderr handle directly, so the line shows even when the
/// harness captures output of passing tests.
fn line(n: usize, passed: bool, detail: &str) -> bool {
    let verdict = if passed { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance {n}: {verdict} - {detail}");
    passed
}

fn all_logics() -> Vec<Logic> {
    vec![
        Logic::K,
        Logic::T,
        Logic::Ck,
        Logic::CkId,
        Logic::CkMp,
        Logic::Agency,
        Logic::Presburger,
        Logic::PresburgerT,
        Logic::PresburgerHalf,
        Logic::Prob,
        Logic::ProbStat(rat(1, 3)),
    ]
}

/// A solved query: the formula handed to `sat` and its verdict.
#[derive(Clone)]
struct Solved {
    logic: Logic,
    query: Formula,
    verdict: Verdict,
    small: bool,
}

fn solve(logic: &Logic, query: Formula) -> Solved {
    let cfg = LogicConfig::new(logic.clone());
    let verdict = sat(&query, &cfg).unwrap_or_else(|e| panic!("{logic}: {e}"));
    Solved {
        logic: logic.clone(),
        small: cfg.effective_strategy() == Strategy::Small,
        query,
        verdict,
    }
}

// ---------------------------------------------------------------- suite 1

/// `(logic, formula, expected)`: `Valid(b)` checks validity, `Sat(b)`
/// checks satisfiability.
enum Expect {
    Valid(bool),
    Sat(bool),
}

fn suite1_cases() -> Vec<(Logic, &'static str, Expect)> {
    use Expect::*;
    vec![
        (Logic::K, "[](p -> q) -> ([]p -> []q)", Valid(true)),
        (Logic::T, "[]p -> p", Valid(true)),
        (Logic::K, "[]p -> p", Valid(false)),
        (Logic::CkId, "(p => p)", Valid(true)),
        (Logic::Ck, "(p => p)", Valid(false)),
        (Logic::CkMp, "(p => q) -> (p -> q)", Valid(true)),
        (Logic::Ck, "(p => q) -> (p -> q)", Valid(false)),
        (Logic::Agency, "~C true", Valid(true)),
        (Logic::Agency, "~C false", Valid(true)),
        (Logic::Agency, "(E p & E q) -> E (p & q)", Valid(true)),
        (Logic::Agency, "E p -> p", Valid(true)),
        (Logic::Agency, "E p -> C p", Valid(true)),
        (Logic::Prob, "L{1*(true) >= 1}", Valid(true)),
        (Logic::Prob, "L{1*(p) >= 1/2} & L{1*(~p) >= 2/3}", Sat(false)),
        (Logic::PresburgerT, "p -> <0>p", Valid(true)),
        (Logic::Presburger, "p -> <0>p", Valid(false)),
        // Satisfiable agency queries, so that the selection round trip has
        // witnesses to work on.
        (Logic::Agency, "C p & ~E p", Sat(true)),
        (Logic::Agency, "E p & ~E q & C q", Sat(true)),
        (Logic::Agency, "C p -> E p", Valid(false)),
        (Logic::Agency, "E (p & C q) & ~E q", Sat(true)),
    ]
}

struct Suite1 {
    results: Vec<(Solved, bool)>,
    elapsed: Duration,
}

fn run_suite1() -> Suite1 {
    let start = Instant::now();
    let results = suite1_cases()
        .into_iter()
        .map(|(logic, text, expect)| {
            let f = parse(text, &logic).unwrap();
            let (query, want_sat) = match expect {
                Expect::Valid(v) => (Formula::not(f), !v),
                Expect::Sat(s) => (f, s),
            };
            let solved = solve(&logic, query);
            let ok = solved.verdict.is_sat() == want_sat;
            (solved, ok)
        })
        .collect();
    Suite1 {
        results,
        elapsed: start.elapsed(),
    }
}

fn suite1() -> &'static Suite1 {
    static S: OnceLock<Suite1> = OnceLock::new();
    S.get_or_init(run_suite1)
}

// ---------------------------------------------------------------- suite 2

struct Suite2 {
    results: Vec<(Solved, bool)>,
    elapsed: Duration,
}

fn suite2_formulas() -> Vec<(Logic, Formula)> {
    let mut out = Vec::new();
    for (logic, seed) in [(Logic::K, 2), (Logic::T, 3)] {
        for f in random_formulas(&logic, SUITE2_FORMULAS_PER_LOGIC, SUITE2_MAX_RANK, SUITE2_MAX_ATOMS, seed) {
            out.push((logic.clone(), f));
        }
    }
    out
}

fn suite2() -> &'static Suite2 {
    static S: OnceLock<Suite2> = OnceLock::new();
    S.get_or_init(|| {
        let start = Instant::now();
        let results = suite2_formulas()
            .into_iter()
            .map(|(logic, f)| {
                let oracle = kripke_brute(&f, SUITE2_STATES, logic == Logic::T).unwrap();
                if let Some(m) = &oracle {
                    assert!(m.holds(0, &f), "oracle model does not satisfy its query");
                }
                let solved = solve(&logic, f);
                let ok = solved.verdict.is_sat() == oracle.is_some();
                (solved, ok)
            })
            .collect();
        Suite2 {
            results,
            elapsed: start.elapsed(),
        }
    })
}

// ---------------------------------------------------------------- suite 3

/// Delegates to an engine, recording single-pass evaluations that did not
/// visit every point exactly once.
struct Audited {
    inner: Box<dyn Engine>,
    calls: AtomicU64,
    violations: AtomicU64,
}

impl Engine for Audited {
    fn logic(&self) -> &Logic {
        self.inner.logic()
    }
    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }
    fn size_bounds(&self, shape: &ClauseShape, carrier_size: usize) -> SizeBounds {
        self.inner.size_bounds(shape, carrier_size)
    }
    fn check_structure(&self, s: &Structure, frame: &Frame) -> bool {
        self.inner.check_structure(s, frame)
    }
    fn eval_atom_traced(
        &self,
        s: &Structure,
        frame: &Frame,
        op: &ModalOp,
        args: &[Extension],
    ) -> (bool, Option<usize>) {
        let (v, visits) = self.inner.eval_atom_traced(s, frame, op, args);
        self.calls.fetch_add(1, Ordering::Relaxed);
        if visits != Some(frame.size) {
            self.violations.fetch_add(1, Ordering::Relaxed);
        }
        (v, visits)
    }
    fn sat(&self, cl: &OneStepClause, c: &Carrier, st: StepStrategy) -> cosat::Result<Option<OneStepModel>> {
        self.inner.sat(cl, c, st)
    }
    fn structure_size(&self, s: &Structure) -> usize {
        self.inner.structure_size(s)
    }
    fn leaf(&self) -> (Structure, bool) {
        self.inner.leaf()
    }
}

struct EngineReport {
    logic: Logic,
    clauses: usize,
    disagreements: Vec<String>,
    bound_violations: Vec<String>,
    /// Solver models beyond the reach of the enumeration.
    beyond_box: usize,
    eval_calls: u64,
    pass_violations: u64,
    elapsed: Duration,
}

fn is_numeric(logic: &Logic) -> bool {
    matches!(
        logic,
        Logic::Presburger | Logic::PresburgerT | Logic::PresburgerHalf | Logic::Prob | Logic::ProbStat(_)
    )
}

/// Whether a structure uses a weight, or a mass denominator, that
/// `onestep_brute` never enumerates.
fn outside_box(s: &Structure, bounds: &SearchBounds) -> bool {
    match s {
        Structure::Count { weights } => weights.iter().any(|&w| w > bounds.max_weight),
        Structure::Prob { mass } => {
            let den = mass
                .iter()
                .fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
            den > BigInt::from(bounds.max_denominator)
        }
        _ => false,
    }
}

fn run_engine(logic: &Logic) -> EngineReport {
    let start = Instant::now();
    let engine = Audited {
        inner: engine_for(logic, &IlpOptions::default()),
        calls: AtomicU64::new(0),
        violations: AtomicU64::new(0),
    };
    let caps = engine.capabilities();
    let cap = match logic {
        Logic::Ck | Logic::CkId | Logic::CkMp => SUITE3_CAP_CONDITIONAL,
        l if is_numeric(l) => SUITE3_CAP_NUMERIC,
        _ => SUITE3_CAP_KRIPKE_AGENCY,
    };
    let bounds = SearchBounds::default();
    let space = clause_space(logic, SUITE3_MAX_LITERALS, cap, 11);
    let mut report = EngineReport {
        logic: logic.clone(),
        clauses: 0,
        disagreements: vec![],
        bound_violations: vec![],
        beyond_box: 0,
        eval_calls: 0,
        pass_violations: 0,
        elapsed: Duration::ZERO,
    };
    for abstract_clause in &space {
        for carrier in carriers(logic) {
            report.clauses += 1;
            let cl = materialize(abstract_clause, &carrier);
            let brute = onestep_brute(&engine, &cl, &carrier, &bounds).unwrap().is_some();
            let mut strategies = vec![];
            if caps.supports_carrier {
                strategies.push(StepStrategy::Carrier);
            }
            if caps.supports_small {
                strategies.push(StepStrategy::Small);
            }
            for st in strategies {
                let found = match engine.sat(&cl, &carrier, st) {
                    Ok(found) => found,
                    Err(e) => {
                        report.disagreements.push(format!("{st}: {e} on {cl:?}"));
                        continue;
                    }
                };
                if let Some(m) = &found {
                    if !model_check_clause(&engine, m, &cl).unwrap() {
                        report.disagreements.push(format!("{st}: model fails {cl:?}"));
                    }
                    if st == StepStrategy::Small {
                        let b = engine.size_bounds(&cl.shape(), carrier.len());
                        let over_carrier = b.carrier.is_some_and(|c| m.carrier.len() > c);
                        let over_structure =
                            b.structure.is_some_and(|s| engine.structure_size(&m.structure) > s);
                        if over_carrier || over_structure {
                            report.bound_violations.push(format!("{cl:?}"));
                        }
                    }
                }
                // A model the enumeration cannot see is accepted only when it
                // has been checked above and provably lies outside the box.
                let agree = brute == found.is_some()
                    || (!brute && found.as_ref().is_some_and(|m| outside_box(&m.structure, &bounds)));
                if agree && brute != found.is_some() {
                    report.beyond_box += 1;
                }
                if !agree {
                    report.disagreements.push(format!(
                        "{st}: solver {} brute {} on {cl:?} over {:?}",
                        found.is_some(),
                        brute,
                        carrier.points
                    ));
                }
            }
        }
    }
    report.eval_calls = engine.calls.load(Ordering::Relaxed);
    report.pass_violations = engine.violations.load(Ordering::Relaxed);
    report.elapsed = start.elapsed();
    report
}

fn suite3() -> &'static Vec<EngineReport> {
    static S: OnceLock<Vec<EngineReport>> = OnceLock::new();
    S.get_or_init(|| {
        // Sequential, so that each engine's time is its own.
        all_logics().iter().map(run_engine).collect()
    })
}

// ---------------------------------------------------------------- suite 7

struct Suite7 {
    results: Vec<(Solved, bool)>,
    elapsed: Duration,
}

fn suite7() -> &'static Suite7 {
    static S: OnceLock<Suite7> = OnceLock::new();
    S.get_or_init(|| {
        let start = Instant::now();
        let bounds = SearchBounds {
            max_states: SUITE7_MAX_STATES,
            ..SearchBounds::default()
        };
        let mut results = Vec::new();
        for (logic, seed) in [(Logic::K, 21), (Logic::T, 22), (Logic::CkId, 23)] {
            let cfg = LogicConfig::new(logic.clone());
            for f in random_formulas(&logic, SUITE7_FORMULAS_PER_LOGIC, SUITE7_MAX_RANK, SUITE7_MAX_ATOMS, seed) {
                let oracle = bounded_model_search(&f, &cfg, &bounds).unwrap();
                if let Some(m) = &oracle {
                    assert!(m.holds(0, &f), "bounded model does not satisfy its query");
                }
                let solved = solve(&logic, f);
                let ok = solved.verdict.is_sat() == oracle.is_some();
                results.push((solved, ok));
            }
        }
        Suite7 {
            results,
            elapsed: start.elapsed(),
        }
    })
}

/// Satisfiable random agency formulas, for the selection round trip.
fn agency_corpus() -> Vec<Solved> {
    random_formulas(&Logic::Agency, 60, 2, 5, 31)
        .into_iter()
        .map(|f| solve(&Logic::Agency, f))
        .filter(|s| s.verdict.is_sat())
        .collect()
}

// ---------------------------------------------------------------- criteria

#[test]
fn criterion_1_axiom_suites() {
    let s = suite1();
    let failed: Vec<String> = s
        .results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(r, _)| format!("{}: {}", r.logic, cosat::render(&r.query)))
        .collect();
    let passed = failed.is_empty() && s.elapsed < SUITE1_LIMIT;
    line(
        1,
        passed,
        &format!("{} cases, {:?} (limit {:?}), failures {failed:?}", s.results.len(), s.elapsed, SUITE1_LIMIT),
    );
    assert!(passed);
}

#[test]
fn criterion_2_kripke_oracle() {
    let s = suite2();
    let bad = s.results.iter().filter(|(_, ok)| !ok).count();
    let passed = bad == 0 && s.elapsed < SUITE2_LIMIT;
    line(
        2,
        passed,
        &format!(
            "{} formulas, {bad} disagreements, {:?} (limit {:?})",
            s.results.len(),
            s.elapsed,
            SUITE2_LIMIT
        ),
    );
    for (r, _) in s.results.iter().filter(|(_, ok)| !ok).take(5) {
        println!("  disagreement {}: {}", r.logic, cosat::render(&r.query));
    }
    assert!(passed);
}

#[test]
fn criterion_3_onestep_oracle() {
    let reports = suite3();
    let mut passed = true;
    for r in reports {
        let ok = r.disagreements.is_empty() && r.elapsed < SUITE3_LIMIT_PER_ENGINE;
        passed &= ok;
        println!(
            "  {}: {} clauses, {} disagreements, {} models beyond the enumeration box, {:?}",
            r.logic,
            r.clauses,
            r.disagreements.len(),
            r.beyond_box,
            r.elapsed
        );
        for d in r.disagreements.iter().take(3) {
            println!("    {d}");
        }
    }
    line(
        3,
        passed,
        &format!("{} engines, limit {:?} per engine", reports.len(), SUITE3_LIMIT_PER_ENGINE),
    );
    assert!(passed);
}

fn check_witnesses<'a>(solved: impl Iterator<Item = &'a Solved>) -> (usize, Vec<String>) {
    let mut count = 0;
    let mut failures = Vec::new();
    for s in solved {
        if let Verdict::Sat(m) = &s.verdict {
            count += 1;
            let report = verify(m, &s.query, s.small);
            if !report.passed() {
                failures.push(format!(
                    "{} {}: {:?}",
                    s.logic,
                    cosat::render(&s.query),
                    report.failures().map(|c| c.name).collect::<Vec<_>>()
                ));
            }
        }
    }
    (count, failures)
}

#[test]
fn criterion_4_witness_integrity() {
    let all: Vec<&Solved> = suite1()
        .results
        .iter()
        .chain(&suite2().results)
        .chain(&suite7().results)
        .map(|(s, _)| s)
        .collect();
    let agency = agency_corpus();
    let (count, failures) = check_witnesses(all.into_iter().chain(&agency));
    let passed = failures.is_empty() && count > 0;
    line(4, passed, &format!("{count} witnesses verified, {} failures", failures.len()));
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    assert!(passed);
}

#[test]
fn criterion_5_small_model_bounds() {
    let reports = suite3();
    let violations: usize = reports.iter().map(|r| r.bound_violations.len()).sum();
    for r in reports.iter().filter(|r| !r.bound_violations.is_empty()) {
        println!("  {}: {:?}", r.logic, r.bound_violations.iter().take(2).collect::<Vec<_>>());
    }
    line(5, violations == 0, &format!("{violations} bound violations"));
    assert_eq!(violations, 0);
}

#[test]
fn criterion_6_strategy_agreement() {
    let queries: Vec<(Logic, Formula)> = suite1()
        .results
        .iter()
        .chain(&suite2().results)
        .map(|(s, _)| (s.logic.clone(), s.query.clone()))
        .collect();
    let mut checked = 0;
    let mut failures = Vec::new();
    for (logic, q) in &queries {
        let caps = engine_for(logic, &IlpOptions::default()).capabilities();
        if !(caps.supports_small && caps.supports_carrier) {
            continue;
        }
        checked += 1;
        let small = sat(q, &LogicConfig::new(logic.clone()).with_strategy(Strategy::Small));
        let full = sat(q, &LogicConfig::new(logic.clone()).with_strategy(Strategy::Carrier));
        match (small, full) {
            (Ok(a), Ok(b)) if a.is_sat() == b.is_sat() => {}
            (a, b) => failures.push(format!("{logic} {}: {a:?} / {b:?}", cosat::render(q))),
        }
    }
    let passed = failures.is_empty();
    line(6, passed, &format!("{checked} queries, {} disagreements", failures.len()));
    assert!(passed);
}

#[test]
fn criterion_7_bounded_rank_agreement() {
    let s = suite7();
    let bad: Vec<&Solved> = s.results.iter().filter(|(_, ok)| !ok).map(|(r, _)| r).collect();
    let passed = bad.is_empty() && s.elapsed < SUITE7_LIMIT;
    line(
        7,
        passed,
        &format!(
            "{} formulas, {} disagreements, {:?} (limit {:?})",
            s.results.len(),
            bad.len(),
            s.elapsed,
            SUITE7_LIMIT
        ),
    );
    for r in bad.iter().take(5) {
        println!("  disagreement {}: {}", r.logic, cosat::render(&r.query));
    }
    assert!(passed);
}

#[test]
fn criterion_8_single_pass() {
    let numeric: Vec<&EngineReport> = suite3().iter().filter(|r| is_numeric(&r.logic)).collect();
    let calls: u64 = numeric.iter().map(|r| r.eval_calls).sum();
    let violations: u64 = numeric.iter().map(|r| r.pass_violations).sum();
    let passed = violations == 0 && calls > 0;
    line(8, passed, &format!("{calls} evaluations, {violations} without exactly one visit per point"));
    assert!(passed);
}

/// Every subformula of `f`, in preorder.
fn subformulas(f: &Formula) -> Vec<&Formula> {
    let mut out = vec![f];
    for c in f.children() {
        out.extend(subformulas(c));
    }
    out
}

fn round_trip(m: &ShallowModel, f: &Formula) -> Result<(), String> {
    let sm = to_selection(m, f).map_err(|e| e.to_string())?;
    sm.check_conditions().map_err(|e| e.to_string())?;
    if !sm.extension(f).map_err(|e| e.to_string())?.contains(&(2 * m.root)) {
        return Err("query false at the root of the selection model".into());
    }
    let back = from_selection(&sm, f).map_err(|e| e.to_string())?;
    for g in subformulas(f) {
        let there = sm.extension(g).map_err(|e| e.to_string())?;
        let back_there = back.extension(g).map_err(|e| e.to_string())?;
        for i in 0..m.states.len() {
            let truth = model_check(m, i, g).map_err(|e| e.to_string())?;
            for x in [2 * i, 2 * i + 1] {
                if there.contains(&x) != truth || back_there.contains(&x) != truth {
                    return Err(format!("`{}` changes at state {i}", cosat::render(g)));
                }
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_9_selection_round_trip() {
    let from_suite: Vec<Solved> = suite1()
        .results
        .iter()
        .map(|(s, _)| s)
        .filter(|s| s.logic == Logic::Agency && s.verdict.is_sat())
        .cloned()
        .collect();
    let suite_count = from_suite.len();
    let mut failures = Vec::new();
    let all: Vec<Solved> = from_suite.into_iter().chain(agency_corpus()).collect();
    for s in &all {
        if let Err(e) = round_trip(s.verdict.model().unwrap(), &s.query) {
            failures.push(format!("{}: {e}", cosat::render(&s.query)));
        }
    }
    let passed = failures.is_empty() && suite_count > 0;
    line(
        9,
        passed,
        &format!("{} witnesses ({suite_count} from suite 1), {} failures", all.len(), failures.len()),
    );
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    assert!(passed);
}

/// Solves the witness-producing suites afresh and writes every witness to
/// `dir`, one file per query.
fn write_witnesses(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    std::fs::create_dir_all(dir).unwrap();
    let mut queries: Vec<(Logic, Formula)> = run_suite1()
        .results
        .into_iter()
        .map(|(s, _)| (s.logic, s.query))
        .collect();
    queries.extend(suite2_formulas());
    queries.extend(random_formulas(&Logic::Agency, 60, 2, 5, 31).into_iter().map(|f| (Logic::Agency, f)));
    for logic in [Logic::Ck, Logic::PresburgerHalf, Logic::ProbStat(rat(1, 3))] {
        queries.extend(random_formulas(&logic, 40, 2, 5, 41).into_iter().map(|f| (logic.clone(), f)));
    }
    let mut files = Vec::new();
    for (i, (logic, q)) in queries.iter().enumerate() {
        let (v, _) = sat_with_stats(q, &LogicConfig::new(logic.clone())).unwrap();
        if let Verdict::Sat(m) = v {
            let path = dir.join(format!("{i:04}.json"));
            std::fs::write(&path, to_json(&m)).unwrap();
            files.push(path);
        }
    }
    files
}

#[test]
fn criterion_10_determinism() {
    let base = std::env::temp_dir().join(format!("cosat-determinism-{}", std::process::id()));
    let a = write_witnesses(&base.join("a"));
    let b = write_witnesses(&base.join("b"));
    let names = |v: &[std::path::PathBuf]| -> BTreeSet<_> {
        v.iter().map(|p| p.file_name().unwrap().to_owned()).collect()
    };
    let mut differing = 0;
    for (x, y) in a.iter().zip(&b) {
        if std::fs::read(x).unwrap() != std::fs::read(y).unwrap() {
            differing += 1;
        }
    }
    let passed = names(&a) == names(&b) && differing == 0 && !a.is_empty();
    std::fs::remove_dir_all(&base).ok();
    line(10, passed, &format!("{} witness files per run, {differing} differ", a.len()));
    assert!(passed);
}

#[test]
fn witness_depth_never_exceeds_rank() {
    for (s, _) in &suite1().results {
        if let Some(m) = s.verdict.model() {
            assert!(m.depth() <= rank(&s.query));
        }
    }
}
