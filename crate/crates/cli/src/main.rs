//! `cosat`: decide modal formulas, emit and check witnesses, run corpora.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success (`valid`: VALID, `check-model`: holds, `batch`/`selftest`: all ok) |
//! | 1    | negative answer (`valid`: INVALID, `check-model`: fails, `batch`/`selftest`: some line not ok) |
//! | 2    | usage or parse error |
//! | 3    | resource limit |
//! | 4    | any other error (I/O, malformed witness, strategy disagreement) |
//! | 10   | `solve`: SAT |
//! | 20   | `solve`: UNSAT |
//! | 30   | `solve --verify`: the witness failed re-verification |

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cosat::arith::IlpOptions;
use cosat::solver::sat_with_stats;
use cosat::witness::{from_json, to_json};
use cosat::{model_check, parse, rank, verify, Error, Formula, Logic, LogicConfig, Strategy, Verdict};
use rayon::prelude::*;

const EXIT_OK: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_OTHER: u8 = 4;
const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_VERIFY: u8 = 30;

#[derive(Parser)]
#[command(name = "cosat", version, about = "Satisfiability for coalgebraic modal logics")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Opts {
    /// Logic id: k, t, ck, ckid, ckmp, agency, presburger, presburger-t,
    /// presburger-half, prob, prob-stat:<rational>.
    #[arg(long, global = true, default_value = "k")]
    logic: String,
    /// One-step strategy: small, carrier or both (default: the engine's preferred).
    #[arg(long, global = true)]
    strategy: Option<String>,
    /// Cap on the integer search box of the counting engines.
    #[arg(long, global = true, value_name = "N")]
    max_ilp_box: Option<u64>,
    /// Print a JSON run report per query on stderr (TAP diagnostics in batch mode).
    #[arg(long, global = true)]
    stats: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability; prints SAT or UNSAT.
    Solve {
        formula: String,
        /// Write the witness of a satisfiable query as JSON.
        #[arg(long, value_name = "PATH")]
        model: Option<PathBuf>,
        /// Re-verify the witness with the independent model checker.
        #[arg(long)]
        verify: bool,
    },
    /// Decide validity; prints VALID or INVALID.
    Valid { formula: String },
    /// Decide every formula of a corpus file, printing TAP.
    Batch {
        file: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Re-verify every witness.
        #[arg(long)]
        verify: bool,
    },
    /// Check a formula at the root of a JSON witness.
    CheckModel { model: PathBuf, formula: String },
    /// Run the built-in axiom suites.
    Selftest,
}

/// What is recorded about one query.
struct RunReport {
    verdict: Verdict,
    strategy: Strategy,
    millis: f64,
    depth: usize,
    rank: usize,
    max_carrier: usize,
    max_structure: usize,
    verified: Option<bool>,
}

impl RunReport {
    fn verdict_text(&self) -> &'static str {
        if self.verdict.is_sat() {
            "SAT"
        } else {
            "UNSAT"
        }
    }

    fn to_json(&self) -> String {
        serde_json::json!({
            "verdict": self.verdict_text(),
            "strategy": self.strategy.to_string(),
            "time_ms": self.millis,
            "depth": self.depth,
            "rank": self.rank,
            "max_carrier": self.max_carrier,
            "max_structure": self.max_structure,
            "verified": self.verified,
        })
        .to_string()
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::LogicMismatch { .. } | Error::UnknownLogic(_) => EXIT_PARSE,
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        _ => EXIT_OTHER,
    }
}

fn config(opts: &Opts, logic: Logic) -> Result<LogicConfig, Error> {
    let mut cfg = LogicConfig::new(logic);
    if let Some(s) = &opts.strategy {
        cfg = cfg.with_strategy(s.parse()?);
    }
    if let Some(n) = opts.max_ilp_box {
        cfg.ilp = IlpOptions::default().with_max_box(n);
    }
    Ok(cfg)
}

fn run_query(f: &Formula, cfg: &LogicConfig, check: bool) -> Result<RunReport, Error> {
    let start = Instant::now();
    let (verdict, stats) = sat_with_stats(f, cfg)?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let strategy = cfg.effective_strategy();
    let verified = match (&verdict, check) {
        (Verdict::Sat(m), true) => Some(verify(m, f, strategy != Strategy::Carrier).passed()),
        _ => None,
    };
    Ok(RunReport {
        depth: verdict.model().map_or(0, |m| m.depth()),
        rank: rank(f),
        max_carrier: stats.max_carrier,
        max_structure: stats.max_structure,
        verdict,
        strategy,
        millis,
        verified,
    })
}

fn solve(opts: &Opts, text: &str, model: Option<PathBuf>, check: bool) -> Result<u8, Error> {
    let logic: Logic = opts.logic.parse()?;
    let cfg = config(opts, logic.clone())?;
    let f = parse(text, &logic)?;
    let report = run_query(&f, &cfg, check)?;
    println!("{}", report.verdict_text());
    if opts.stats {
        eprintln!("{}", report.to_json());
    }
    if let (Some(path), Verdict::Sat(m)) = (model, &report.verdict) {
        fs::write(&path, to_json(m)).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
    }
    match report.verified {
        Some(false) => {
            eprintln!("witness failed verification");
            return Ok(EXIT_VERIFY);
        }
        Some(true) => eprintln!("witness verified"),
        None => {}
    }
    Ok(if report.verdict.is_sat() { EXIT_SAT } else { EXIT_UNSAT })
}

fn valid(opts: &Opts, text: &str) -> Result<u8, Error> {
    let logic: Logic = opts.logic.parse()?;
    let cfg = config(opts, logic.clone())?;
    let f = parse(text, &logic)?;
    let report = run_query(&Formula::not(f), &cfg, false)?;
    if opts.stats {
        eprintln!("{}", report.to_json());
    }
    if report.verdict.is_sat() {
        println!("INVALID");
        Ok(EXIT_NO)
    } else {
        println!("VALID");
        Ok(EXIT_OK)
    }
}

/// Splits a corpus into its logic (from an `@logic:` header, if any) and
/// its formula lines.
fn read_corpus(text: &str, default: &str) -> (String, Vec<String>) {
    let mut logic = default.to_string();
    let mut formulas = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(id) = line.strip_prefix("@logic:") {
            if formulas.is_empty() {
                logic = id.trim().to_string();
                continue;
            }
        }
        formulas.push(line.to_string());
    }
    (logic, formulas)
}

fn batch(opts: &Opts, file: &PathBuf, jobs: usize, check: bool) -> Result<u8, Error> {
    let text = fs::read_to_string(file).map_err(|e| Error::Precondition(format!("{}: {e}", file.display())))?;
    let (logic, formulas) = read_corpus(&text, &opts.logic);
    let logic: Logic = logic.parse()?;
    let cfg = config(opts, logic.clone())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let results: Vec<Result<RunReport, Error>> = pool.install(|| {
        formulas
            .par_iter()
            .map(|line| run_query(&parse(line, &logic)?, &cfg, check))
            .collect()
    });
    println!("1..{}", results.len());
    let mut all_ok = true;
    for (i, r) in results.iter().enumerate() {
        let n = i + 1;
        match r {
            Ok(report) if report.verified != Some(false) => {
                println!("ok {n} - {}", report.verdict_text());
                if opts.stats {
                    println!("# {}", report.to_json());
                }
            }
            Ok(report) => {
                all_ok = false;
                println!("not ok {n} - {} witness failed verification", report.verdict_text());
            }
            Err(e) => {
                all_ok = false;
                println!("not ok {n} - error: {e}");
            }
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_NO })
}

fn check_model(path: &PathBuf, text: &str) -> Result<u8, Error> {
    let json = fs::read_to_string(path).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
    let m = from_json(&json)?;
    m.check_well_formed()?;
    let f = parse(text, &m.logic)?;
    if model_check(&m, m.root, &f)? {
        println!("HOLDS");
        Ok(EXIT_OK)
    } else {
        println!("FAILS");
        Ok(EXIT_NO)
    }
}

/// `(logic, formula, valid)`.
const AXIOMS: &[(&str, &str, bool)] = &[
    ("k", "[](p -> q) -> ([]p -> []q)", true),
    ("t", "[]p -> p", true),
    ("k", "[]p -> p", false),
    ("ckid", "(p => p)", true),
    ("ck", "(p => p)", false),
    ("ckmp", "(p => q) -> (p -> q)", true),
    ("ck", "(p => q) -> (p -> q)", false),
    ("agency", "~C true", true),
    ("agency", "~C false", true),
    ("agency", "(E p & E q) -> E (p & q)", true),
    ("agency", "E p -> p", true),
    ("agency", "E p -> C p", true),
    ("prob", "L{1*(true) >= 1}", true),
    ("prob", "~(L{1*(p) >= 1/2} & L{1*(~p) >= 2/3})", true),
    ("presburger-t", "p -> <0>p", true),
    ("presburger", "p -> <0>p", false),
    ("presburger", "[1]p -> [2]p", true),
];

fn selftest(opts: &Opts) -> Result<u8, Error> {
    println!("1..{}", AXIOMS.len());
    let mut all_ok = true;
    for (i, (id, text, expected)) in AXIOMS.iter().enumerate() {
        let logic: Logic = id.parse()?;
        let cfg = config(opts, logic.clone())?;
        let got = cosat::valid(&parse(text, &logic)?, &cfg)?;
        let word = if got { "VALID" } else { "INVALID" };
        if got == *expected {
            println!("ok {} - {word} in {id}: {text}", i + 1);
        } else {
            all_ok = false;
            println!("not ok {} - {word} in {id}: {text}", i + 1);
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_NO })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { formula, model, verify } => solve(&cli.opts, formula, model.clone(), *verify),
        Command::Valid { formula } => valid(&cli.opts, formula),
        Command::Batch { file, jobs, verify } => batch(&cli.opts, file, *jobs, *verify),
        Command::CheckModel { model, formula } => check_model(model, formula),
        Command::Selftest => selftest(&cli.opts),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
