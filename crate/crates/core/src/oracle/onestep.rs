//! Exhaustive search for one-step models over a fixed carrier.

use super::SearchBounds;
use crate::arith::{rat, Rat};
use crate::error::Result;
use crate::logics::agency::Three;
use crate::onestep::{Carrier, Engine, Extension, OneStepClause, OneStepModel, Structure};

/// The first structure over all of `carrier` that passes the frame
/// condition and satisfies every literal, trying in turn: all successor
/// sets; all values on the mentioned antecedents; all values on the
/// mentioned agency arguments; weights up to `bounds.max_weight`; and
/// distributions with denominators up to `bounds.max_denominator`.
pub fn onestep_brute(
    engine: &dyn Engine,
    cl: &OneStepClause,
    carrier: &Carrier,
    bounds: &SearchBounds,
) -> Result<Option<OneStepModel>> {
    let n = carrier.len();
    let frame = carrier.frame();
    let satisfies = |s: &Structure| {
        engine.check_structure(s, &frame)
            && cl
                .literals
                .iter()
                .all(|l| engine.eval_atom(s, &frame, &l.op, &l.args) == l.positive)
    };
    let found = candidates(engine, cl, n, bounds).find(|s| satisfies(s));
    Ok(found.map(|s| OneStepModel::over(carrier, s)))
}

fn subsets(n: usize) -> impl Iterator<Item = Extension> + Clone {
    (0u64..1 << n).map(move |mask| Extension::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
}

/// Distinct first arguments of the literals, in order.
fn mentioned(cl: &OneStepClause) -> Vec<Extension> {
    let mut out: Vec<Extension> = Vec::new();
    for l in &cl.literals {
        if !out.contains(&l.args[0]) {
            out.push(l.args[0].clone());
        }
    }
    out
}

/// All vectors of length `len` over `0..radix`, first coordinate fastest.
fn tuples(len: usize, radix: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = radix.checked_pow(len as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        (0..len)
            .map(|_| {
                let d = code % radix;
                code /= radix;
                d
            })
            .collect()
    })
}

fn candidates<'a>(
    engine: &dyn Engine,
    cl: &'a OneStepClause,
    n: usize,
    bounds: &SearchBounds,
) -> Box<dyn Iterator<Item = Structure> + 'a> {
    let (probe, _) = engine.leaf();
    match probe {
        Structure::Kripke { .. } => Box::new(subsets(n).map(|succ| Structure::Kripke { succ })),
        Structure::Cond { .. } => {
            let ants = mentioned(cl);
            let all: Vec<Extension> = subsets(n).collect();
            Box::new(tuples(ants.len(), 1 << n).map(move |choice| Structure::Cond {
                entries: ants
                    .iter()
                    .zip(choice)
                    .map(|(a, c)| (a.clone(), all[c as usize].clone()))
                    .collect(),
            }))
        }
        Structure::Agency { .. } => {
            let args = mentioned(cl);
            Box::new(tuples(args.len(), 3).map(move |choice| Structure::Agency {
                entries: args
                    .iter()
                    .zip(choice)
                    .filter(|(_, c)| *c > 0)
                    .map(|(a, c)| (a.clone(), Three::ALL[c as usize]))
                    .collect(),
            }))
        }
        Structure::Count { .. } => Box::new(
            tuples(n, bounds.max_weight + 1).map(|weights| Structure::Count { weights }),
        ),
        Structure::Prob { .. } => {
            let max_den = bounds.max_denominator as i64;
            Box::new((1..=max_den).flat_map(move |den| {
                compositions(n, den).map(move |parts| Structure::Prob {
                    mass: parts.iter().map(|&k| rat(k, den)).collect::<Vec<Rat>>(),
                })
            }))
        }
    }
}

/// All ways to write `total` as an ordered sum of `parts` naturals.
fn compositions(parts: usize, total: i64) -> Box<dyn Iterator<Item = Vec<i64>>> {
    if parts == 0 {
        return Box::new((total == 0).then(Vec::new).into_iter());
    }
    if parts == 1 {
        return Box::new(std::iter::once(vec![total]));
    }
    Box::new((0..=total).flat_map(move |first| {
        compositions(parts - 1, total - first).map(move |mut rest| {
            rest.insert(0, first);
            rest
        })
    }))
}
