//! Seeded random formulas and one-step clause spaces for cross-checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, rat, Rat};
use crate::formula::{analyze, rank, CountAtom, CountRel, Formula, LikelihoodAtom, ModalOp};
use crate::logic::{Family, Logic};
use crate::onestep::{Carrier, Extension, Literal, OneStepClause, PointClass};

const VARS: [&str; 3] = ["p", "q", "r"];

fn leaf(rng: &mut ChaCha8Rng) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        _ => Formula::var(VARS.choose(rng).unwrap()),
    }
}

fn modal(rng: &mut ChaCha8Rng, family: Family, depth: usize) -> Formula {
    let sub = |rng: &mut ChaCha8Rng| gen(rng, family, depth - 1);
    match family {
        Family::Kripke => {
            let a = sub(rng);
            if rng.gen_bool(0.5) {
                Formula::boxed(a)
            } else {
                Formula::not(Formula::boxed(Formula::not(a)))
            }
        }
        Family::Conditional => {
            let (a, b) = (sub(rng), sub(rng));
            Formula::modal(ModalOp::Cond, vec![a, b])
        }
        Family::Agency => {
            let op = if rng.gen_bool(0.5) { ModalOp::Effect } else { ModalOp::Capable };
            Formula::modal(op, vec![sub(rng)])
        }
        Family::Counting => {
            let a = sub(rng);
            let atom = match rng.gen_range(0..4) {
                0 => CountAtom { coeffs: vec![1], rel: CountRel::Gt, bound: rng.gen_range(0..3) },
                1 => CountAtom { coeffs: vec![1], rel: CountRel::Lt, bound: rng.gen_range(1..3) },
                2 => {
                    let modulus = rng.gen_range(2..4);
                    let residue = rng.gen_range(0..modulus);
                    CountAtom { coeffs: vec![1], rel: CountRel::Mod { modulus, residue }, bound: 0 }
                }
                _ => {
                    let b = sub(rng);
                    return Formula::modal(
                        ModalOp::Count(CountAtom { coeffs: vec![1, -1], rel: CountRel::Gt, bound: 0 }),
                        vec![a, b],
                    );
                }
            };
            Formula::modal(ModalOp::Count(atom), vec![a])
        }
        Family::Probability => {
            let a = sub(rng);
            if rng.gen_bool(0.3) {
                let b = sub(rng);
                let atom = LikelihoodAtom { coeffs: vec![int(1), int(-1)], bound: int(0) };
                return Formula::modal(ModalOp::Likelihood(atom), vec![a, b]);
            }
            let bound = [int(0), rat(1, 3), rat(1, 2), rat(2, 3), int(1)].choose(rng).unwrap().clone();
            let atom = LikelihoodAtom { coeffs: vec![int(1)], bound };
            Formula::modal(ModalOp::Likelihood(atom), vec![a])
        }
    }
}

fn gen(rng: &mut ChaCha8Rng, family: Family, depth: usize) -> Formula {
    let roll = rng.gen_range(0..10);
    if depth > 0 && roll < 4 {
        return modal(rng, family, depth);
    }
    match roll {
        4 => Formula::not(gen(rng, family, depth)),
        5 | 6 => Formula::and(gen(rng, family, depth), gen(rng, family, depth)),
        7 => Formula::or(gen(rng, family, depth), gen(rng, family, depth)),
        8 => Formula::implies(gen(rng, family, depth), gen(rng, family, depth)),
        _ => leaf(rng),
    }
}

/// `count` distinct formulas of `logic` with rank at most `max_rank` and at
/// most `max_atoms` distinct atoms; each rank is represented when possible.
pub fn random_formulas(
    logic: &Logic,
    count: usize,
    max_rank: usize,
    max_atoms: usize,
    seed: u64,
) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Formula> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < count * 10_000, "generator cannot meet the size limits");
        let target = out.len() % (max_rank + 1);
        let f = gen(&mut rng, logic.family(), max_rank.max(1));
        if rank(&f) > max_rank || (rank(&f) != target && !attempts.is_multiple_of(4)) {
            continue;
        }
        if analyze(&f).atoms.len() > max_atoms || out.contains(&f) {
            continue;
        }
        out.push(f);
    }
    out
}

/// A literal over sets of point classes of the two-letter alphabet, before
/// extensions are taken on a concrete carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractLiteral {
    pub positive: bool,
    pub op: ModalOp,
    /// Each argument as a bitmask over the four classes.
    pub args: Vec<u8>,
}

fn literal_pool(family: Family) -> Vec<AbstractLiteral> {
    let sets = 0u8..16;
    let mut atoms: Vec<(ModalOp, Vec<u8>)> = Vec::new();
    match family {
        Family::Kripke => atoms.extend(sets.map(|s| (ModalOp::Box, vec![s]))),
        Family::Conditional => {
            for p in 0u8..16 {
                atoms.extend((0u8..16).map(|q| (ModalOp::Cond, vec![p, q])));
            }
        }
        Family::Agency => {
            for s in sets {
                atoms.push((ModalOp::Effect, vec![s]));
                atoms.push((ModalOp::Capable, vec![s]));
            }
        }
        Family::Counting => {
            let unary = [
                (CountRel::Gt, 0),
                (CountRel::Gt, 1),
                (CountRel::Lt, 2),
                (CountRel::Eq, 1),
                (CountRel::Eq, 2),
                (CountRel::Mod { modulus: 2, residue: 0 }, 0),
                (CountRel::Mod { modulus: 2, residue: 1 }, 0),
                (CountRel::Mod { modulus: 3, residue: 1 }, 0),
            ];
            for s in sets {
                for (rel, bound) in unary {
                    atoms.push((ModalOp::Count(CountAtom { coeffs: vec![1], rel, bound }), vec![s]));
                }
                for t in 0u8..16 {
                    let atom = CountAtom { coeffs: vec![1, -1], rel: CountRel::Gt, bound: 0 };
                    atoms.push((ModalOp::Count(atom), vec![s, t]));
                }
            }
        }
        Family::Probability => {
            let unary: [(Rat, Rat); 5] = [
                (int(1), rat(1, 3)),
                (int(1), rat(1, 2)),
                (int(1), rat(2, 3)),
                (int(1), int(1)),
                (int(-1), rat(-1, 2)),
            ];
            for s in sets {
                for (a, b) in &unary {
                    let atom = LikelihoodAtom { coeffs: vec![a.clone()], bound: b.clone() };
                    atoms.push((ModalOp::Likelihood(atom), vec![s]));
                }
                for t in 0u8..16 {
                    let atom = LikelihoodAtom { coeffs: vec![int(1), int(-2)], bound: int(0) };
                    atoms.push((ModalOp::Likelihood(atom), vec![s, t]));
                }
            }
        }
    }
    atoms
        .into_iter()
        .flat_map(|(op, args)| {
            [true, false].map(|positive| AbstractLiteral {
                positive,
                op: op.clone(),
                args: args.clone(),
            })
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Index combinations of size `k` from `0..n`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Clauses of up to `max_literals` distinct literals over the two-letter
/// alphabet. Each clause size is enumerated exhaustively when it has at
/// most `cap` clauses and sampled (`cap` clauses, seeded) otherwise.
pub fn clause_space(logic: &Logic, max_literals: usize, cap: usize, seed: u64) -> Vec<Vec<AbstractLiteral>> {
    let pool = literal_pool(logic.family());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![vec![]];
    for k in 1..=max_literals {
        let picks: Vec<Vec<usize>> = if binomial(pool.len(), k) <= cap {
            combinations(pool.len(), k)
        } else {
            (0..cap)
                .map(|_| {
                    let mut idx = rand::seq::index::sample(&mut rng, pool.len(), k).into_vec();
                    idx.sort_unstable();
                    idx
                })
                .collect()
        };
        out.extend(picks.into_iter().map(|idx| idx.into_iter().map(|i| pool[i].clone()).collect()));
    }
    out
}

/// The carriers a clause is tried on: all four classes of `a, b`, and for
/// copointed logics each choice of class for the current state.
pub fn carriers(logic: &Logic) -> Vec<Carrier> {
    let base = Carrier::new(
        vec![Formula::var("a"), Formula::var("b")],
        (0..4).map(PointClass).collect(),
    );
    if logic.is_copointed() {
        (0..4).map(|c| base.clone().with_designated(PointClass(c))).collect()
    } else {
        vec![base]
    }
}

/// Takes the extensions of an abstract clause on `carrier`.
pub fn materialize(literals: &[AbstractLiteral], carrier: &Carrier) -> OneStepClause {
    let ext = |mask: u8| {
        Extension::from_indices(
            carrier.len(),
            (0..carrier.len()).filter(|&j| mask >> carrier.points[j].0 & 1 == 1),
        )
    };
    OneStepClause::new(
        literals
            .iter()
            .map(|l| Literal {
                positive: l.positive,
                op: l.op.clone(),
                args: l.args.iter().map(|&m| ext(m)).collect(),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_respect_limits_and_are_reproducible() {
        let a = random_formulas(&Logic::K, 50, 3, 6, 7);
        assert_eq!(a, random_formulas(&Logic::K, 50, 3, 6, 7));
        assert!(a.iter().all(|f| rank(f) <= 3 && analyze(f).atoms.len() <= 6));
        assert!(a.iter().any(|f| rank(f) == 3));
    }

    #[test]
    fn small_spaces_are_exhaustive() {
        let space = clause_space(&Logic::K, 3, 20_000, 0);
        assert_eq!(space.len(), 1 + 32 + binomial(32, 2) + binomial(32, 3));
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(4, 2)[0], vec![0, 1]);
        assert_eq!(combinations(4, 2)[5], vec![2, 3]);
    }

    #[test]
    fn designated_point_follows_its_class() {
        let c = &carriers(&Logic::T)[2];
        let cl = materialize(
            &[AbstractLiteral { positive: true, op: ModalOp::Box, args: vec![0b0100] }],
            c,
        );
        assert_eq!(cl.literals[0].args[0].iter().collect::<Vec<_>>(), vec![2, 4]);
    }
}
