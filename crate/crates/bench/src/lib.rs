//! Shared inputs for the benchmarks.

use cosat::arith::{int, Domain, LinConstraint, LinSystem, Relation};
use cosat::oracle::corpus::random_formulas;
use cosat::{parse, Formula, Logic};

/// A fixed random corpus for `logic`.
pub fn corpus(logic: &Logic, count: usize, max_rank: usize) -> Vec<Formula> {
    random_formulas(logic, count, max_rank, 5, 7)
}

/// `[]^depth p & <>^depth ~p`-style alternation, satisfiable in K.
pub fn nested_diamonds(depth: usize) -> Formula {
    let mut text = String::from("p");
    for i in 0..depth {
        text = if i % 2 == 0 {
            format!("<>({text} & q{i})")
        } else {
            format!("[]({text} | ~q{i})")
        };
    }
    parse(&text, &Logic::K).unwrap()
}

/// `n` variables with pairwise gaps `x_{i+1} - x_i > 1`, total bounded by
/// `n * n`, and a parity constraint on the total.
pub fn chain_system(n: usize, domain: Domain) -> LinSystem {
    let mut sys = LinSystem::new(n, domain);
    for i in 0..n.saturating_sub(1) {
        sys.push(LinConstraint::new([(i + 1, int(1)), (i, int(-1))], Relation::Gt, int(1)));
    }
    sys.push(LinConstraint::new((0..n).map(|i| (i, int(1))), Relation::Le, int((n * n) as i64)));
    if domain == Domain::NonNegInteger {
        sys.push(LinConstraint::new(
            (0..n).map(|i| (i, int(1))),
            Relation::Mod { modulus: 2 },
            int(1),
        ));
    }
    sys
}
