//! Support minimization for rational solutions.

use num_traits::Zero;

use super::{int, lp_feasible, LinConstraint, LinSystem, Rat, Relation};
use crate::error::{Error, Result};

/// Returns a solution of `sys` with small support, starting from `p`.
///
/// Coordinates are visited in order; each nonzero one is pinned to zero if
/// the system stays feasible together with every coordinate pinned so far.
/// At the end no further coordinate can be zeroed, so the columns of the
/// support are linearly independent when restricted to the constraint rows
/// (a null-space direction would drive one of them to zero while keeping
/// every row value fixed). Hence the support never exceeds the number of
/// constraints.
pub fn minimize_support(sys: &LinSystem, p: &[Rat]) -> Result<Vec<Rat>> {
    if !sys.satisfied_by(p) {
        return Err(Error::Precondition(
            "starting point does not satisfy the system".into(),
        ));
    }
    let mut current = p.to_vec();
    let mut pinned = sys.clone();
    for v in 0..sys.vars {
        if current[v].is_zero() {
            pinned.push(LinConstraint::new([(v, int(1))], Relation::Eq, int(0)));
            continue;
        }
        let trial = pinned
            .clone()
            .with(LinConstraint::new([(v, int(1))], Relation::Eq, int(0)));
        if let Some(q) = lp_feasible(&trial)? {
            current = q;
            pinned = trial;
        }
    }
    Ok(current)
}
