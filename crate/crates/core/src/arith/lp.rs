//! Fourier–Motzkin elimination with strictness tracking.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{expand, LinSystem, Rat, Relation};
use crate::error::{Error, Result};

/// `sum coeffs[i] * x_i >= rhs`, or `>` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Row {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub strict: bool,
}

impl Row {
    pub fn ge(coeffs: Vec<Rat>, rhs: Rat, strict: bool) -> Row {
        Row {
            coeffs,
            rhs,
            strict,
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// For a row without variables: whether `0 >= rhs` (or `0 > rhs`) holds.
    fn trivially_true(&self) -> bool {
        if self.strict {
            self.rhs.is_negative()
        } else {
            !self.rhs.is_positive()
        }
    }
}

/// A set of rows with normalized, deduplicated coefficient vectors, or the
/// knowledge that some constant row is false.
pub(crate) fn normalize(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: BTreeMap<Vec<Rat>, (Rat, bool)> = BTreeMap::new();
    for mut row in rows {
        if row.is_constant() {
            if row.trivially_true() {
                continue;
            }
            return None;
        }
        let lead = row.coeffs.iter().find(|c| !c.is_zero()).unwrap().abs();
        if !lead.is_one() {
            for c in &mut row.coeffs {
                *c /= &lead;
            }
            row.rhs /= &lead;
        }
        match best.get_mut(&row.coeffs) {
            Some(slot) => {
                if row.rhs > slot.0 || (row.rhs == slot.0 && row.strict) {
                    *slot = (row.rhs, row.strict);
                }
            }
            None => {
                best.insert(row.coeffs, (row.rhs, row.strict));
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(coeffs, (rhs, strict))| Row {
                coeffs,
                rhs,
                strict,
            })
            .collect(),
    )
}

/// Eliminates `v`, returning rows free of it, or `None` on a contradiction.
pub(crate) fn eliminate(rows: &[Row], v: usize) -> Option<Vec<Row>> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut out = Vec::new();
    for row in rows {
        let c = &row.coeffs[v];
        if c.is_positive() {
            lower.push(row);
        } else if c.is_negative() {
            upper.push(row);
        } else {
            out.push(row.clone());
        }
    }
    for l in &lower {
        let sl = Rat::one() / &l.coeffs[v];
        for u in &upper {
            let su = Rat::one() / -&u.coeffs[v];
            let coeffs = l
                .coeffs
                .iter()
                .zip(&u.coeffs)
                .map(|(a, b)| a * &sl + b * &su)
                .collect();
            out.push(Row {
                coeffs,
                rhs: &l.rhs * &sl + &u.rhs * &su,
                strict: l.strict || u.strict,
            });
        }
    }
    normalize(out)
}

/// A bound on a single variable: value and strictness.
pub(crate) type Bound = Option<(Rat, bool)>;

/// Tightest lower and upper bound on `x_v` implied by `rows` when every other
/// variable takes its value from `point`.
pub(crate) fn bounds(rows: &[Row], v: usize, point: &[Rat]) -> (Bound, Bound) {
    let mut lo: Bound = None;
    let mut hi: Bound = None;
    for row in rows {
        let c = &row.coeffs[v];
        if c.is_zero() {
            continue;
        }
        let rest: Rat = row
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(j, a)| j != v && !a.is_zero())
            .map(|(j, a)| a * &point[j])
            .fold(Rat::zero(), |acc, t| acc + t);
        let value = (&row.rhs - rest) / c;
        if c.is_positive() {
            let tighter = match &lo {
                None => true,
                Some((b, s)) => value > *b || (value == *b && row.strict && !s),
            };
            if tighter {
                lo = Some((value, row.strict));
            }
        } else {
            let tighter = match &hi {
                None => true,
                Some((b, s)) => value < *b || (value == *b && row.strict && !s),
            };
            if tighter {
                hi = Some((value, row.strict));
            }
        }
    }
    (lo, hi)
}

/// Deterministic choice inside a nonempty interval: the lower end when it is
/// closed, otherwise the midpoint, otherwise one past the lower end.
fn pick(lo: Bound, hi: Bound) -> Rat {
    match (lo, hi) {
        (Some((l, false)), _) => l,
        (Some((l, true)), Some((h, _))) => (l + h) / Rat::from_integer(2.into()),
        (Some((l, true)), None) => l + Rat::one(),
        (None, Some((h, false))) => h.min(Rat::zero()),
        (None, Some((h, true))) => h.min(Rat::zero()) - Rat::one(),
        (None, None) => Rat::zero(),
    }
}

/// A substitution `x_v = (rhs - sum coeffs[j] x_j) / coeffs[v]`.
struct Subst {
    v: usize,
    coeffs: Vec<Rat>,
    rhs: Rat,
}

fn substitute(coeffs: &mut [Rat], rhs: &mut Rat, s: &Subst) {
    let a = coeffs[s.v].clone();
    if a.is_zero() {
        return;
    }
    let factor = &a / &s.coeffs[s.v];
    for (j, c) in coeffs.iter_mut().enumerate() {
        if j != s.v {
            *c -= &factor * &s.coeffs[j];
        }
    }
    coeffs[s.v] = Rat::zero();
    *rhs -= &factor * &s.rhs;
}

/// Solves a rational system with no congruences; variables are nonnegative.
pub(crate) fn solve_rational(n: usize, eqs: Vec<(Vec<Rat>, Rat)>, rows: Vec<Row>) -> Option<Vec<Rat>> {
    let mut rows = rows;
    for v in 0..n {
        let mut unit = vec![Rat::zero(); n];
        unit[v] = Rat::one();
        rows.push(Row::ge(unit, Rat::zero(), false));
    }

    let mut eqs = eqs;
    let mut substs: Vec<Subst> = Vec::new();
    for i in 0..eqs.len() {
        let (coeffs, rhs) = eqs[i].clone();
        let Some(v) = coeffs.iter().position(|c| !c.is_zero()) else {
            if rhs.is_zero() {
                continue;
            }
            return None;
        };
        let s = Subst { v, coeffs, rhs };
        for (c, r) in eqs.iter_mut().skip(i + 1) {
            substitute(c, r, &s);
        }
        for row in rows.iter_mut() {
            substitute(&mut row.coeffs, &mut row.rhs, &s);
        }
        substs.push(s);
    }

    let eliminated: Vec<usize> = substs.iter().map(|s| s.v).collect();
    let order: Vec<usize> = (0..n).filter(|v| !eliminated.contains(v)).collect();

    let mut stages = Vec::with_capacity(order.len() + 1);
    stages.push(normalize(rows)?);
    for &v in &order {
        let next = eliminate(stages.last().unwrap(), v)?;
        stages.push(next);
    }

    let mut point = vec![Rat::zero(); n];
    for (k, &v) in order.iter().enumerate().rev() {
        let (lo, hi) = bounds(&stages[k], v, &point);
        point[v] = pick(lo, hi);
    }
    for s in substs.iter().rev() {
        let rest: Rat = s
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != s.v)
            .map(|(j, a)| a * &point[j])
            .fold(Rat::zero(), |acc, t| acc + t);
        point[s.v] = (&s.rhs - rest) / &s.coeffs[s.v];
    }
    Some(point)
}

/// Feasibility of a system over the nonnegative rationals.
///
/// Returns a satisfying point, or `None` when the system is infeasible.
/// Equalities are substituted away in declaration order, the remaining
/// variables are eliminated in declaration order, and the witness is
/// recovered by back-substitution.
pub fn lp_feasible(sys: &LinSystem) -> Result<Option<Vec<Rat>>> {
    sys.check_vars()?;
    if sys.has_congruence() {
        return Err(Error::Precondition(
            "congruences are only allowed in integer systems".into(),
        ));
    }
    let (reduced, firsts) = sys.merge_columns();
    let n = reduced.vars;
    let dense = |c: &super::LinConstraint, sign: i64| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        for (&j, a) in &c.coeffs {
            v[j] = a * Rat::from_integer(sign.into());
        }
        v
    };
    let mut eqs = Vec::new();
    let mut rows = Vec::new();
    for c in &reduced.constraints {
        match c.rel {
            Relation::Eq => eqs.push((dense(c, 1), c.rhs.clone())),
            Relation::Ge => rows.push(Row::ge(dense(c, 1), c.rhs.clone(), false)),
            Relation::Gt => rows.push(Row::ge(dense(c, 1), c.rhs.clone(), true)),
            Relation::Le => rows.push(Row::ge(dense(c, -1), -&c.rhs, false)),
            Relation::Lt => rows.push(Row::ge(dense(c, -1), -&c.rhs, true)),
            Relation::Mod { .. } => unreachable!(),
        }
    }
    let Some(point) = solve_rational(n, eqs, rows) else {
        return Ok(None);
    };
    let point = expand(point, &firsts, sys.vars);
    if !sys.satisfied_by(&point) {
        return Err(Error::Internal(
            "Fourier-Motzkin witness violates its system".into(),
        ));
    }
    Ok(Some(point))
}
