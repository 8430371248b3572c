//! Nonnegative-integer feasibility with strict relations and congruences.
//!
//! Congruences are removed up front by enumerating residues of the variables
//! they mention modulo the lcm of all moduli. The remaining system is
//! searched depth-first: at each node the rational relaxation is projected
//! onto every unassigned variable, the node fails if some integer range is
//! empty, and the variable with the narrowest range is scanned from its
//! smallest value up.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lp::{bounds, eliminate, normalize, Row};
use super::{expand, LinSystem, Rat, Relation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpOptions {
    /// Largest admissible coordinate bound of the search box.
    pub max_box: BigInt,
    /// Search nodes visited before giving up.
    pub max_nodes: u64,
    /// Residue vectors enumerated for congruence elimination.
    pub max_residue_vectors: u64,
}

impl IlpOptions {
    pub fn with_max_box(mut self, max_box: u64) -> Self {
        self.max_box = BigInt::from(max_box);
        self
    }
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions {
            max_box: BigInt::from(10u64.pow(12)),
            max_nodes: 2_000_000,
            max_residue_vectors: 1_000_000,
        }
    }
}

pub fn ilp_feasible(sys: &LinSystem) -> Result<Option<Vec<Rat>>> {
    ilp_feasible_with(sys, &IlpOptions::default())
}

/// Integer rows: `sum coeffs * y >= rhs`.
#[derive(Debug, Clone)]
struct IntRow {
    coeffs: Vec<BigInt>,
    rhs: BigInt,
}

#[derive(Debug, Clone)]
struct Congruence {
    coeffs: Vec<BigInt>,
    residue: BigInt,
    modulus: BigInt,
}

#[derive(Debug, Clone)]
struct IntSystem {
    n: usize,
    ineqs: Vec<IntRow>,
    eqs: Vec<IntRow>,
    upper: Vec<BigInt>,
}

/// The coordinate bound `((m+n)(1+max|a|+max|b|))^2 * lcm(moduli)`.
fn box_bound(n: usize, rows: &[(&Vec<BigInt>, &BigInt)], lcm: &BigInt) -> BigInt {
    let mut maxc = BigInt::zero();
    let mut maxr = BigInt::zero();
    for (coeffs, rhs) in rows {
        for c in coeffs.iter() {
            maxc = maxc.max(c.abs());
        }
        maxr = maxr.max(rhs.abs());
    }
    let base = BigInt::from(rows.len() + n) * (BigInt::one() + maxc + maxr);
    &base * &base * lcm
}

/// Feasibility over the nonnegative integers.
///
/// Returns a solution, `None` when no solution exists inside the search box,
/// or [`Error::ResourceLimit`] when the box, the residue enumeration or the
/// search tree exceeds the configured caps.
pub fn ilp_feasible_with(sys: &LinSystem, opts: &IlpOptions) -> Result<Option<Vec<Rat>>> {
    sys.check_vars()?;
    let (reduced, firsts) = sys.merge_columns();
    let n = reduced.vars;

    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let mut congruences = Vec::new();
    for c in &reduced.constraints {
        let den = c
            .coeffs
            .values()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let mut coeffs = vec![BigInt::zero(); n];
        for (&j, a) in &c.coeffs {
            coeffs[j] = (a * Rat::from_integer(den.clone())).to_integer();
        }
        let rhs = &c.rhs * Rat::from_integer(den.clone());
        let neg = |v: &[BigInt]| v.iter().map(|x| -x).collect::<Vec<_>>();
        match c.rel {
            Relation::Ge => ineqs.push(IntRow { coeffs, rhs: rhs.ceil().to_integer() }),
            Relation::Gt => ineqs.push(IntRow {
                coeffs,
                rhs: rhs.floor().to_integer() + BigInt::one(),
            }),
            Relation::Le => ineqs.push(IntRow {
                coeffs: neg(&coeffs),
                rhs: -rhs.floor().to_integer(),
            }),
            Relation::Lt => ineqs.push(IntRow {
                coeffs: neg(&coeffs),
                rhs: BigInt::one() - rhs.ceil().to_integer(),
            }),
            Relation::Eq => {
                if !rhs.is_integer() {
                    return Ok(None);
                }
                eqs.push(IntRow {
                    coeffs,
                    rhs: rhs.to_integer(),
                });
            }
            Relation::Mod { modulus } => {
                if !den.is_one() || !c.rhs.is_integer() {
                    return Err(Error::Precondition(
                        "congruences need integer coefficients and residue".into(),
                    ));
                }
                let modulus = BigInt::from(modulus);
                congruences.push(Congruence {
                    coeffs,
                    residue: c.rhs.to_integer().mod_floor(&modulus),
                    modulus,
                });
            }
        }
    }

    let lcm = congruences
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.modulus));
    let all_rows: Vec<(&Vec<BigInt>, &BigInt)> = ineqs
        .iter()
        .chain(&eqs)
        .map(|r| (&r.coeffs, &r.rhs))
        .chain(congruences.iter().map(|c| (&c.coeffs, &c.residue)))
        .collect();
    let bound = box_bound(n, &all_rows, &lcm);
    if bound > opts.max_box {
        return Err(Error::ResourceLimit(format!(
            "integer search box {bound} exceeds the cap {}",
            opts.max_box
        )));
    }

    let mut search = Search {
        nodes: 0,
        max_nodes: opts.max_nodes,
    };
    let solution = if congruences.is_empty() {
        let sys = IntSystem {
            n,
            ineqs,
            eqs,
            upper: vec![bound.clone(); n],
        };
        search.solve(&sys)?
    } else {
        solve_with_congruences(n, ineqs, eqs, &congruences, &lcm, &bound, opts, &mut search)?
    };
    let Some(solution) = solution else {
        return Ok(None);
    };
    let point = expand(
        solution.into_iter().map(Rat::from_integer).collect(),
        &firsts,
        sys.vars,
    );
    if !sys.satisfied_by(&point) {
        return Err(Error::Internal(
            "integer witness violates its system".into(),
        ));
    }
    Ok(Some(point))
}

/// Writes `x_j = L*y_j + s_j` for every variable in a congruence and each
/// residue vector `s` that satisfies all congruences, then solves the
/// congruence-free system in `y`.
#[allow(clippy::too_many_arguments)]
fn solve_with_congruences(
    n: usize,
    ineqs: Vec<IntRow>,
    eqs: Vec<IntRow>,
    congruences: &[Congruence],
    lcm: &BigInt,
    bound: &BigInt,
    opts: &IlpOptions,
    search: &mut Search,
) -> Result<Option<Vec<BigInt>>> {
    let involved: Vec<usize> = (0..n)
        .filter(|&j| congruences.iter().any(|c| !c.coeffs[j].is_zero()))
        .collect();
    let vectors = lcm
        .to_u64()
        .and_then(|l| l.checked_pow(involved.len() as u32));
    match vectors {
        Some(v) if v <= opts.max_residue_vectors => {}
        _ => {
            return Err(Error::ResourceLimit(format!(
                "{} residue vectors modulo {lcm} exceed the cap {}",
                involved.len(),
                opts.max_residue_vectors
            )))
        }
    }

    let shift = |rows: &[IntRow], s: &[BigInt]| -> Vec<IntRow> {
        rows.iter()
            .map(|r| {
                let mut coeffs = r.coeffs.clone();
                let mut rhs = r.rhs.clone();
                for (&j, sj) in involved.iter().zip(s) {
                    rhs -= &r.coeffs[j] * sj;
                    coeffs[j] = &r.coeffs[j] * lcm;
                }
                IntRow { coeffs, rhs }
            })
            .collect()
    };

    let mut s = vec![BigInt::zero(); involved.len()];
    loop {
        let ok = congruences.iter().all(|c| {
            let lhs: BigInt = involved
                .iter()
                .zip(&s)
                .map(|(&j, sj)| &c.coeffs[j] * sj)
                .sum();
            lhs.mod_floor(&c.modulus) == c.residue
        });
        if ok {
            let mut upper = vec![bound.clone(); n];
            for (&j, sj) in involved.iter().zip(&s) {
                upper[j] = (bound - sj).div_floor(lcm);
            }
            let sub = IntSystem {
                n,
                ineqs: shift(&ineqs, &s),
                eqs: shift(&eqs, &s),
                upper,
            };
            if let Some(mut y) = search.solve(&sub)? {
                for (&j, sj) in involved.iter().zip(&s) {
                    y[j] = &y[j] * lcm + sj;
                }
                return Ok(Some(y));
            }
        }
        // Next residue vector in lexicographic order.
        let mut k = s.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            s[k] += 1;
            if &s[k] < lcm {
                break;
            }
            s[k] = BigInt::zero();
        }
    }
}

struct Search {
    nodes: u64,
    max_nodes: u64,
}

impl Search {
    fn solve(&mut self, sys: &IntSystem) -> Result<Option<Vec<BigInt>>> {
        let Some(sys) = with_implicit_equalities(sys) else {
            return Ok(None);
        };
        let mut assigned = vec![None; sys.n];
        if self.dfs(&sys, &mut assigned)? {
            Ok(Some(assigned.into_iter().map(Option::unwrap).collect()))
        } else {
            Ok(None)
        }
    }

    /// First-fail search: every unassigned variable must keep a nonempty
    /// integer range, and the one with the narrowest range is branched on.
    fn dfs(&mut self, sys: &IntSystem, assigned: &mut [Option<BigInt>]) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::ResourceLimit(format!(
                "integer search exceeded {} nodes",
                self.max_nodes
            )));
        }
        let free: Vec<usize> = (0..sys.n).filter(|&j| assigned[j].is_none()).collect();
        if free.is_empty() {
            let values: Vec<BigInt> = assigned.iter().map(|v| v.clone().unwrap()).collect();
            return Ok(sys.ineqs.iter().all(|r| dot(&r.coeffs, &values) >= r.rhs)
                && sys.eqs.iter().all(|r| dot(&r.coeffs, &values) == r.rhs));
        }
        if !gcd_consistent(sys, assigned) {
            return Ok(false);
        }
        let Some(rows) = restricted_rows(sys, assigned, &free) else {
            return Ok(false);
        };
        let mut best: Option<(usize, BigInt, BigInt)> = None;
        for k in 0..free.len() {
            let Some((lo, hi)) = range(&rows, k, free.len(), &sys.upper[free[k]]) else {
                return Ok(false);
            };
            if best.as_ref().is_none_or(|(_, l, h)| &hi - &lo < h - l) {
                best = Some((k, lo, hi));
            }
        }
        let (k, mut value, hi) = best.unwrap();
        let j = free[k];
        while value <= hi {
            assigned[j] = Some(value.clone());
            if self.dfs(sys, assigned)? {
                return Ok(true);
            }
            value += 1;
        }
        assigned[j] = None;
        Ok(false)
    }
}

/// Moves every inequality that the relaxation forces to be tight, including
/// nonnegativity, into the equations, so that divisibility can refute it.
/// `None` when the relaxation is infeasible.
fn with_implicit_equalities(sys: &IntSystem) -> Option<IntSystem> {
    let all: Vec<usize> = (0..sys.n).collect();
    let rows = restricted_rows(sys, &vec![None; sys.n], &all)?;
    if !feasible(rows.clone(), sys.n) {
        return None;
    }
    let units = (0..sys.n).map(|j| {
        let mut coeffs = vec![BigInt::zero(); sys.n];
        coeffs[j] = BigInt::one();
        IntRow {
            coeffs,
            rhs: BigInt::zero(),
        }
    });
    let mut out = IntSystem {
        ineqs: Vec::new(),
        ..sys.clone()
    };
    for r in sys.ineqs.iter().cloned().chain(units) {
        let mut probe = rows.clone();
        probe.push(Row::ge(
            r.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect(),
            Rat::from_integer(r.rhs.clone()),
            true,
        ));
        if feasible(probe, sys.n) {
            if r.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 || !r.rhs.is_zero() {
                out.ineqs.push(r);
            }
        } else {
            out.eqs.push(r);
        }
    }
    Some(out)
}

/// Whether a rational system has a solution, by eliminating every variable.
fn feasible(rows: Vec<Row>, n: usize) -> bool {
    let Some(mut rows) = normalize(rows) else {
        return false;
    };
    for j in 0..n {
        match eliminate(&rows, j) {
            Some(r) => rows = r,
            None => return false,
        }
    }
    true
}

/// The rational relaxation over the free variables, with the assigned ones
/// substituted and the box added.
fn restricted_rows(sys: &IntSystem, assigned: &[Option<BigInt>], free: &[usize]) -> Option<Vec<Row>> {
    let mut rows = Vec::new();
    let restrict = |r: &IntRow, sign: i64| -> Row {
        let s = BigInt::from(sign);
        let fixed: BigInt = assigned
            .iter()
            .zip(&r.coeffs)
            .filter_map(|(v, c)| v.as_ref().map(|v| v * c))
            .sum();
        Row::ge(
            free.iter().map(|&j| Rat::from_integer(&r.coeffs[j] * &s)).collect(),
            Rat::from_integer((&r.rhs - fixed) * &s),
            false,
        )
    };
    for r in &sys.ineqs {
        rows.push(restrict(r, 1));
    }
    for r in &sys.eqs {
        rows.push(restrict(r, 1));
        rows.push(restrict(r, -1));
    }
    for (k, &j) in free.iter().enumerate() {
        let mut unit = vec![Rat::zero(); free.len()];
        unit[k] = Rat::one();
        rows.push(Row::ge(unit.clone(), Rat::zero(), false));
        unit[k] = -Rat::one();
        rows.push(Row::ge(unit, Rat::from_integer(-&sys.upper[j]), false));
    }
    normalize(rows)
}

/// Integer range of free variable `k` allowed by the relaxation.
fn range(rows: &[Row], k: usize, free: usize, upper: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut rows = rows.to_vec();
    for j in (0..free).filter(|&j| j != k) {
        rows = eliminate(&rows, j)?;
    }
    let point = vec![Rat::zero(); free];
    let (lo, hi) = bounds(&rows, k, &point);
    let lo = match lo {
        Some((l, false)) => l.ceil().to_integer(),
        Some((l, true)) => l.floor().to_integer() + 1,
        None => BigInt::zero(),
    };
    let hi = match hi {
        Some((h, false)) => h.floor().to_integer(),
        Some((h, true)) => h.ceil().to_integer() - 1,
        None => upper.clone(),
    };
    let lo = lo.max(BigInt::zero());
    (lo <= hi).then_some((lo, hi))
}

fn dot(coeffs: &[BigInt], values: &[BigInt]) -> BigInt {
    coeffs.iter().zip(values).map(|(c, v)| c * v).sum()
}

/// An equality over the unassigned variables needs the gcd of its remaining
/// coefficients to divide its remaining right-hand side.
fn gcd_consistent(sys: &IntSystem, assigned: &[Option<BigInt>]) -> bool {
    sys.eqs.iter().all(|r| {
        let mut rest = r.rhs.clone();
        let mut g = BigInt::zero();
        for (c, v) in r.coeffs.iter().zip(assigned) {
            match v {
                Some(v) => rest -= c * v,
                None => g = g.gcd(c),
            }
        }
        if g.is_zero() {
            rest.is_zero()
        } else {
            rest.is_multiple_of(&g)
        }
    })
}
