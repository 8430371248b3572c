//! Exact linear arithmetic: rational LP feasibility by Fourier–Motzkin
//! elimination, nonnegative-integer feasibility with congruences by
//! branch-and-bound, and support minimization of LP solutions.
//!
//! Every variable is implicitly nonnegative. No floating point is used.

mod ilp;
mod lp;
mod support;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use ilp::{ilp_feasible, ilp_feasible_with, IlpOptions};
pub use lp::lp_feasible;
pub use support::minimize_support;

use crate::error::{Error, Result};

/// Exact rationals; always reduced with a positive denominator.
pub type Rat = num_rational::BigRational;

/// Parses `n` or `n/d` with an optional leading minus sign.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
    /// `lhs ≡ rhs (mod modulus)`; integer systems only.
    Mod { modulus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    NonNegRational,
    NonNegInteger,
}

/// `sum coeffs[v] * x_v  rel  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinConstraint {
    pub coeffs: BTreeMap<usize, Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

impl LinConstraint {
    pub fn new(coeffs: impl IntoIterator<Item = (usize, Rat)>, rel: Relation, rhs: Rat) -> Self {
        let mut map = BTreeMap::new();
        for (v, c) in coeffs {
            *map.entry(v).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        LinConstraint { coeffs: map, rel, rhs }
    }

    pub fn lhs(&self, point: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .map(|(&v, c)| c * &point[v])
            .fold(Rat::zero(), |a, b| a + b)
    }

    pub fn holds(&self, point: &[Rat]) -> bool {
        let lhs = self.lhs(point);
        match self.rel {
            Relation::Lt => lhs < self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Gt => lhs > self.rhs,
            Relation::Mod { modulus } => {
                let diff = lhs - &self.rhs;
                diff.is_integer()
                    && (diff.to_integer() % BigInt::from(modulus)).is_zero()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinSystem {
    pub vars: usize,
    pub constraints: Vec<LinConstraint>,
    pub domain: Domain,
}

impl LinSystem {
    pub fn new(vars: usize, domain: Domain) -> Self {
        LinSystem {
            vars,
            constraints: Vec::new(),
            domain,
        }
    }

    pub fn push(&mut self, c: LinConstraint) -> &mut Self {
        self.constraints.push(c);
        self
    }

    pub fn with(mut self, c: LinConstraint) -> Self {
        self.constraints.push(c);
        self
    }

    /// Nonnegativity, domain membership and every constraint.
    pub fn satisfied_by(&self, point: &[Rat]) -> bool {
        point.len() == self.vars
            && point.iter().all(|x| !x.is_negative())
            && (self.domain == Domain::NonNegRational || point.iter().all(|x| x.is_integer()))
            && self.constraints.iter().all(|c| c.holds(point))
    }

    fn check_vars(&self) -> Result<()> {
        for c in &self.constraints {
            if let Some((&v, _)) = c.coeffs.iter().next_back() {
                if v >= self.vars {
                    return Err(Error::Precondition(format!(
                        "constraint mentions x{v} but only {} variables are declared",
                        self.vars
                    )));
                }
            }
            if let Relation::Mod { modulus } = c.rel {
                if modulus == 0 {
                    return Err(Error::Precondition("congruence modulus 0".into()));
                }
            }
        }
        Ok(())
    }

    fn has_congruence(&self) -> bool {
        self.constraints
            .iter()
            .any(|c| matches!(c.rel, Relation::Mod { .. }))
    }

    /// Groups variables whose coefficient columns coincide in every
    /// constraint. Any solution of the reduced system expands to one of the
    /// original by placing each group's value on its first member.
    fn merge_columns(&self) -> (LinSystem, Vec<usize>) {
        let mut groups: BTreeMap<Vec<Option<&Rat>>, usize> = BTreeMap::new();
        let mut rep = Vec::with_capacity(self.vars);
        let mut firsts = Vec::new();
        for v in 0..self.vars {
            let column: Vec<Option<&Rat>> =
                self.constraints.iter().map(|c| c.coeffs.get(&v)).collect();
            let next = groups.len();
            let g = *groups.entry(column).or_insert(next);
            if g == next {
                firsts.push(v);
            }
            rep.push(g);
        }
        let constraints = self
            .constraints
            .iter()
            .map(|c| LinConstraint {
                coeffs: c
                    .coeffs
                    .iter()
                    .filter(|(v, _)| firsts[rep[**v]] == **v)
                    .map(|(&v, a)| (rep[v], a.clone()))
                    .collect(),
                rel: c.rel,
                rhs: c.rhs.clone(),
            })
            .collect();
        let reduced = LinSystem {
            vars: firsts.len(),
            constraints,
            domain: self.domain,
        };
        (reduced, firsts)
    }
}

fn expand(reduced: Vec<Rat>, firsts: &[usize], vars: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); vars];
    for (g, value) in reduced.into_iter().enumerate() {
        out[firsts[g]] = value;
    }
    out
}

impl fmt::Display for LinConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            f.write_str("0")?;
        }
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "x{v}")?;
            } else {
                write!(f, "{c}*x{v}")?;
            }
        }
        match self.rel {
            Relation::Lt => write!(f, " < {}", self.rhs),
            Relation::Le => write!(f, " <= {}", self.rhs),
            Relation::Eq => write!(f, " = {}", self.rhs),
            Relation::Ge => write!(f, " >= {}", self.rhs),
            Relation::Gt => write!(f, " > {}", self.rhs),
            Relation::Mod { modulus } => write!(f, " = {} (mod {modulus})", self.rhs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rat("1/3"), Some(rat(1, 3)));
        assert_eq!(parse_rat("-2/4"), Some(rat(-1, 2)));
        assert_eq!(parse_rat("7"), Some(int(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("1/-2"), None);
        assert_eq!(parse_rat(""), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn reduced_form_is_canonical() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn identical_columns_merge() {
        let sys = LinSystem::new(3, Domain::NonNegRational)
            .with(LinConstraint::new([(0, int(1)), (2, int(1))], Relation::Ge, int(1)))
            .with(LinConstraint::new(
                [(0, int(1)), (1, int(1)), (2, int(1))],
                Relation::Eq,
                int(1),
            ));
        let (reduced, firsts) = sys.merge_columns();
        assert_eq!(reduced.vars, 2);
        assert_eq!(firsts, vec![0, 1]);
    }
}
