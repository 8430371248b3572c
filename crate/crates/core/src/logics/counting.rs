//! Presburger and graded modal logic over finite multisets, with reflexive
//! and half-loop variants. One-step satisfiability is integer feasibility.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{ilp_feasible_with, int, IlpOptions, LinConstraint, LinSystem, Relation};
use crate::error::{Error, Result};
use crate::formula::{CountAtom, CountRel, ModalOp};
use crate::logic::Logic;
use crate::onestep::{
    Capabilities, Carrier, ClauseShape, Engine, Extension, Frame, OneStepClause, OneStepModel,
    SizeBounds, Strategy, Structure,
};

pub struct CountingEngine {
    logic: Logic,
    ilp: IlpOptions,
}

impl CountingEngine {
    pub fn new(logic: Logic, ilp: IlpOptions) -> Self {
        assert!(matches!(
            logic,
            Logic::Presburger | Logic::PresburgerT | Logic::PresburgerHalf
        ));
        CountingEngine { logic, ilp }
    }

    fn copointed(&self) -> bool {
        self.logic != Logic::Presburger
    }
}

fn bits(v: u64) -> usize {
    (64 - v.leading_zeros()).max(1) as usize
}

/// Sums `B(E_i)` for all arguments in one pass over the points, returning
/// the sums and the number of points visited.
fn accumulate(weights: &[u64], args: &[Extension]) -> (Vec<u128>, usize) {
    let mut sums = vec![0u128; args.len()];
    let mut visits = 0;
    for (j, &w) in weights.iter().enumerate() {
        visits += 1;
        for (sum, e) in sums.iter_mut().zip(args) {
            if e.contains(j) {
                *sum += u128::from(w);
            }
        }
    }
    (sums, visits)
}

/// Whether `sum a_i * sums[i] ~ b` under `rel`.
fn compare(atom: &CountAtom, sums: &[u128]) -> bool {
    let lhs: BigInt = atom
        .coeffs
        .iter()
        .zip(sums)
        .map(|(&a, &s)| BigInt::from(a) * BigInt::from(s))
        .sum();
    let b = BigInt::from(atom.bound);
    match atom.rel {
        CountRel::Lt => lhs < b,
        CountRel::Gt => lhs > b,
        CountRel::Eq => lhs == b,
        CountRel::Mod { modulus, residue } => {
            let m = BigInt::from(modulus);
            ((lhs % &m + &m) % &m) == BigInt::from(residue)
        }
    }
}

/// The alternatives a signed atom allows, as (relation, rhs) pairs.
fn alternatives(atom: &CountAtom, positive: bool) -> Vec<(Relation, i64)> {
    let b = atom.bound;
    match (atom.rel, positive) {
        (CountRel::Lt, true) => vec![(Relation::Lt, b)],
        (CountRel::Gt, true) => vec![(Relation::Gt, b)],
        (CountRel::Eq, true) => vec![(Relation::Eq, b)],
        (CountRel::Mod { modulus, residue }, true) => {
            vec![(Relation::Mod { modulus }, residue as i64)]
        }
        (CountRel::Lt, false) => vec![(Relation::Ge, b)],
        (CountRel::Gt, false) => vec![(Relation::Le, b)],
        (CountRel::Eq, false) => vec![(Relation::Lt, b), (Relation::Gt, b)],
        (CountRel::Mod { modulus, residue }, false) => (0..modulus)
            .filter(|&r| r != residue)
            .map(|r| (Relation::Mod { modulus }, r as i64))
            .collect(),
    }
}

impl Engine for CountingEngine {
    fn logic(&self) -> &Logic {
        &self.logic
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            supports_small: false,
            supports_carrier: true,
            copointed: self.copointed(),
        }
    }

    /// Weights stay inside the search box of the integer solver, whose
    /// binary length is bounded by the clause's atom count, the carrier size
    /// and the parameter length.
    fn size_bounds(&self, shape: &ClauseShape, carrier_size: usize) -> SizeBounds {
        let scale = bits((shape.atoms + 2 + carrier_size) as u64) + shape.parameter_bits + 2;
        SizeBounds {
            carrier: None,
            structure: Some(2 * scale + shape.parameter_bits),
        }
    }

    fn check_structure(&self, s: &Structure, frame: &Frame) -> bool {
        let Structure::Count { weights } = s else {
            return false;
        };
        if weights.len() != frame.size {
            return false;
        }
        let own = || frame.designated.map(|d| weights[d]);
        match self.logic {
            Logic::PresburgerT => own().is_some_and(|w| w >= 1),
            Logic::PresburgerHalf => own().is_some_and(|w| {
                let d = frame.designated.unwrap();
                let others: u128 = weights
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != d)
                    .map(|(_, &v)| u128::from(v))
                    .sum();
                u128::from(w) >= others
            }),
            _ => true,
        }
    }

    fn eval_atom_traced(
        &self,
        s: &Structure,
        _frame: &Frame,
        op: &ModalOp,
        args: &[Extension],
    ) -> (bool, Option<usize>) {
        let Structure::Count { weights } = s else {
            panic!("counting engine given a {} structure", s.kind());
        };
        let ModalOp::Count(atom) = op else {
            panic!("counting engine given `{}`", op.spelling());
        };
        let (sums, visits) = accumulate(weights, args);
        (compare(atom, &sums), Some(visits))
    }

    fn sat(
        &self,
        clause: &OneStepClause,
        carrier: &Carrier,
        strategy: Strategy,
    ) -> Result<Option<OneStepModel>> {
        if strategy == Strategy::Small {
            return Err(Error::Precondition(format!(
                "{} supports only the carrier strategy",
                self.logic
            )));
        }
        let n = carrier.len();
        let d = carrier.designated;
        if self.copointed() && d.is_none() {
            return Err(Error::Precondition(format!(
                "{} needs a designated point",
                self.logic
            )));
        }

        let mut base = LinSystem::new(n, crate::arith::Domain::NonNegInteger);
        match (&self.logic, d) {
            (Logic::PresburgerT, Some(d)) => {
                base.push(LinConstraint::new([(d, int(1))], Relation::Ge, int(1)));
            }
            (Logic::PresburgerHalf, Some(d)) => {
                let coeffs = (0..n).map(|j| (j, int(if j == d { 1 } else { -1 })));
                base.push(LinConstraint::new(coeffs, Relation::Ge, int(0)));
            }
            _ => {}
        }

        // Per literal: the per-point coefficients and the allowed relations.
        let mut rows = Vec::with_capacity(clause.literals.len());
        for l in &clause.literals {
            let ModalOp::Count(atom) = &l.op else {
                return Err(Error::Precondition(format!(
                    "`{}` is not a counting operator",
                    l.op.spelling()
                )));
            };
            let coeffs: Vec<(usize, crate::arith::Rat)> = (0..n)
                .map(|j| {
                    let c: i64 = atom
                        .coeffs
                        .iter()
                        .zip(&l.args)
                        .filter(|(_, e)| e.contains(j))
                        .map(|(a, _)| *a)
                        .sum();
                    (j, int(c))
                })
                .collect();
            rows.push((coeffs, alternatives(atom, l.positive)));
        }

        let branches: u128 = rows.iter().map(|(_, alts)| alts.len() as u128).product();
        if branches > u128::from(self.ilp.max_residue_vectors) {
            return Err(Error::ResourceLimit(format!(
                "{branches} disjunctive branches exceed the limit of {}",
                self.ilp.max_residue_vectors
            )));
        }
        if rows.iter().any(|(_, alts)| alts.is_empty()) {
            return Ok(None);
        }

        // Mixed-radix enumeration, first split varying fastest.
        let mut digit = vec![0usize; rows.len()];
        let solution = loop {
            let mut sys = base.clone();
            for ((coeffs, alts), &k) in rows.iter().zip(&digit) {
                let (rel, rhs) = alts[k];
                sys.push(LinConstraint::new(coeffs.iter().cloned(), rel, int(rhs)));
            }
            if let Some(x) = ilp_feasible_with(&sys, &self.ilp)? {
                break x;
            }
            let mut k = 0;
            loop {
                if k == digit.len() {
                    return Ok(None);
                }
                digit[k] += 1;
                if digit[k] < rows[k].1.len() {
                    break;
                }
                digit[k] = 0;
                k += 1;
            }
        };

        let mut keep = Vec::new();
        let mut weights = Vec::new();
        for (j, w) in solution.iter().enumerate() {
            if !w.is_zero() || Some(j) == d {
                let w = w.to_integer().to_u64().ok_or_else(|| {
                    Error::ResourceLimit(format!("weight {w} does not fit in 64 bits"))
                })?;
                keep.push(j);
                weights.push(w);
            }
        }
        Ok(Some(OneStepModel::on(
            carrier,
            keep,
            Structure::Count { weights },
        )))
    }

    fn structure_size(&self, s: &Structure) -> usize {
        match s {
            Structure::Count { weights } => weights.iter().map(|&w| bits(w)).max().unwrap_or(0),
            _ => 0,
        }
    }

    fn leaf(&self) -> (Structure, bool) {
        if self.copointed() {
            (Structure::Count { weights: vec![1] }, true)
        } else {
            (Structure::Count { weights: vec![] }, false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::onestep::{model_check_clause, Literal, PointClass};
    use proptest::prelude::{any, prop, prop_assert, prop_oneof, proptest, Just, ProptestConfig};
    use proptest::strategy::Strategy as Gen;

    fn engine(logic: Logic) -> CountingEngine {
        CountingEngine::new(logic, IlpOptions::default())
    }

    fn carrier() -> Carrier {
        Carrier::new(
            vec![Formula::var("a"), Formula::var("b")],
            (0..4).map(PointClass).collect(),
        )
    }

    fn set(len: usize, idx: &[usize]) -> Extension {
        Extension::from_indices(len, idx.iter().copied())
    }

    fn atom(coeffs: Vec<i64>, rel: CountRel, bound: i64) -> ModalOp {
        ModalOp::Count(CountAtom { coeffs, rel, bound })
    }

    fn lit(positive: bool, op: ModalOp, args: Vec<Extension>) -> Literal {
        Literal { positive, op, args }
    }

    fn frame(size: usize, designated: Option<usize>) -> Frame {
        Frame { size, designated }
    }

    #[test]
    fn frame_conditions() {
        let w = |v: Vec<u64>| Structure::Count { weights: v };
        assert!(!engine(Logic::PresburgerT).check_structure(&w(vec![2, 0]), &frame(2, Some(1))));
        assert!(engine(Logic::PresburgerHalf).check_structure(&w(vec![1, 2, 3]), &frame(3, Some(2))));
        assert!(!engine(Logic::PresburgerHalf).check_structure(&w(vec![2, 2, 3]), &frame(3, Some(2))));
        assert!(engine(Logic::Presburger).check_structure(&w(vec![0, 0]), &frame(2, None)));
    }

    #[test]
    fn evaluation_examples() {
        let e = engine(Logic::Presburger);
        let f = frame(2, None);
        let s = Structure::Count { weights: vec![2, 1] };
        let a = set(2, &[0]);
        let b = set(2, &[1]);
        let all = set(2, &[0, 1]);
        assert!(e.eval_atom(&s, &f, &atom(vec![1], CountRel::Gt, 1), std::slice::from_ref(&a)));
        let odd = CountRel::Mod { modulus: 2, residue: 1 };
        assert!(e.eval_atom(&s, &f, &atom(vec![1], odd, 0), &[all]));
        assert!(e.eval_atom(&s, &f, &atom(vec![2, -1], CountRel::Eq, 3), &[a, b]));
    }

    #[test]
    fn evaluation_visits_every_point_once() {
        let e = engine(Logic::Presburger);
        let s = Structure::Count { weights: vec![3, 0, 5, 1] };
        let (_, visits) = e.eval_atom_traced(
            &s,
            &frame(4, None),
            &atom(vec![1, 1], CountRel::Lt, 4),
            &[set(4, &[0]), set(4, &[1, 2])],
        );
        assert_eq!(visits, Some(4));
    }

    #[test]
    fn integrality_is_respected() {
        let e = engine(Logic::Presburger);
        let a = set(4, &[1, 3]);
        let cl = OneStepClause::new(vec![
            lit(true, atom(vec![1], CountRel::Gt, 0), vec![a.clone()]),
            lit(true, atom(vec![1], CountRel::Lt, 1), vec![a]),
        ]);
        assert!(e.sat(&cl, &carrier(), Strategy::Carrier).unwrap().is_none());
    }

    #[test]
    fn even_nonzero_total() {
        let e = engine(Logic::Presburger);
        let all = Extension::full(4);
        let even = CountRel::Mod { modulus: 2, residue: 0 };
        let cl = OneStepClause::new(vec![
            lit(true, atom(vec![1], even, 0), vec![all.clone()]),
            lit(true, atom(vec![1], CountRel::Gt, 0), vec![all]),
        ]);
        let m = e.sat(&cl, &carrier(), Strategy::Carrier).unwrap().unwrap();
        let Structure::Count { weights } = &m.structure else { unreachable!() };
        assert_eq!(weights.iter().sum::<u64>(), 2);
        assert!(model_check_clause(&e, &m, &cl).unwrap());
    }

    #[test]
    fn reflexivity_counts_the_current_state() {
        let e = engine(Logic::PresburgerT);
        let c = carrier().with_designated(PointClass(1));
        let a = set(5, &[1, 3, 4]);
        let cl = OneStepClause::new(vec![lit(true, atom(vec![1], CountRel::Lt, 1), vec![a])]);
        assert!(e.sat(&cl, &c, Strategy::Carrier).unwrap().is_none());
    }

    #[test]
    fn negated_congruence_splits_over_residues() {
        let e = engine(Logic::Presburger);
        let a = set(4, &[1, 3]);
        let cl = OneStepClause::new(vec![
            lit(false, atom(vec![1], CountRel::Mod { modulus: 3, residue: 1 }, 0), vec![a.clone()]),
            lit(true, atom(vec![1], CountRel::Eq, 1), vec![a]),
        ]);
        assert!(e.sat(&cl, &carrier(), Strategy::Carrier).unwrap().is_none());
    }

    #[test]
    fn half_loop_model() {
        let e = engine(Logic::PresburgerHalf);
        let c = carrier().with_designated(PointClass(0));
        let a = set(5, &[1, 3]);
        let cl = OneStepClause::new(vec![lit(true, atom(vec![1], CountRel::Gt, 2), vec![a])]);
        let m = e.sat(&cl, &c, Strategy::Carrier).unwrap().unwrap();
        assert!(model_check_clause(&e, &m, &cl).unwrap());
        let bound = e.size_bounds(&cl.shape(), c.len()).structure.unwrap();
        assert!(e.structure_size(&m.structure) <= bound);
    }

    #[test]
    fn small_strategy_is_refused() {
        let e = engine(Logic::Presburger);
        let cl = OneStepClause::default();
        assert!(e.sat(&cl, &carrier(), Strategy::Small).is_err());
    }

    fn rel_strategy() -> impl Gen<Value = CountRel> {
        prop_oneof![
            Just(CountRel::Lt),
            Just(CountRel::Gt),
            Just(CountRel::Eq),
            (1u64..4).prop_flat_map(|m| (Just(m), 0..m))
                .prop_map(|(modulus, residue)| CountRel::Mod { modulus, residue }),
        ]
    }

    fn clause_strategy(points: usize) -> impl Gen<Value = OneStepClause> {
        let literal = (
            any::<bool>(),
            prop::collection::vec((-2i64..=2, 0u32..(1 << points)), 1..3),
            rel_strategy(),
            -2i64..6,
        )
            .prop_map(move |(positive, terms, rel, bound)| {
                let coeffs = terms.iter().map(|(a, _)| *a).collect();
                let args = terms
                    .iter()
                    .map(|(_, mask)| {
                        Extension::from_indices(points, (0..points).filter(|j| mask >> j & 1 == 1))
                    })
                    .collect();
                lit(positive, atom(coeffs, rel, bound), args)
            });
        prop::collection::vec(literal, 0..4).prop_map(OneStepClause::new)
    }

    /// Exhaustive search over weights in `[0, cap]`.
    fn brute(e: &CountingEngine, cl: &OneStepClause, c: &Carrier, cap: u64) -> bool {
        let n = c.len();
        let frame = c.frame();
        let mut w = vec![0u64; n];
        loop {
            let s = Structure::Count { weights: w.clone() };
            if e.check_structure(&s, &frame)
                && cl
                    .literals
                    .iter()
                    .all(|l| e.eval_atom(&s, &frame, &l.op, &l.args) == l.positive)
            {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                w[k] += 1;
                if w[k] <= cap {
                    break;
                }
                w[k] = 0;
                k += 1;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn agrees_with_bounded_enumeration(cl in clause_strategy(3), logic in 0usize..3) {
            let logic = [Logic::Presburger, Logic::PresburgerT, Logic::PresburgerHalf][logic].clone();
            let e = engine(logic.clone());
            let two = Carrier::new(vec![Formula::var("a")], vec![PointClass(0), PointClass(1)]);
            let c = if logic == Logic::Presburger {
                Carrier::new(two.alphabet.clone(), vec![PointClass(0), PointClass(1), PointClass(1)])
            } else {
                two.with_designated(PointClass(0))
            };
            let found = e.sat(&cl, &c, Strategy::Carrier).unwrap();
            if let Some(m) = &found {
                prop_assert!(model_check_clause(&e, m, &cl).unwrap());
            }
            // Boxed enumeration is incomplete, so only its models are compared.
            if brute(&e, &cl, &c, 5) {
                prop_assert!(found.is_some());
            }
        }
    }
}
