//! Entailment, consistency, implied literals and the three-way regime split
//! for 2CNF formulas, all by unit propagation on the implication graph.

use serde::Serialize;

use crate::cnf::{eliminate_units, Clause, Formula, Lit, WeightedFormula};
use crate::error::{AnalysisError, CnfError};
use crate::graph::{all_clauses, ContradictionWitness, Cyclicity, ImplicationGraph};

/// Node budget for the cycle search inside components holding both
/// polarities of a variable.
pub const DEFAULT_CYCLE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Inconsistent,
    ConsistentImplying,
    ConsistentNoImplied,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Inconsistent => "inconsistent",
            Regime::ConsistentImplying => "consistent-implying",
            Regime::ConsistentNoImplied => "consistent-no-implied",
        }
    }

    pub fn is_consistent(self) -> bool {
        self != Regime::Inconsistent
    }
}

/// A variable both of whose literals propagate to a contradiction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InconsistencyWitness {
    pub var: u32,
    pub positive: ContradictionWitness,
    pub negative: ContradictionWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Consistency {
    pub consistent: bool,
    pub witness: Option<InconsistencyWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub regime: Regime,
    /// Entailed literals over the formula's own variables; empty when
    /// inconsistent.
    pub implied: Vec<Lit>,
    pub cyclic: Cyclicity,
    pub witness: Option<InconsistencyWitness>,
}

/// Split of a consistent formula into the clauses containing an entailed
/// literal and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub touched: Vec<usize>,
    pub core: Vec<usize>,
    pub implied: Vec<Lit>,
}

/// A 2CNF formula with units expanded and its implication graph built.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub formula: Formula,
    pub wf: WeightedFormula,
    pub graph: ImplicationGraph,
}

impl Prepared {
    pub fn new(f: &Formula) -> Result<Prepared, CnfError> {
        f.require_two_cnf()?;
        let wf = eliminate_units(f)?;
        let graph = ImplicationGraph::build(&wf);
        Ok(Prepared {
            formula: f.clone(),
            wf,
            graph,
        })
    }

    /// Base-clause filter that drops the image of original clause `removed`.
    pub fn without(&self, removed: usize) -> impl Fn(usize) -> bool + '_ {
        move |k| self.wf.source[k] != removed
    }

    /// `failed[u]`: propagation from `u` reaches a contradiction.
    pub fn failed_literals(&self) -> Vec<bool> {
        self.graph.failed_literals()
    }

    /// Consistency with the smallest witness variable.
    pub fn consistency(&self) -> Consistency {
        let failed = self.graph.failed_literals();
        for v in 1..=self.graph.num_vars() {
            if failed[Lit::pos(v).index()] && failed[Lit::neg(v).index()] {
                let positive = self.graph.up_bottom(Lit::pos(v)).expect("failed literal");
                let negative = self.graph.up_bottom(Lit::neg(v)).expect("failed literal");
                return Consistency {
                    consistent: false,
                    witness: Some(InconsistencyWitness {
                        var: v,
                        positive,
                        negative,
                    }),
                };
            }
        }
        Consistency {
            consistent: true,
            witness: None,
        }
    }

    /// Literals over the original variables entailed by a consistent formula.
    pub fn implied_from(&self, failed: &[bool]) -> Vec<Lit> {
        (1..=self.wf.original_vars)
            .flat_map(|v| [Lit::pos(v), Lit::neg(v)])
            .filter(|&l| failed[(!l).index()])
            .collect()
    }

    pub fn classify(&self) -> Classification {
        let c = self.consistency();
        if !c.consistent {
            return Classification {
                regime: Regime::Inconsistent,
                implied: Vec::new(),
                cyclic: self.graph.cyclicity(DEFAULT_CYCLE_BUDGET),
                witness: c.witness,
            };
        }
        let implied = self.implied_from(&self.graph.failed_literals());
        let regime = if implied.is_empty() {
            Regime::ConsistentNoImplied
        } else {
            Regime::ConsistentImplying
        };
        Classification {
            regime,
            implied,
            cyclic: self.graph.cyclicity(DEFAULT_CYCLE_BUDGET),
            witness: None,
        }
    }

    /// Base clauses holding an entailed literal, for a consistent formula.
    pub fn touched_base(&self, failed: &[bool]) -> Vec<bool> {
        self.wf
            .base
            .iter()
            .map(|c| c.lits().iter().any(|&l| failed[(!l).index()]))
            .collect()
    }

    pub fn decompose(&self) -> Result<Decomposition, AnalysisError> {
        let failed = self.graph.failed_literals();
        if (1..=self.graph.num_vars())
            .any(|v| failed[Lit::pos(v).index()] && failed[Lit::neg(v).index()])
        {
            return Err(AnalysisError::Inconsistent);
        }
        let implied = self.implied_from(&failed);
        let (touched, core) = (0..self.formula.len()).partition(|&i| {
            self.formula
                .clause(i)
                .lits()
                .iter()
                .any(|l| implied.contains(l))
        });
        Ok(Decomposition {
            touched,
            core,
            implied,
        })
    }

    /// Entailment of a clause of any width by the base clauses kept by
    /// `allow`.
    pub fn entails_filtered(&self, lits: &[Lit], allow: &dyn Fn(usize) -> bool) -> bool {
        entails_in(&self.graph, lits, allow)
    }

    pub fn entails(&self, lits: &[Lit]) -> bool {
        entails_in(&self.graph, lits, &all_clauses)
    }
}

/// 2CNF entailment over a graph restricted by `allow`: inconsistent, or one
/// literal's negation propagates to a contradiction, or two literals are
/// linked `¬a ⇒ b`. Literals beyond the graph's variables are
/// unconstrained.
pub fn entails_in(g: &ImplicationGraph, lits: &[Lit], allow: &dyn Fn(usize) -> bool) -> bool {
    if !g.is_consistent_filtered(allow) {
        return true;
    }
    let known: Vec<Lit> = lits
        .iter()
        .copied()
        .filter(|l| l.var() <= g.num_vars())
        .collect();
    for &a in &known {
        if g.reaches(!a, a, allow) {
            return true;
        }
    }
    for (i, &a) in known.iter().enumerate() {
        for &b in &known[i + 1..] {
            if g.reaches(!a, b, allow) {
                return true;
            }
        }
    }
    false
}

pub fn is_consistent(f: &Formula) -> Result<Consistency, CnfError> {
    Ok(Prepared::new(f)?.consistency())
}

/// `f ⊨ l`; every literal when `f` is inconsistent.
pub fn entails_literal(f: &Formula, l: Lit) -> Result<bool, CnfError> {
    Ok(Prepared::new(f)?.entails(&[l]))
}

pub fn entails_clause(f: &Formula, c: &Clause) -> Result<bool, CnfError> {
    Ok(Prepared::new(f)?.entails(c.lits()))
}

pub fn implied_literals(f: &Formula) -> Result<Vec<Lit>, AnalysisError> {
    let p = Prepared::new(f)?;
    let c = p.consistency();
    if !c.consistent {
        return Err(AnalysisError::Inconsistent);
    }
    Ok(p.implied_from(&p.failed_literals()))
}

pub fn classify(f: &Formula) -> Result<Classification, CnfError> {
    Ok(Prepared::new(f)?.classify())
}

pub fn decompose(f: &Formula) -> Result<Decomposition, AnalysisError> {
    Prepared::new(f)?.decompose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use proptest::prelude::*;

    // x=1 a=2 b=3 c=4 d=5
    const F8: &[&[i64]] = &[&[-1, 2], &[-2, 3], &[-2, -3], &[1, 4], &[-4, 5], &[-4, -5]];
    // x=1 x1=2 x2=3 y=4
    const S22: &[&[i64]] = &[&[1, 2], &[1, 3], &[-2, 4], &[-3, -4], &[-1, 4]];

    #[test]
    fn f8_is_inconsistent_at_x() {
        let c = is_consistent(&formula(F8)).unwrap();
        assert!(!c.consistent);
        let w = c.witness.unwrap();
        assert_eq!(w.var, 1);
        assert_eq!(*w.positive.path.last().unwrap(), lit(-2));
        assert_eq!(w.negative.path, vec![lit(-1), lit(4), lit(5), lit(-4)]);
        assert!(is_consistent(&formula(&[&[1, 2]])).unwrap().consistent);
    }

    #[test]
    fn lemma4_example_inconsistent() {
        // l1=1 l2=2 l3=3 x=4 y=5
        let f = formula(&[
            &[1, 2],
            &[-1, 3],
            &[-3, 4],
            &[-3, -4],
            &[-2, -3],
            &[3, 5],
            &[3, -5],
        ]);
        assert!(!is_consistent(&f).unwrap().consistent);
        assert!(!truth_table_satisfiable(&f));
    }

    #[test]
    fn entailed_literals_example() {
        let f = formula(S22);
        assert!(entails_literal(&f, lit(1)).unwrap());
        assert!(entails_literal(&f, lit(4)).unwrap());
        assert!(!entails_literal(&formula(&[&[1, 2]]), lit(1)).unwrap());
        let imp = implied_literals(&f).unwrap();
        assert!(imp.contains(&lit(1)) && imp.contains(&lit(4)));
        assert_eq!(implied_literals(&formula(&[&[1, 2]])).unwrap(), vec![]);
    }

    #[test]
    fn clause_entailment_examples() {
        let f = formula(&[&[-1, 2], &[-2, 3]]);
        assert!(entails_clause(&f, &Clause::from_dimacs(&[-1, 3])).unwrap());
        assert!(!entails_clause(&formula(&[&[1, 2]]), &Clause::from_dimacs(&[1, 3])).unwrap());
        assert!(entails_clause(&f, &Clause::from_dimacs(&[-1, 3, 5])).unwrap());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&formula(F8)).unwrap();
        assert_eq!(c.regime, Regime::Inconsistent);
        assert_eq!(c.cyclic, Cyclicity::Acyclic);
        assert!(c.witness.is_some());
        let c = classify(&formula(S22)).unwrap();
        assert_eq!(c.regime, Regime::ConsistentImplying);
        assert!(c.implied.contains(&lit(1)) && c.implied.contains(&lit(4)));
        let c = classify(&formula(&[&[-1, 2], &[-2, 3]])).unwrap();
        assert_eq!(c.regime, Regime::ConsistentNoImplied);
        assert_eq!(c.cyclic, Cyclicity::Acyclic);
        assert!(implied_literals(&formula(F8)).is_err());
    }

    #[test]
    fn decompose_example() {
        let f = formula(S22);
        let d = decompose(&f).unwrap();
        // x, y and ¬x2 are entailed, so every clause is touched
        assert!(d.core.is_empty());
        assert_eq!(d.implied, vec![lit(1), lit(-3), lit(4)]);
        let without_x: Vec<Clause> = f
            .clauses()
            .iter()
            .filter(|c| !c.contains(lit(1)))
            .cloned()
            .collect();
        assert_eq!(
            without_x,
            vec![
                Clause::from_dimacs(&[-1, 4]),
                Clause::from_dimacs(&[-2, 4]),
                Clause::from_dimacs(&[-3, -4])
            ]
        );
        let d = decompose(&formula(&[&[-1, 2]])).unwrap();
        assert!(d.touched.is_empty() && d.core == vec![0]);
    }

    #[test]
    fn units_are_entailed() {
        let f = formula(&[&[1], &[-1, 2]]);
        assert_eq!(implied_literals(&f).unwrap(), vec![lit(1), lit(2)]);
        assert!(!is_consistent(&formula(&[&[1], &[-1]])).unwrap().consistent);
    }

    proptest! {
        #[test]
        fn entailment_matches_truth_table(f in arb_two_cnf(6, 10), a in -6i64..=6, b in -6i64..=6) {
            prop_assume!(a != 0 && b != 0 && a != -b);
            let c = Clause::from_dimacs(&[a, b]);
            prop_assert_eq!(entails_clause(&f, &c).unwrap(), truth_table_entails(&f, &c));
            let l = lit(a);
            prop_assert_eq!(entails_literal(&f, l).unwrap(), truth_table_entails(&f, &Clause::unit(l)));
        }

        #[test]
        fn consistency_matches_truth_table(f in arb_two_cnf(6, 12)) {
            prop_assert_eq!(is_consistent(&f).unwrap().consistent, truth_table_satisfiable(&f));
        }

        #[test]
        fn implied_matches_truth_table(f in arb_two_cnf(6, 10)) {
            prop_assume!(truth_table_satisfiable(&f));
            let imp = implied_literals(&f).unwrap();
            for v in 1..=f.num_vars() {
                for l in [Lit::pos(v), Lit::neg(v)] {
                    prop_assert_eq!(imp.contains(&l), truth_table_entails(&f, &Clause::unit(l)));
                }
            }
        }

        #[test]
        fn decomposition_laws(f in arb_two_cnf(6, 10)) {
            prop_assume!(truth_table_satisfiable(&f));
            let d = decompose(&f).unwrap();
            let core_vars: Vec<u32> = d.core.iter().flat_map(|&i| f.clause(i).lits().iter().map(|l| l.var())).collect();
            prop_assert!(d.implied.iter().all(|l| !core_vars.contains(&l.var())));
            prop_assert_eq!(d.touched.len() + d.core.len(), f.len());
            let mut reduced: Vec<Clause> = d.core.iter().map(|&i| f.clause(i).clone()).collect();
            reduced.extend(d.implied.iter().map(|&l| Clause::unit(l)));
            let reduced = Formula::new(f.num_vars(), reduced).unwrap();
            prop_assert!(truth_table_equivalent(&f, &reduced));
        }
    }
}
