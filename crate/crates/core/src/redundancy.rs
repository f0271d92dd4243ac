//! Clause redundancy: the single-clause test and whole-formula checks that
//! handle inconsistent formulas, clauses holding entailed literals and the
//! remaining core separately.

use serde::Serialize;

use crate::cnf::{Formula, Lit};
use crate::entailment::{Classification, Prepared, Regime};
use crate::error::{AnalysisError, CnfError};
use crate::graph::{ImplicationGraph, PeerSearch};
use crate::horn::{horn_redundancy, HornSolver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Redundant,
    Irredundant,
}

impl Verdict {
    fn of(redundant: bool) -> Verdict {
        if redundant {
            Verdict::Redundant
        } else {
            Verdict::Irredundant
        }
    }

    pub fn is_redundant(self) -> bool {
        self == Verdict::Redundant
    }
}

/// Which procedure produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictSource {
    /// Consistency of the formula without the clause.
    Inconsistent,
    /// Direct test of a clause containing an entailed literal.
    ImpliedLiteral,
    /// Marked search over the clauses free of entailed literals.
    Core,
    Horn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedundancyReport {
    pub redundant: bool,
    /// Lowest redundant clause id.
    pub witness: Option<usize>,
    pub per_clause: Vec<Verdict>,
    pub source: Vec<VerdictSource>,
    /// `None` for Horn formulas.
    pub regime: Option<Regime>,
    /// Redundancy was known before any per-clause test: an inconsistent
    /// formula with more than four clauses per variable, or an entailed
    /// literal in three or more clauses.
    pub shortcut: bool,
}

impl RedundancyReport {
    pub fn from_verdicts(
        per_clause: Vec<Verdict>,
        source: Vec<VerdictSource>,
        regime: Option<Regime>,
        shortcut: bool,
    ) -> RedundancyReport {
        let witness = per_clause.iter().position(|v| v.is_redundant());
        RedundancyReport {
            redundant: witness.is_some(),
            witness,
            per_clause,
            source,
            regime,
            shortcut,
        }
    }

    pub fn irredundant_ids(&self) -> Vec<usize> {
        (0..self.per_clause.len())
            .filter(|&i| !self.per_clause[i].is_redundant())
            .collect()
    }
}

/// Whether `f` without clause `id` still entails it.
pub fn is_clause_redundant(f: &Formula, id: usize) -> Result<bool, CnfError> {
    f.check_id(id)?;
    if f.kind().is_two_cnf() {
        let p = Prepared::new(f)?;
        let rest = p.without(id);
        Ok(p.entails_filtered(f.clause(id).lits(), &rest))
    } else {
        Ok(HornSolver::new(f)?.entails_filtered(f.clause(id), &|k| k != id))
    }
}

/// Inconsistent formulas: a clause is redundant iff the rest is still
/// inconsistent.
pub fn check_inconsistent(
    p: &Prepared,
    cls: &Classification,
) -> Result<RedundancyReport, AnalysisError> {
    if cls.regime != Regime::Inconsistent {
        return Err(AnalysisError::pre("formula is consistent"));
    }
    let f = &p.formula;
    let shortcut = f.len() > 4 * f.num_vars() as usize;
    let per_clause = (0..f.len())
        .map(|i| Verdict::of(!p.graph.is_consistent_filtered(&p.without(i))))
        .collect();
    Ok(RedundancyReport::from_verdicts(
        per_clause,
        vec![VerdictSource::Inconsistent; f.len()],
        Some(cls.regime),
        shortcut,
    ))
}

/// Verdicts for the clauses containing an entailed literal `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpliedVerdicts {
    pub literal: Lit,
    pub clauses: Vec<(usize, Verdict)>,
    /// Three or more clauses contain `l`, so one of them is redundant.
    pub shortcut: bool,
}

pub fn check_implied_literal_clauses(
    p: &Prepared,
    l: Lit,
) -> Result<ImpliedVerdicts, AnalysisError> {
    if !p.graph.is_consistent() {
        return Err(AnalysisError::Inconsistent);
    }
    if l.var() > p.wf.original_vars || !p.entails(&[l]) {
        return Err(AnalysisError::pre(format!("literal {l} is not entailed")));
    }
    let f = &p.formula;
    let ids: Vec<usize> = (0..f.len()).filter(|&i| f.clause(i).contains(l)).collect();
    let clauses = ids
        .iter()
        .map(|&i| {
            (
                i,
                Verdict::of(p.entails_filtered(f.clause(i).lits(), &p.without(i))),
            )
        })
        .collect();
    Ok(ImpliedVerdicts {
        literal: l,
        shortcut: ids.len() > 2,
        clauses,
    })
}

/// Per base clause, whether it is redundant among the clauses accepted by
/// `allow`, which must be consistent and entail no literal. Rejected
/// clauses get `false`.
pub fn core_redundancy(g: &ImplicationGraph, allow: &dyn Fn(usize) -> bool) -> Vec<bool> {
    let order = g.sccs_filtered(allow);
    let mut search = PeerSearch::new(g);
    let mut redundant = vec![false; g.num_clauses()];
    for l in g.literals() {
        let hit = search.run(l, allow, Some(&order));
        for ((_, k), h) in g.successors(l).zip(hit) {
            if h {
                redundant[k] = true;
            }
        }
    }
    redundant
}

/// Consistent formulas entailing no literal: the marked search per literal.
pub fn check_no_implied(
    p: &Prepared,
    cls: &Classification,
) -> Result<RedundancyReport, AnalysisError> {
    if cls.regime != Regime::ConsistentNoImplied {
        return Err(AnalysisError::pre(format!(
            "regime is {}",
            cls.regime.label()
        )));
    }
    let base = core_redundancy(&p.graph, &crate::graph::all_clauses);
    let per_clause = (0..p.formula.len())
        .map(|i| Verdict::of(base[p.wf.images[i][0]]))
        .collect();
    Ok(RedundancyReport::from_verdicts(
        per_clause,
        vec![VerdictSource::Core; p.formula.len()],
        Some(cls.regime),
        false,
    ))
}

/// Full check, dispatching on the regime. Horn formulas use the per-clause
/// loop with forward chaining.
pub fn check(f: &Formula) -> Result<RedundancyReport, CnfError> {
    if !f.kind().is_two_cnf() {
        return horn_redundancy(f);
    }
    let p = Prepared::new(f)?;
    let cls = p.classify();
    Ok(check_prepared(&p, &cls))
}

pub fn check_prepared(p: &Prepared, cls: &Classification) -> RedundancyReport {
    match cls.regime {
        Regime::Inconsistent => check_inconsistent(p, cls).expect("regime checked"),
        Regime::ConsistentNoImplied => check_no_implied(p, cls).expect("regime checked"),
        Regime::ConsistentImplying => {
            let f = &p.formula;
            let failed = p.failed_literals();
            let touched = p.touched_base(&failed);
            let core = core_redundancy(&p.graph, &|k| !touched[k]);
            let mut per_clause = Vec::with_capacity(f.len());
            let mut source = Vec::with_capacity(f.len());
            for i in 0..f.len() {
                let k = p.wf.images[i][0];
                if touched[k] {
                    per_clause.push(Verdict::of(
                        p.entails_filtered(f.clause(i).lits(), &p.without(i)),
                    ));
                    source.push(VerdictSource::ImpliedLiteral);
                } else {
                    per_clause.push(Verdict::of(core[k]));
                    source.push(VerdictSource::Core);
                }
            }
            let shortcut = cls
                .implied
                .iter()
                .any(|&l| f.clauses().iter().filter(|c| c.contains(l)).count() > 2);
            RedundancyReport::from_verdicts(per_clause, source, Some(cls.regime), shortcut)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use crate::testutil::*;
    use proptest::prelude::*;

    const F8: &[&[i64]] = &[&[-1, 2], &[-2, 3], &[-2, -3], &[1, 4], &[-4, 5], &[-4, -5]];

    fn naive(f: &Formula) -> Vec<bool> {
        (0..f.len())
            .map(|i| {
                let rest: Vec<usize> = (0..f.len()).filter(|&j| j != i).collect();
                truth_table_entails(&f.subset(&rest).unwrap(), f.clause(i))
            })
            .collect()
    }

    fn verdicts(f: &Formula) -> Vec<bool> {
        check(f)
            .unwrap()
            .per_clause
            .iter()
            .map(|v| v.is_redundant())
            .collect()
    }

    #[test]
    fn single_clause_examples() {
        let f = formula(&[&[1, 2], &[-1, 2], &[2, 3]]);
        assert!(
            is_clause_redundant(&f, f.position(&Clause::from_dimacs(&[2, 3])).unwrap()).unwrap()
        );
        assert!(!is_clause_redundant(&formula(&[&[1, 2]]), 0).unwrap());
        let f = formula(&[&[-1, 2], &[-2, 3], &[-1, 3]]);
        assert!(
            is_clause_redundant(&f, f.position(&Clause::from_dimacs(&[-1, 3])).unwrap()).unwrap()
        );
        assert!(is_clause_redundant(&f, 7).is_err());
    }

    #[test]
    fn inconsistent_examples() {
        let r = check(&formula(F8)).unwrap();
        assert_eq!(r.regime, Some(Regime::Inconsistent));
        assert!(!r.redundant && r.per_clause.len() == 6);
        let mut g: Vec<&[i64]> = F8.to_vec();
        g.push(&[-1, 3]);
        let f = formula(&g);
        let r = check(&f).unwrap();
        assert!(r.redundant);
        assert!(r.per_clause[f.position(&Clause::from_dimacs(&[-1, 3])).unwrap()].is_redundant());
    }

    #[test]
    fn dense_inconsistent_takes_shortcut() {
        // every binary clause over three variables plus a unit
        let mut cs: Vec<Vec<i64>> = vec![vec![1]];
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                cs.push(vec![sa * a, sb * b]);
            }
        }
        let refs: Vec<&[i64]> = cs.iter().map(|c| c.as_slice()).collect();
        let f = formula(&refs);
        assert_eq!(f.len(), 13);
        let r = check(&f).unwrap();
        assert!(r.shortcut && r.redundant);
    }

    #[test]
    fn implied_literal_clauses() {
        // l=1 a=2 b=3: l entailed via (l a), (l ¬a)
        let f = formula(&[&[1, 2], &[1, -2]]);
        let p = Prepared::new(&f).unwrap();
        let v = check_implied_literal_clauses(&p, lit(1)).unwrap();
        assert!(!v.shortcut);
        assert!(v.clauses.iter().all(|(_, v)| *v == Verdict::Irredundant));
        let f = formula(&[&[1, 2], &[1, -2], &[1, 3]]);
        let p = Prepared::new(&f).unwrap();
        let v = check_implied_literal_clauses(&p, lit(1)).unwrap();
        assert!(v.shortcut);
        assert!(v.clauses.iter().any(|(_, v)| v.is_redundant()));
        assert!(check_implied_literal_clauses(&p, lit(2)).is_err());
    }

    #[test]
    fn no_implied_examples() {
        let f = formula(&[&[-1, 2], &[-2, 3], &[-1, 3]]);
        let r = check(&f).unwrap();
        assert_eq!(r.regime, Some(Regime::ConsistentNoImplied));
        assert_eq!(verdicts(&f), naive(&f));
        assert_eq!(r.witness, f.position(&Clause::from_dimacs(&[-1, 3])));
        assert!(!check(&formula(&[&[-1, 2], &[-2, 3]])).unwrap().redundant);
        assert!(!check(&Formula::empty()).unwrap().redundant);
        // a seed reachable only from itself
        let f = formula(&[&[-1, 2], &[-1, 3], &[-2, 4], &[-4, 2]]);
        assert!(!check(&f).unwrap().redundant);
    }

    #[test]
    fn implied_example_matches_naive() {
        let f = formula(&[&[1, 2], &[1, 3], &[-2, 4], &[-3, -4], &[-1, 4]]);
        assert_eq!(verdicts(&f), naive(&f));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]
        #[test]
        fn matches_naive_loop(f in arb_two_cnf(6, 12)) {
            prop_assert_eq!(verdicts(&f), naive(&f));
            let r = check(&f).unwrap();
            prop_assert_eq!(r.redundant, r.per_clause.iter().any(|v| v.is_redundant()));
            for i in 0..f.len() {
                prop_assert_eq!(is_clause_redundant(&f, i).unwrap(), r.per_clause[i].is_redundant());
            }
        }

        #[test]
        fn irredundance_is_antitone(f in arb_two_cnf(5, 10), mask in any::<u16>()) {
            let r = check(&f).unwrap();
            let sub: Vec<usize> = (0..f.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let g = f.subset(&sub).unwrap();
            let rg = check(&g).unwrap();
            for (j, &i) in sub.iter().enumerate() {
                if !r.per_clause[i].is_redundant() {
                    prop_assert!(!rg.per_clause[j].is_redundant());
                }
            }
        }
    }
}
