//! Horn formulas: forward chaining decides entailment, and the per-clause
//! questions reduce to it.

use crate::cnf::{Clause, Formula};
use crate::error::CnfError;
use crate::exact::{self, SearchBudget, SearchError};
use crate::graph::all_clauses;
use crate::redundancy::{RedundancyReport, Verdict, VerdictSource};

/// Clauses split into body variables and an optional head, with a
/// variable-to-clause index for counter-based propagation.
#[derive(Clone, Debug)]
pub struct HornSolver {
    num_vars: u32,
    body: Vec<Vec<u32>>,
    head: Vec<Option<u32>>,
    watch: Vec<Vec<u32>>,
}

impl HornSolver {
    pub fn new(f: &Formula) -> Result<HornSolver, CnfError> {
        if !f.kind().is_horn() {
            return Err(CnfError::NotHorn);
        }
        let n = f.num_vars();
        let mut body = Vec::with_capacity(f.len());
        let mut head = Vec::with_capacity(f.len());
        let mut watch = vec![Vec::new(); n as usize + 1];
        for (k, c) in f.clauses().iter().enumerate() {
            let mut b = Vec::new();
            let mut h = None;
            for l in c.lits() {
                if l.is_positive() {
                    h = Some(l.var());
                } else {
                    b.push(l.var());
                    watch[l.var() as usize].push(k as u32);
                }
            }
            body.push(b);
            head.push(h);
        }
        Ok(HornSolver {
            num_vars: n,
            body,
            head,
            watch,
        })
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    /// Forward chaining from `facts` over the allowed clauses; true when a
    /// headless clause fires or a variable in `goals` becomes true.
    pub fn refutes(&self, allow: &dyn Fn(usize) -> bool, facts: &[u32], goals: &[u32]) -> bool {
        let n = self.num_vars as usize;
        let mut truth = vec![false; n + 1];
        let mut is_goal = vec![false; n + 1];
        for &g in goals {
            if (g as usize) <= n {
                is_goal[g as usize] = true;
            }
        }
        let mut missing: Vec<usize> = self.body.iter().map(|b| b.len()).collect();
        let mut queue: Vec<u32> = Vec::new();
        let assert = |v: u32, truth: &mut Vec<bool>, queue: &mut Vec<u32>| -> bool {
            if (v as usize) > n || truth[v as usize] {
                return false;
            }
            truth[v as usize] = true;
            queue.push(v);
            is_goal[v as usize]
        };
        for &v in facts {
            if goals.contains(&v) || assert(v, &mut truth, &mut queue) {
                return true;
            }
        }
        for k in 0..self.body.len() {
            if missing[k] == 0 && allow(k) {
                match self.head[k] {
                    None => return true,
                    Some(h) => {
                        if assert(h, &mut truth, &mut queue) {
                            return true;
                        }
                    }
                }
            }
        }
        while let Some(v) = queue.pop() {
            for &k in &self.watch[v as usize] {
                let k = k as usize;
                missing[k] -= 1;
                if missing[k] == 0 && allow(k) {
                    match self.head[k] {
                        None => return true,
                        Some(h) => {
                            if assert(h, &mut truth, &mut queue) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    /// Entailment of `c` by the allowed clauses: assert the negation of `c`
    /// and look for a contradiction.
    pub fn entails_filtered(&self, c: &Clause, allow: &dyn Fn(usize) -> bool) -> bool {
        let facts: Vec<u32> = c
            .lits()
            .iter()
            .filter(|l| !l.is_positive())
            .map(|l| l.var())
            .collect();
        let goals: Vec<u32> = c
            .lits()
            .iter()
            .filter(|l| l.is_positive())
            .map(|l| l.var())
            .collect();
        self.refutes(allow, &facts, &goals)
    }

    pub fn is_consistent(&self) -> bool {
        !self.refutes(&all_clauses, &[], &[])
    }
}

pub fn horn_entails(f: &Formula, c: &Clause) -> Result<bool, CnfError> {
    Ok(HornSolver::new(f)?.entails_filtered(c, &all_clauses))
}

/// Per-clause removal test with forward chaining.
pub fn horn_redundancy(f: &Formula) -> Result<RedundancyReport, CnfError> {
    let s = HornSolver::new(f)?;
    let per_clause = (0..f.len())
        .map(|i| {
            if s.entails_filtered(f.clause(i), &|k| k != i) {
                Verdict::Redundant
            } else {
                Verdict::Irredundant
            }
        })
        .collect();
    Ok(RedundancyReport::from_verdicts(
        per_clause,
        vec![VerdictSource::Horn; f.len()],
        None,
        false,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornBasics {
    pub in_all: Vec<bool>,
    pub unique: bool,
}

/// Clauses in every irredundant equivalent subset, and whether that subset
/// is the only one.
pub fn horn_ies_basics(f: &Formula) -> Result<HornBasics, CnfError> {
    let s = HornSolver::new(f)?;
    let in_all: Vec<bool> = (0..f.len())
        .map(|i| !s.entails_filtered(f.clause(i), &|k| k != i))
        .collect();
    let keep = |k: usize| in_all[k];
    let unique = f.clauses().iter().all(|c| s.entails_filtered(c, &keep));
    Ok(HornBasics { in_all, unique })
}

/// `sub` is equivalent to `f` and irredundant.
pub fn horn_is_ies(f: &Formula, sub: &[usize]) -> Result<bool, CnfError> {
    for &i in sub {
        f.check_id(i)?;
    }
    let s = HornSolver::new(f)?;
    let keep = |k: usize| sub.contains(&k);
    if !f.clauses().iter().all(|c| s.entails_filtered(c, &keep)) {
        return Ok(false);
    }
    Ok(sub
        .iter()
        .all(|&i| !s.entails_filtered(f.clause(i), &|k| k != i && keep(k))))
}

/// Fewest clauses of an equivalent subset, with one such subset.
pub fn horn_min_ies_size(
    f: &Formula,
    budget: &SearchBudget,
) -> Result<(usize, Vec<usize>), SearchError> {
    let m = exact::min_ies_size_exact_horn(f, budget)?;
    Ok((m.ies.len(), m.ies))
}
