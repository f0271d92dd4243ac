//! Brute-force oracles shared by the unit tests.

use proptest::prelude::*;

use crate::cnf::{Clause, Formula, Lit};

pub fn lit(v: i64) -> Lit {
    Lit::from_dimacs(v).unwrap()
}

pub fn formula(clauses: &[&[i64]]) -> Formula {
    Formula::from_dimacs_clauses(clauses)
}

fn satisfied(c: &Clause, bits: u32) -> bool {
    c.lits()
        .iter()
        .any(|l| ((bits >> (l.var() - 1)) & 1 == 1) == l.is_positive())
}

fn vars_of(fs: &[&Formula], c: Option<&Clause>) -> u32 {
    let mut n = fs.iter().map(|f| f.num_vars()).max().unwrap_or(0);
    if let Some(c) = c {
        n = n.max(c.max_var());
    }
    assert!(n <= 20, "truth tables limited to 20 variables");
    n
}

pub fn models(f: &Formula, n: u32) -> impl Iterator<Item = u32> + '_ {
    (0..1u32 << n).filter(move |&b| f.clauses().iter().all(|c| satisfied(c, b)))
}

pub fn truth_table_satisfiable(f: &Formula) -> bool {
    let n = vars_of(&[f], None);
    models(f, n).next().is_some()
}

pub fn truth_table_entails(f: &Formula, c: &Clause) -> bool {
    let n = vars_of(&[f], Some(c));
    models(f, n).all(|b| satisfied(c, b))
}

pub fn truth_table_equivalent(f: &Formula, g: &Formula) -> bool {
    let n = vars_of(&[f, g], None);
    (0..1u32 << n).all(|b| {
        f.clauses().iter().all(|c| satisfied(c, b)) == g.clauses().iter().all(|c| satisfied(c, b))
    })
}

/// Subsets of `f` (as id lists) that are equivalent and irredundant, by
/// truth tables over every subset.
pub fn brute_force_ies(f: &Formula) -> Vec<Vec<usize>> {
    let m = f.len();
    assert!(m <= 16);
    let equiv: Vec<bool> = (0..1u32 << m)
        .map(|mask| {
            let ids: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            truth_table_equivalent(f, &f.subset(&ids).unwrap())
        })
        .collect();
    (0..1u32 << m)
        .filter(|&mask| {
            equiv[mask as usize]
                && (0..m).all(|i| mask >> i & 1 == 0 || !equiv[(mask & !(1 << i)) as usize])
        })
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Random 2CNF formulas (units allowed) over up to `vars` variables.
pub fn arb_two_cnf(vars: u32, max_clauses: usize) -> impl Strategy<Value = Formula> {
    let lit = (1..=vars as i64, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
    let clause = prop_oneof![
        1 => lit.clone().prop_map(|a| vec![a]),
        5 => (lit.clone(), lit).prop_filter("tautology", |(a, b)| a != &-b).prop_map(|(a, b)| vec![a, b]),
    ];
    proptest::collection::vec(clause, 0..=max_clauses).prop_map(move |cs| {
        let cs: Vec<Clause> = cs.iter().map(|c| Clause::from_dimacs(c)).collect();
        Formula::with_duplicates(vars, cs).unwrap().0
    })
}
