//! Formula families shared by the benchmarks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use twocnf_ies::{Clause, Formula, Lit};

/// Forward implications `a → b` with `b - a` at most 16: acyclic, so the
/// formula is consistent and entails no literal.
pub fn chain(rng: &mut ChaCha8Rng, n: u32, m: usize) -> Formula {
    let mut cs = BTreeSet::new();
    while cs.len() < m {
        let a = rng.gen_range(1..n);
        let b = (a + rng.gen_range(1..=16)).min(n);
        cs.insert(Clause::implication(Lit::pos(a), Lit::pos(b)));
    }
    Formula::new(n, cs.into_iter().collect()).unwrap()
}

/// Uniform random binary clauses, plus a few units.
pub fn random(rng: &mut ChaCha8Rng, n: u32, m: usize) -> Formula {
    let lit = |rng: &mut ChaCha8Rng| Lit::new(rng.gen_range(1..=n), rng.gen_bool(0.5));
    let mut cs = BTreeSet::new();
    while cs.len() < m {
        let a = lit(rng);
        let c = if rng.gen_ratio(1, 20) {
            Clause::new(vec![a])
        } else {
            let b = lit(rng);
            if a.var() == b.var() {
                continue;
            }
            Clause::new(vec![a, b])
        };
        cs.insert(c.unwrap());
    }
    Formula::new(n, cs.into_iter().collect()).unwrap()
}
