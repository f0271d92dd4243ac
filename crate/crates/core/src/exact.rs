//! Exponential reference searches over clause subsets: enumeration of all
//! irredundant equivalent subsets, minimum weight, and presence of a clause.
//!
//! Subsets are `u128` bit masks over the searched clauses, so at most 128
//! clauses (after unit expansion) can be handled.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cnf::{eliminate_units, Clause, Formula, Lit, WeightedFormula};
use crate::error::CnfError;
use crate::horn::HornSolver;

pub type Mask = u128;

const MASK_BITS: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest formula (in input clauses) the search accepts.
    pub max_clauses: usize,
    /// Search nodes before giving up.
    pub max_nodes: u64,
    pub time_cap: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_clauses: 24,
            max_nodes: 20_000_000,
            time_cap: Some(Duration::from_secs(60)),
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> SearchBudget {
        SearchBudget {
            max_clauses: MASK_BITS,
            max_nodes: u64::MAX,
            time_cap: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Exhausted {
    #[error("{count} clauses exceed the search limit of {cap}")]
    TooManyClauses { count: usize, cap: usize },
    #[error("node budget of {0} exhausted")]
    Nodes(u64),
    #[error("time cap of {0:?} exhausted")]
    Time(Duration),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Exhausted(#[from] Exhausted),
}

/// Entailment between subsets of a fixed clause list.
pub trait SubsetOracle {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn weight(&self, i: usize) -> u64;

    /// Whether the clauses in `mask` entail clause `i`.
    fn entails(&self, mask: Mask, i: usize) -> bool;

    /// Lowest clause outside `mask` that `mask` does not entail.
    fn first_unentailed(&self, mask: Mask) -> Option<usize> {
        (0..self.len()).find(|&i| mask >> i & 1 == 0 && !self.entails(mask, i))
    }

    fn full(&self) -> Mask {
        if self.len() == MASK_BITS {
            Mask::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    fn weight_of(&self, mask: Mask) -> u64 {
        bits(mask).map(|i| self.weight(i)).sum()
    }

    fn equivalent(&self, mask: Mask) -> bool {
        self.first_unentailed(mask).is_none()
    }
}

pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn mask_of(ids: &[usize]) -> Mask {
    ids.iter().fold(0, |m, &i| m | 1 << i)
}

/// Binary clauses over a literal set of size `2n`; entailment through the
/// transitive closure of the subset's implication graph.
pub struct TwoCnfOracle {
    nodes: usize,
    words: usize,
    ends: Vec<(Lit, Lit)>,
    weights: Vec<u64>,
}

impl TwoCnfOracle {
    pub fn new(wf: &WeightedFormula) -> Result<TwoCnfOracle, Exhausted> {
        if wf.base.len() > MASK_BITS {
            return Err(Exhausted::TooManyClauses {
                count: wf.base.len(),
                cap: MASK_BITS,
            });
        }
        let nodes = 2 * wf.num_vars as usize;
        let ends = wf
            .base
            .iter()
            .map(|c| match c.lits() {
                [a, b] => (*a, *b),
                _ => unreachable!("base clauses are binary"),
            })
            .collect();
        Ok(TwoCnfOracle {
            nodes,
            words: nodes.div_ceil(64).max(1),
            ends,
            weights: wf.weight.iter().map(|&w| u64::from(w)).collect(),
        })
    }

    /// Reachability rows, one per literal, each containing the literal.
    fn closure(&self, mask: Mask) -> Vec<u64> {
        let (n, w) = (self.nodes, self.words);
        let mut adj = vec![Vec::new(); n];
        for i in bits(mask) {
            let (a, b) = self.ends[i];
            adj[(!a).index()].push(b.index());
            adj[(!b).index()].push(a.index());
        }
        let mut rows = vec![0u64; n * w];
        let mut stack = Vec::new();
        for s in 0..n {
            let row = &mut rows[s * w..(s + 1) * w];
            row[s / 64] |= 1 << (s % 64);
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if row[v / 64] >> (v % 64) & 1 == 0 {
                        row[v / 64] |= 1 << (v % 64);
                        stack.push(v);
                    }
                }
            }
        }
        rows
    }

    fn has(&self, rows: &[u64], from: Lit, to: Lit) -> bool {
        let (f, t) = (from.index(), to.index());
        rows[f * self.words + t / 64] >> (t % 64) & 1 == 1
    }

    fn inconsistent(&self, rows: &[u64]) -> bool {
        (0..self.nodes / 2).any(|v| {
            let p = Lit::from_index(2 * v);
            self.has(rows, p, !p) && self.has(rows, !p, p)
        })
    }

    fn entails_with(&self, rows: &[u64], inconsistent: bool, i: usize) -> bool {
        let (a, b) = self.ends[i];
        inconsistent || self.has(rows, !a, a) || self.has(rows, !b, b) || self.has(rows, !a, b)
    }
}

impl SubsetOracle for TwoCnfOracle {
    fn len(&self) -> usize {
        self.ends.len()
    }

    fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    fn entails(&self, mask: Mask, i: usize) -> bool {
        if mask >> i & 1 == 1 {
            return true;
        }
        let rows = self.closure(mask);
        self.entails_with(&rows, self.inconsistent(&rows), i)
    }

    fn first_unentailed(&self, mask: Mask) -> Option<usize> {
        let rows = self.closure(mask);
        let inc = self.inconsistent(&rows);
        (0..self.len()).find(|&i| mask >> i & 1 == 0 && !self.entails_with(&rows, inc, i))
    }
}

/// Horn clauses of any width, weight two half-units each.
pub struct HornOracle {
    solver: HornSolver,
    clauses: Vec<Clause>,
}

impl HornOracle {
    pub fn new(f: &Formula) -> Result<HornOracle, SearchError> {
        if f.len() > MASK_BITS {
            return Err(Exhausted::TooManyClauses {
                count: f.len(),
                cap: MASK_BITS,
            }
            .into());
        }
        Ok(HornOracle {
            solver: HornSolver::new(f)?,
            clauses: f.clauses().to_vec(),
        })
    }
}

impl SubsetOracle for HornOracle {
    fn len(&self) -> usize {
        self.clauses.len()
    }

    fn weight(&self, _: usize) -> u64 {
        2
    }

    fn entails(&self, mask: Mask, i: usize) -> bool {
        mask >> i & 1 == 1
            || self
                .solver
                .entails_filtered(&self.clauses[i], &|k| mask >> k & 1 == 1)
    }
}

struct Meter {
    nodes: u64,
    max_nodes: u64,
    start: Instant,
    cap: Option<Duration>,
}

impl Meter {
    fn new(b: &SearchBudget) -> Meter {
        Meter {
            nodes: 0,
            max_nodes: b.max_nodes,
            start: Instant::now(),
            cap: b.time_cap,
        }
    }

    fn tick(&mut self) -> Result<(), Exhausted> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Exhausted::Nodes(self.max_nodes));
        }
        if let Some(cap) = self.cap {
            if self.nodes.is_multiple_of(256) && self.start.elapsed() > cap {
                return Err(Exhausted::Time(cap));
            }
        }
        Ok(())
    }
}

/// Clauses whose removal from the whole set loses equivalence.
pub fn forced<O: SubsetOracle + ?Sized>(o: &O) -> Mask {
    let full = o.full();
    bits(full)
        .filter(|&i| !o.entails(full & !(1 << i), i))
        .fold(0, |m, i| m | 1 << i)
}

/// Drop clauses from `mask` in ascending order while equivalence holds,
/// never dropping those in `keep`.
pub fn shrink<O: SubsetOracle + ?Sized>(o: &O, mask: Mask, keep: Mask) -> Mask {
    let mut m = mask;
    for i in bits(mask & !keep) {
        if o.entails(m & !(1 << i), i) {
            m &= !(1 << i);
        }
    }
    m
}

fn some_redundant<O: SubsetOracle + ?Sized>(o: &O, mask: Mask) -> bool {
    bits(mask).any(|i| o.entails(mask & !(1 << i), i))
}

/// Every irredundant equivalent subset, heaviest first, ties by mask.
pub fn enumerate_with<O: SubsetOracle + ?Sized>(
    o: &O,
    budget: &SearchBudget,
) -> Result<Vec<Mask>, Exhausted> {
    let mut meter = Meter::new(budget);
    let fixed = forced(o);
    let free: Vec<usize> = bits(o.full() & !fixed).collect();
    let mut out = Vec::new();
    enumerate_rec(o, &free, 0, fixed, o.full() & !fixed, &mut out, &mut meter)?;
    out.sort_by(|&a, &b| o.weight_of(b).cmp(&o.weight_of(a)).then(a.cmp(&b)));
    Ok(out)
}

fn enumerate_rec<O: SubsetOracle + ?Sized>(
    o: &O,
    free: &[usize],
    at: usize,
    inc: Mask,
    und: Mask,
    out: &mut Vec<Mask>,
    meter: &mut Meter,
) -> Result<(), Exhausted> {
    meter.tick()?;
    if !o.equivalent(inc | und) || some_redundant(o, inc) {
        return Ok(());
    }
    if o.equivalent(inc) {
        out.push(inc);
        return Ok(());
    }
    let Some(&c) = free.get(at) else {
        return Ok(());
    };
    let bit = 1 << c;
    enumerate_rec(o, free, at + 1, inc | bit, und & !bit, out, meter)?;
    enumerate_rec(o, free, at + 1, inc, und & !bit, out, meter)
}

/// Minimum total weight of an equivalent subset, with a witness.
pub fn min_with<O: SubsetOracle + ?Sized>(
    o: &O,
    budget: &SearchBudget,
) -> Result<(u64, Mask), Exhausted> {
    let mut meter = Meter::new(budget);
    let n = o.len();
    let fixed = forced(o);
    let weights: Vec<u64> = (0..n).map(|i| o.weight(i)).collect();
    let mut cores: Vec<Mask> = bits(fixed).map(|i| 1 << i).collect();
    let greedy = shrink(o, o.full(), 0);
    let upper = (o.weight_of(greedy), greedy);
    loop {
        meter.tick()?;
        let Some((w, h)) = min_hitting_set(&cores, &weights, upper.0, &mut meter)? else {
            return Ok(upper);
        };
        match o.first_unentailed(h) {
            None => return Ok((w, h)),
            Some(c) => {
                let mut t = h;
                for j in 0..n {
                    let bit = 1 << j;
                    if t & bit == 0 && j != c && !o.entails(t | bit, c) {
                        t |= bit;
                    }
                }
                cores.push(o.full() & !t);
            }
        }
    }
}

/// Cheapest set meeting every core among those lighter than `bound`.
fn min_hitting_set(
    cores: &[Mask],
    weights: &[u64],
    bound: u64,
    meter: &mut Meter,
) -> Result<Option<(u64, Mask)>, Exhausted> {
    let mut best = None;
    let mut limit = bound;
    hs_rec(cores, weights, 0, 0, 0, &mut limit, &mut best, meter)?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn hs_rec(
    cores: &[Mask],
    weights: &[u64],
    chosen: Mask,
    banned: Mask,
    weight: u64,
    limit: &mut u64,
    best: &mut Option<(u64, Mask)>,
    meter: &mut Meter,
) -> Result<(), Exhausted> {
    meter.tick()?;
    let open: Vec<Mask> = cores.iter().copied().filter(|&k| k & chosen == 0).collect();
    if open.is_empty() {
        if weight < *limit {
            *limit = weight;
            *best = Some((weight, chosen));
        }
        return Ok(());
    }
    // Lower bound from cores sharing no candidate.
    let mut used: Mask = 0;
    let mut lb = 0;
    for &k in &open {
        let cand = k & !banned;
        if cand == 0 {
            return Ok(());
        }
        if cand & used == 0 {
            used |= cand;
            lb += bits(cand).map(|i| weights[i]).min().unwrap_or(0);
        }
    }
    if weight + lb >= *limit {
        return Ok(());
    }
    let core = *open
        .iter()
        .min_by_key(|&&k| (k & !banned).count_ones())
        .expect("open core");
    let mut cand: Vec<usize> = bits(core & !banned).collect();
    cand.sort_by_key(|&i| (weights[i], i));
    let mut ban = banned;
    for i in cand {
        hs_rec(
            cores,
            weights,
            chosen | 1 << i,
            ban,
            weight + weights[i],
            limit,
            best,
            meter,
        )?;
        ban |= 1 << i;
    }
    Ok(())
}

/// An irredundant equivalent subset containing clause `g`, if any.
pub fn in_some_with<O: SubsetOracle + ?Sized>(
    o: &O,
    g: usize,
    budget: &SearchBudget,
) -> Result<Option<Mask>, Exhausted> {
    let fixed = forced(o);
    let gbit = 1 << g;
    if fixed & gbit != 0 {
        return Ok(Some(shrink(o, o.full(), gbit)));
    }
    let mut meter = Meter::new(budget);
    let free: Vec<usize> = bits(o.full() & !fixed & !gbit).collect();
    let found = presence_rec(o, g, &free, 0, fixed, o.full() & !fixed & !gbit, &mut meter)?;
    Ok(found.map(|t| shrink(o, t | gbit, gbit)))
}

fn presence_rec<O: SubsetOracle + ?Sized>(
    o: &O,
    g: usize,
    free: &[usize],
    at: usize,
    inc: Mask,
    und: Mask,
    meter: &mut Meter,
) -> Result<Option<Mask>, Exhausted> {
    meter.tick()?;
    let gbit = 1 << g;
    if o.entails(inc, g) || !o.equivalent(inc | und | gbit) {
        return Ok(None);
    }
    if o.equivalent(inc | gbit) {
        return Ok(Some(inc));
    }
    let Some(&c) = free.get(at) else {
        return Ok(None);
    };
    let bit = 1 << c;
    if !o.entails(inc | bit, g) {
        if let Some(t) = presence_rec(o, g, free, at + 1, inc | bit, und & !bit, meter)? {
            return Ok(Some(t));
        }
    }
    presence_rec(o, g, free, at + 1, inc, und & !bit, meter)
}

/// Searchable view of a formula: 2CNF over the unit-expanded clauses, or
/// Horn over the clauses themselves.
pub enum Searchable {
    TwoCnf {
        wf: WeightedFormula,
        oracle: TwoCnfOracle,
    },
    Horn(HornOracle),
}

impl Searchable {
    pub fn new(f: &Formula, budget: &SearchBudget, horn: bool) -> Result<Searchable, SearchError> {
        if f.len() > budget.max_clauses {
            return Err(Exhausted::TooManyClauses {
                count: f.len(),
                cap: budget.max_clauses,
            }
            .into());
        }
        if f.kind().is_two_cnf() && !horn {
            let wf = eliminate_units(f)?;
            let oracle = TwoCnfOracle::new(&wf)?;
            Ok(Searchable::TwoCnf { wf, oracle })
        } else {
            Ok(Searchable::Horn(HornOracle::new(f)?))
        }
    }

    pub fn oracle(&self) -> &dyn SubsetOracle {
        match self {
            Searchable::TwoCnf { oracle, .. } => oracle,
            Searchable::Horn(o) => o,
        }
    }

    /// Input clause ids of a searched subset.
    pub fn original(&self, mask: Mask) -> Vec<usize> {
        let ids: Vec<usize> = bits(mask).collect();
        match self {
            Searchable::TwoCnf { wf, .. } => wf.original_ids(&ids),
            Searchable::Horn(_) => ids,
        }
    }

    /// A searched clause standing for input clause `id`.
    pub fn representative(&self, id: usize) -> usize {
        match self {
            Searchable::TwoCnf { wf, .. } => wf.images[id][0],
            Searchable::Horn(_) => id,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinIes {
    pub size_half_units: u64,
    pub ies: Vec<usize>,
}

/// All irredundant equivalent subsets as input clause ids.
pub fn enumerate_ies(f: &Formula, budget: &SearchBudget) -> Result<Vec<Vec<usize>>, SearchError> {
    enumerate_ies_as(f, budget, false)
}

pub fn enumerate_ies_as(
    f: &Formula,
    budget: &SearchBudget,
    horn: bool,
) -> Result<Vec<Vec<usize>>, SearchError> {
    let s = Searchable::new(f, budget, horn)?;
    Ok(enumerate_with(s.oracle(), budget)?
        .into_iter()
        .map(|m| s.original(m))
        .collect())
}

pub fn min_ies_size_exact(f: &Formula, budget: &SearchBudget) -> Result<MinIes, SearchError> {
    min_ies_size_as(f, budget, false)
}

pub fn min_ies_size_as(
    f: &Formula,
    budget: &SearchBudget,
    horn: bool,
) -> Result<MinIes, SearchError> {
    let s = Searchable::new(f, budget, horn)?;
    let (w, m) = min_with(s.oracle(), budget)?;
    Ok(MinIes {
        size_half_units: w,
        ies: s.original(m),
    })
}

pub(crate) fn min_ies_size_exact_horn(
    f: &Formula,
    budget: &SearchBudget,
) -> Result<MinIes, SearchError> {
    min_ies_size_as(f, budget, true)
}

pub fn in_some_ies_exact(
    f: &Formula,
    id: usize,
    budget: &SearchBudget,
) -> Result<bool, SearchError> {
    Ok(in_some_ies_witness(f, id, budget, false)?.is_some())
}

/// Like [`in_some_ies_exact`], returning the subset found.
pub fn in_some_ies_witness(
    f: &Formula,
    id: usize,
    budget: &SearchBudget,
    horn: bool,
) -> Result<Option<Vec<usize>>, SearchError> {
    f.check_id(id)?;
    let s = Searchable::new(f, budget, horn)?;
    Ok(in_some_with(s.oracle(), s.representative(id), budget)?.map(|m| s.original(m)))
}

/// Equivalence of `f` and its subset `ids` by truth tables.
pub fn truth_table_equivalent(f: &Formula, ids: &[usize]) -> Result<bool, CnfError> {
    let n = f.num_vars();
    if n > 16 {
        return Err(CnfError::parse(
            0,
            "truth-table check limited to 16 variables",
        ));
    }
    let sat = |c: &Clause, b: u32| {
        c.lits()
            .iter()
            .any(|l| ((b >> (l.var() - 1)) & 1 == 1) == l.is_positive())
    };
    for &i in ids {
        f.check_id(i)?;
    }
    Ok((0..1u32 << n).all(|b| {
        let all = f.clauses().iter().all(|c| sat(c, b));
        let sub = ids.iter().all(|&i| sat(f.clause(i), b));
        all == sub
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use proptest::prelude::*;

    const F8: &[&[i64]] = &[&[-1, 2], &[-2, 3], &[-2, -3], &[1, 4], &[-4, 5], &[-4, -5]];

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn enumerate_examples() {
        let f = formula(&[&[-1, 2], &[-2, 3], &[-1, 3]]);
        let all = enumerate_ies(&f, &b()).unwrap();
        let mut want = vec![
            f.position(&Clause::from_dimacs(&[-1, 2])).unwrap(),
            f.position(&Clause::from_dimacs(&[-2, 3])).unwrap(),
        ];
        want.sort();
        assert_eq!(all, vec![want]);
        let chain = formula(&[&[-1, 2], &[-2, 3]]);
        assert_eq!(enumerate_ies(&chain, &b()).unwrap(), vec![vec![0, 1]]);
        let two = formula(&[&[-1, 2], &[-2, 1], &[-1, 3], &[-2, 3]]);
        assert_eq!(enumerate_ies(&two, &b()).unwrap().len(), 2);
        assert_eq!(
            enumerate_ies(&Formula::empty(), &b()).unwrap(),
            vec![Vec::<usize>::new()]
        );
    }

    #[test]
    fn min_examples() {
        assert_eq!(
            min_ies_size_exact(&formula(F8), &b())
                .unwrap()
                .size_half_units,
            12
        );
        assert_eq!(
            min_ies_size_exact(&Formula::empty(), &b())
                .unwrap()
                .size_half_units,
            0
        );
        let units = formula(&[&[1], &[-1], &[1, 2]]);
        let m = min_ies_size_exact(&units, &b()).unwrap();
        assert_eq!(m.size_half_units, 4);
        assert_eq!(m.ies.len(), 2);
    }

    #[test]
    fn budget_is_reported() {
        let f = formula(F8);
        let tight = SearchBudget {
            max_clauses: 3,
            ..b()
        };
        assert!(matches!(
            min_ies_size_exact(&f, &tight),
            Err(SearchError::Exhausted(Exhausted::TooManyClauses { .. }))
        ));
        let tiny = SearchBudget {
            max_nodes: 1,
            ..b()
        };
        assert!(matches!(
            enumerate_ies(&formula(&[&[-1, 2], &[-2, 1], &[-1, 3], &[-2, 3]]), &tiny),
            Err(SearchError::Exhausted(_))
        ));
    }

    #[test]
    fn presence_examples() {
        // l1=1 l2=2 l3=3 x=4 y=5; the clause (l1 l2) is in no subset
        let f = formula(&[
            &[1, 2],
            &[-1, 3],
            &[-3, 4],
            &[-3, -4],
            &[-2, -3],
            &[3, 5],
            &[3, -5],
        ]);
        let g = f.position(&Clause::from_dimacs(&[1, 2])).unwrap();
        assert!(!in_some_ies_exact(&f, g, &b()).unwrap());
        let chain = formula(&[&[-1, 2], &[-2, 3]]);
        assert!(in_some_ies_exact(&chain, 0, &b()).unwrap());
    }

    #[test]
    fn horn_search() {
        // units 1, 2; edge clauses into a=3; wide clause ¬a
        let f = formula(&[&[1], &[2], &[-1, 3], &[-2, 3], &[-3]]);
        let m = min_ies_size_as(&f, &b(), true).unwrap();
        assert_eq!(m.size_half_units, 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn enumeration_matches_brute_force(f in arb_two_cnf(4, 8)) {
            let mut got = enumerate_ies(&f, &b()).unwrap();
            got.sort();
            let mut want = brute_force_ies(&f);
            want.sort();
            prop_assert_eq!(&got, &want);
            let m = min_ies_size_exact(&f, &b()).unwrap();
            prop_assert_eq!(Some(m.size_half_units), want.iter().map(|s| 2 * s.len() as u64).min());
            prop_assert!(super::truth_table_equivalent(&f, &m.ies).unwrap());
            prop_assert!(want.contains(&m.ies));
            for i in 0..f.len() {
                prop_assert_eq!(in_some_ies_exact(&f, i, &b()).unwrap(), want.iter().any(|s| s.contains(&i)));
            }
        }
    }
}
