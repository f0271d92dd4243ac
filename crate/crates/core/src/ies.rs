//! Irredundant equivalent subsets: verification, the polynomial
//! constructions and decisions, and a report that falls back to exact
//! search for the rest.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::Serialize;

use crate::cnf::{Formula, Lit};
use crate::entailment::{Classification, Prepared, Regime};
use crate::error::{AnalysisError, CnfError};
use crate::exact::{self, SearchBudget, SearchError, Searchable};
use crate::graph::{all_clauses, Cyclicity, Sccs};
use crate::horn::{horn_ies_basics, horn_is_ies, HornSolver};
use crate::redundancy::{self, core_redundancy, RedundancyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    InAll,
    InSome,
    InNone,
    NeedsSearch,
}

impl Membership {
    pub fn in_some(self) -> Option<bool> {
        match self {
            Membership::InAll | Membership::InSome => Some(true),
            Membership::InNone => Some(false),
            Membership::NeedsSearch => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IesReport {
    /// `inconsistent`, `consistent-implying`, `consistent-no-implied` or
    /// `horn`.
    pub regime: String,
    pub cyclic: String,
    pub ies: Option<Vec<usize>>,
    pub min_size_half_units: Option<u64>,
    pub unique: Option<bool>,
    pub membership: Vec<Membership>,
    pub exact_used: bool,
    /// For each literal entailed false outside a cycle: the clause choices
    /// that keep it entailed, cheapest first.
    pub alternatives: Vec<Vec<Vec<usize>>>,
}

/// Everything the constructions share for one 2CNF formula.
pub struct Analysis {
    pub p: Prepared,
    pub cls: Classification,
    pub red: RedundancyReport,
    failed: Vec<bool>,
    touched: Vec<bool>,
    sccs: Sccs,
}

impl Analysis {
    pub fn new(f: &Formula) -> Result<Analysis, CnfError> {
        let p = Prepared::new(f)?;
        let cls = p.classify();
        let red = redundancy::check_prepared(&p, &cls);
        let failed = p.failed_literals();
        let touched = if cls.regime.is_consistent() {
            p.touched_base(&failed)
        } else {
            vec![false; p.wf.len()]
        };
        let sccs = p.graph.sccs();
        Ok(Analysis {
            p,
            cls,
            red,
            failed,
            touched,
            sccs,
        })
    }

    fn formula(&self) -> &Formula {
        &self.p.formula
    }

    fn weight(&self, k: usize) -> u64 {
        u64::from(self.p.wf.weight[k])
    }

    fn weight_of(&self, base: &BTreeSet<usize>) -> u64 {
        base.iter().map(|&k| self.weight(k)).sum()
    }

    fn originals(&self, base: &BTreeSet<usize>) -> Vec<usize> {
        self.p
            .wf
            .original_ids(&base.iter().copied().collect::<Vec<_>>())
    }

    fn on_cycle(&self, l: Lit) -> bool {
        self.sccs.component_of(l).len() >= 2
    }

    fn core_ok(&self) -> impl Fn(usize) -> bool + '_ {
        |k| !self.touched[k]
    }

    /// Cycle status of the clauses free of entailed literals.
    fn core_acyclic(&self) -> bool {
        let core = self.core_ok();
        let s = self.p.graph.sccs_filtered(&core);
        s.members.iter().all(|m| m.len() < 2)
    }

    fn unique_core(&self) -> BTreeSet<usize> {
        let core = self.core_ok();
        let red = core_redundancy(&self.p.graph, &core);
        (0..self.p.wf.len())
            .filter(|&k| !self.touched[k] && !red[k])
            .collect()
    }
}

/// `sub` is a subset of `f` equivalent to it and irredundant.
pub fn is_ies(f: &Formula, sub: &[usize]) -> Result<bool, CnfError> {
    for &i in sub {
        f.check_id(i)?;
    }
    let mut ids = sub.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if !f.kind().is_two_cnf() {
        return horn_is_ies(f, &ids);
    }
    let p = Prepared::new(f)?;
    let keep = |k: usize| ids.binary_search(&p.wf.source[k]).is_ok();
    if !f
        .clauses()
        .iter()
        .all(|c| p.entails_filtered(c.lits(), &keep))
    {
        return Ok(false);
    }
    Ok(!redundancy::check(&f.subset(&ids)?)?.redundant)
}

/// A clause is in every irredundant equivalent subset iff it is not
/// redundant.
pub fn in_all_ies(f: &Formula, id: usize) -> Result<bool, CnfError> {
    Ok(!redundancy::is_clause_redundant(f, id)?)
}

/// The irredundant clauses alone entail the formula.
pub fn has_unique_ies(f: &Formula) -> Result<bool, CnfError> {
    if !f.kind().is_two_cnf() {
        return Ok(horn_ies_basics(f)?.unique);
    }
    let p = Prepared::new(f)?;
    let cls = p.classify();
    Ok(unique_from(&p, &redundancy::check_prepared(&p, &cls)))
}

fn unique_from(p: &Prepared, red: &RedundancyReport) -> bool {
    let keep = |k: usize| !red.per_clause[p.wf.source[k]].is_redundant();
    p.formula
        .clauses()
        .iter()
        .all(|c| p.entails_filtered(c.lits(), &keep))
}

/// The single irredundant equivalent subset of an acyclic consistent
/// formula entailing no literal: the clauses `¬l ∨ l'` whose `l'` is not
/// reachable from another successor of `l` once `l` is removed.
pub fn unique_ies_acyclic(f: &Formula) -> Result<Vec<usize>, AnalysisError> {
    let p = Prepared::new(f)?;
    let cls = p.classify();
    if cls.regime != Regime::ConsistentNoImplied {
        return Err(AnalysisError::pre(format!(
            "regime is {}, not consistent without entailed literals",
            cls.regime.label()
        )));
    }
    if !cls.cyclic.is_acyclic() {
        return Err(AnalysisError::pre("formula is cyclic"));
    }
    let red = core_redundancy(&p.graph, &all_clauses);
    Ok((0..f.len()).filter(|&i| !red[p.wf.images[i][0]]).collect())
}

/// Clause choices keeping `l` entailed false when `l` is not on a cycle:
/// one clause to a successor that alone reaches a contradiction, or two
/// clauses to successors one of which reaches the other's opposite.
fn implied_options(a: &Analysis, l: Lit) -> Vec<(u64, Vec<usize>)> {
    let sets = a.p.graph.literal_sets(l);
    let clause_to = |t: Lit| sets.d[sets.c.iter().position(|&c| c == t).expect("successor")];
    let mut opts: Vec<(u64, Vec<usize>)> = Vec::new();
    for &s in &sets.s {
        let k = clause_to(s);
        opts.push((a.weight(k), vec![k]));
    }
    for &(x, y) in &sets.p {
        let (k1, k2) = (clause_to(x), clause_to(y));
        let mut ks = vec![k1, k2];
        ks.sort_unstable();
        opts.push((a.weight(k1) + a.weight(k2), ks));
    }
    opts.sort();
    opts
}

/// Polynomial construction for consistent acyclic formulas.
pub fn ies_consistent_acyclic(f: &Formula) -> Result<IesReport, AnalysisError> {
    let a = Analysis::new(f)?;
    if !a.cls.regime.is_consistent() {
        return Err(AnalysisError::Inconsistent);
    }
    if !a.cls.cyclic.is_acyclic() {
        return Err(AnalysisError::pre("formula is cyclic"));
    }
    let core = a.unique_core();
    let mut chosen = core.clone();
    let mut some: BTreeSet<usize> = BTreeSet::new();
    let mut only: BTreeSet<usize> = BTreeSet::new();
    let mut alternatives = Vec::new();
    for l in a.p.graph.literals() {
        if !a.failed[l.index()] {
            continue;
        }
        let opts = implied_options(&a, l);
        let (_, best) = opts
            .first()
            .ok_or_else(|| AnalysisError::pre(format!("no clause choice for {l}")))?;
        chosen.extend(best.iter().copied());
        for (_, ks) in &opts {
            some.extend(ks.iter().copied());
        }
        only.extend(
            opts[0]
                .1
                .iter()
                .copied()
                .filter(|k| opts.iter().all(|(_, ks)| ks.contains(k))),
        );
        alternatives.push(
            opts.iter()
                .map(|(_, ks)| a.originals(&ks.iter().copied().collect()))
                .collect(),
        );
    }
    let membership = (0..f.len())
        .map(|i| {
            let k = a.p.wf.images[i][0];
            if a.touched[k] {
                if only.contains(&k) {
                    Membership::InAll
                } else if some.contains(&k) {
                    Membership::InSome
                } else {
                    Membership::InNone
                }
            } else if core.contains(&k) {
                Membership::InAll
            } else {
                Membership::InNone
            }
        })
        .collect();
    Ok(IesReport {
        regime: a.cls.regime.label().to_string(),
        cyclic: a.cls.cyclic.label().to_string(),
        min_size_half_units: Some(a.weight_of(&chosen)),
        ies: Some(a.originals(&chosen)),
        unique: Some(unique_from(&a.p, &a.red)),
        membership,
        exact_used: false,
        alternatives,
    })
}

/// Weighted shortest paths between all literals, with parent links.
struct Distances {
    n: usize,
    dist: Vec<u64>,
    parent: Vec<(u32, u32)>,
}

const INF: u64 = u64::MAX / 4;

impl Distances {
    fn new(a: &Analysis) -> Distances {
        let g = &a.p.graph;
        let n = g.num_nodes();
        let mut dist = vec![INF; n * n];
        let mut parent = vec![(u32::MAX, u32::MAX); n * n];
        let mut heap = BinaryHeap::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            let prow = &mut parent[s * n..(s + 1) * n];
            row[s] = 0;
            heap.push(Reverse((0u64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > row[u] {
                    continue;
                }
                for (v, k) in g.successors(Lit::from_index(u)) {
                    let nd = d + a.weight(k);
                    if nd < row[v.index()] {
                        row[v.index()] = nd;
                        prow[v.index()] = (u as u32, k as u32);
                        heap.push(Reverse((nd, v.index())));
                    }
                }
            }
        }
        Distances { n, dist, parent }
    }

    fn d(&self, a: Lit, b: Lit) -> u64 {
        self.dist[a.index() * self.n + b.index()]
    }

    fn path(&self, a: Lit, b: Lit, out: &mut BTreeSet<usize>) {
        let mut v = b.index();
        while v != a.index() {
            let (u, k) = self.parent[a.index() * self.n + v];
            out.insert(k as usize);
            v = u as usize;
        }
    }
}

/// Minimum inconsistent subset size of an acyclic inconsistent formula,
/// in half-units, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InconsistentSize {
    pub size_half_units: u64,
    pub ies: Vec<usize>,
}

pub fn min_inconsistent_size_acyclic(f: &Formula) -> Result<InconsistentSize, AnalysisError> {
    let a = Analysis::new(f)?;
    if a.cls.regime != Regime::Inconsistent {
        return Err(AnalysisError::pre("formula is consistent"));
    }
    if !a.cls.cyclic.is_acyclic() {
        return Err(AnalysisError::pre("formula is cyclic"));
    }
    Ok(inconsistent_size(&a))
}

fn inconsistent_size(a: &Analysis) -> InconsistentSize {
    let dm = Distances::new(a);
    let g = &a.p.graph;
    let lits: Vec<Lit> = g.literals().collect();
    // cheapest contradiction from each literal and the clashing literal used
    let bot: Vec<(u64, Lit)> = lits
        .iter()
        .map(|&u| {
            lits.iter()
                .map(|&l| (dm.d(u, l).saturating_add(dm.d(l, !l)), l))
                .min()
                .expect("non-empty")
        })
        .collect();
    let add_bot = |u: Lit, out: &mut BTreeSet<usize>| {
        let l = bot[u.index()].1;
        dm.path(u, l, out);
        dm.path(l, !l, out);
    };
    let mut best: Option<(u64, BTreeSet<usize>)> = None;
    let mut consider = |cost: u64, build: &mut dyn FnMut(&mut BTreeSet<usize>)| {
        if cost >= INF || best.as_ref().is_some_and(|(b, _)| *b <= cost) {
            return;
        }
        let mut s = BTreeSet::new();
        build(&mut s);
        best = Some((cost, s));
    };
    for v in 1..=g.num_vars() {
        let (x, nx) = (Lit::pos(v), Lit::neg(v));
        consider(bot[x.index()].0 + bot[nx.index()].0, &mut |s| {
            add_bot(x, s);
            add_bot(nx, s);
        });
        for &j in &lits {
            let cost = dm
                .d(x, j)
                .saturating_add(dm.d(nx, j))
                .saturating_add(bot[j.index()].0);
            consider(cost, &mut |s| {
                dm.path(x, j, s);
                dm.path(nx, j, s);
                add_bot(j, s);
            });
        }
    }
    let (size, witness) = best.expect("inconsistent formula has a contradiction");
    InconsistentSize {
        size_half_units: size,
        ies: a.originals(&witness),
    }
}

/// Size of the clauses leaving the component of `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CyclicSize {
    /// Some frontier literal reaches a contradiction on its own: one
    /// clause per component literal.
    SingleExit {
        half_units: u64,
        clauses: Vec<usize>,
    },
    /// One component literal has two frontier successors reaching opposite
    /// literals: one clause more, or the same count when the two successors
    /// come from a unit clause.
    PairExit {
        half_units: u64,
        clauses: Vec<usize>,
    },
    /// Two distinct component literals are needed.
    NeedsSearch,
}

impl CyclicSize {
    pub fn half_units(&self) -> Option<u64> {
        match self {
            CyclicSize::SingleExit { half_units, .. } | CyclicSize::PairExit { half_units, .. } => {
                Some(*half_units)
            }
            CyclicSize::NeedsSearch => None,
        }
    }
}

/// Clauses with an edge out of the component of a literal entailed false.
pub fn size_cyclic_implied(f: &Formula, l: Lit) -> Result<CyclicSize, AnalysisError> {
    let a = Analysis::new(f)?;
    if !a.cls.regime.is_consistent() {
        return Err(AnalysisError::Inconsistent);
    }
    if l.var() > a.p.wf.original_vars || !a.failed[l.index()] {
        return Err(AnalysisError::pre(format!(
            "the negation of {l} is not entailed"
        )));
    }
    if !a.on_cycle(l) {
        return Err(AnalysisError::pre(format!(
            "{l} is not on a cycle of clauses"
        )));
    }
    Ok(cyclic_size(&a, l))
}

fn cyclic_size(a: &Analysis, l: Lit) -> CyclicSize {
    let g = &a.p.graph;
    let cc: Vec<Lit> = a.sccs.component_of(l).to_vec();
    let in_cc = |x: Lit| a.sccs.same(x, l);
    // clauses with no edge leaving the component
    let keep = |k: usize| {
        let (p, q) = g.clause_lits(k);
        !in_cc(!p) && !in_cc(!q)
    };
    let exits = |x: Lit| {
        g.successors(x)
            .filter(|(t, _)| !in_cc(*t))
            .collect::<Vec<_>>()
    };
    for &x in &cc {
        for (j, k) in exits(x) {
            if g.up_bottom_filtered(j, &keep).is_some() {
                let mut cs = in_tree(a, &cc, x);
                cs.push(k);
                return CyclicSize::SingleExit {
                    half_units: 2 * cc.len() as u64,
                    clauses: cs,
                };
            }
        }
    }
    let mut best: Option<(u64, Lit, usize, usize)> = None;
    for &x in &cc {
        let out = exits(x);
        for (i, &(j1, k1)) in out.iter().enumerate() {
            let c1 = g.up_closure_filtered(j1, &keep);
            for &(j2, k2) in &out[i + 1..] {
                let w = a.weight(k1) + a.weight(k2);
                if best.is_some_and(|b| b.0 <= w) {
                    continue;
                }
                let c2 = g.up_closure_filtered(j2, &keep);
                if c2.order().iter().any(|&y| c1.contains(!y)) {
                    best = Some((w, x, k1, k2));
                }
            }
        }
    }
    if let Some((w, x, k1, k2)) = best {
        let mut cs = in_tree(a, &cc, x);
        cs.extend([k1, k2]);
        return CyclicSize::PairExit {
            half_units: 2 * (cc.len() as u64 - 1) + w,
            clauses: cs,
        };
    }
    CyclicSize::NeedsSearch
}

/// One clause per component literal other than `root`, forming paths to
/// `root` inside the component.
fn in_tree(a: &Analysis, cc: &[Lit], root: Lit) -> Vec<usize> {
    let g = &a.p.graph;
    let mut seen: BTreeSet<Lit> = BTreeSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        for (v, k) in g.predecessors(u) {
            if a.sccs.same(v, root) && seen.insert(v) {
                out.push(k);
                queue.push_back(v);
            }
        }
    }
    debug_assert_eq!(seen.len(), cc.len());
    out
}

/// Presence in an acyclic inconsistent formula: removing the clause keeps
/// it consistent, or both of its literals still reach a contradiction
/// without it.
pub fn in_some_ies_acyclic_inconsistent(f: &Formula, id: usize) -> Result<bool, AnalysisError> {
    f.check_id(id)?;
    let a = Analysis::new(f)?;
    if a.cls.regime != Regime::Inconsistent {
        return Err(AnalysisError::pre("formula is consistent"));
    }
    if !a.cls.cyclic.is_acyclic() {
        return Err(AnalysisError::pre("formula is cyclic"));
    }
    Ok(presence_inconsistent(&a, id))
}

fn presence_inconsistent(a: &Analysis, id: usize) -> bool {
    let g = &a.p.graph;
    let k = a.p.wf.images[id][0];
    let rest = |j: usize| j != k;
    if g.is_consistent_filtered(&rest) {
        return true;
    }
    let (l1, l2) = g.clause_lits(k);
    g.up_bottom_filtered(l1, &rest).is_some() && g.up_bottom_filtered(l2, &rest).is_some()
}

/// Presence of a clause that is not on a cycle of clauses, for consistent
/// formulas.
pub fn in_some_ies_noncycle_clause(f: &Formula, id: usize) -> Result<bool, AnalysisError> {
    f.check_id(id)?;
    let a = Analysis::new(f)?;
    if !a.cls.regime.is_consistent() {
        return Err(AnalysisError::Inconsistent);
    }
    presence_consistent(&a, id).ok_or(AnalysisError::NeedsSearch(id))
}

fn presence_consistent(a: &Analysis, id: usize) -> Option<bool> {
    let g = &a.p.graph;
    let k = a.p.wf.images[id][0];
    let (p, q) = g.clause_lits(k);
    if a.touched[k] {
        // orient the clause as l1 → l2 with l1 entailed false
        for (l1, l2) in [(!p, q), (!q, p)] {
            if !a.failed[l1.index()] || g.reaches(l2, l1, &all_clauses) {
                continue;
            }
            return Some(exit_present(a, l1, l2));
        }
        return None;
    }
    let core = a.core_ok();
    let (l1, l2) = (!p, q);
    if g.reaches(l2, l1, &core) {
        return None;
    }
    let s = g.sccs_filtered(&core);
    let fwd = g.up_closure_filtered(l1, &core);
    let bwd = g.backward_reach(l2, &core);
    Some(
        fwd.order()
            .iter()
            .all(|&m| !bwd[m.index()] || s.same(m, l1) || s.same(m, l2)),
    )
}

/// Whether the edge `l1 → l2` leaving the component of `l1` is in some
/// subset: `l2` reaches a contradiction by itself over the clauses free of
/// negated component literals, it reaches the opposite of another exit
/// target and neither does so alone, or its opposite is in the component.
fn exit_present(a: &Analysis, l1: Lit, l2: Lit) -> bool {
    let g = &a.p.graph;
    let keep = |j: usize| {
        let (x, y) = g.clause_lits(j);
        !a.sccs.same(!x, l1) && !a.sccs.same(!y, l1)
    };
    let alone = |t: Lit| g.up_bottom_filtered(t, &keep).is_some();
    if a.sccs.same(!l2, l1) || alone(l2) {
        return true;
    }
    let c = g.up_closure_filtered(l2, &keep);
    a.sccs.component_of(l1).iter().any(|&x| {
        g.successors(x)
            .any(|(t, _)| !a.sccs.same(t, l1) && c.contains(!t) && !alone(t))
    })
}

/// Greedy subset: drop redundant clauses one at a time in id order.
fn greedy_ies(a: &Analysis) -> Vec<usize> {
    let f = a.formula();
    let mut kept: Vec<bool> = vec![true; f.len()];
    for i in 0..f.len() {
        if a.red.per_clause[i].is_redundant() {
            kept[i] = false;
            let keep = |k: usize| kept[a.p.wf.source[k]];
            if !a.p.entails_filtered(f.clause(i).lits(), &keep) {
                kept[i] = true;
            }
        }
    }
    (0..f.len()).filter(|&i| kept[i]).collect()
}

/// Minimum size for a consistent formula when every part has a polynomial
/// answer, with the subset realising it.
fn consistent_size(a: &Analysis) -> Option<(u64, BTreeSet<usize>)> {
    if !a.core_acyclic() {
        return None;
    }
    let mut chosen = a.unique_core();
    let mut done: BTreeSet<u32> = BTreeSet::new();
    for l in a.p.graph.literals() {
        if !a.failed[l.index()] {
            continue;
        }
        if a.on_cycle(l) {
            let c = a.sccs.comp[l.index()];
            if !done.insert(c) {
                continue;
            }
            match cyclic_size(a, l) {
                CyclicSize::SingleExit { clauses, .. } | CyclicSize::PairExit { clauses, .. } => {
                    chosen.extend(clauses)
                }
                CyclicSize::NeedsSearch => return None,
            }
        } else {
            let opts = implied_options(a, l);
            chosen.extend(opts.first()?.1.iter().copied());
        }
    }
    Some((a.weight_of(&chosen), chosen))
}

/// Full analysis: every question with a polynomial answer is answered
/// directly, the rest by exact search within `budget`.
pub fn report(f: &Formula, budget: &SearchBudget) -> Result<IesReport, CnfError> {
    report_as(f, budget, false)
}

/// As [`report`]; `horn` forces the Horn pipeline on formulas that are
/// both 2CNF and Horn.
pub fn report_as(f: &Formula, budget: &SearchBudget, horn: bool) -> Result<IesReport, CnfError> {
    if horn || !f.kind().is_two_cnf() {
        return horn_report(f, budget);
    }
    let a = Analysis::new(f)?;
    let mut r = IesReport {
        regime: a.cls.regime.label().to_string(),
        cyclic: a.cls.cyclic.label().to_string(),
        ies: None,
        min_size_half_units: None,
        unique: Some(unique_from(&a.p, &a.red)),
        membership: Vec::with_capacity(f.len()),
        exact_used: false,
        alternatives: Vec::new(),
    };
    let acyclic = a.cls.cyclic == Cyclicity::Acyclic;
    for i in 0..f.len() {
        let m = if !a.red.per_clause[i].is_redundant() {
            Membership::InAll
        } else {
            let some = match a.cls.regime {
                Regime::Inconsistent if acyclic => Some(presence_inconsistent(&a, i)),
                Regime::Inconsistent => None,
                _ => presence_consistent(&a, i),
            };
            match some {
                Some(true) => Membership::InSome,
                Some(false) => Membership::InNone,
                None => Membership::NeedsSearch,
            }
        };
        r.membership.push(m);
    }
    match a.cls.regime {
        Regime::Inconsistent if acyclic => {
            let s = inconsistent_size(&a);
            r.min_size_half_units = Some(s.size_half_units);
            r.ies = Some(s.ies);
        }
        Regime::Inconsistent => {}
        _ => {
            if let Some((w, chosen)) = consistent_size(&a) {
                r.min_size_half_units = Some(w);
                r.ies = Some(a.originals(&chosen));
            }
            if acyclic {
                if let Ok(c) = ies_consistent_acyclic(f) {
                    r.alternatives = c.alternatives;
                }
            }
        }
    }
    resolve_by_search(f, budget, false, &mut r);
    if r.ies.is_none() {
        r.ies = Some(greedy_ies(&a));
    }
    Ok(r)
}

fn resolve_by_search(f: &Formula, budget: &SearchBudget, horn: bool, r: &mut IesReport) {
    let pending_size = r.min_size_half_units.is_none();
    let pending: Vec<usize> = (0..f.len())
        .filter(|&i| r.membership[i] == Membership::NeedsSearch)
        .collect();
    if !pending_size && pending.is_empty() {
        return;
    }
    let s = match Searchable::new(f, budget, horn) {
        Ok(s) => s,
        Err(_) => return,
    };
    r.exact_used = true;
    if pending_size {
        if let Ok((w, m)) = exact::min_with(s.oracle(), budget) {
            r.min_size_half_units = Some(w);
            if r.ies.is_none() {
                r.ies = Some(s.original(m));
            }
        }
    }
    for i in pending {
        if let Ok(found) = exact::in_some_with(s.oracle(), s.representative(i), budget) {
            r.membership[i] = if found.is_some() {
                Membership::InSome
            } else {
                Membership::InNone
            };
        }
    }
}

fn horn_report(f: &Formula, budget: &SearchBudget) -> Result<IesReport, CnfError> {
    let solver = HornSolver::new(f)?;
    let basics = horn_ies_basics(f)?;
    let mut r = IesReport {
        regime: "horn".to_string(),
        cyclic: "n/a".to_string(),
        ies: None,
        min_size_half_units: None,
        unique: Some(basics.unique),
        membership: basics
            .in_all
            .iter()
            .map(|&all| {
                if all {
                    Membership::InAll
                } else if basics.unique {
                    Membership::InNone
                } else {
                    Membership::NeedsSearch
                }
            })
            .collect(),
        exact_used: false,
        alternatives: Vec::new(),
    };
    if basics.unique {
        let ids: Vec<usize> = (0..f.len()).filter(|&i| basics.in_all[i]).collect();
        r.min_size_half_units = Some(2 * ids.len() as u64);
        r.ies = Some(ids);
    }
    resolve_by_search(f, budget, true, &mut r);
    if r.ies.is_none() {
        let mut kept = vec![true; f.len()];
        for i in 0..f.len() {
            kept[i] = false;
            if !solver.entails_filtered(f.clause(i), &|k| kept[k]) {
                kept[i] = true;
            }
        }
        r.ies = Some((0..f.len()).filter(|&i| kept[i]).collect());
    }
    Ok(r)
}

/// Exact search wrapper reporting the subset and its size.
pub fn min_size_exact(
    f: &Formula,
    budget: &SearchBudget,
    horn: bool,
) -> Result<(u64, Vec<usize>), SearchError> {
    let m = exact::min_ies_size_as(f, budget, horn)?;
    Ok((m.size_half_units, m.ies))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use proptest::prelude::*;

    fn ids(f: &Formula, cs: &[&[i64]]) -> Vec<usize> {
        let mut v: Vec<usize> = cs
            .iter()
            .map(|c| f.position(&crate::cnf::Clause::from_dimacs(c)).unwrap())
            .collect();
        v.sort_unstable();
        v
    }

    fn no_search() -> SearchBudget {
        SearchBudget {
            max_clauses: 0,
            ..SearchBudget::default()
        }
    }

    // x=1 a=2 b=3 c=4 d=5
    fn f8() -> Formula {
        formula(&[&[-1, 2], &[-2, 3], &[-2, -3], &[1, 4], &[-4, 5], &[-4, -5]])
    }

    // l=1 l'=2 l''=3 x=4 y=5
    fn cyclic_example() -> Formula {
        formula(&[
            &[-2, 1],
            &[-1, 2],
            &[-1, 3],
            &[-2, 4],
            &[-2, -4],
            &[-3, 5],
            &[-3, -5],
        ])
    }

    #[test]
    fn is_ies_examples() {
        let f = cyclic_example();
        let sub = ids(&f, &[&[-2, 1], &[-1, 3], &[-3, 5], &[-3, -5]]);
        assert!(is_ies(&f, &sub).unwrap());
        let sub = ids(&f, &[&[-2, 1], &[-3, 5], &[-3, -5], &[-1, 2]]);
        assert!(!is_ies(&f, &sub).unwrap());
        assert!(is_ies(&f8(), &(0..6).collect::<Vec<_>>()).unwrap());
        assert!(is_ies(&f8(), &[9]).is_err());
    }

    #[test]
    fn chain_shortcut() {
        // a=1 b=2 c=3
        let f = formula(&[&[-1, 2], &[-2, 3], &[-1, 3]]);
        assert!(in_all_ies(&f, ids(&f, &[&[-1, 2]])[0]).unwrap());
        assert!(!in_all_ies(&f, ids(&f, &[&[-1, 3]])[0]).unwrap());
        assert!(has_unique_ies(&f).unwrap());
        assert_eq!(
            unique_ies_acyclic(&f).unwrap(),
            ids(&f, &[&[-1, 2], &[-2, 3]])
        );
        let g = formula(&[&[-1, 2], &[-2, 1], &[-1, 3], &[-2, 3]]);
        assert!(!has_unique_ies(&g).unwrap());
        assert!(unique_ies_acyclic(&f8()).is_err());
    }

    #[test]
    fn inconsistent_sizes() {
        let s = min_inconsistent_size_acyclic(&f8()).unwrap();
        assert_eq!(s.size_half_units, 12);
        assert_eq!(s.ies, (0..6).collect::<Vec<_>>());
        let mut cs: Vec<&[i64]> = vec![&[-1, 2], &[-2, 3], &[-2, -3], &[1, 4], &[-4, 5], &[-4, -5]];
        cs.push(&[-1, 3]);
        let g = formula(&cs);
        let s = min_inconsistent_size_acyclic(&g).unwrap();
        assert_eq!(s.size_half_units, 12);
        assert!(is_ies(&g, &s.ies).unwrap());
        let u = formula(&[&[1], &[-1]]);
        assert_eq!(
            min_inconsistent_size_acyclic(&u).unwrap().size_half_units,
            4
        );
        assert!(min_inconsistent_size_acyclic(&cyclic_example()).is_err());
    }

    #[test]
    fn presence_inconsistent_examples() {
        let f = f8();
        assert!(in_some_ies_acyclic_inconsistent(&f, ids(&f, &[&[-1, 2]])[0]).unwrap());
        // x=1 a=2 b=3 c=4 d=5: the second route from x to a contradiction
        // runs through a, and ¬x reaches nothing without (¬x a)'s partner
        let g = formula(&[
            &[-1, 2],
            &[-2, 3],
            &[-2, -3],
            &[1, 4],
            &[-4, 5],
            &[-4, -5],
            &[-1, 4],
        ]);
        let e = ids(&g, &[&[-1, 4]])[0];
        let want = exact::in_some_ies_exact(&g, e, &SearchBudget::unlimited()).unwrap();
        assert_eq!(in_some_ies_acyclic_inconsistent(&g, e).unwrap(), want);
        assert!(in_some_ies_acyclic_inconsistent(&cyclic_example(), 0).is_err());
    }

    #[test]
    fn cyclic_component_size() {
        let f = cyclic_example();
        let s = size_cyclic_implied(&f, lit(1)).unwrap();
        assert!(
            matches!(s, CyclicSize::SingleExit { half_units: 4, .. }),
            "{s:?}"
        );
        assert!(size_cyclic_implied(&f, lit(3)).is_err());
        assert!(size_cyclic_implied(&f, lit(-1)).is_err());
        let r = report(&f, &no_search()).unwrap();
        assert_eq!(r.min_size_half_units, Some(8));
        assert!(!r.exact_used);
        assert!(is_ies(&f, r.ies.as_ref().unwrap()).unwrap());

        // a=1 b=2 p=3 q=4: a → p, a → q, p → ¬q, only a cycle a ↔ b
        let g = formula(&[&[-1, 2], &[-2, 1], &[-1, 3], &[-1, 4], &[-3, -4]]);
        let s = size_cyclic_implied(&g, lit(1)).unwrap();
        assert!(
            matches!(s, CyclicSize::PairExit { half_units: 6, .. }),
            "{s:?}"
        );
    }

    #[test]
    fn two_attachment_points_need_search() {
        // a=1 b=2 p=3 q=4: a ↔ b, a → p, b → q, p → ¬q
        let g = formula(&[&[-1, 2], &[-2, 1], &[-1, 3], &[-2, 4], &[-3, -4]]);
        assert_eq!(
            size_cyclic_implied(&g, lit(1)).unwrap(),
            CyclicSize::NeedsSearch
        );
        let r = report(&g, &SearchBudget::default()).unwrap();
        assert!(r.exact_used);
        assert_eq!(
            r.min_size_half_units,
            Some(
                exact::min_ies_size_exact(&g, &SearchBudget::default())
                    .unwrap()
                    .size_half_units
            )
        );
    }

    #[test]
    fn consistent_acyclic_choices() {
        // l=1 a=2 b=3 y=4: l → a, l → b, both a and b reach y and ¬y
        let f = formula(&[&[-1, 2], &[-1, 3], &[-2, 4], &[-2, -4], &[-3, 4], &[-3, -4]]);
        let r = ies_consistent_acyclic(&f).unwrap();
        assert_eq!(r.membership[ids(&f, &[&[-1, 2]])[0]], Membership::InSome);
        assert_eq!(r.membership[ids(&f, &[&[-1, 3]])[0]], Membership::InSome);
        assert_eq!(r.min_size_half_units, Some(2 * 5));
        // only one way out of l
        let g = formula(&[&[-1, 2], &[-2, 4], &[-2, -4]]);
        assert_eq!(
            ies_consistent_acyclic(&g).unwrap().membership,
            vec![Membership::InAll; 3]
        );
        // l → p, l → q, p → ¬q
        let h = formula(&[&[-1, 2], &[-1, 3], &[-2, -3]]);
        let r = ies_consistent_acyclic(&h).unwrap();
        assert_eq!(r.membership, vec![Membership::InAll; 3]);
        assert_eq!(r.min_size_half_units, Some(6));
        assert!(ies_consistent_acyclic(&f8()).is_err());
    }

    #[test]
    fn noncycle_presence_examples() {
        // a=1 b=2 c=3: a ↔ b, b → c, a → c
        let f = formula(&[&[-1, 2], &[-2, 1], &[-2, 3], &[-1, 3]]);
        for c in [&[-2, 3][..], &[-1, 3]] {
            assert!(in_some_ies_noncycle_clause(&f, ids(&f, &[c])[0]).unwrap());
        }
        assert!(matches!(
            in_some_ies_noncycle_clause(&f, ids(&f, &[&[-1, 2]])[0]),
            Err(AnalysisError::NeedsSearch(_))
        ));
        // a=1 m=2 c=3: a → m → c and a → c, with m outside both ends
        let g = formula(&[&[-1, 2], &[-2, 3], &[-1, 3]]);
        assert!(!in_some_ies_noncycle_clause(&g, ids(&g, &[&[-1, 3]])[0]).unwrap());
    }

    #[test]
    fn horn_report_examples() {
        // a=1 b=2 c=3: facts a, b, rule a ∧ b → c, and c
        let f = formula(&[&[1], &[2], &[-1, -2, 3], &[3]]);
        let r = report(&f, &SearchBudget::default()).unwrap();
        assert_eq!(r.regime, "horn");
        assert_eq!(r.min_size_half_units, Some(6));
        assert!(is_ies(&f, r.ies.as_ref().unwrap()).unwrap());
    }

    fn check_against_enumeration(f: &Formula, r: &IesReport) -> Result<(), TestCaseError> {
        let all = brute_force_ies(f);
        let best = all.iter().map(|s| 2 * s.len() as u64).min().unwrap();
        if let Some(w) = r.min_size_half_units {
            prop_assert_eq!(w, best);
        }
        if let Some(ies) = &r.ies {
            prop_assert!(all.contains(ies), "{:?} not among {:?}", ies, all);
        }
        prop_assert_eq!(r.unique, Some(all.len() == 1));
        for (i, m) in r.membership.iter().enumerate() {
            let some = all.iter().any(|s| s.contains(&i));
            let every = all.iter().all(|s| s.contains(&i));
            match m {
                Membership::InAll => prop_assert!(every),
                Membership::InSome => prop_assert!(some && !every),
                Membership::InNone => prop_assert!(!some),
                Membership::NeedsSearch => {}
            }
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn polynomial_answers_match_enumeration(f in arb_two_cnf(5, 9)) {
            let r = report(&f, &no_search()).unwrap();
            prop_assert!(!r.exact_used || r.membership.iter().all(|&m| m != Membership::NeedsSearch));
            check_against_enumeration(&f, &r)?;
        }

        #[test]
        fn searched_answers_match_enumeration(f in arb_two_cnf(5, 9)) {
            let r = report(&f, &SearchBudget::default()).unwrap();
            prop_assert!(r.min_size_half_units.is_some());
            prop_assert!(r.membership.iter().all(|&m| m != Membership::NeedsSearch));
            check_against_enumeration(&f, &r)?;
        }

        #[test]
        fn acyclic_construction_matches_enumeration(f in arb_two_cnf(5, 9)) {
            let cls = crate::entailment::classify(&f).unwrap();
            prop_assume!(cls.regime.is_consistent() && cls.cyclic.is_acyclic());
            let r = ies_consistent_acyclic(&f).unwrap();
            check_against_enumeration(&f, &r)?;
            if cls.regime == Regime::ConsistentNoImplied {
                prop_assert_eq!(brute_force_ies(&f), vec![unique_ies_acyclic(&f).unwrap()]);
            }
        }

        #[test]
        fn is_ies_matches_enumeration(f in arb_two_cnf(4, 7), pick in any::<u16>()) {
            let sub: Vec<usize> = (0..f.len()).filter(|i| pick >> i & 1 == 1).collect();
            prop_assert_eq!(is_ies(&f, &sub).unwrap(), brute_force_ies(&f).contains(&sub));
        }
    }
}
