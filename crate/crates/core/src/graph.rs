//! Implication graph of a binary formula and the reachability queries the
//! analyses are built on.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cnf::{Clause, Lit, WeightedFormula};
use crate::error::CnfError;

const NONE: u32 = u32::MAX;

/// Directed graph over the `2n` literals. A clause `a ∨ b` with id `k`
/// contributes `¬a → b` and `¬b → a`, both tagged `k`.
#[derive(Clone, Debug)]
pub struct ImplicationGraph {
    num_vars: u32,
    num_clauses: usize,
    out_start: Vec<u32>,
    out_edges: Vec<(u32, u32)>,
    in_start: Vec<u32>,
    in_edges: Vec<(u32, u32)>,
    ends: Vec<(Lit, Lit)>,
}

/// Accepts every clause.
pub fn all_clauses(_: usize) -> bool {
    true
}

fn csr(n: usize, mut edges: Vec<(u32, u32, u32)>) -> (Vec<u32>, Vec<(u32, u32)>) {
    edges.sort_unstable();
    let mut start = vec![0u32; n + 1];
    for &(u, _, _) in &edges {
        start[u as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    (start, edges.into_iter().map(|(_, v, c)| (v, c)).collect())
}

impl ImplicationGraph {
    /// Builds the graph of `clauses`, which must all be binary.
    pub fn new(num_vars: u32, clauses: &[Clause]) -> Result<ImplicationGraph, CnfError> {
        let n = 2 * num_vars as usize;
        let mut fwd = Vec::with_capacity(2 * clauses.len());
        let mut bwd = Vec::with_capacity(2 * clauses.len());
        let mut ends = Vec::with_capacity(clauses.len());
        for (k, c) in clauses.iter().enumerate() {
            let [a, b] = c.lits() else {
                return Err(CnfError::NotBinary(k));
            };
            let (a, b) = (*a, *b);
            let k = k as u32;
            for (u, v) in [(!a, b), (!b, a)] {
                fwd.push((u.index() as u32, v.index() as u32, k));
                bwd.push((v.index() as u32, u.index() as u32, k));
            }
            ends.push((a, b));
        }
        let (out_start, out_edges) = csr(n, fwd);
        let (in_start, in_edges) = csr(n, bwd);
        Ok(ImplicationGraph {
            num_vars,
            num_clauses: clauses.len(),
            out_start,
            out_edges,
            in_start,
            in_edges,
            ends,
        })
    }

    pub fn build(wf: &WeightedFormula) -> ImplicationGraph {
        ImplicationGraph::new(wf.num_vars, &wf.base).expect("weighted formulas are binary")
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_nodes(&self) -> usize {
        2 * self.num_vars as usize
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    pub fn num_edges(&self) -> usize {
        self.out_edges.len()
    }

    pub fn literals(&self) -> impl Iterator<Item = Lit> {
        (0..self.num_nodes()).map(Lit::from_index)
    }

    /// The two literals of clause `k`.
    pub fn clause_lits(&self, k: usize) -> (Lit, Lit) {
        self.ends[k]
    }

    /// The source of clause `k` read as the edge `from → to`.
    pub fn edge_of(&self, k: usize, from: Lit) -> Option<Lit> {
        let (a, b) = self.ends[k];
        if from == !a {
            Some(b)
        } else if from == !b {
            Some(a)
        } else {
            None
        }
    }

    /// Outgoing `(target, clause)` pairs in ascending target order.
    pub fn successors(&self, l: Lit) -> impl Iterator<Item = (Lit, usize)> + '_ {
        let i = l.index();
        self.out_edges[self.out_start[i] as usize..self.out_start[i + 1] as usize]
            .iter()
            .map(|&(v, c)| (Lit::from_index(v as usize), c as usize))
    }

    pub fn predecessors(&self, l: Lit) -> impl Iterator<Item = (Lit, usize)> + '_ {
        let i = l.index();
        self.in_edges[self.in_start[i] as usize..self.in_start[i + 1] as usize]
            .iter()
            .map(|&(v, c)| (Lit::from_index(v as usize), c as usize))
    }

    fn out_raw(&self, i: usize) -> &[(u32, u32)] {
        &self.out_edges[self.out_start[i] as usize..self.out_start[i + 1] as usize]
    }

    fn in_raw(&self, i: usize) -> &[(u32, u32)] {
        &self.in_edges[self.in_start[i] as usize..self.in_start[i + 1] as usize]
    }

    /// Unit propagation from `start` over every clause.
    pub fn up_closure(&self, start: Lit) -> Closure {
        self.up_closure_filtered(start, &all_clauses)
    }

    /// Unit propagation from `start` over the clauses accepted by `allow`.
    pub fn up_closure_filtered(&self, start: Lit, allow: &dyn Fn(usize) -> bool) -> Closure {
        let n = self.num_nodes();
        let mut c = Closure {
            start,
            reached: vec![false; n],
            parent: vec![None; n],
            depth: vec![NONE; n],
            order: Vec::new(),
        };
        c.reached[start.index()] = true;
        c.depth[start.index()] = 0;
        c.order.push(start);
        let mut head = 0;
        while head < c.order.len() {
            let u = c.order[head];
            head += 1;
            let d = c.depth[u.index()];
            for &(v, k) in self.out_raw(u.index()) {
                let v = v as usize;
                if c.reached[v] || !allow(k as usize) {
                    continue;
                }
                c.reached[v] = true;
                c.depth[v] = d + 1;
                c.parent[v] = Some((u, k as usize));
                c.order.push(Lit::from_index(v));
            }
        }
        c
    }

    /// True if `to` is reachable from `from` (a literal reaches itself).
    pub fn reaches(&self, from: Lit, to: Lit, allow: &dyn Fn(usize) -> bool) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.num_nodes()];
        let mut stack = vec![from.index()];
        seen[from.index()] = true;
        while let Some(u) = stack.pop() {
            for &(v, k) in self.out_raw(u) {
                let v = v as usize;
                if seen[v] || !allow(k as usize) {
                    continue;
                }
                if v == to.index() {
                    return true;
                }
                seen[v] = true;
                stack.push(v);
            }
        }
        false
    }

    /// Literals from which `to` is reachable, `to` included.
    pub fn backward_reach(&self, to: Lit, allow: &dyn Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.num_nodes()];
        let mut stack = vec![to.index()];
        seen[to.index()] = true;
        while let Some(u) = stack.pop() {
            for &(v, k) in self.in_raw(u) {
                let v = v as usize;
                if !seen[v] && allow(k as usize) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Whether unit propagation from `start` derives a pair of opposite
    /// literals, with a single-walk witness.
    pub fn up_bottom(&self, start: Lit) -> Option<ContradictionWitness> {
        self.up_bottom_filtered(start, &all_clauses)
    }

    pub fn up_bottom_filtered(
        &self,
        start: Lit,
        allow: &dyn Fn(usize) -> bool,
    ) -> Option<ContradictionWitness> {
        let c = self.up_closure_filtered(start, allow);
        // Earliest depth at which both polarities of some variable are known,
        // smallest variable first among those.
        let mut best: Option<(u32, u32)> = None;
        for &l in &c.order {
            if l.is_positive() && c.contains(!l) {
                let d = c.depth[l.index()].max(c.depth[(!l).index()]);
                let key = (d, l.var());
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, var) = best?;
        let v = Lit::pos(var);
        let to_v = c.path_to(v);
        let to_nv = c.path_to(!v);
        // Last common literal of the two tree paths.
        let mut common = 0;
        while common + 1 < to_v.len()
            && common + 1 < to_nv.len()
            && to_v[common + 1] == to_nv[common + 1]
        {
            common += 1;
        }
        let mut walk: Vec<Lit> = to_v.clone();
        // Reverse the l3 ⇒ ¬v segment: v → … → ¬l3.
        for &p in to_nv[common..to_nv.len() - 1].iter().rev() {
            walk.push(!p);
        }
        let mut seen = vec![false; self.num_nodes()];
        let mut cut = walk.len();
        for (i, &l) in walk.iter().enumerate() {
            if seen[(!l).index()] {
                cut = i + 1;
                break;
            }
            seen[l.index()] = true;
        }
        walk.truncate(cut);
        let clause_ids = walk
            .windows(2)
            .map(|w| {
                self.edge_clause(w[0], w[1], allow)
                    .expect("walk edges exist")
            })
            .collect();
        let last = *walk.last().expect("non-empty walk");
        Some(ContradictionWitness {
            start,
            clash_var: last.var(),
            detected_var: var,
            path: walk,
            clause_ids,
        })
    }

    /// Lowest clause id of an allowed edge `u → v`.
    pub fn edge_clause(&self, u: Lit, v: Lit, allow: &dyn Fn(usize) -> bool) -> Option<usize> {
        self.out_raw(u.index())
            .iter()
            .filter(|&&(t, k)| t as usize == v.index() && allow(k as usize))
            .map(|&(_, k)| k as usize)
            .min()
    }

    /// Strongly connected components of the allowed subgraph.
    pub fn sccs(&self) -> Sccs {
        self.sccs_filtered(&all_clauses)
    }

    /// Tarjan's algorithm without recursion. Components are numbered in
    /// reverse topological order: an edge `u → v` has `comp(u) >= comp(v)`.
    pub fn sccs_filtered(&self, allow: &dyn Fn(usize) -> bool) -> Sccs {
        let n = self.num_nodes();
        let mut index = vec![NONE; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![NONE; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut call: Vec<(u32, u32)> = Vec::new();
        let mut next = 0u32;
        let mut count = 0u32;
        for root in 0..n {
            if index[root] != NONE {
                continue;
            }
            call.push((root as u32, 0));
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root as u32);
            on_stack[root] = true;
            while let Some(&mut (u, ref mut pos)) = call.last_mut() {
                let u = u as usize;
                let edges = self.out_raw(u);
                if (*pos as usize) < edges.len() {
                    let (v, k) = edges[*pos as usize];
                    *pos += 1;
                    if !allow(k as usize) {
                        continue;
                    }
                    let v = v as usize;
                    if index[v] == NONE {
                        index[v] = next;
                        low[v] = next;
                        next += 1;
                        stack.push(v as u32);
                        on_stack[v] = true;
                        call.push((v as u32, 0));
                    } else if on_stack[v] {
                        low[u] = low[u].min(index[v]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p as usize] = low[p as usize].min(low[u]);
                    }
                    if low[u] == index[u] {
                        loop {
                            let w = stack.pop().expect("tarjan stack") as usize;
                            on_stack[w] = false;
                            comp[w] = count;
                            if w == u {
                                break;
                            }
                        }
                        count += 1;
                    }
                }
            }
        }
        let mut members = vec![Vec::new(); count as usize];
        for (i, &c) in comp.iter().enumerate() {
            members[c as usize].push(Lit::from_index(i));
        }
        Sccs { comp, members }
    }

    /// Consistency by the strongly-connected-component test.
    pub fn is_consistent_filtered(&self, allow: &dyn Fn(usize) -> bool) -> bool {
        let s = self.sccs_filtered(allow);
        (1..=self.num_vars).all(|v| s.comp[Lit::pos(v).index()] != s.comp[Lit::neg(v).index()])
    }

    pub fn is_consistent(&self) -> bool {
        self.is_consistent_filtered(&all_clauses)
    }

    /// `failed[u]` is true iff unit propagation from `u` reaches `¬u`,
    /// which for binary clauses is the same as reaching a contradiction.
    /// Bit-parallel over the component DAG, a block of columns at a time.
    pub fn failed_literals(&self) -> Vec<bool> {
        let n = self.num_nodes();
        let s = self.sccs();
        let nc = s.members.len();
        let mut dag: Vec<Vec<u32>> = vec![Vec::new(); nc];
        for u in 0..n {
            let cu = s.comp[u];
            for &(v, _) in self.out_raw(u) {
                let cv = s.comp[v as usize];
                if cv != cu {
                    dag[cu as usize].push(cv);
                }
            }
        }
        for d in &mut dag {
            d.sort_unstable();
            d.dedup();
        }
        const WORDS: usize = 64;
        const BLOCK: usize = WORDS * 64;
        let mut failed = vec![false; n];
        let mut bits = vec![0u64; nc * WORDS];
        let mut lo = 0;
        while lo < n {
            let hi = (lo + BLOCK).min(n);
            bits.iter_mut().for_each(|b| *b = 0);
            for c in 0..nc {
                let (done, rest) = bits.split_at_mut(c * WORDS);
                let row = &mut rest[..WORDS];
                for &l in &s.members[c] {
                    let i = l.index();
                    if (lo..hi).contains(&i) {
                        row[(i - lo) / 64] |= 1 << ((i - lo) % 64);
                    }
                }
                for &d in &dag[c] {
                    let src = &done[d as usize * WORDS..d as usize * WORDS + WORDS];
                    for (r, s) in row.iter_mut().zip(src) {
                        *r |= *s;
                    }
                }
            }
            for (u, f) in failed.iter_mut().enumerate() {
                let t = u ^ 1;
                if (lo..hi).contains(&t) {
                    let c = s.comp[u] as usize;
                    let j = t - lo;
                    *f = bits[c * WORDS + j / 64] >> (j % 64) & 1 == 1;
                }
            }
            lo = hi;
        }
        failed
    }

    /// Clause cycles: directed cycles whose literals contain no opposite pair.
    pub fn cyclicity(&self, node_budget: u64) -> Cyclicity {
        let s = self.sccs();
        let mut unresolved = Vec::new();
        for members in &s.members {
            if members.len() < 2 {
                continue;
            }
            let set: BTreeSet<Lit> = members.iter().copied().collect();
            if members.iter().all(|l| !set.contains(&!*l)) {
                return Cyclicity::Cyclic(self.cycle_in(members[0], &s));
            }
            unresolved.push(members.clone());
        }
        let mut budget = node_budget;
        let mut exhausted = false;
        for members in unresolved {
            match self.consistent_cycle_search(&members, &s, &mut budget) {
                Search::Found(cycle) => return Cyclicity::Cyclic(cycle),
                Search::None => {}
                Search::OutOfBudget => exhausted = true,
            }
        }
        if exhausted {
            Cyclicity::Unknown
        } else {
            Cyclicity::Acyclic
        }
    }

    /// Shortest cycle through `l` inside its component, as a literal list
    /// starting at `l` (the closing edge back to `l` is implicit).
    fn cycle_in(&self, l: Lit, s: &Sccs) -> Vec<Lit> {
        let c = s.comp[l.index()];
        let n = self.num_nodes();
        let mut parent = vec![NONE; n];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(l.index());
        while let Some(u) = queue.pop_front() {
            for &(v, _) in self.out_raw(u) {
                let v = v as usize;
                if s.comp[v] != c {
                    continue;
                }
                if v == l.index() {
                    let mut cycle = vec![Lit::from_index(u)];
                    let mut x = u;
                    while x != l.index() {
                        x = parent[x] as usize;
                        cycle.push(Lit::from_index(x));
                    }
                    cycle.reverse();
                    return cycle;
                }
                if parent[v] == NONE && v != l.index() {
                    parent[v] = u as u32;
                    queue.push_back(v);
                }
            }
        }
        unreachable!("a component with two or more literals has a cycle")
    }

    /// Depth-first search for a simple cycle avoiding opposite literals,
    /// restricted to one component; each cycle is looked for from its
    /// smallest literal only.
    fn consistent_cycle_search(&self, members: &[Lit], s: &Sccs, budget: &mut u64) -> Search {
        let comp = s.comp[members[0].index()];
        let n = self.num_nodes();
        let mut on_path = vec![false; n];
        for &start in members {
            let si = start.index();
            let mut path: Vec<usize> = vec![si];
            let mut pos: Vec<usize> = vec![0];
            on_path[si] = true;
            while let Some(&u) = path.last() {
                if *budget == 0 {
                    return Search::OutOfBudget;
                }
                *budget -= 1;
                let edges = self.out_raw(u);
                let top = pos.len() - 1;
                if pos[top] >= edges.len() {
                    on_path[u] = false;
                    path.pop();
                    pos.pop();
                    continue;
                }
                let v = edges[pos[top]].0 as usize;
                pos[top] += 1;
                if v == si && path.len() >= 2 {
                    return Search::Found(path.iter().map(|&i| Lit::from_index(i)).collect());
                }
                if v <= si || s.comp[v] != comp || on_path[v] || on_path[v ^ 1] {
                    continue;
                }
                on_path[v] = true;
                path.push(v);
                pos.push(0);
            }
        }
        Search::None
    }

    /// Per-literal families of clauses and literals used by the
    /// constructions on implied literals and unique subsets.
    pub fn literal_sets(&self, l: Lit) -> LiteralSets {
        let s = self.sccs();
        let mut c_set = Vec::new();
        let mut d_set = Vec::new();
        for (t, k) in self.successors(l) {
            c_set.push(t);
            d_set.push(k);
        }
        let in_d = |k: usize| d_set.contains(&k);
        let r = |k: usize| !in_d(k);

        let mut search = PeerSearch::new(self);
        let peer = search.run(l, &all_clauses, Some(&s));
        let m_set: Vec<Lit> = c_set
            .iter()
            .zip(&peer)
            .filter(|(_, &p)| !p)
            .map(|(&t, _)| t)
            .collect();

        let s_set: Vec<Lit> = c_set
            .iter()
            .copied()
            .filter(|&t| self.up_bottom_filtered(t, &r).is_some())
            .collect();
        let mut p_set = Vec::new();
        for (i, &a) in c_set.iter().enumerate() {
            if s_set.contains(&a) {
                continue;
            }
            let ca = self.up_closure_filtered(a, &r);
            for &b in &c_set[i + 1..] {
                if !s_set.contains(&b) && ca.contains(!b) {
                    p_set.push((a, b));
                }
            }
        }

        let cc: Vec<Lit> = s.members[s.comp[l.index()] as usize].clone();
        let mut jc = BTreeSet::new();
        for &x in &cc {
            for (t, _) in self.successors(x) {
                if s.comp[t.index()] != s.comp[l.index()] {
                    jc.insert(t);
                }
            }
        }
        let jc: Vec<Lit> = jc.into_iter().collect();
        let lc = jc
            .iter()
            .map(|&j| (j, self.up_closure(j).literals()))
            .collect();

        LiteralSets {
            lit: l,
            c: c_set,
            d: d_set,
            m: m_set,
            s: s_set,
            p: p_set,
            cc,
            jc,
            lc,
        }
    }

    /// Graphviz rendering; `name` prints literals, `label` prints clause ids.
    pub fn to_dot(&self, name: &dyn Fn(Lit) -> String, label: &dyn Fn(usize) -> String) -> String {
        let mut out = String::from("digraph implications {\n");
        for l in self.literals() {
            if self.out_raw(l.index()).is_empty() && self.in_raw(l.index()).is_empty() {
                continue;
            }
            out.push_str(&format!("  \"{}\";\n", name(l)));
        }
        for u in self.literals() {
            for (v, k) in self.successors(u) {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    name(u),
                    name(v),
                    label(k)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

enum Search {
    Found(Vec<Lit>),
    None,
    OutOfBudget,
}

/// Result of a unit-propagation pass.
#[derive(Clone, Debug)]
pub struct Closure {
    pub start: Lit,
    reached: Vec<bool>,
    parent: Vec<Option<(Lit, usize)>>,
    depth: Vec<u32>,
    order: Vec<Lit>,
}

impl Closure {
    pub fn contains(&self, l: Lit) -> bool {
        self.reached.get(l.index()).copied().unwrap_or(false)
    }

    /// Reached literals in ascending order.
    pub fn literals(&self) -> Vec<Lit> {
        let mut v = self.order.clone();
        v.sort_unstable();
        v
    }

    /// Reached literals in discovery order.
    pub fn order(&self) -> &[Lit] {
        &self.order
    }

    pub fn depth(&self, l: Lit) -> Option<u32> {
        self.contains(l).then(|| self.depth[l.index()])
    }

    /// Tree path from the start to `l`, both included.
    pub fn path_to(&self, l: Lit) -> Vec<Lit> {
        assert!(self.contains(l), "literal not reached");
        let mut p = vec![l];
        let mut x = l;
        while let Some((u, _)) = self.parent[x.index()] {
            p.push(u);
            x = u;
        }
        p.reverse();
        p
    }

    /// Clause ids along the tree path to `l`.
    pub fn clauses_to(&self, l: Lit) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = l;
        while let Some((u, k)) = self.parent[x.index()] {
            out.push(k);
            x = u;
        }
        out.reverse();
        out
    }

    /// True if some variable is reached with both polarities.
    pub fn has_clash(&self) -> bool {
        self.order.iter().any(|&l| self.contains(!l))
    }
}

/// A single walk from `start` ending at the first literal whose opposite
/// already occurs on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContradictionWitness {
    pub start: Lit,
    pub path: Vec<Lit>,
    pub clause_ids: Vec<usize>,
    /// Variable of the final literal of the walk.
    pub clash_var: u32,
    /// Variable of the opposite pair first found by the breadth-first pass.
    pub detected_var: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cyclicity {
    Acyclic,
    /// Literals of one clause cycle, in order.
    Cyclic(Vec<Lit>),
    /// The bounded search ran out of budget.
    Unknown,
}

impl Cyclicity {
    pub fn is_cyclic(&self) -> bool {
        matches!(self, Cyclicity::Cyclic(_))
    }

    pub fn is_acyclic(&self) -> bool {
        matches!(self, Cyclicity::Acyclic)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Cyclicity::Acyclic => "acyclic",
            Cyclicity::Cyclic(_) => "cyclic",
            Cyclicity::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sccs {
    pub comp: Vec<u32>,
    pub members: Vec<Vec<Lit>>,
}

impl Sccs {
    pub fn same(&self, a: Lit, b: Lit) -> bool {
        self.comp[a.index()] == self.comp[b.index()]
    }

    pub fn component_of(&self, l: Lit) -> &[Lit] {
        &self.members[self.comp[l.index()] as usize]
    }
}

/// The per-literal families: `c` are the direct successors of `lit`, `d`
/// the matching clause ids, `m` the successors not reachable from another
/// successor without `d`, `s` the successors that reach a contradiction
/// without `d`, `p` the pairs where one reaches the opposite of the other
/// without `d` (neither in `s`), `cc` the component of `lit`, `jc` the
/// one-step successors of `cc` outside it and `lc` their closures.
#[derive(Clone, Debug)]
pub struct LiteralSets {
    pub lit: Lit,
    pub c: Vec<Lit>,
    pub d: Vec<usize>,
    pub m: Vec<Lit>,
    pub s: Vec<Lit>,
    pub p: Vec<(Lit, Lit)>,
    pub cc: Vec<Lit>,
    pub jc: Vec<Lit>,
    pub lc: Vec<(Lit, Vec<Lit>)>,
}

const TWO: u32 = u32::MAX - 1;

/// Multi-source breadth-first search telling, for each direct successor of
/// a literal, whether another successor reaches it once the literal is
/// removed. Nodes reached from two different seeds get the mark `TWO` and
/// are only used as sources of a second plain reachability pass.
pub struct PeerSearch<'g> {
    g: &'g ImplicationGraph,
    label: Vec<u32>,
    stamp: Vec<u32>,
    seen: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
    twos: Vec<u32>,
    seed_of: Vec<u32>,
}

impl<'g> PeerSearch<'g> {
    pub fn new(g: &'g ImplicationGraph) -> PeerSearch<'g> {
        let n = g.num_nodes();
        PeerSearch {
            g,
            label: vec![NONE; n],
            stamp: vec![0; n],
            seen: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
            twos: Vec::new(),
            seed_of: vec![NONE; n],
        }
    }

    fn label(&self, v: usize) -> u32 {
        if self.stamp[v] == self.epoch {
            self.label[v]
        } else {
            NONE
        }
    }

    fn set_label(&mut self, v: usize, x: u32) {
        self.stamp[v] = self.epoch;
        self.label[v] = x;
    }

    /// For each edge out of `l` (in the order of `successors(l)`), whether
    /// its target is reached from another target or from a `TWO` node.
    /// Edges of clauses rejected by `allow` are ignored. Paths never pass
    /// through `l`, so the clauses behind the targets play no part.
    /// With `order`, nodes that cannot reach any target are skipped.
    pub fn run(
        &mut self,
        l: Lit,
        allow: &dyn Fn(usize) -> bool,
        order: Option<&Sccs>,
    ) -> Vec<bool> {
        let g = self.g;
        self.epoch += 1;
        let li = l.index();
        let seeds: Vec<(usize, usize)> = g
            .out_raw(li)
            .iter()
            .filter(|&&(_, k)| allow(k as usize))
            .map(|&(v, k)| (v as usize, k as usize))
            .collect();
        let all: Vec<usize> = g.out_raw(li).iter().map(|&(v, _)| v as usize).collect();
        let mut hit = vec![false; all.len()];
        if seeds.len() < 2 {
            return hit;
        }
        let floor = order.map(|s| seeds.iter().map(|&(v, _)| s.comp[v]).min().unwrap_or(0));
        let keep = |v: usize| match (order, floor) {
            (Some(s), Some(f)) => s.comp[v] >= f,
            _ => true,
        };
        self.queue.clear();
        self.twos.clear();
        for (i, &(v, _)) in seeds.iter().enumerate() {
            self.set_label(v, i as u32);
            self.seed_of[v] = i as u32;
            self.queue.push(v as u32);
        }
        let mut reached = vec![false; seeds.len()];
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            let lu = self.label(u);
            if lu == TWO {
                continue;
            }
            for &(v, k) in g.out_raw(u) {
                let v = v as usize;
                if v == li || !allow(k as usize) || !keep(v) {
                    continue;
                }
                match self.label(v) {
                    NONE => {
                        self.set_label(v, lu);
                        self.queue.push(v as u32);
                    }
                    TWO => {}
                    x if x == lu => {}
                    _ => {
                        self.set_label(v, TWO);
                        self.twos.push(v as u32);
                    }
                }
            }
        }
        // Plain reachability from the TWO nodes, which count as reached.
        let mut stack: Vec<usize> = self.twos.iter().map(|&v| v as usize).collect();
        for &v in &stack {
            self.seen[v] = self.epoch;
        }
        while let Some(u) = stack.pop() {
            if self.stamp[u] == self.epoch && self.seed_of[u] != NONE && self.is_seed(u, &seeds) {
                reached[self.seed_of[u] as usize] = true;
            }
            for &(v, k) in g.out_raw(u) {
                let v = v as usize;
                if v == li || !allow(k as usize) || !keep(v) || self.seen[v] == self.epoch {
                    continue;
                }
                self.seen[v] = self.epoch;
                stack.push(v);
            }
        }
        for &(v, _) in &seeds {
            self.seed_of[v] = NONE;
        }
        for (j, &t) in all.iter().enumerate() {
            if let Some(i) = seeds.iter().position(|&(v, _)| v == t) {
                hit[j] = reached[i];
            }
        }
        hit
    }

    fn is_seed(&self, u: usize, seeds: &[(usize, usize)]) -> bool {
        let i = self.seed_of[u] as usize;
        i < seeds.len() && seeds[i].0 == u
    }
}
