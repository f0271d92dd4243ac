//! Instance generators for the hard cases. Each instance carries the answer
//! to its source problem, computed by a small brute-force solver on the
//! graph or clause list it came from.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::cnf::{Clause, Formula, Lit};
use crate::error::AnalysisError;

/// Directed graph over nodes `0..nodes`, without self-loops or repeated
/// edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Digraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(nodes: usize, edges: &[(usize, usize)]) -> Result<Digraph, AnalysisError> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= nodes || b >= nodes {
                return Err(AnalysisError::pre(format!(
                    "edge ({a}, {b}) outside {nodes} nodes"
                )));
            }
            if a == b {
                return Err(AnalysisError::pre(format!("self-loop on node {a}")));
            }
            set.insert((a, b));
        }
        Ok(Digraph {
            nodes,
            edges: set.into_iter().collect(),
        })
    }

    /// Each ordered pair becomes an edge with probability `p`.
    pub fn random(nodes: usize, p: f64, rng: &mut impl Rng) -> Digraph {
        let mut edges = Vec::new();
        for a in 0..nodes {
            for b in 0..nodes {
                if a != b && rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        Digraph { nodes, edges }
    }

    pub fn cycle(nodes: usize) -> Digraph {
        Digraph {
            nodes,
            edges: (0..nodes).map(|i| (i, (i + 1) % nodes)).collect(),
        }
    }

    fn out(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            out[a].push(b);
        }
        out
    }

    /// Nodes reachable from `from` without entering `blocked`.
    pub fn reach(&self, from: usize, blocked: &[bool]) -> Vec<bool> {
        let out = self.out();
        let mut seen = vec![false; self.nodes];
        if blocked.get(from).copied().unwrap_or(false) {
            return seen;
        }
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &out[u] {
                if !seen[v] && !blocked.get(v).copied().unwrap_or(false) {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.reach(a, &[])[b]
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.nodes == 0 || {
            let fwd = self.reach(0, &[]);
            let rev = Digraph {
                nodes: self.nodes,
                edges: self.edges.iter().map(|&(a, b)| (b, a)).collect(),
            };
            fwd.iter().all(|&x| x) && rev.reach(0, &[]).iter().all(|&x| x)
        }
    }

    /// Replaces node `m` by `m → m'`, with `m` keeping the incoming edges and
    /// the new last node `m'` the outgoing ones. Returns the graph and the
    /// new edge.
    pub fn split_node(&self, m: usize) -> (Digraph, (usize, usize)) {
        let m2 = self.nodes;
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| if a == m { (m2, b) } else { (a, b) })
            .collect();
        edges.push((m, m2));
        (
            Digraph::new(self.nodes + 1, &edges).expect("valid split"),
            (m, m2),
        )
    }

    /// Calls `visit` on every simple path from `from` to `to`.
    fn simple_paths(
        &self,
        from: usize,
        to: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        fn go(
            out: &[Vec<usize>],
            to: usize,
            path: &mut Vec<usize>,
            on: &mut [bool],
            visit: &mut dyn FnMut(&[usize]) -> bool,
        ) -> bool {
            let u = *path.last().expect("non-empty");
            if u == to {
                return visit(path);
            }
            for &v in &out[u] {
                if !on[v] {
                    on[v] = true;
                    path.push(v);
                    let stop = go(out, to, path, on, visit);
                    path.pop();
                    on[v] = false;
                    if stop {
                        return true;
                    }
                }
            }
            false
        }
        let out = self.out();
        let mut on = vec![false; self.nodes];
        on[from] = true;
        go(&out, to, &mut vec![from], &mut on, visit)
    }

    /// A simple cycle passes through both `x` and `y`.
    pub fn simple_cycle_through(&self, x: usize, y: usize) -> bool {
        self.simple_paths(x, y, &mut |p| {
            let mut blocked = vec![false; self.nodes];
            for &v in &p[1..p.len() - 1] {
                blocked[v] = true;
            }
            self.reach(y, &blocked)[x]
        })
    }

    /// A simple path from `x` to `y` uses the edge `e`.
    pub fn simple_path_with_edge(&self, x: usize, y: usize, e: (usize, usize)) -> bool {
        self.simple_paths(x, y, &mut |p| p.windows(2).any(|w| (w[0], w[1]) == e))
    }

    /// A simple path from `x` to `y` visits `m`.
    pub fn simple_path_via(&self, x: usize, y: usize, m: usize) -> bool {
        self.simple_paths(x, y, &mut |p| p.contains(&m))
    }

    /// Paths `s1 ⇒ t1` and `s2 ⇒ t2` without a common node.
    pub fn disjoint_paths(&self, s1: usize, t1: usize, s2: usize, t2: usize) -> bool {
        self.simple_paths(s1, t1, &mut |p| {
            let mut blocked = vec![false; self.nodes];
            for &v in p {
                blocked[v] = true;
            }
            self.reach(s2, &blocked)[t2]
        })
    }

    /// Fewest edges of a strongly connected spanning subgraph.
    pub fn min_equivalent_edges(&self) -> usize {
        let m = self.edges.len();
        assert!(m <= 24, "brute force over {m} edges");
        let mut best = m;
        for mask in 0u32..(1 << m) {
            let c = mask.count_ones() as usize;
            if c >= best || c < self.nodes {
                continue;
            }
            let sub = Digraph {
                nodes: self.nodes,
                edges: (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.edges[i])
                    .collect(),
            };
            if sub.is_strongly_connected() {
                best = c;
            }
        }
        best
    }
}

/// The answer to the source problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Truth {
    Holds(bool),
    Count(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedInstance {
    pub reduction: &'static str,
    #[serde(skip)]
    pub formula: Formula,
    pub focus: Option<usize>,
    /// Size bound in half-units.
    pub k: Option<u64>,
    pub truth: Truth,
    /// Name of each variable, in variable order.
    pub names: Vec<String>,
}

/// Variable allocation with names.
struct Vars {
    names: Vec<String>,
}

impl Vars {
    fn new() -> Vars {
        Vars { names: Vec::new() }
    }

    fn add(&mut self, name: impl Into<String>) -> Lit {
        self.names.push(name.into());
        Lit::pos(self.names.len() as u32)
    }

    fn nodes(&mut self, n: usize) -> Vec<Lit> {
        (0..n).map(|i| self.add(format!("n{i}"))).collect()
    }

    /// `a → b` kept irremovable through a fresh variable.
    fn pinned(&mut self, a: Lit, b: Lit, out: &mut Vec<Clause>) {
        let w = self.add(format!("pin{}", self.names.len() + 1));
        out.push(Clause::implication(a, w));
        out.push(Clause::implication(w, b));
    }

    fn formula(&self, clauses: Vec<Clause>) -> Formula {
        Formula::new(self.names.len() as u32, clauses).expect("binary or Horn clauses")
    }
}

fn edge_clauses(g: &Digraph, node: &[Lit]) -> Vec<Clause> {
    g.edges
        .iter()
        .map(|&(a, b)| Clause::implication(node[a], node[b]))
        .collect()
}

/// Literal entailed false on a cycle: a subset of size `k` exists iff
/// `g` has a simple cycle through `x` and `y`.
pub fn gen_size_cyclic_implied(
    g: &Digraph,
    x: usize,
    y: usize,
) -> Result<GeneratedInstance, AnalysisError> {
    if x >= g.nodes || y >= g.nodes || x == y {
        return Err(AnalysisError::pre("x and y must be distinct nodes"));
    }
    if !g.reaches(x, y) || !g.reaches(y, x) {
        return Err(AnalysisError::pre("x and y do not reach each other"));
    }
    // keep the nodes that reach x
    let rev = Digraph {
        nodes: g.nodes,
        edges: g.edges.iter().map(|&(a, b)| (b, a)).collect(),
    };
    let keep = rev.reach(x, &[]);
    let mut index = vec![usize::MAX; g.nodes];
    let mut kept = 0;
    for v in 0..g.nodes {
        if keep[v] {
            index[v] = kept;
            kept += 1;
        }
    }
    let edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|&&(a, b)| keep[a] && keep[b])
        .map(|&(a, b)| (index[a], index[b]))
        .collect();
    let h = Digraph::new(kept, &edges)?;
    let mut vars = Vars::new();
    let node = vars.nodes(kept);
    let z = vars.add("z");
    let mut cs = edge_clauses(&h, &node);
    cs.push(Clause::implication(node[index[x]], z));
    cs.push(Clause::implication(node[index[y]], !z));
    Ok(GeneratedInstance {
        reduction: "size-cyclic-implied",
        formula: vars.formula(cs),
        focus: None,
        k: Some(2 * (kept as u64 + 2)),
        truth: Truth::Holds(g.simple_cycle_through(x, y)),
        names: vars.names,
    })
}

/// Strongly connected graph as implications: the fewest clauses of an
/// equivalent subset is the fewest edges keeping it strongly connected.
pub fn gen_size_strongly_connected(g: &Digraph) -> Result<GeneratedInstance, AnalysisError> {
    if g.nodes < 2 || !g.is_strongly_connected() {
        return Err(AnalysisError::pre("graph is not strongly connected"));
    }
    let mut vars = Vars::new();
    let node = vars.nodes(g.nodes);
    let best = g.min_equivalent_edges() as u64;
    Ok(GeneratedInstance {
        reduction: "size-strongly-connected",
        formula: vars.formula(edge_clauses(g, &node)),
        focus: None,
        k: Some(2 * best),
        truth: Truth::Count(best),
        names: vars.names,
    })
}

/// Inconsistent once `x` reaches `y`: the clause of `focus_edge` is in some
/// subset iff a simple path from `x` to `y` uses that edge.
pub fn gen_presence_inconsistent(
    g: &Digraph,
    x: usize,
    y: usize,
    focus_edge: (usize, usize),
) -> Result<GeneratedInstance, AnalysisError> {
    if x >= g.nodes || y >= g.nodes || x == y {
        return Err(AnalysisError::pre("x and y must be distinct nodes"));
    }
    if !g.edges.contains(&focus_edge) {
        return Err(AnalysisError::pre(format!(
            "({}, {}) is not an edge",
            focus_edge.0, focus_edge.1
        )));
    }
    if !g.reaches(x, y) {
        return Err(AnalysisError::pre("y is not reachable from x"));
    }
    let mut vars = Vars::new();
    let node = vars.nodes(g.nodes);
    let z = vars.add("z");
    let w = vars.add("w");
    let mut cs = edge_clauses(g, &node);
    let (xl, yl) = (node[x], node[y]);
    cs.extend([
        Clause::implication(yl, z),
        Clause::implication(yl, !z),
        Clause::implication(!xl, w),
        Clause::implication(!xl, !w),
    ]);
    let focus = Clause::implication(node[focus_edge.0], node[focus_edge.1]);
    let formula = vars.formula(cs);
    Ok(GeneratedInstance {
        reduction: "presence-inconsistent",
        focus: formula.position(&focus),
        formula,
        k: None,
        truth: Truth::Holds(g.simple_path_with_edge(x, y, focus_edge)),
        names: vars.names,
    })
}

/// Entailed literals on a cycle: the edge `l1 → l2` is in some subset iff
/// `g` has node-disjoint paths `s1 ⇒ t1` and `s2 ⇒ t2`. Every node of `g`
/// must reach `t1` or `t2`, and `s1` or `s2` must reach `t1`.
pub fn gen_presence_implied_cyclic(
    g: &Digraph,
    s1: usize,
    t1: usize,
    s2: usize,
    t2: usize,
) -> Result<GeneratedInstance, AnalysisError> {
    let ends = [s1, t1, s2, t2];
    if ends.iter().any(|&v| v >= g.nodes) || ends.iter().collect::<BTreeSet<_>>().len() < 4 {
        return Err(AnalysisError::pre(
            "s1, t1, s2, t2 must be four distinct nodes",
        ));
    }
    let to1 = Digraph {
        nodes: g.nodes,
        edges: g.edges.iter().map(|&(a, b)| (b, a)).collect(),
    };
    let (r1, r2) = (to1.reach(t1, &[]), to1.reach(t2, &[]));
    if let Some(v) = (0..g.nodes).find(|&v| !r1[v] && !r2[v]) {
        return Err(AnalysisError::pre(format!(
            "node {v} reaches neither t1 nor t2"
        )));
    }
    if !r1[s1] && !r1[s2] {
        return Err(AnalysisError::pre("t1 is reachable from neither s1 nor s2"));
    }
    let mut vars = Vars::new();
    let node = vars.nodes(g.nodes);
    let l1 = vars.add("l1");
    let l2 = vars.add("l2");
    let l3 = vars.add("l3");
    let l4 = vars.add("l4");
    let x = vars.add("x");
    let mut cs = edge_clauses(g, &node);
    // x is reached only through l1 → l3 and ¬x only through t1 → l4, so
    // without the focus l1 fails exactly when s2 gets to t1
    for (a, b) in [
        (l1, l2),
        (l2, node[s1]),
        (node[t1], l4),
        (l4, !x),
        (l4, l1),
        (l1, l3),
        (l3, x),
        (l3, node[s2]),
        (node[t2], l1),
    ] {
        cs.push(Clause::implication(a, b));
    }
    let formula = vars.formula(cs);
    Ok(GeneratedInstance {
        reduction: "presence-implied-cyclic",
        focus: formula.position(&Clause::implication(l1, l2)),
        formula,
        k: None,
        truth: Truth::Holds(g.disjoint_paths(s1, t1, s2, t2)),
        names: vars.names,
    })
}

/// All literals equivalent and none entailed: the edge `l1 → l2` is in some
/// subset iff the clause list `gamma` (DIMACS literals) is satisfiable.
pub fn gen_presence_3sat(gamma: &[Vec<i64>]) -> Result<GeneratedInstance, AnalysisError> {
    if gamma.is_empty() || gamma.iter().any(|c| c.is_empty() || c.contains(&0)) {
        return Err(AnalysisError::pre(
            "clause list must be non-empty, with non-empty clauses",
        ));
    }
    let n = gamma
        .iter()
        .flatten()
        .map(|l| l.unsigned_abs())
        .max()
        .expect("non-empty") as usize;
    let mut vars = Vars::new();
    let l1 = vars.add("l1");
    let l2 = vars.add("l2");
    let mut xs = Vec::new();
    for i in 1..=n {
        xs.push((
            vars.add(format!("x{i}")),
            vars.add(format!("x{i}+")),
            vars.add(format!("x{i}-")),
        ));
    }
    let cj: Vec<Lit> = (1..=gamma.len())
        .map(|j| vars.add(format!("c{j}")))
        .collect();
    let mut cs = vec![Clause::implication(l1, l2)];
    for &(x, p, m) in &xs {
        vars.pinned(l1, x, &mut cs);
        cs.push(Clause::implication(x, p));
        cs.push(Clause::implication(x, m));
        vars.pinned(p, l1, &mut cs);
        vars.pinned(m, l1, &mut cs);
        vars.pinned(l2, p, &mut cs);
        vars.pinned(l2, m, &mut cs);
    }
    for (j, c) in gamma.iter().enumerate() {
        for &l in c {
            let (_, p, m) = xs[l.unsigned_abs() as usize - 1];
            cs.push(Clause::implication(if l > 0 { p } else { m }, cj[j]));
        }
        vars.pinned(cj[j], l2, &mut cs);
    }
    let formula = vars.formula(cs);
    Ok(GeneratedInstance {
        reduction: "presence-3sat",
        focus: formula.position(&Clause::implication(l1, l2)),
        formula,
        k: None,
        truth: Truth::Holds(satisfiable(gamma, n)),
        names: vars.names,
    })
}

fn satisfiable(gamma: &[Vec<i64>], n: usize) -> bool {
    assert!(n <= 24, "truth table over {n} variables");
    (0u32..1 << n).any(|m| {
        gamma.iter().all(|c| {
            c.iter()
                .any(|&l| (m >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
        })
    })
}

/// Horn formula whose smallest inconsistent subsets have one clause per
/// edge, the wide clause, and one unit per vertex of a minimum cover.
/// Without edges the wide clause would be empty and is left out.
pub fn gen_horn_vertex_cover(
    nodes: usize,
    edges: &[(usize, usize)],
) -> Result<GeneratedInstance, AnalysisError> {
    let mut es = BTreeSet::new();
    for &(a, b) in edges {
        if a >= nodes || b >= nodes || a == b {
            return Err(AnalysisError::pre(format!("bad edge ({a}, {b})")));
        }
        es.insert((a.min(b), a.max(b)));
    }
    let es: Vec<(usize, usize)> = es.into_iter().collect();
    let mut vars = Vars::new();
    let node = vars.nodes(nodes);
    let az: Vec<Lit> = (0..es.len())
        .map(|z| vars.add(format!("a{}", z + 1)))
        .collect();
    let mut cs: Vec<Clause> = node.iter().map(|&x| Clause::unit(x)).collect();
    for (z, &(i, j)) in es.iter().enumerate() {
        cs.push(Clause::implication(node[i], az[z]));
        cs.push(Clause::implication(node[j], az[z]));
    }
    if !az.is_empty() {
        cs.push(Clause::new(az.iter().map(|&a| !a).collect()).expect("distinct variables"));
    }
    let cover = min_vertex_cover(nodes, &es) as u64;
    let m = es.len() as u64;
    Ok(GeneratedInstance {
        reduction: "horn-vertex-cover",
        formula: vars.formula(cs),
        focus: None,
        k: (m > 0).then_some(2 * (m + 1 + cover)),
        truth: Truth::Count(cover),
        names: vars.names,
    })
}

fn min_vertex_cover(nodes: usize, edges: &[(usize, usize)]) -> usize {
    assert!(nodes <= 24, "brute force over {nodes} nodes");
    (0u32..1 << nodes)
        .filter(|s| {
            edges
                .iter()
                .all(|&(a, b)| s >> a & 1 == 1 || s >> b & 1 == 1)
        })
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entailment::{classify, Regime};
    use crate::exact::{self, SearchBudget};
    use rand::SeedableRng;

    fn budget() -> SearchBudget {
        SearchBudget {
            max_clauses: 48,
            ..SearchBudget::unlimited()
        }
    }

    fn g(n: usize, e: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, e).unwrap()
    }

    fn min_half(i: &GeneratedInstance) -> u64 {
        exact::min_ies_size_exact(&i.formula, &budget())
            .unwrap()
            .size_half_units
    }

    fn focus_present(i: &GeneratedInstance) -> bool {
        exact::in_some_ies_exact(&i.formula, i.focus.unwrap(), &budget()).unwrap()
    }

    #[test]
    fn brute_force_solvers() {
        assert!(g(3, &[(0, 1), (1, 2), (2, 0)]).simple_cycle_through(0, 1));
        assert!(!g(3, &[(0, 2), (2, 0), (1, 2), (2, 1)]).simple_cycle_through(0, 1));
        assert_eq!(Digraph::cycle(4).min_equivalent_edges(), 4);
        let k3 = g(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]);
        assert_eq!(k3.min_equivalent_edges(), 3);
        assert!(g(4, &[(0, 1), (2, 3)]).disjoint_paths(0, 1, 2, 3));
        assert!(!g(5, &[(0, 4), (2, 4), (4, 1), (4, 3)]).disjoint_paths(0, 1, 2, 3));
        assert_eq!(min_vertex_cover(3, &[(0, 1), (1, 2), (0, 2)]), 2);
        let (s, e) = g(3, &[(0, 1), (1, 2)]).split_node(1);
        assert_eq!(e, (1, 3));
        assert!(s.edges.contains(&(3, 2)) && s.edges.contains(&(0, 1)));
        assert!(Digraph::new(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn cyclic_implied_examples() {
        let t = gen_size_cyclic_implied(&g(3, &[(0, 1), (1, 2), (2, 0)]), 0, 1).unwrap();
        assert_eq!(t.truth, Truth::Holds(true));
        assert_eq!(t.k, Some(10));
        assert_eq!(min_half(&t), 10);
        let f = gen_size_cyclic_implied(&g(3, &[(0, 2), (2, 0), (1, 2), (2, 1)]), 0, 1).unwrap();
        assert_eq!(f.truth, Truth::Holds(false));
        assert!(min_half(&f) > f.k.unwrap());
        let two = gen_size_cyclic_implied(&g(2, &[(0, 1), (1, 0)]), 0, 1).unwrap();
        assert_eq!(min_half(&two), two.k.unwrap());
        assert!(gen_size_cyclic_implied(&g(3, &[(0, 1)]), 0, 1).is_err());
    }

    #[test]
    fn strongly_connected_examples() {
        let c = gen_size_strongly_connected(&Digraph::cycle(3)).unwrap();
        assert_eq!((c.truth, min_half(&c)), (Truth::Count(3), 6));
        let cls = classify(&c.formula).unwrap();
        assert_eq!(cls.regime, Regime::ConsistentNoImplied);
        let two = gen_size_strongly_connected(&Digraph::cycle(2)).unwrap();
        assert_eq!(two.truth, Truth::Count(2));
        assert!(gen_size_strongly_connected(&g(3, &[(0, 1), (1, 2)])).is_err());
    }

    #[test]
    fn presence_inconsistent_examples() {
        let p = gen_presence_inconsistent(&g(3, &[(0, 1), (1, 2)]), 0, 2, (1, 2)).unwrap();
        assert_eq!(p.truth, Truth::Holds(true));
        assert!(focus_present(&p));
        assert_eq!(classify(&p.formula).unwrap().regime, Regime::Inconsistent);
        // the edge (2, 1) only closes a loop after y
        let q = gen_presence_inconsistent(&g(3, &[(0, 1), (1, 2), (2, 1)]), 0, 2, (2, 1)).unwrap();
        assert_eq!(q.truth, Truth::Holds(false));
        assert!(!focus_present(&q));
    }

    #[test]
    fn split_node_preserves_paths_via() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let d = Digraph::random(5, 0.35, &mut rng);
            let (s, e) = d.split_node(2);
            assert_eq!(d.simple_path_via(0, 4, 2), s.simple_path_with_edge(0, 4, e));
        }
        let d = g(5, &[(0, 2), (2, 4), (0, 1), (1, 4), (2, 3), (3, 2)]);
        let (s, e) = d.split_node(2);
        let p = gen_presence_inconsistent(&s, 0, 4, e).unwrap();
        assert_eq!(p.truth, Truth::Holds(true));
        assert!(focus_present(&p));
    }

    #[test]
    fn implied_cyclic_examples() {
        // parallel: 0 → 1 and 2 → 3
        let par = gen_presence_implied_cyclic(&g(4, &[(0, 1), (2, 3)]), 0, 1, 2, 3).unwrap();
        assert_eq!(par.truth, Truth::Holds(true));
        assert!(focus_present(&par));
        assert_eq!(
            classify(&par.formula).unwrap().regime,
            Regime::ConsistentImplying
        );
        // bowtie through node 4
        let bow = gen_presence_implied_cyclic(&g(5, &[(0, 4), (2, 4), (4, 1), (4, 3)]), 0, 1, 2, 3)
            .unwrap();
        assert_eq!(bow.truth, Truth::Holds(false));
        assert!(!focus_present(&bow));
        assert!(gen_presence_implied_cyclic(&g(5, &[(0, 1), (2, 3)]), 0, 1, 2, 3).is_err());
    }

    #[test]
    fn three_sat_examples() {
        let one = gen_presence_3sat(&[vec![1, -2]]).unwrap();
        // l1, l2, three nodes per variable and one per clause
        assert_eq!(
            one.names.iter().filter(|n| !n.starts_with("pin")).count(),
            2 + 6 + 1
        );
        let edges: usize = one.formula.len();
        assert_eq!(edges, 1 + 2 * (2 * 5 + 1) + 2 * 2 + 2);
        assert_eq!(one.truth, Truth::Holds(true));
        let cls = classify(&one.formula).unwrap();
        assert_eq!(cls.regime, Regime::ConsistentNoImplied);
        assert!(focus_present(&one));
        let unsat = gen_presence_3sat(&[vec![1], vec![-1]]).unwrap();
        assert_eq!(unsat.truth, Truth::Holds(false));
        assert!(!focus_present(&unsat));
    }

    #[test]
    fn vertex_cover_examples() {
        let e = gen_horn_vertex_cover(2, &[(0, 1)]).unwrap();
        assert_eq!(e.truth, Truth::Count(1));
        assert_eq!(e.k, Some(6));
        let t = gen_horn_vertex_cover(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(t.k, Some(12));
        let m = exact::min_ies_size_as(&t.formula, &budget(), true).unwrap();
        assert_eq!(m.size_half_units, 12);
        let none = gen_horn_vertex_cover(3, &[]).unwrap();
        assert!(crate::horn::HornSolver::new(&none.formula)
            .unwrap()
            .is_consistent());
    }

    fn random_pair(n: usize, rng: &mut impl Rng) -> (usize, usize) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        (a, b)
    }

    #[test]
    fn truth_agrees_with_exact_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = [[0usize; 2]; 5];
        for _ in 0..400 {
            let n = rng.gen_range(3..=6);
            let d = Digraph::random(n, 0.35, &mut rng);
            let (x, y) = random_pair(n, &mut rng);
            if let Ok(i) = gen_size_cyclic_implied(&d, x, y) {
                let Truth::Holds(t) = i.truth else {
                    unreachable!()
                };
                assert_eq!(min_half(&i) <= i.k.unwrap(), t, "{d:?} {x} {y}");
                seen[0][t as usize] += 1;
            }
            if d.edges.len() <= 14 {
                if let Ok(i) = gen_size_strongly_connected(&d) {
                    assert_eq!(Truth::Count(min_half(&i) / 2), i.truth);
                    seen[1][0] += 1;
                }
            }
            if !d.edges.is_empty() {
                let e = d.edges[rng.gen_range(0..d.edges.len())];
                if let Ok(i) = gen_presence_inconsistent(&d, x, y, e) {
                    assert_eq!(
                        Truth::Holds(focus_present(&i)),
                        i.truth,
                        "{d:?} {x} {y} {e:?}"
                    );
                    seen[2][(i.truth == Truth::Holds(true)) as usize] += 1;
                }
            }
            if n >= 4 {
                let mut ends: Vec<usize> = (0..n).collect();
                for k in 0..4 {
                    let j = rng.gen_range(k..n);
                    ends.swap(k, j);
                }
                if let Ok(i) = gen_presence_implied_cyclic(&d, ends[0], ends[1], ends[2], ends[3]) {
                    assert_eq!(Truth::Holds(focus_present(&i)), i.truth, "{d:?} {ends:?}");
                    seen[3][(i.truth == Truth::Holds(true)) as usize] += 1;
                }
            }
            let es: Vec<(usize, usize)> = d
                .edges
                .iter()
                .copied()
                .filter(|&(a, b)| a < b)
                .take(5)
                .collect();
            let i = gen_horn_vertex_cover(n, &es).unwrap();
            if let Some(k) = i.k {
                assert_eq!(
                    exact::min_ies_size_as(&i.formula, &budget(), true)
                        .unwrap()
                        .size_half_units,
                    k
                );
                seen[4][0] += 1;
            }
        }
        for (r, s) in seen.iter().enumerate() {
            assert!(s[0] + s[1] >= 20, "generator {r} exercised {s:?}");
        }
        assert!(
            seen[0][1] > 0 && seen[2][0] > 0 && seen[3][0] > 0 && seen[3][1] > 0,
            "{seen:?}"
        );
    }

    #[test]
    fn three_sat_agrees_with_exact_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut both = [0; 2];
        for _ in 0..30 {
            let m = rng.gen_range(1..=3);
            let gamma: Vec<Vec<i64>> = (0..m)
                .map(|_| {
                    let v = rng.gen_range(1..=2i64);
                    let c = vec![if rng.gen_bool(0.5) { v } else { -v }];
                    if rng.gen_bool(0.5) {
                        c
                    } else {
                        vec![c[0], if rng.gen_bool(0.5) { 3 - v } else { v - 3 }]
                    }
                })
                .collect();
            let i = gen_presence_3sat(&gamma).unwrap();
            assert_eq!(Truth::Holds(focus_present(&i)), i.truth, "{gamma:?}");
            both[(i.truth == Truth::Holds(true)) as usize] += 1;
        }
        assert!(both[0] > 0 && both[1] > 0, "{both:?}");
    }
}
