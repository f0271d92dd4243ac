use clap::{Args, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use twocnf_ies::hardgen::{self, Digraph, GeneratedInstance, Truth};
use twocnf_ies::{emit_dimacs, parse_dimacs};

use crate::commands::{Failure, Output};
use crate::status::ANSWERED;
use crate::{Format, Global};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reduction {
    /// Simple cycle through two nodes, as a size bound.
    SizeCyclicImplied,
    /// Fewest edges keeping a graph strongly connected.
    SizeStronglyConnected,
    /// Simple path through an edge, as presence in an inconsistent formula.
    PresenceInconsistent,
    /// Two disjoint paths, as presence of a clause inside a component.
    PresenceImpliedCyclic,
    /// Satisfiability, as presence in a formula entailing nothing.
    #[value(name = "presence-3sat")]
    Presence3sat,
    /// Vertex cover, as the size of a Horn subset.
    HornVertexCover,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub reduction: Reduction,
    /// Node count; drawn at random when absent.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Edges as `a-b` pairs separated by commas; random when absent.
    #[arg(long, value_delimiter = ',')]
    pub edges: Option<Vec<String>>,
    /// Edge probability for random graphs.
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    #[arg(long)]
    pub x: Option<usize>,
    #[arg(long)]
    pub y: Option<usize>,
    /// Edge `a-b` whose clause is asked about.
    #[arg(long)]
    pub edge: Option<String>,
    #[arg(long)]
    pub s1: Option<usize>,
    #[arg(long)]
    pub t1: Option<usize>,
    #[arg(long)]
    pub s2: Option<usize>,
    #[arg(long)]
    pub t2: Option<usize>,
    /// DIMACS file with the satisfiability instance; random when absent.
    #[arg(long)]
    pub cnf: Option<String>,
    /// Variables of a random satisfiability instance.
    #[arg(long, default_value_t = 3)]
    pub vars: usize,
    /// Clauses of a random satisfiability instance.
    #[arg(long, default_value_t = 3)]
    pub clauses: usize,
    /// Write the formula here and the sidecar to `<out>.json`.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    reduction: &'a str,
    /// 1-based id of the clause asked about.
    focus: Option<usize>,
    focus_clause: Option<Vec<i64>>,
    k: Option<u64>,
    truth: Truth,
    names: &'a [String],
    seed: u64,
}

fn parse_edge(s: &str) -> Result<(usize, usize), Failure> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| Failure::usage(format!("edge `{s}` is not `a-b`")))?;
    let n = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Failure::usage(format!("bad node `{t}` in edge `{s}`")))
    };
    Ok((n(a)?, n(b)?))
}

fn given_graph(a: &GenArgs) -> Result<Option<Digraph>, Failure> {
    let Some(es) = &a.edges else { return Ok(None) };
    let edges = es
        .iter()
        .filter(|e| !e.is_empty())
        .map(|e| parse_edge(e))
        .collect::<Result<Vec<_>, _>>()?;
    let n = a
        .nodes
        .unwrap_or_else(|| edges.iter().map(|&(x, y)| x.max(y) + 1).max().unwrap_or(0));
    Ok(Some(
        Digraph::new(n, &edges).map_err(|e| Failure::usage(e.to_string()))?,
    ))
}

fn pick(given: Option<usize>, n: usize, rng: &mut ChaCha8Rng) -> usize {
    given.unwrap_or_else(|| rng.gen_range(0..n.max(1)))
}

fn random_gamma(a: &GenArgs, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let vars = a.vars.max(1) as i64;
    (0..a.clauses.max(1))
        .map(|_| {
            let mut vs: Vec<i64> = (1..=vars).collect();
            vs.shuffle(rng);
            vs.truncate(rng.gen_range(1..=3.min(vars as usize)));
            vs.into_iter()
                .map(|v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect()
}

/// Builds one instance; with random parts the draw is repeated until the
/// generator's preconditions hold.
fn build(a: &GenArgs, rng: &mut ChaCha8Rng) -> Result<GeneratedInstance, Failure> {
    let fixed = given_graph(a)?;
    let tries = if fixed.is_some() && a.reduction != Reduction::Presence3sat {
        1
    } else {
        10_000
    };
    let mut last = String::new();
    for _ in 0..tries {
        let n = a.nodes.unwrap_or_else(|| rng.gen_range(4..=7));
        let g = match &fixed {
            Some(g) => g.clone(),
            None if a.reduction == Reduction::SizeStronglyConnected => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(rng);
                let mut e: Vec<(usize, usize)> =
                    (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
                e.extend(Digraph::random(n, a.density / 2.0, rng).edges);
                Digraph::new(n, &e).map_err(|e| Failure::usage(e.to_string()))?
            }
            None => Digraph::random(n, a.density, rng),
        };
        let n = g.nodes;
        let r = match a.reduction {
            Reduction::SizeCyclicImplied => {
                hardgen::gen_size_cyclic_implied(&g, pick(a.x, n, rng), pick(a.y, n, rng))
            }
            Reduction::SizeStronglyConnected => hardgen::gen_size_strongly_connected(&g),
            Reduction::PresenceInconsistent => {
                let e = match &a.edge {
                    Some(s) => parse_edge(s)?,
                    None => match g.edges.choose(rng) {
                        Some(&e) => e,
                        None => continue,
                    },
                };
                hardgen::gen_presence_inconsistent(&g, pick(a.x, n, rng), pick(a.y, n, rng), e)
            }
            Reduction::PresenceImpliedCyclic => {
                let mut v: Vec<usize> = (0..n).collect();
                v.shuffle(rng);
                v.resize(4, 0);
                let s = [
                    a.s1.unwrap_or(v[0]),
                    a.t1.unwrap_or(v[1]),
                    a.s2.unwrap_or(v[2]),
                    a.t2.unwrap_or(v[3]),
                ];
                hardgen::gen_presence_implied_cyclic(&g, s[0], s[1], s[2], s[3])
            }
            Reduction::Presence3sat => {
                let gamma = match &a.cnf {
                    Some(p) => {
                        let text = std::fs::read_to_string(p)
                            .map_err(|e| Failure::data(format!("{p}: {e}")))?;
                        let d = parse_dimacs(&text)?;
                        d.formula
                            .clauses()
                            .iter()
                            .map(|c| c.lits().iter().map(|&l| d.original_lit(l)).collect())
                            .collect()
                    }
                    None => random_gamma(a, rng),
                };
                let r = hardgen::gen_presence_3sat(&gamma);
                if a.cnf.is_some() {
                    return r.map_err(|e| Failure::usage(e.to_string()));
                }
                r
            }
            Reduction::HornVertexCover => {
                let undirected: Vec<(usize, usize)> = g
                    .edges
                    .iter()
                    .copied()
                    .filter(|&(x, y)| fixed.is_some() || x < y)
                    .collect();
                hardgen::gen_horn_vertex_cover(n, &undirected)
            }
        };
        match r {
            Ok(i) => return Ok(i),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Failure::usage(if fixed.is_some() {
        last
    } else {
        format!("no random instance met the preconditions: {last}")
    }))
}

pub fn run(a: &GenArgs, g: &Global) -> Result<Output, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let i = build(a, &mut rng)?;
    let side = Sidecar {
        reduction: i.reduction,
        focus: i.focus.map(|f| f + 1),
        focus_clause: i.focus.map(|f| {
            i.formula
                .clause(f)
                .lits()
                .iter()
                .map(|l| l.to_dimacs())
                .collect()
        }),
        k: i.k,
        truth: i.truth,
        names: &i.names,
        seed: g.seed,
    };
    let mut dimacs = String::new();
    for (v, name) in i.names.iter().enumerate() {
        dimacs.push_str(&format!("c var {} {name}\n", v + 1));
    }
    dimacs.push_str(&emit_dimacs(&i.formula));
    let side_json = serde_json::to_string_pretty(&side).expect("serializable") + "\n";
    if let Some(out) = &a.out {
        let meta = format!("{out}.json");
        std::fs::write(out, &dimacs).map_err(|e| Failure::data(format!("{out}: {e}")))?;
        std::fs::write(&meta, &side_json).map_err(|e| Failure::data(format!("{meta}: {e}")))?;
        let text = match g.format {
            Format::Json => side_json,
            _ => format!("wrote {out} and {meta}\n"),
        };
        return Ok(Output {
            text,
            status: ANSWERED,
        });
    }
    let text = match g.format {
        Format::Json => side_json,
        _ => format!(
            "c sidecar {}\n{dimacs}",
            serde_json::to_string(&side).expect("serializable")
        ),
    };
    Ok(Output {
        text,
        status: ANSWERED,
    })
}
