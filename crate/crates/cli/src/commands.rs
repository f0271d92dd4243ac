use std::fmt::Write as _;
use std::io::Read;
use std::time::Duration;

use serde::Serialize;

use twocnf_ies::exact::{self, SearchBudget, SearchError};
use twocnf_ies::horn::{horn_ies_basics, horn_redundancy, HornSolver};
use twocnf_ies::ies::{self, Membership};
use twocnf_ies::redundancy;
use twocnf_ies::{
    classify, emit_dimacs_with, half_units_string, parse_dimacs, AnalysisError, CnfError, Formula,
    Lit, ParsedDimacs, Prepared,
};

use crate::status::{ANSWERED, DATA, EXHAUSTED, FALSE, USAGE};
use crate::{Cli, Command, Format, Global, Input, Question};

pub struct Output {
    pub text: String,
    pub status: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub status: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(m: impl Into<String>) -> Failure {
        Failure {
            status: USAGE,
            message: m.into(),
        }
    }

    pub fn data(m: impl Into<String>) -> Failure {
        Failure {
            status: DATA,
            message: m.into(),
        }
    }
}

impl From<CnfError> for Failure {
    fn from(e: CnfError) -> Failure {
        match e {
            CnfError::UnknownClause(_) => Failure::usage(e.to_string()),
            _ => Failure::data(e.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Failure {
        match e {
            AnalysisError::Cnf(c) => c.into(),
            other => Failure::data(other.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Failure {
        match e {
            SearchError::Cnf(c) => c.into(),
            SearchError::Exhausted(x) => Failure {
                status: EXHAUSTED,
                message: format!("exact search stopped: {x}"),
            },
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn done(text: String) -> Result<Output> {
    Ok(Output {
        text,
        status: ANSWERED,
    })
}

pub fn budget(g: &Global) -> SearchBudget {
    let mut b = SearchBudget::default();
    if g.exact_force {
        b.max_clauses = SearchBudget::unlimited().max_clauses;
    }
    if let Some(m) = g.max_clauses {
        b.max_clauses = m;
    }
    if let Some(n) = g.max_nodes {
        b.max_nodes = n;
    }
    if let Some(t) = g.time_cap {
        b.time_cap = Some(Duration::from_secs_f64(t.max(0.0)));
    }
    b
}

fn load(input: &Input) -> Result<ParsedDimacs> {
    let text = match input.path.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::data(format!("reading standard input: {e}")))?;
            s
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::data(format!("{p}: {e}")))?,
    };
    let parsed = parse_dimacs(&text)?;
    for w in &parsed.warnings {
        eprintln!("twocnf-ies: warning: {w}");
    }
    Ok(parsed)
}

/// Formula plus the naming needed to print it in the input's terms.
struct Doc {
    parsed: ParsedDimacs,
    horn: bool,
}

impl Doc {
    fn new(parsed: ParsedDimacs, g: &Global) -> Result<Doc> {
        let horn = g.horn || !parsed.formula.kind().is_two_cnf();
        if horn && !parsed.formula.kind().is_horn() {
            return Err(CnfError::NotHorn.into());
        }
        Ok(Doc { parsed, horn })
    }

    fn f(&self) -> &Formula {
        &self.parsed.formula
    }

    fn lit(&self, l: Lit) -> i64 {
        if (l.var() as usize) <= self.parsed.var_names.len() {
            self.parsed.original_lit(l)
        } else {
            l.to_dimacs()
        }
    }

    fn clause(&self, id: usize) -> Vec<i64> {
        self.f()
            .clause(id)
            .lits()
            .iter()
            .map(|&l| self.lit(l))
            .collect()
    }

    fn clause_text(&self, id: usize) -> String {
        let parts: Vec<String> = self.clause(id).iter().map(i64::to_string).collect();
        format!("({})", parts.join(" "))
    }

    fn id_arg(&self, id: usize) -> Result<usize> {
        if id == 0 || id > self.f().len() {
            return Err(Failure::usage(format!(
                "clause id {id} outside 1..={}",
                self.f().len()
            )));
        }
        Ok(id - 1)
    }

    fn map(&self) -> Vec<MapEntry> {
        self.parsed
            .clause_lines
            .iter()
            .map(|&(line, id)| MapEntry {
                line,
                clause: id + 1,
            })
            .collect()
    }

    fn dimacs(&self, ids: &[usize]) -> String {
        let sub = self.f().subset(ids).expect("ids from the formula");
        emit_dimacs_with(&sub, |l| self.lit(l))
    }

    fn dot(&self, mark: &dyn Fn(usize) -> bool) -> Result<String> {
        if self.horn {
            return Err(Failure::usage("dot output needs a 2CNF formula"));
        }
        let p = Prepared::new(self.f())?;
        let n = self.f().num_vars();
        let name = |l: Lit| {
            if l.var() <= n {
                self.lit(l).to_string()
            } else {
                format!("{}w{}", if l.is_positive() { "" } else { "-" }, l.var())
            }
        };
        let label = |k: usize| {
            let id = p.wf.source[k];
            format!("{}{}", id + 1, if mark(id) { "*" } else { "" })
        };
        Ok(p.graph.to_dot(&name, &label))
    }
}

#[derive(Serialize)]
struct MapEntry {
    line: usize,
    clause: usize,
}

fn one_based(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|i| i + 1).collect()
}

fn join(ids: &[usize]) -> String {
    ids.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn map_human(doc: &Doc, g: &Global) -> String {
    let mut s = String::new();
    if g.map {
        for e in doc.map() {
            let _ = writeln!(s, "line {} -> clause {}", e.line, e.clause);
        }
    }
    s
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::usage(format!("{cmd} has no {f:?} output").to_lowercase())
}

pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Classify(i) => classify_cmd(&Doc::new(load(i)?, g)?, g),
        Command::Redundant(i) => redundant_cmd(&Doc::new(load(i)?, g)?, g),
        Command::Ies { input, unique_only } => {
            ies_cmd(&Doc::new(load(input)?, g)?, g, *unique_only)
        }
        Command::IesSize { input, exact } => size_cmd(&Doc::new(load(input)?, g)?, g, *exact),
        Command::InIes {
            input, clause, all, ..
        } => in_ies_cmd(&Doc::new(load(input)?, g)?, g, *clause, *all),
        Command::Prune(i) => prune_cmd(&Doc::new(load(i)?, g)?, g),
        Command::Gen(a) => crate::generate::run(a, g),
        Command::Oracle { question } => oracle_cmd(question, g),
    }
}

#[derive(Serialize)]
struct ClassifyJson {
    regime: String,
    cyclic: String,
    implied: Vec<i64>,
    cycle: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<Vec<MapEntry>>,
}

fn classify_cmd(doc: &Doc, g: &Global) -> Result<Output> {
    let (regime, cyclic, implied, cycle) = if doc.horn {
        let consistent = HornSolver::new(doc.f())?.is_consistent();
        (
            if consistent {
                "consistent"
            } else {
                "inconsistent"
            }
            .to_string(),
            "n/a".to_string(),
            Vec::new(),
            Vec::new(),
        )
    } else {
        let c = classify(doc.f())?;
        let cycle = match &c.cyclic {
            twocnf_ies::Cyclicity::Cyclic(ls) => ls.iter().map(|&l| doc.lit(l)).collect(),
            _ => Vec::new(),
        };
        (
            c.regime.label().to_string(),
            c.cyclic.label().to_string(),
            c.implied.iter().map(|&l| doc.lit(l)).collect(),
            cycle,
        )
    };
    match g.format {
        Format::Human => {
            let mut s = map_human(doc, g);
            let _ = writeln!(s, "{regime}, {cyclic}");
            if !implied.is_empty() {
                let _ = writeln!(
                    s,
                    "implied: {}",
                    implied
                        .iter()
                        .map(i64::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            if !cycle.is_empty() {
                let _ = writeln!(
                    s,
                    "cycle: {}",
                    cycle
                        .iter()
                        .map(i64::to_string)
                        .collect::<Vec<_>>()
                        .join(" -> ")
                );
            }
            done(s)
        }
        Format::Json => done(json(&ClassifyJson {
            regime,
            cyclic,
            implied,
            cycle,
            map: g.map.then(|| doc.map()),
        })),
        Format::Dot => done(doc.dot(&|_| false)?),
        Format::Dimacs => Err(unsupported("classify", g.format)),
    }
}

#[derive(Serialize)]
struct ClauseVerdict {
    id: usize,
    clause: Vec<i64>,
    verdict: redundancy::Verdict,
    source: redundancy::VerdictSource,
}

#[derive(Serialize)]
struct RedundantJson {
    redundant: bool,
    witness: Option<usize>,
    shortcut: bool,
    clauses: Vec<ClauseVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<Vec<MapEntry>>,
}

fn redundant_cmd(doc: &Doc, g: &Global) -> Result<Output> {
    let r = if doc.horn {
        horn_redundancy(doc.f())?
    } else {
        redundancy::check(doc.f())?
    };
    let clauses: Vec<ClauseVerdict> = (0..doc.f().len())
        .map(|i| ClauseVerdict {
            id: i + 1,
            clause: doc.clause(i),
            verdict: r.per_clause[i],
            source: r.source[i],
        })
        .collect();
    match g.format {
        Format::Human => {
            let mut s = map_human(doc, g);
            let _ = writeln!(
                s,
                "{}",
                if r.redundant {
                    "redundant"
                } else {
                    "irredundant"
                }
            );
            for (i, c) in clauses.iter().enumerate() {
                let v = if c.verdict.is_redundant() {
                    "redundant"
                } else {
                    "irredundant"
                };
                let _ = writeln!(s, "  {} {} {v}", c.id, doc.clause_text(i));
            }
            done(s)
        }
        Format::Json => done(json(&RedundantJson {
            redundant: r.redundant,
            witness: r.witness.map(|w| w + 1),
            shortcut: r.shortcut,
            clauses,
            map: g.map.then(|| doc.map()),
        })),
        Format::Dot => {
            let red = r.per_clause.clone();
            done(doc.dot(&|i| red[i].is_redundant())?)
        }
        Format::Dimacs => Err(unsupported("redundant", g.format)),
    }
}

fn is_unique(doc: &Doc) -> Result<bool> {
    Ok(if doc.horn {
        horn_ies_basics(doc.f())?.unique
    } else {
        ies::has_unique_ies(doc.f())?
    })
}

/// Membership keyed by 1-based clause id, in id order.
fn as_id_map<S: serde::Serializer>(v: &[Membership], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(v.iter().enumerate().map(|(i, m)| ((i + 1).to_string(), m)))
}

/// Clause count of a half-unit size, as users count clauses.
fn clauses(h: u64) -> String {
    if h.is_multiple_of(2) {
        (h / 2).to_string()
    } else {
        format!("{}.5", h / 2)
    }
}

#[derive(Serialize)]
struct IesJson {
    regime: String,
    cyclic: String,
    unique: Option<bool>,
    min_size: Option<String>,
    min_size_half_units: Option<u64>,
    ies: Vec<usize>,
    #[serde(serialize_with = "as_id_map")]
    membership: Vec<Membership>,
    exact_used: bool,
    alternatives: Vec<Vec<Vec<usize>>>,
    complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<Vec<MapEntry>>,
}

fn membership_label(m: Membership) -> &'static str {
    match m {
        Membership::InAll => "in-all",
        Membership::InSome => "in-some",
        Membership::InNone => "in-none",
        Membership::NeedsSearch => "needs-search",
    }
}

fn ies_cmd(doc: &Doc, g: &Global, unique_only: bool) -> Result<Output> {
    if unique_only && !is_unique(doc)? {
        return Ok(Output {
            text: "not unique\n".into(),
            status: FALSE,
        });
    }
    let r = ies::report_as(doc.f(), &budget(g), doc.horn)?;
    let sub = r.ies.clone().unwrap_or_default();
    let complete =
        r.min_size_half_units.is_some() && !r.membership.contains(&Membership::NeedsSearch);
    if !complete {
        eprintln!("twocnf-ies: some answers need exact search beyond the budget");
    }
    let status = if complete { ANSWERED } else { EXHAUSTED };
    let text = match g.format {
        Format::Human => {
            let mut s = map_human(doc, g);
            let _ = writeln!(s, "regime: {}, {}", r.regime, r.cyclic);
            if let Some(u) = r.unique {
                let _ = writeln!(s, "unique: {}", if u { "yes" } else { "no" });
            }
            match r.min_size_half_units {
                Some(h) => {
                    let _ = writeln!(s, "min size: {} clauses", clauses(h));
                }
                None => {
                    let _ = writeln!(s, "min size: unknown");
                }
            }
            let _ = writeln!(s, "subset: {}", join(&sub));
            let _ = writeln!(s, "membership:");
            for (i, m) in r.membership.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  {} {} {}",
                    i + 1,
                    doc.clause_text(i),
                    membership_label(*m)
                );
            }
            s
        }
        Format::Json => json(&IesJson {
            regime: r.regime.clone(),
            cyclic: r.cyclic.clone(),
            unique: r.unique,
            min_size_half_units: r.min_size_half_units,
            min_size: r.min_size_half_units.map(half_units_string),
            ies: one_based(&sub),
            membership: r.membership.clone(),
            exact_used: r.exact_used,
            alternatives: r
                .alternatives
                .iter()
                .map(|opts| opts.iter().map(|o| one_based(o)).collect())
                .collect(),
            complete,
            map: g.map.then(|| doc.map()),
        }),
        Format::Dimacs => doc.dimacs(&sub),
        Format::Dot => doc.dot(&|i| sub.contains(&i))?,
    };
    Ok(Output { text, status })
}

#[derive(Serialize)]
struct SizeJson {
    min_size: String,
    min_size_half_units: u64,
    ies: Vec<usize>,
    exact_used: bool,
}

fn size_cmd(doc: &Doc, g: &Global, exact: bool) -> Result<Output> {
    let poly = SearchBudget {
        max_clauses: 0,
        ..SearchBudget::default()
    };
    let r = ies::report_as(doc.f(), &poly, doc.horn)?;
    let (h, sub, exact_used) = match (r.min_size_half_units, r.ies) {
        (Some(h), Some(sub)) => (h, sub, false),
        _ if !exact => {
            return Err(Failure {
                status: EXHAUSTED,
                message: "no polynomial answer for this formula; rerun with --exact".into(),
            });
        }
        _ => {
            let (h, sub) = ies::min_size_exact(doc.f(), &budget(g), doc.horn)?;
            (h, sub, true)
        }
    };
    match g.format {
        Format::Human => {
            let mut s = map_human(doc, g);
            let _ = writeln!(s, "{} clauses", clauses(h));
            let _ = writeln!(s, "subset: {}", join(&sub));
            done(s)
        }
        Format::Json => done(json(&SizeJson {
            min_size_half_units: h,
            min_size: half_units_string(h),
            ies: one_based(&sub),
            exact_used,
        })),
        Format::Dimacs => done(doc.dimacs(&sub)),
        Format::Dot => done(doc.dot(&|i| sub.contains(&i))?),
    }
}

#[derive(Serialize)]
struct AnswerJson {
    clause: usize,
    question: &'static str,
    answer: bool,
}

fn answer(
    doc: &Doc,
    g: &Global,
    clause: usize,
    question: &'static str,
    yes: bool,
) -> Result<Output> {
    let text = match g.format {
        Format::Json => json(&AnswerJson {
            clause,
            question,
            answer: yes,
        }),
        Format::Human => format!("{}{}\n", map_human(doc, g), if yes { "yes" } else { "no" }),
        f => return Err(unsupported(question, f)),
    };
    Ok(Output {
        text,
        status: if yes { ANSWERED } else { FALSE },
    })
}

fn in_ies_cmd(doc: &Doc, g: &Global, clause: usize, all: bool) -> Result<Output> {
    let id = doc.id_arg(clause)?;
    let in_all = if doc.horn {
        horn_ies_basics(doc.f())?.in_all[id]
    } else {
        ies::in_all_ies(doc.f(), id)?
    };
    if all || in_all {
        return answer(
            doc,
            g,
            clause,
            if all { "in-all" } else { "in-some" },
            in_all,
        );
    }
    let r = ies::report_as(doc.f(), &budget(g), doc.horn)?;
    match r.membership[id].in_some() {
        Some(yes) => answer(doc, g, clause, "in-some", yes),
        None => {
            // surface the search's own reason
            exact::in_some_ies_witness(doc.f(), id, &budget(g), doc.horn)?;
            Err(Failure {
                status: EXHAUSTED,
                message: "exact search budget exhausted".into(),
            })
        }
    }
}

fn prune_cmd(doc: &Doc, g: &Global) -> Result<Output> {
    let r = ies::report_as(doc.f(), &budget(g), doc.horn)?;
    let sub = r.ies.expect("report always holds a subset");
    match g.format {
        Format::Human | Format::Dimacs => done(doc.dimacs(&sub)),
        Format::Json => done(json(&serde_json::json!({ "ies": one_based(&sub) }))),
        Format::Dot => done(doc.dot(&|i| sub.contains(&i))?),
    }
}

fn oracle_cmd(q: &Question, g: &Global) -> Result<Output> {
    let b = budget(g);
    match q {
        Question::Enumerate(i) => {
            let doc = Doc::new(load(i)?, g)?;
            let all = exact::enumerate_ies_as(doc.f(), &b, doc.horn)?;
            match g.format {
                Format::Json => done(json(
                    &serde_json::json!({ "subsets": all.iter().map(|s| one_based(s)).collect::<Vec<_>>() }),
                )),
                Format::Human => done(all.iter().map(|s| format!("{}\n", join(s))).collect()),
                f => Err(unsupported("oracle enumerate", f)),
            }
        }
        Question::MinSize(i) => {
            let doc = Doc::new(load(i)?, g)?;
            let (h, sub) = ies::min_size_exact(doc.f(), &b, doc.horn)?;
            match g.format {
                Format::Json => done(json(&SizeJson {
                    min_size_half_units: h,
                    min_size: half_units_string(h),
                    ies: one_based(&sub),
                    exact_used: true,
                })),
                Format::Human => done(format!("{} clauses\nsubset: {}\n", clauses(h), join(&sub))),
                Format::Dimacs => done(doc.dimacs(&sub)),
                f => Err(unsupported("oracle min-size", f)),
            }
        }
        Question::InSome { input, clause } => {
            let doc = Doc::new(load(input)?, g)?;
            let id = doc.id_arg(*clause)?;
            let found = exact::in_some_ies_witness(doc.f(), id, &b, doc.horn)?;
            answer(&doc, g, *clause, "in-some", found.is_some())
        }
        Question::IsIes { input, subset } => {
            let doc = Doc::new(load(input)?, g)?;
            let mut ids = Vec::with_capacity(subset.len());
            for &c in subset {
                ids.push(doc.id_arg(c)?);
            }
            ids.sort_unstable();
            ids.dedup();
            let yes = ies::is_ies(doc.f(), &ids)?;
            let text = match g.format {
                Format::Json => {
                    json(&serde_json::json!({ "subset": one_based(&ids), "is_ies": yes }))
                }
                Format::Human => format!("{}\n", if yes { "yes" } else { "no" }),
                f => return Err(unsupported("oracle is-ies", f)),
            };
            Ok(Output {
                text,
                status: if yes { ANSWERED } else { FALSE },
            })
        }
    }
}
