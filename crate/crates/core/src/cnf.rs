//! Propositional data model: literals, clauses, formulas, DIMACS I/O and
//! the unit-clause elimination used by the graph algorithms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::CnfError;

/// A literal over a dense variable index `var >= 1`.
///
/// Encoded as `2 * (var - 1) + neg`, so the natural order is by variable
/// first and the positive literal sorts before the negative one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        assert!(var >= 1, "variables are numbered from 1");
        Lit(2 * (var - 1) + u32::from(!positive))
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, true)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(var, false)
    }

    /// Literal from its position in the `2 * n` node numbering.
    pub fn from_index(index: usize) -> Lit {
        Lit(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn var(self) -> u32 {
        self.0 / 2 + 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 || value.unsigned_abs() > u64::from(u32::MAX / 2) {
            return None;
        }
        Some(Lit::new(value.unsigned_abs() as u32, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var());
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        self.negate()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl serde::Serialize for Lit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A non-empty, non-tautological clause with sorted, distinct literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Result<Clause, CnfError> {
        lits.sort_unstable();
        lits.dedup();
        if lits.is_empty() {
            return Err(CnfError::EmptyClause { line: None });
        }
        if let Some(w) = lits.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Err(CnfError::Tautology {
                line: None,
                var: w[0].var(),
            });
        }
        Ok(Clause { lits })
    }

    /// Builds a clause from DIMACS integers; panics on invalid input.
    /// Intended for tests and literal constants.
    pub fn from_dimacs(values: &[i64]) -> Clause {
        let lits = values
            .iter()
            .map(|&v| Lit::from_dimacs(v).expect("non-zero literal"))
            .collect();
        Clause::new(lits).expect("valid clause")
    }

    pub fn binary(a: Lit, b: Lit) -> Clause {
        Clause::new(vec![a, b]).expect("binary clause over two variables")
    }

    pub fn unit(a: Lit) -> Clause {
        Clause { lits: vec![a] }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lits.len() == 1
    }

    pub fn is_horn(&self) -> bool {
        self.lits.iter().filter(|l| l.is_positive()).count() <= 1
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.lits.binary_search(&l).is_ok()
    }

    pub fn max_var(&self) -> u32 {
        self.lits.iter().map(|l| l.var()).max().unwrap_or(0)
    }

    /// Clause `a -> b`, i.e. `¬a ∨ b`.
    pub fn implication(a: Lit, b: Lit) -> Clause {
        Clause::binary(!a, b)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaKind {
    /// Every clause has at most two literals and some clause is not Horn.
    TwoCnf,
    /// Every clause is Horn and some clause is wider than two.
    Horn,
    /// Both 2CNF and Horn.
    Both,
}

impl FormulaKind {
    pub fn is_two_cnf(self) -> bool {
        matches!(self, FormulaKind::TwoCnf | FormulaKind::Both)
    }

    pub fn is_horn(self) -> bool {
        matches!(self, FormulaKind::Horn | FormulaKind::Both)
    }
}

fn infer_kind(clauses: &[Clause]) -> Result<FormulaKind, CnfError> {
    let narrow = clauses.iter().all(|c| c.len() <= 2);
    let horn = clauses.iter().all(Clause::is_horn);
    match (narrow, horn) {
        (true, true) => Ok(FormulaKind::Both),
        (true, false) => Ok(FormulaKind::TwoCnf),
        (false, true) => Ok(FormulaKind::Horn),
        (false, false) => Err(CnfError::Unsupported),
    }
}

/// A set of clauses in canonical order. Clause ids are positions in that order.
#[derive(Clone, PartialEq, Eq)]
pub struct Formula {
    clauses: Vec<Clause>,
    num_vars: u32,
    kind: FormulaKind,
}

impl Formula {
    /// Canonicalizes `clauses` (sorting and merging duplicates).
    /// `num_vars` is raised to the largest variable used if needed.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Formula, CnfError> {
        Ok(Formula::with_duplicates(num_vars, clauses)?.0)
    }

    /// Like [`Formula::new`], also returning how many duplicates were merged.
    pub fn with_duplicates(
        num_vars: u32,
        mut clauses: Vec<Clause>,
    ) -> Result<(Formula, usize), CnfError> {
        let before = clauses.len();
        clauses.sort();
        clauses.dedup();
        let dups = before - clauses.len();
        let kind = infer_kind(&clauses)?;
        let used = clauses.iter().map(Clause::max_var).max().unwrap_or(0);
        Ok((
            Formula {
                clauses,
                num_vars: num_vars.max(used),
                kind,
            },
            dups,
        ))
    }

    /// Builds a formula from DIMACS-style integer clauses; panics on invalid input.
    pub fn from_dimacs_clauses(clauses: &[&[i64]]) -> Formula {
        let cs: Vec<Clause> = clauses.iter().map(|c| Clause::from_dimacs(c)).collect();
        Formula::new(0, cs).expect("supported formula")
    }

    pub fn empty() -> Formula {
        Formula {
            clauses: Vec::new(),
            num_vars: 0,
            kind: FormulaKind::Both,
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, id: usize) -> &Clause {
        &self.clauses[id]
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn kind(&self) -> FormulaKind {
        self.kind
    }

    pub fn position(&self, c: &Clause) -> Option<usize> {
        self.clauses.binary_search(c).ok()
    }

    pub fn check_id(&self, id: usize) -> Result<(), CnfError> {
        if id < self.clauses.len() {
            Ok(())
        } else {
            Err(CnfError::UnknownClause(id))
        }
    }

    /// The sub-formula made of the given clause ids, over the same variables.
    pub fn subset(&self, ids: &[usize]) -> Result<Formula, CnfError> {
        let mut cs = Vec::with_capacity(ids.len());
        for &id in ids {
            self.check_id(id)?;
            cs.push(self.clauses[id].clone());
        }
        Formula::new(self.num_vars, cs)
    }

    /// The formula without clause `id`.
    pub fn without(&self, id: usize) -> Formula {
        let cs = self
            .clauses
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != id)
            .map(|(_, c)| c.clone())
            .collect();
        Formula::new(self.num_vars, cs).expect("subset of a valid formula")
    }

    pub fn require_two_cnf(&self) -> Result<(), CnfError> {
        if self.kind.is_two_cnf() {
            Ok(())
        } else {
            Err(CnfError::NotTwoCnf)
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, "}}")
    }
}

/// Result of reading a DIMACS file.
#[derive(Clone, Debug)]
pub struct ParsedDimacs {
    pub formula: Formula,
    pub warnings: Vec<String>,
    /// `var_names[v - 1]` is the original DIMACS number of dense variable `v`.
    pub var_names: Vec<u32>,
    /// For each clause in input order: its first line and its canonical id.
    pub clause_lines: Vec<(usize, usize)>,
}

impl ParsedDimacs {
    pub fn original_lit(&self, l: Lit) -> i64 {
        let name = i64::from(self.var_names[(l.var() - 1) as usize]);
        if l.is_positive() {
            name
        } else {
            -name
        }
    }
}

/// Parses DIMACS CNF text into a canonical formula with dense variables.
pub fn parse_dimacs(text: &str) -> Result<ParsedDimacs, CnfError> {
    let mut header: Option<(u32, usize)> = None;
    let mut raw: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut current_line = 0;
    let mut warnings = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::parse(lineno, "duplicate header"));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(CnfError::parse(lineno, "expected `p cnf <vars> <clauses>`"));
            }
            let n = parts[2]
                .parse::<u32>()
                .map_err(|_| CnfError::parse(lineno, "bad variable count"))?;
            let m = parts[3]
                .parse::<usize>()
                .map_err(|_| CnfError::parse(lineno, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(CnfError::parse(lineno, "clause before header"));
        };
        for tok in trimmed.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| CnfError::parse(lineno, format!("bad token `{tok}`")))?;
            if v == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause { line: Some(lineno) });
                }
                raw.push((current_line, std::mem::take(&mut current)));
                continue;
            }
            if v.unsigned_abs() > u64::from(n) {
                return Err(CnfError::parse(
                    lineno,
                    format!("variable {} exceeds header count {n}", v.abs()),
                ));
            }
            if current.is_empty() {
                current_line = lineno;
            }
            current.push(v);
        }
    }
    let Some((_, m)) = header else {
        return Err(CnfError::MissingHeader);
    };
    if !current.is_empty() {
        return Err(CnfError::parse(current_line, "clause not terminated by 0"));
    }
    if raw.len() != m {
        warnings.push(format!("header declares {m} clauses, found {}", raw.len()));
    }

    let used: BTreeSet<u32> = raw
        .iter()
        .flat_map(|(_, c)| c.iter().map(|v| v.unsigned_abs() as u32))
        .collect();
    let dense: BTreeMap<u32, u32> = used
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32 + 1))
        .collect();
    let var_names: Vec<u32> = used.iter().copied().collect();

    let mut clauses = Vec::with_capacity(raw.len());
    for (line, vals) in &raw {
        let lits = vals
            .iter()
            .map(|&v| Lit::new(dense[&(v.unsigned_abs() as u32)], v > 0))
            .collect();
        let c = Clause::new(lits).map_err(|e| e.at_line(*line))?;
        clauses.push((*line, c));
    }
    let (formula, dups) = Formula::with_duplicates(
        var_names.len() as u32,
        clauses.iter().map(|(_, c)| c.clone()).collect(),
    )?;
    if dups > 0 {
        warnings.push(format!("merged {dups} duplicate clause(s)"));
    }
    let clause_lines = clauses
        .iter()
        .map(|(line, c)| (*line, formula.position(c).expect("clause present")))
        .collect();
    Ok(ParsedDimacs {
        formula,
        warnings,
        var_names,
        clause_lines,
    })
}

/// Emits DIMACS text, one clause per line in canonical order.
pub fn emit_dimacs(f: &Formula) -> String {
    emit_dimacs_with(f, |l| l.to_dimacs())
}

/// Emits DIMACS text using `name` to print each literal.
pub fn emit_dimacs_with(f: &Formula, name: impl Fn(Lit) -> i64) -> String {
    let n = f
        .clauses()
        .iter()
        .flat_map(|c| c.lits().iter().map(|&l| name(l).unsigned_abs()))
        .max()
        .unwrap_or(0)
        .max(u64::from(f.num_vars()));
    let mut out = format!("p cnf {} {}\n", n, f.len());
    for c in f.clauses() {
        for &l in c.lits() {
            out.push_str(&name(l).to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// A binary formula obtained by replacing each unit `l` with `l ∨ w` and
/// `l ∨ ¬w` over a fresh `w`. Weights are in half-units: 1 for each clause
/// of such a pair and 2 for a clause that was already binary.
#[derive(Clone, Debug)]
pub struct WeightedFormula {
    pub base: Vec<Clause>,
    pub weight: Vec<u32>,
    /// Id of the original clause each base clause comes from.
    pub source: Vec<usize>,
    /// True for the two clauses replacing a unit.
    pub introduced: Vec<bool>,
    /// Variable count including the fresh variables.
    pub num_vars: u32,
    pub original_vars: u32,
    /// Base clause ids for each original clause.
    pub images: Vec<Vec<usize>>,
}

impl WeightedFormula {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.weight.iter().map(|&w| u64::from(w)).sum()
    }

    /// Original clause ids covered by a set of base ids. A unit counts as
    /// covered only when both halves are present.
    pub fn original_ids(&self, base_ids: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = base_ids.iter().copied().collect();
        self.images
            .iter()
            .enumerate()
            .filter(|(_, img)| img.iter().all(|b| set.contains(b)))
            .map(|(i, _)| i)
            .collect()
    }

    /// Base ids of a set of original clause ids.
    pub fn base_ids(&self, original: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = original
            .iter()
            .flat_map(|&i| self.images[i].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// The fresh variable that replaced an original unit clause, if any.
    pub fn fresh_var_of(&self, original: usize) -> Option<u32> {
        let img = &self.images[original];
        if img.len() == 2 {
            self.base[img[0]]
                .lits()
                .iter()
                .map(|l| l.var())
                .find(|&v| v > self.original_vars)
        } else {
            None
        }
    }
}

/// Replaces unit clauses by weighted pairs. Requires a 2CNF formula.
pub fn eliminate_units(f: &Formula) -> Result<WeightedFormula, CnfError> {
    f.require_two_cnf()?;
    let mut wf = WeightedFormula {
        base: Vec::with_capacity(f.len()),
        weight: Vec::with_capacity(f.len()),
        source: Vec::with_capacity(f.len()),
        introduced: Vec::with_capacity(f.len()),
        num_vars: f.num_vars(),
        original_vars: f.num_vars(),
        images: Vec::with_capacity(f.len()),
    };
    for (id, c) in f.clauses().iter().enumerate() {
        if c.is_unit() {
            let l = c.lits()[0];
            wf.num_vars += 1;
            let w = wf.num_vars;
            let start = wf.base.len();
            wf.base.push(Clause::binary(l, Lit::pos(w)));
            wf.base.push(Clause::binary(l, Lit::neg(w)));
            wf.weight.extend([1, 1]);
            wf.source.extend([id, id]);
            wf.introduced.extend([true, true]);
            wf.images.push(vec![start, start + 1]);
        } else {
            wf.images.push(vec![wf.base.len()]);
            wf.base.push(c.clone());
            wf.weight.push(2);
            wf.source.push(id);
            wf.introduced.push(false);
        }
    }
    Ok(wf)
}

/// Total weight of a set of base clause ids, in half-units.
pub fn subset_size_half_units(wf: &WeightedFormula, ids: &[usize]) -> Result<u64, CnfError> {
    let mut total = 0u64;
    for &id in ids {
        let w = wf.weight.get(id).ok_or(CnfError::UnknownClause(id))?;
        total += u64::from(*w);
    }
    Ok(total)
}

/// Formats a half-unit count as `p/2`.
pub fn half_units_string(h: u64) -> String {
    format!("{h}/2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: i64) -> Lit {
        Lit::from_dimacs(v).unwrap()
    }

    #[test]
    fn literal_encoding() {
        let a = Lit::pos(3);
        assert_eq!(a.var(), 3);
        assert!(a.is_positive());
        assert_eq!(!!a, a);
        assert_eq!((!a).to_dimacs(), -3);
        assert!(Lit::pos(1) < Lit::neg(1));
        assert!(Lit::neg(1) < Lit::pos(2));
        assert_eq!(Lit::from_dimacs(0), None);
    }

    #[test]
    fn clause_rejects_tautology_and_empty() {
        assert!(matches!(
            Clause::new(vec![]),
            Err(CnfError::EmptyClause { .. })
        ));
        assert!(matches!(
            Clause::new(vec![lit(1), lit(-1)]),
            Err(CnfError::Tautology { var: 1, .. })
        ));
        let c = Clause::new(vec![lit(2), lit(-1), lit(2)]).unwrap();
        assert_eq!(c.lits(), &[lit(-1), lit(2)]);
    }

    #[test]
    fn parse_basic() {
        let p = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
        let expected = Formula::from_dimacs_clauses(&[&[1, 2], &[-1, 2]]);
        assert_eq!(p.formula, expected);
        assert_eq!(p.formula.kind(), FormulaKind::TwoCnf);
        assert!(p.warnings.is_empty());
        assert_eq!(p.formula.clause(0), &Clause::from_dimacs(&[1, 2]));
    }

    #[test]
    fn parse_rejects_tautology_with_line() {
        let err = parse_dimacs("p cnf 1 1\n1 -1 0\n").unwrap_err();
        assert!(
            matches!(
                err,
                CnfError::Tautology {
                    line: Some(2),
                    var: 1
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn parse_merges_duplicates() {
        let p = parse_dimacs("p cnf 2 3\n1 2 0\n1 2 0\n-1 0\n").unwrap();
        assert_eq!(p.formula.len(), 2);
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.clause_lines, vec![(2, 0), (3, 0), (4, 1)]);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(
            parse_dimacs("c x\np cnf 2 1\n1 x 0\n"),
            Err(CnfError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_dimacs("1 2 0\n"),
            Err(CnfError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(CnfError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n0\n"),
            Err(CnfError::EmptyClause { line: Some(2) })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 3 0\n"),
            Err(CnfError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_dimacs(""), Err(CnfError::MissingHeader)));
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 2 3 0\n"),
            Err(CnfError::Unsupported)
        ));
    }

    #[test]
    fn parse_dense_renumbering() {
        let p = parse_dimacs("p cnf 9 2\n9 -4 0\n4 0\n").unwrap();
        assert_eq!(p.var_names, vec![4, 9]);
        assert_eq!(p.formula.num_vars(), 2);
        assert_eq!(
            p.formula.clauses(),
            &[Clause::from_dimacs(&[1]), Clause::from_dimacs(&[-1, 2])]
        );
        assert_eq!(p.original_lit(lit(-1)), -4);
    }

    #[test]
    fn clauses_may_span_lines() {
        let p = parse_dimacs("p cnf 3 2\n1\n 2 0 -3\n0\n").unwrap();
        assert_eq!(p.formula.len(), 2);
    }

    #[test]
    fn emit_examples() {
        let f = Formula::from_dimacs_clauses(&[&[1, 2]]);
        assert_eq!(emit_dimacs(&f), "p cnf 2 1\n1 2 0\n");
        assert_eq!(emit_dimacs(&Formula::empty()), "p cnf 0 0\n");
    }

    #[test]
    fn canonical_identity_ignores_order() {
        let f1 = Formula::from_dimacs_clauses(&[&[2, 1], &[-3, 1], &[2]]);
        let f2 = Formula::from_dimacs_clauses(&[&[2], &[1, -3], &[1, 2], &[2, 1]]);
        assert_eq!(f1, f2);
    }

    #[test]
    fn kind_inference() {
        assert_eq!(
            Formula::from_dimacs_clauses(&[&[1, 2]]).kind(),
            FormulaKind::TwoCnf
        );
        assert_eq!(
            Formula::from_dimacs_clauses(&[&[-1, -2, 3]]).kind(),
            FormulaKind::Horn
        );
        assert_eq!(
            Formula::from_dimacs_clauses(&[&[-1, 2], &[1]]).kind(),
            FormulaKind::Both
        );
    }

    #[test]
    fn unit_elimination_pairs() {
        let f = Formula::from_dimacs_clauses(&[&[1]]);
        let wf = eliminate_units(&f).unwrap();
        assert_eq!(
            wf.base,
            vec![Clause::from_dimacs(&[1, 2]), Clause::from_dimacs(&[1, -2])]
        );
        assert_eq!(wf.weight, vec![1, 1]);
        assert_eq!(wf.source, vec![0, 0]);
        assert_eq!(wf.fresh_var_of(0), Some(2));

        let g = Formula::from_dimacs_clauses(&[&[1, 2]]);
        let wg = eliminate_units(&g).unwrap();
        assert_eq!(wg.base, g.clauses());
        assert_eq!(wg.weight, vec![2]);
    }

    #[test]
    fn half_unit_sizes() {
        let f = Formula::from_dimacs_clauses(&[&[1], &[-1, 2]]);
        let wf = eliminate_units(&f).unwrap();
        assert_eq!(subset_size_half_units(&wf, &wf.images[0]).unwrap(), 2);
        assert_eq!(subset_size_half_units(&wf, &wf.images[1]).unwrap(), 2);
        assert_eq!(subset_size_half_units(&wf, &[0, 1, 2]).unwrap(), 4);
        assert!(subset_size_half_units(&wf, &[7]).is_err());
        assert_eq!(half_units_string(12), "12/2");
    }

    #[test]
    fn original_ids_need_both_halves() {
        let f = Formula::from_dimacs_clauses(&[&[1], &[-1, 2]]);
        let wf = eliminate_units(&f).unwrap();
        assert_eq!(wf.original_ids(&[0, 2]), vec![1]);
        assert_eq!(wf.original_ids(&[0, 1]), vec![0]);
        assert_eq!(wf.base_ids(&[0, 1]), vec![0, 1, 2]);
    }
}
