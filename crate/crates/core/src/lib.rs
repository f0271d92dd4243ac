//! Irredundant equivalent subsets of 2CNF and Horn formulas.
//!
//! The entry points are [`ies::report`] for a full analysis, the
//! [`redundancy`] and [`entailment`] checks, and [`exact`] for the
//! exponential reference searches.

pub mod cnf;
pub mod entailment;
pub mod error;
pub mod exact;
pub mod graph;
pub mod hardgen;
pub mod horn;
pub mod ies;
pub mod redundancy;

#[cfg(test)]
mod testutil;

pub use cnf::{
    eliminate_units, emit_dimacs, emit_dimacs_with, half_units_string, parse_dimacs, Clause,
    Formula, FormulaKind, Lit, ParsedDimacs, WeightedFormula,
};
pub use entailment::{classify, Classification, Decomposition, Prepared, Regime};
pub use error::{AnalysisError, CnfError};
pub use exact::{SearchBudget, SearchError};
pub use graph::{ContradictionWitness, Cyclicity, ImplicationGraph, LiteralSets};
pub use hardgen::{Digraph, GeneratedInstance, Truth};
pub use ies::{report, report_as, IesReport, Membership};
