use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("{}empty clause", line_prefix(*line))]
    EmptyClause { line: Option<usize> },
    #[error("{}tautological clause on variable {var}", line_prefix(*line))]
    Tautology { line: Option<usize>, var: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("formula is neither 2CNF nor Horn")]
    Unsupported,
    #[error("operation requires a 2CNF formula")]
    NotTwoCnf,
    #[error("operation requires a Horn formula")]
    NotHorn,
    #[error("unknown clause id {0}")]
    UnknownClause(usize),
    #[error("clause {0:?} contains a unit or wide clause where a binary clause is required")]
    NotBinary(usize),
}

fn line_prefix(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

impl CnfError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> CnfError {
        CnfError::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn at_line(self, line: usize) -> CnfError {
        match self {
            CnfError::EmptyClause { .. } => CnfError::EmptyClause { line: Some(line) },
            CnfError::Tautology { var, .. } => CnfError::Tautology {
                line: Some(line),
                var,
            },
            other => other,
        }
    }
}

/// Errors raised by the analysis operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("formula is inconsistent")]
    Inconsistent,
    #[error("clause {0} is on a cycle of clauses; presence needs exact search")]
    NeedsSearch(usize),
}

impl AnalysisError {
    pub(crate) fn pre(msg: impl Into<String>) -> AnalysisError {
        AnalysisError::Precondition(msg.into())
    }
}
