use thiserror::Error;

use crate::domain::DomainKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("precision is undefined on an empty {0:?} value")]
    EmptyValue(DomainKind),
    #[error("value of kind {0:?} is not splittable (cardinality <= 1)")]
    NotSplittable(DomainKind),
    #[error("kind mismatch: expected {expected:?}, found {found:?}")]
    KindMismatch {
        expected: DomainKind,
        found: DomainKind,
    },
    #[error("cut {cut} lies outside the interval ({lo}, {hi})")]
    CutOutOfRange { cut: f64, lo: f64, hi: f64 },
    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),
    #[error("invalid domain: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StoreError {
    #[error("arity mismatch: {left} cells vs {right} cells")]
    Arity { left: usize, right: usize },
    #[error("variable index {index} out of range for a store of {len} cells")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("store is not divisible")]
    NotDivisible,
    #[error("store is inconsistent")]
    Inconsistent,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstraintError {
    #[error("variable index {index} out of range (arity {arity})")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("cell {0} is not a singleton")]
    NotSingleton(usize),
    #[error("variable {index} has kind {kind:?}, not usable in a {context} constraint")]
    WrongKind {
        index: usize,
        kind: DomainKind,
        context: &'static str,
    },
    #[error("table row has {found} entries, expected {expected}")]
    TupleArity { expected: usize, found: usize },
    #[error("initial store does not fit the variable declarations: {0}")]
    InitialStore(String),
    #[error("a CSP needs at least one variable")]
    NoVariables,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("cost arity mismatch: {0} vs {1}")]
    Arity(usize, usize),
    #[error("cost evaluated on an inconsistent store")]
    Inconsistent,
    #[error("variable {0} has no numeric value")]
    NonNumeric(usize),
    #[error("ordering {ordering} is incompatible with a cost of arity {arity}")]
    Ordering { ordering: String, arity: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("epsilon must be a non-negative real, got {0}")]
    Epsilon(f64),
    #[error("max_rounds must be at least 1")]
    MaxRounds,
    #[error("node budget must be at least 1")]
    NodeBudget,
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("variable {0} has a non-enumerable domain")]
    NonEnumerable(usize),
    #[error("candidate count {count} exceeds the cap {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error("no solutions to optimise over")]
    Empty,
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// Parse failure anchored at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}
