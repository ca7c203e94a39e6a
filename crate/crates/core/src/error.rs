use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("variable undefined: {0}")]
    VarUndefined(String),
    #[error("automorphism rule undefined for {0}")]
    RuleUndefined(String),
    #[error("derivation must be zero for this operation")]
    DerivationNotZero,
    #[error("laurent ring required")]
    NotLaurent,
    #[error("precision increase from {from} to {to} requested")]
    PrecisionIncrease { from: usize, to: usize },
    #[error("nonzero constant term in pro-unipotent part")]
    NonzeroConstantTerm,
    #[error("section undefined on coefficient {0}")]
    SectionUndefined(String),
    #[error("homomorphism undefined on coefficient {0}")]
    HomUndefined(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
