use thiserror::Error;

/// Errors produced by the symbolic kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("syntax error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("substitution produced an identically zero denominator")]
    ZeroDenominator,

    #[error("singular 2x2 system: determinant is identically zero")]
    SingularSystem,

    #[error("term budget exceeded: {terms} terms with budget {budget} (set MOMENT_MAX_TERMS to override)")]
    TermBudget { terms: usize, budget: usize },

    #[error("monomial exponent overflow")]
    ExponentOverflow,
}
