use thiserror::Error;

/// Errors raised by the exact classification engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("k^2 + l^2 = lm + kn + 1 fails for K({k},{l},{m},{n}): {lhs} != {rhs}")]
    StarViolation {
        k: u32,
        l: u32,
        m: u32,
        n: u32,
        lhs: u64,
        rhs: u64,
    },

    #[error("degenerate character system: {0}")]
    DegenerateSystem(String),

    #[error("no character is positive on every basis element")]
    NoPositiveCharacter,

    #[error("dimension vanishes on basis element {0}")]
    ZeroDimension(usize),

    #[error("undecided after escalating to {bits} bits: {detail}")]
    Undecidable { bits: u32, detail: String },

    #[error("fixed character is not integral: {0}")]
    NonIntegralFixedCharacter(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::StarViolation { .. } => "star_violation",
            Error::DegenerateSystem(_) => "degenerate_system",
            Error::NoPositiveCharacter => "no_positive_character",
            Error::ZeroDimension(_) => "zero_dimension",
            Error::Undecidable { .. } => "undecidable",
            Error::NonIntegralFixedCharacter(_) => "non_integral_fixed_character",
            Error::InvalidRing(_) => "invalid_ring",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
