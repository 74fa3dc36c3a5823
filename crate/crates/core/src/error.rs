use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by model construction and the numeric pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyAlphabet,
    NonSquareMatrix {
        rows: usize,
        row: usize,
        len: usize,
    },
    NonBinaryEntry {
        row: usize,
        col: usize,
    },
    DuplicateSymbol(String),
    UnknownSymbol(String),
    /// The transition structure is not irreducible (strongly connected).
    Reducible,
    /// An aperiodic model was required but the period is > 1.
    NotAperiodic {
        period: usize,
    },
    EmptyDelta,
    FullDelta,
    EmptyWord,
    InadmissibleWord(Vec<usize>),
    BadPotentialOrder {
        order: usize,
    },
    MissingPotentialValue(Vec<usize>),
    DuplicatePotentialValue(Vec<usize>),
    NonFiniteValue(Vec<usize>),
    NonConvergence {
        iterations: usize,
        residual: f64,
    },
    NotNormalized {
        deviation: f64,
    },
    InvalidTolerance,
    InvalidBlockLength,
    InvalidParameter(String),
    /// The requested sweep is shorter than one full period.
    RangeTooShort {
        n_max: usize,
        period: usize,
    },
    /// The brute-force enumeration would exceed its budget.
    EnumerationBudget {
        estimated: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyAlphabet => write!(f, "alphabet is empty"),
            Error::NonSquareMatrix { rows, row, len } => write!(
                f,
                "transition matrix is not square: {rows} rows but row {row} has {len} entries"
            ),
            Error::NonBinaryEntry { row, col } => {
                write!(f, "transition matrix entry ({row},{col}) is not 0 or 1")
            }
            Error::DuplicateSymbol(s) => write!(f, "duplicate symbol label {s:?}"),
            Error::UnknownSymbol(s) => write!(f, "unknown symbol label {s:?}"),
            Error::Reducible => write!(f, "transition structure is reducible"),
            Error::NotAperiodic { period } => {
                write!(
                    f,
                    "model is periodic with period {period}, aperiodicity required"
                )
            }
            Error::EmptyDelta => write!(f, "delta is empty"),
            Error::FullDelta => write!(f, "delta must be a proper subset of the alphabet"),
            Error::EmptyWord => write!(f, "word is empty"),
            Error::InadmissibleWord(w) => write!(f, "word {w:?} is not admissible"),
            Error::BadPotentialOrder { order } => {
                write!(f, "potential order must be at least 2, got {order}")
            }
            Error::MissingPotentialValue(w) => {
                write!(f, "no potential value for admissible word {w:?}")
            }
            Error::DuplicatePotentialValue(w) => {
                write!(f, "duplicate potential value for word {w:?}")
            }
            Error::NonFiniteValue(w) => write!(f, "potential value for word {w:?} is not finite"),
            Error::NonConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "iteration did not converge after {iterations} steps (residual {residual:e})"
            ),
            Error::NotNormalized { deviation } => write!(
                f,
                "potential is not normalised: worst column-sum deviation {deviation:e}"
            ),
            Error::InvalidTolerance => write!(f, "tolerance must be strictly positive"),
            Error::InvalidBlockLength => write!(f, "block length must be at least 1"),
            Error::InvalidParameter(msg) => write!(f, "{msg}"),
            Error::RangeTooShort { n_max, period } => write!(
                f,
                "sweep length {n_max} is shorter than the subsystem period {period}"
            ),
            Error::EnumerationBudget { estimated } => write!(
                f,
                "enumeration of about {estimated:.3e} words exceeds the oracle budget"
            ),
        }
    }
}

impl std::error::Error for Error {}
