use std::fmt;

/// Crate-wide error type. Variants map onto the CLI exit codes: input and
/// geometry problems are usage errors, budget variants mean a randomized
/// solver ran out of its configured resources, and `Internal` flags a broken
/// invariant that should never occur on valid inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed instance data, bad parameters, or parse failures.
    Input(String),
    /// Structurally valid data describing an unusable body (no interior,
    /// unbounded, degenerate basis, and similar).
    Geometry(String),
    Dimension {
        expected: usize,
        got: usize,
        what: &'static str,
    },
    /// Dimension exceeds the configured enumeration cap.
    CapExceeded { n: usize, cap: usize },
    /// The enumeration box itself is too large to scan.
    EnumerationTooLarge { points: u128, cap: u128 },
    /// Rejection sampling failed to hit the body within the attempt budget.
    RejectionBudget { attempts: usize },
    /// A sieve or solver ran out of pairs/guesses before producing an answer.
    BudgetExhausted(String),
    /// A sieve input pair violates its declared bounds.
    PairInvariant { index: usize, detail: String },
    /// The optimization loop exceeded its certified iteration cap.
    IterationCap(String),
    /// An invariant the algorithms guarantee was observed to fail.
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Geometry(msg) => write!(f, "degenerate geometry: {msg}"),
            Error::Dimension {
                expected,
                got,
                what,
            } => write!(f, "dimension mismatch in {what}: expected {expected}, got {got}"),
            Error::CapExceeded { n, cap } => {
                write!(f, "dimension {n} exceeds the enumeration cap {cap}")
            }
            Error::EnumerationTooLarge { points, cap } => {
                write!(f, "enumeration box holds {points} points, cap is {cap}")
            }
            Error::RejectionBudget { attempts } => {
                write!(f, "rejection sampler exhausted {attempts} attempts")
            }
            Error::BudgetExhausted(msg) => write!(f, "budget exhausted: {msg}"),
            Error::PairInvariant { index, detail } => {
                write!(f, "sieve pair {index} violates invariants: {detail}")
            }
            Error::IterationCap(msg) => write!(f, "iteration cap exceeded: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
