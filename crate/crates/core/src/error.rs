use thiserror::Error;

/// Every failure the library can report.
///
/// Polynomials carried by variants are rendered in the shared text grammar
/// with `t` as the variable, so they can be pasted back into `--field`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("extension is redundant: {minpoly} has a rational root")]
    RedundantExtension { minpoly: String },
    #[error("zero divisor found: the minimal polynomial has the factor {factor}")]
    NonInvertible { factor: String },
    #[error("division is not exact")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation is indeterminate at the current truncation")]
    IndeterminateValuation,
    #[error("element has negative valuation")]
    NotInValuationRing,
    #[error("a root of {minpoly} is needed; rerun with --field \"{minpoly}\"")]
    RequiresExtension { minpoly: String },
    #[error("truncation cap reached before the computation was certified")]
    TruncationInsufficient,
    #[error("the curves share a common component")]
    CommonComponent,
    #[error("an intersection point is not defined over the field; it needs a root of {factor}")]
    UnrepresentablePoint { factor: String },
    #[error("no generic coordinate system found")]
    DegenerateCoordinates,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("seeds disagree on the multiplicity: {counts:?}")]
    NondeterministicCount { counts: Vec<usize> },
    #[error("counterexample: {element}")]
    CounterexampleFound { element: String },
    #[error("the point is not on both curves")]
    NotACommonPoint,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
