use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrices are not similar")]
    NotSimilar,
    #[error("profile size {size} exceeds the configured cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("invalid adjacency move: {0}")]
    InvalidMove(String),
    #[error("p-th powers do not match: {0}")]
    PowerMismatch(String),
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("interpolation samples: {0}")]
    DuplicateSample(String),
    #[error("reference vector is not in the kernel of the operator")]
    NotInKernel,
    #[error("operator lies outside the section neighborhood: {0}")]
    OutsideNeighborhood(String),
    #[error("parameter out of range: {0}")]
    DegenerateParameter(String),
    #[error("no window p*a <= k < l <= p*(a+1) contains ({k},{l}) for p = {p}")]
    WindowViolation { k: usize, l: usize, p: usize },
    #[error("lift bisection exceeded depth {0}")]
    LiftDepthExceeded(usize),
    #[error("root has no Jordan cells of the sizes required by the move: {0}")]
    MissingCells(String),
    #[error("no certified detour found for the centralizer path after {0} attempts")]
    DetourSearchExhausted(usize),
    #[error("internal guard tripped: {0}")]
    Internal(String),
}

impl Error {
    /// Errors that signal a tripped guard or cap rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::SizeCapExceeded { .. }
                | Error::LiftDepthExceeded(_)
                | Error::DetourSearchExhausted(_)
                | Error::Internal(_)
        )
    }
}
