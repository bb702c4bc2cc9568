use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A rotation angle left the principal-logarithm domain.
    #[error("branch cut: rotation angle {angle:.6} exceeds limit {limit:.6} (time step too large for the chart)")]
    BranchCut { angle: f64, limit: f64 },

    #[error("singular operator: {0}")]
    SingularOperator(&'static str),

    #[error("singular matrix: {0}")]
    SingularMatrix(&'static str),

    #[error("degenerate inertia: Λ_{i} + Λ_{j} = {sum:e}")]
    DegenerateInertia { i: usize, j: usize, sum: f64 },

    #[error("implicit solve did not converge after {iters} iterations (residual {residual:e})")]
    NewtonDivergence { iters: usize, residual: f64 },

    #[error("unsupported dimension n = {n}: {what}")]
    UnsupportedDimension { n: usize, what: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not special orthogonal (defect {defect:e})")]
    NotSpecialOrthogonal { defect: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any `AtStep` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } => source.root(),
            e => e,
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }

    /// True for failures of the numerical scheme itself (divergence, chart breakdown).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self.root(),
            Error::BranchCut { .. }
                | Error::NewtonDivergence { .. }
                | Error::SingularOperator(_)
                | Error::SingularMatrix(_)
        )
    }
}
