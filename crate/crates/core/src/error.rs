use thiserror::Error;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rectangle on axis {axis}: lower bound {lower} must be strictly below upper bound {upper}")]
    InvalidRectangle { axis: usize, lower: f64, upper: f64 },

    #[error("degree {requested} requested for variable {var} is below its actual degree {actual}")]
    DegreeTooLow {
        var: usize,
        requested: u32,
        actual: u32,
    },

    #[error("constraint references variable {var}, which has degree zero in the lift")]
    DegreeZeroConflict { var: usize },

    #[error("lifted rectangle has 2^{exponent} vertices, above the 2^20 limit")]
    SizeGuard { exponent: u32 },

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("simplex numerical failure: {0}")]
    NumericalFailure(String),

    #[error("no point of the rectangle satisfies the constraints")]
    InfeasiblePolytope,

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("polynomial is not multi-affine: variable {var} has degree {degree}")]
    NotMultiAffine { var: usize, degree: u32 },

    #[error("vertex enumeration over {n} variables exceeds the 2^24 guard")]
    TooManyVertices { n: usize },

    #[error("no grid sample satisfies the constraints")]
    NoFeasibleSample,

    #[error("invalid template: {0}")]
    InvalidTemplate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("facet {facet} has no usable bound in the verification report")]
    IncompleteReport { facet: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
