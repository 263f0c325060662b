use thiserror::Error;

use crate::simplex::FixedPointLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0:?} is not on the simplex")]
    NotOnSimplex([f64; 3]),

    #[error("parameter {0} outside [0, 1]")]
    ThetaOutOfRange(f64),

    #[error("invalid heredity tensor: {0}")]
    InvalidTensor(String),

    #[error("{0:?} is not a permutation of {{1, 2, 3}}")]
    InvalidPermutation([usize; 3]),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("cannot parse distribution {input:?}: {reason}")]
    ParseDistribution { input: String, reason: String },

    #[error("excluded case: the parameter law is the point mass at 2/3")]
    ExcludedCase,

    #[error("label {0} is not supported here")]
    UnsupportedLabel(FixedPointLabel),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("orbit left the simplex at step {step}: {coords:?}")]
    SimplexViolation { step: usize, coords: [f64; 3] },

    #[error("reduced point ({0}, {1}) lies outside the chart")]
    ChartViolation(f64, f64),

    #[error("conjugacy undefined at theta = 2/3")]
    SingularConjugacy,

    #[error("Newton inversion did not converge (residual {0:e})")]
    InverseNotConverged(f64),

    #[error("image lies on the vertical axis; slope undefined")]
    VerticalImage,
}
