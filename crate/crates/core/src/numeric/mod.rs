//! Definition-based numeric Finsler geometry on jets.

pub mod chart;
pub mod closed;
pub mod convexity;
pub mod geometry;
pub mod jet;
pub mod linalg;

pub use chart::{
    base_frame, beta_invariants, christoffel, BaseField, BaseFrame, BetaInvariants, ChartMetric,
    Christoffel,
};
pub use closed::{ClosedForms, PhiNumeric, ScalarValues};
pub use convexity::{convexity_check, convexity_check_on, ConvexityStatus, ConvexityVerdict};
pub use geometry::{
    norm, residual, CurvatureReport, Evaluator, FundamentalTensor, MeanCartanPaths, Norms,
    Residuals, SprayPaths, Tolerances, TwoPath,
};
pub use jet::{Jet, JetSpace, Real};

use crate::algebra::AlgebraError;
use crate::symbolic::SymbolicError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("dimension {0} not supported")]
    Dimension(usize),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("φ is not numerically evaluable: {0}")]
    NotNumeric(String),
}

impl From<AlgebraError> for NumericError {
    fn from(e: AlgebraError) -> Self {
        NumericError::Symbolic(SymbolicError::Algebra(e))
    }
}
