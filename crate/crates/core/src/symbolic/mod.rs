//! Formula pipeline from φ to the curvature-condition numerators.

mod bundle;
mod conditions;
mod family;
mod phi;

pub use bundle::{fundamental_quantities, FundamentalBundle, PhiDerivatives};
pub use conditions::{
    case_odes_residual, extract_case_coefficients, mean_cartan_scalar, mean_landsberg_scalar, njfi,
    scaled_coefficient, weak_landsberg_conditions, Condition, ConditionSet, MeanCartanScalar, Njfi,
    NjfiConvention,
};
pub use family::{
    case1_shape, case_analysis, coef_power, fit_in_n, printed_case1_v2, proportionality, verdict,
    verify_theorem_family, Case1Shape, CaseReport, CoefficientSplit, ConditionDegrees,
    ConditionFlags, FamilyVerdict, NjfiSummary, VerdictRecord,
};
pub use phi::PhiSpec;

pub(crate) use bundle::bundle_from;
pub(crate) use conditions::Pipeline;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degenerate metric: {0}")]
    Degenerate(String),
    #[error("invalid φ: {0}")]
    InvalidPhi(String),
    #[error("operation needs a φ rational in s and u")]
    NotPolynomialPhi,
    #[error("dimension n = {0} is below 2")]
    Dimension(u32),
    #[error("coefficient of s^{0} is not linear in C and T")]
    NotLinearInCT(u32),
}
