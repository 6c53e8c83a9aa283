//! Exact and numeric curvature computations for general (α,β) Finsler metrics
//! F = α φ(b², β/α).

pub mod algebra;
pub mod numeric;
pub mod symbolic;
pub mod zoo;
