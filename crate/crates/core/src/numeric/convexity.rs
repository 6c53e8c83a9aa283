//! Grid check of φ > 0 and φ − sφ₂ + (b² − s²)φ₂₂ > 0 on |s| ≤ b < b₀.

use serde::Serialize;

use super::NumericError;
use crate::algebra::SurdExpr;
use crate::symbolic::{PhiDerivatives, PhiSpec};

/// Margins at most this small on the edge |s| = b count as degenerate, not failing.
const EDGE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityStatus {
    Pass,
    /// Positive inside |s| < b, vanishing on the edge |s| = b.
    BoundaryDegenerate,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityVerdict {
    pub status: ConvexityStatus,
    pub worst_margin: f64,
    /// (b, s) of the worst margin.
    pub worst_at: (f64, f64),
    /// "phi", "D1" (φ − sφ₂) or "D2".
    pub worst_quantity: &'static str,
    pub worst_interior_margin: f64,
}

impl ConvexityVerdict {
    pub fn passes(&self) -> bool {
        self.status != ConvexityStatus::Fail
    }
}

pub fn convexity_check(
    phi: &PhiSpec,
    b0: f64,
    grid: usize,
) -> Result<ConvexityVerdict, NumericError> {
    convexity_check_on(phi, 0.0, b0, grid)
}

/// The same check restricted to b ∈ [b_min, b₀).
pub fn convexity_check_on(
    phi: &PhiSpec,
    b_min: f64,
    b0: f64,
    grid: usize,
) -> Result<ConvexityVerdict, NumericError> {
    if !(b0 > 0.0) || b_min < 0.0 || b_min >= b0 || grid == 0 {
        return Err(NumericError::Domain(format!(
            "bad convexity range [{b_min}, {b0})"
        )));
    }
    let d = PhiDerivatives::of(phi)?;
    let exprs: [(&'static str, SurdExpr); 3] =
        [("phi", d.phi.clone()), ("D1", d.d1()), ("D2", d.d2())];
    let mut worst = (f64::INFINITY, (0.0, 0.0), "phi");
    let mut worst_interior = f64::INFINITY;
    for i in 0..grid {
        let b = b_min + (b0 - b_min) * i as f64 / grid as f64;
        for j in 0..=grid {
            let s = -b + 2.0 * b * j as f64 / grid as f64;
            let edge = j == 0 || j == grid;
            for (name, e) in &exprs {
                let v = match e.eval_f64(s, b) {
                    Ok(v) => v,
                    // poles at b = 0 lie outside every admissible range
                    Err(_) if b == 0.0 => continue,
                    Err(err) => return Err(err.into()),
                };
                if v < worst.0 {
                    worst = (v, (b, s), name);
                }
                if !edge || b == 0.0 {
                    worst_interior = worst_interior.min(v);
                }
            }
        }
    }
    let status = if worst_interior <= 0.0 || worst.0 < -EDGE_EPS {
        ConvexityStatus::Fail
    } else if worst.0 <= EDGE_EPS {
        ConvexityStatus::BoundaryDegenerate
    } else {
        ConvexityStatus::Pass
    };
    Ok(ConvexityVerdict {
        status,
        worst_margin: worst.0,
        worst_at: worst.1,
        worst_quantity: worst.2,
        worst_interior_margin: worst_interior,
    })
}
