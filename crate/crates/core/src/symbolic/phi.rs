//! The profile function φ(b², s).

use num_rational::BigRational;
use num_traits::Zero;

use super::SymbolicError;
use crate::algebra::{RatExpr, SurdExpr, Var};

/// A profile φ(b², s), stored in general form and, when polynomial in s, as
/// its coefficient list `[c_0(u), …, c_m(u)]`.
#[derive(Clone, Debug)]
pub struct PhiSpec {
    label: String,
    form: SurdExpr,
    coeffs: Option<Vec<RatExpr>>,
}

impl PhiSpec {
    /// General rational φ.
    pub fn general(label: impl Into<String>, phi: RatExpr) -> Result<Self, SymbolicError> {
        PhiSpec::surd(label, SurdExpr::rational(phi))
    }

    /// φ in a quadratic extension (one square root).
    pub fn surd(label: impl Into<String>, phi: SurdExpr) -> Result<Self, SymbolicError> {
        for part in [&phi.rat, &phi.irr] {
            check_symbols(part, true)?;
        }
        let spec = PhiSpec {
            label: label.into(),
            form: phi,
            coeffs: None,
        };
        spec.reject_degenerate()?;
        Ok(spec)
    }

    /// φ = Σ c_k s^k with s-free coefficients.
    pub fn polynomial(
        label: impl Into<String>,
        coeffs: Vec<RatExpr>,
    ) -> Result<Self, SymbolicError> {
        if coeffs.last().is_none_or(RatExpr::is_zero) {
            return Err(SymbolicError::InvalidPhi(
                "leading coefficient c_m must be nonzero".into(),
            ));
        }
        let mut form = RatExpr::zero();
        for c in coeffs.iter().rev() {
            check_symbols(c, false)?;
            form = &(&form * &RatExpr::s()) + c;
        }
        let spec = PhiSpec {
            label: label.into(),
            form: SurdExpr::rational(form),
            coeffs: Some(coeffs),
        };
        spec.reject_degenerate()?;
        Ok(spec)
    }

    /// φ = c_0 + c_1 s + … + c_m s^m with generic symbolic coefficients c_k(b²).
    pub fn generic(m: usize) -> Result<Self, SymbolicError> {
        if m > crate::algebra::MAX_COEF_INDEX as usize {
            return Err(SymbolicError::InvalidPhi(format!(
                "generic degree {m} exceeds symbol budget"
            )));
        }
        let coeffs = (0..=m as u8).map(RatExpr::coef).collect();
        PhiSpec::polynomial(format!("generic m={m}"), coeffs)
    }

    /// The coefficient family c_k = a_k / u^{k+1}.
    pub fn theorem_family(a: &[BigRational]) -> Result<Self, SymbolicError> {
        if a.len() < 2 || a.last().unwrap().is_zero() {
            return Err(SymbolicError::InvalidPhi(
                "family needs m ≥ 1 and a_m ≠ 0".into(),
            ));
        }
        let u = RatExpr::u();
        let coeffs = a
            .iter()
            .enumerate()
            .map(|(k, ak)| &RatExpr::from_bigrational(ak) * &u.pow(-(k as i32 + 1)).unwrap())
            .collect();
        let label = format!(
            "family m={} a={}",
            a.len() - 1,
            a.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        PhiSpec::polynomial(label, coeffs)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> &SurdExpr {
        &self.form
    }

    pub fn coefficients(&self) -> Option<&[RatExpr]> {
        self.coeffs.as_deref()
    }

    /// Degree m in s for polynomial φ.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.as_ref().map(|c| c.len() - 1)
    }

    pub fn is_rational(&self) -> bool {
        self.form.as_rational().is_some()
    }

    pub fn has_generic_symbols(&self) -> bool {
        (0..=crate::algebra::MAX_COEF_INDEX).any(|k| {
            let v = Var::Coef { index: k, order: 0 };
            self.form.rat.contains(v) || self.form.irr.contains(v)
        })
    }

    /// Text form for reports.
    pub fn text(&self) -> String {
        match &self.coeffs {
            Some(cs) => cs
                .iter()
                .enumerate()
                .map(|(k, c)| format!("c{k} = [{c}]"))
                .collect::<Vec<_>>()
                .join("; "),
            None => self.form.to_string(),
        }
    }

    /// φ(b², s) in floating point.
    pub fn eval(&self, b2: f64, s: f64) -> Result<f64, SymbolicError> {
        Ok(self.form.eval_f64(s, b2.sqrt())?)
    }

    fn reject_degenerate(&self) -> Result<(), SymbolicError> {
        if self.form.is_zero() {
            return Err(SymbolicError::InvalidPhi("φ is identically zero".into()));
        }
        let d = super::bundle::PhiDerivatives::of(self)?;
        if d.d2().is_zero() {
            return Err(SymbolicError::Degenerate(
                "φ − sφ₂ + (b² − s²)φ₂₂ ≡ 0".into(),
            ));
        }
        Ok(())
    }

    /// Minimum of φ on the grid |s| ≤ b, b ∈ [b_min, b_max].
    pub fn min_on_grid(&self, b_min: f64, b_max: f64, steps: usize) -> Result<f64, SymbolicError> {
        let mut worst = f64::INFINITY;
        for i in 0..=steps {
            let b = b_min + (b_max - b_min) * i as f64 / steps as f64;
            for j in 0..=steps {
                let s = -b + 2.0 * b * j as f64 / steps as f64;
                worst = worst.min(self.eval(b * b, s)?);
            }
        }
        Ok(worst)
    }
}

fn check_symbols(r: &RatExpr, allow_s: bool) -> Result<(), SymbolicError> {
    if r.contains(Var::C) || r.contains(Var::T) {
        return Err(SymbolicError::InvalidPhi("φ may not contain C or T".into()));
    }
    if !allow_s && r.contains(Var::S) {
        return Err(SymbolicError::InvalidPhi(
            "coefficients must be free of s".into(),
        ));
    }
    for k in 0..=crate::algebra::MAX_COEF_INDEX {
        if r.contains(Var::Coef { index: k, order: 1 }) {
            return Err(SymbolicError::InvalidPhi(
                "φ may not contain derivative symbols".into(),
            ));
        }
    }
    Ok(())
}
