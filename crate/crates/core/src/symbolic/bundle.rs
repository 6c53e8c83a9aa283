//! Derivatives of φ and the fourteen auxiliary functions of the metric.

use super::{PhiSpec, SymbolicError};
use crate::algebra::{RatExpr, SurdExpr};

fn r(x: RatExpr) -> SurdExpr {
    SurdExpr::rational(x)
}

fn int(k: i64) -> SurdExpr {
    r(RatExpr::int(k))
}

pub(crate) fn s() -> SurdExpr {
    r(RatExpr::s())
}

/// b² − s².
pub(crate) fn b2_minus_s2() -> SurdExpr {
    r(&RatExpr::b2() - &(&RatExpr::s() * &RatExpr::s()))
}

pub(crate) fn div(a: &SurdExpr, b: &SurdExpr) -> Result<SurdExpr, SymbolicError> {
    a.try_div(b)
        .map_err(|_| SymbolicError::Degenerate("zero denominator".into()))
}

/// φ and the partial derivatives the formulas use; subscript 2 is ∂/∂s, 1 is ∂/∂b².
#[derive(Clone, Debug)]
pub struct PhiDerivatives {
    pub phi: SurdExpr,
    pub phi2: SurdExpr,
    pub phi22: SurdExpr,
    pub phi222: SurdExpr,
    pub phi1: SurdExpr,
    pub phi12: SurdExpr,
}

impl PhiDerivatives {
    pub fn of(phi: &PhiSpec) -> Result<Self, SymbolicError> {
        let f = phi.form().clone();
        let phi2 = f.d_ds();
        let phi22 = phi2.d_ds();
        let phi222 = phi22.d_ds();
        let phi1 = f.d_db2()?;
        let phi12 = phi1.d_ds();
        Ok(PhiDerivatives {
            phi: f,
            phi2,
            phi22,
            phi222,
            phi1,
            phi12,
        })
    }

    /// φ − sφ₂.
    pub fn d1(&self) -> SurdExpr {
        &self.phi - &(&s() * &self.phi2)
    }

    /// φ − sφ₂ + (b² − s²)φ₂₂.
    pub fn d2(&self) -> SurdExpr {
        &self.d1() + &(&b2_minus_s2() * &self.phi22)
    }

    /// sφ + (b² − s²)φ₂.
    pub fn m(&self) -> SurdExpr {
        &(&s() * &self.phi) + &(&b2_minus_s2() * &self.phi2)
    }
}

/// ρ, ρ₀, ρ₁, η, η₀, η₁, Q, R, Θ, Ψ, Π, Ω, E, H.
#[derive(Clone, Debug)]
pub struct FundamentalBundle {
    pub rho: SurdExpr,
    pub rho0: SurdExpr,
    pub rho1: SurdExpr,
    pub eta: SurdExpr,
    pub eta0: SurdExpr,
    pub eta1: SurdExpr,
    pub q: SurdExpr,
    pub r: SurdExpr,
    pub theta: SurdExpr,
    pub psi: SurdExpr,
    pub pi: SurdExpr,
    pub omega: SurdExpr,
    pub e: SurdExpr,
    pub h: SurdExpr,
}

impl FundamentalBundle {
    pub fn named(&self) -> [(&'static str, &SurdExpr); 14] {
        [
            ("rho", &self.rho),
            ("rho0", &self.rho0),
            ("rho1", &self.rho1),
            ("eta", &self.eta),
            ("eta0", &self.eta0),
            ("eta1", &self.eta1),
            ("Q", &self.q),
            ("R", &self.r),
            ("Theta", &self.theta),
            ("Psi", &self.psi),
            ("Pi", &self.pi),
            ("Omega", &self.omega),
            ("E", &self.e),
            ("H", &self.h),
        ]
    }
}

pub fn fundamental_quantities(phi: &PhiSpec) -> Result<FundamentalBundle, SymbolicError> {
    let d = PhiDerivatives::of(phi)?;
    bundle_from(&d)
}

pub(crate) fn bundle_from(d: &PhiDerivatives) -> Result<FundamentalBundle, SymbolicError> {
    let d1 = d.d1();
    if d1.is_zero() {
        return Err(SymbolicError::Degenerate("φ − sφ₂ ≡ 0".into()));
    }
    let d2 = d.d2();
    let m = d.m();
    let sv = s();
    let two = int(2);

    let rho = &d.phi * &d1;
    let rho0 = &(&d.phi * &d.phi22) + &(&d.phi2 * &d.phi2);
    let rho1 = &(&d1 * &d.phi2) - &(&(&sv * &d.phi) * &d.phi22);
    let eta = -&div(&d.phi22, &d2)?;
    let eta0 = -&div(&rho1, &(&d.phi * &d2))?;
    let eta1 = div(&(&m * &rho1), &(&(&d.phi * &d.phi) * &d2))?;
    let q = div(&d.phi2, &d1)?;
    let rr = div(&d.phi1, &d1)?;
    let theta = div(&rho1, &(&(&two * &d.phi) * &d2))?;
    let psi = div(&d.phi22, &(&two * &d2))?;
    let pi_num = &(&d1 * &d.phi12) - &(&(&sv * &d.phi1) * &d.phi22);
    let pi = div(&pi_num, &(&d1 * &d2))?;
    let omega = &div(&(&two * &d.phi1), &d.phi)? - &div(&(&m * &pi), &d.phi)?;
    let h_num = &d.phi22 - &(&two * &(&d.phi1 - &(&sv * &d.phi12)));
    let h = div(&h_num, &(&two * &d2))?;
    let e = &div(&(&d.phi2 + &(&(&two * &sv) * &d.phi1)), &(&two * &d.phi))?
        - &div(&(&h * &m), &d.phi)?;
    Ok(FundamentalBundle {
        rho,
        rho0,
        rho1,
        eta,
        eta0,
        eta1,
        q,
        r: rr,
        theta,
        psi,
        pi,
        omega,
        e,
        h,
    })
}
