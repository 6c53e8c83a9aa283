//! Weak-Landsberg conditions, the W and V scalars, NJFI and its read-offs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::bundle::{b2_minus_s2, bundle_from, div, s, PhiDerivatives};
use super::{PhiSpec, SymbolicError};
use crate::algebra::{Monomial, Poly, RatExpr, SurdExpr, Var};

fn int(k: i64) -> SurdExpr {
    SurdExpr::rational(RatExpr::int(k))
}

/// A condition "expression = 0" reduced to its canonical numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub numerator: Poly,
}

impl Condition {
    fn of(e: &SurdExpr) -> Self {
        Condition {
            numerator: e.zero_test_numerator(),
        }
    }

    pub fn holds(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Degree in s, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        (!self.numerator.is_zero()).then(|| self.numerator.degree_in(Var::S.slot()))
    }

    /// Coefficients in s.
    pub fn coefficients(&self) -> Vec<Poly> {
        self.numerator.coeffs_in(Var::S.slot())
    }
}

/// Canonical numerators of E₂₂, H₂₂₂, the NP left side, and optionally NJFI.
#[derive(Clone, Debug)]
pub struct ConditionSet {
    pub ne22: Condition,
    pub nh222: Condition,
    pub np: Condition,
    pub njfi: Option<Condition>,
}

pub(crate) struct Pipeline {
    pub d: PhiDerivatives,
    pub rho: SurdExpr,
    pub eta: SurdExpr,
    pub e: SurdExpr,
    pub e2: SurdExpr,
    pub e22: SurdExpr,
    pub e222: SurdExpr,
    pub h2: SurdExpr,
    pub h22: SurdExpr,
    pub h222: SurdExpr,
}

impl Pipeline {
    pub fn new(phi: &PhiSpec) -> Result<Self, SymbolicError> {
        let d = PhiDerivatives::of(phi)?;
        let b = bundle_from(&d)?;
        let e2 = b.e.d_ds();
        let e22 = e2.d_ds();
        let e222 = e22.d_ds();
        let h2 = b.h.d_ds();
        let h22 = h2.d_ds();
        let h222 = h22.d_ds();
        Ok(Pipeline {
            d,
            rho: b.rho,
            eta: b.eta,
            e: b.e,
            e2,
            e22,
            e222,
            h2,
            h22,
            h222,
        })
    }

    /// E − sE₂.
    fn x(&self) -> SurdExpr {
        &self.e - &(&s() * &self.e2)
    }

    /// H₂ − sH₂₂.
    fn y(&self) -> SurdExpr {
        &self.h2 - &(&s() * &self.h22)
    }

    /// (E − sE₂)φ₂ + (H₂ − sH₂₂)(sφ + (b² − s²)φ₂).
    pub fn np(&self) -> SurdExpr {
        &(&self.x() * &self.d.phi2) + &(&self.y() * &self.d.m())
    }

    /// The braced scalar of W_j.
    pub fn w(&self, n: u32) -> SurdExpr {
        let k = int(n as i64 + 1);
        let bb = b2_minus_s2();
        let bb2 = &bb * &bb;
        let (phi, phi2, m) = (&self.d.phi, &self.d.phi2, self.d.m());
        let (x, y, eta) = (self.x(), self.y(), &self.eta);
        let three = int(3);
        let sv = s();
        let terms = [
            &(&x * &k) * phi2,
            &(&(&three * &self.e22) * phi2) * &bb,
            -&(&(&(&sv * &self.e22) * &k) * phi),
            &(&self.e222 * phi) * &bb,
            &(&(&y * &k) + &(&self.h222 * &bb)) * &m,
            &(&(&(&three * eta) * &x) * phi2) * &bb,
            &(&(&(&three * eta) * &self.e22) * phi2) * &bb2,
            -&(&(&(&(&(&three * &sv) * eta) * &self.e22) * phi) * &bb),
            &(&(eta * &self.e222) * &bb2) * phi,
            &(eta * &(&(&(&three * &y) * &bb) + &(&self.h222 * &bb2))) * &m,
        ];
        terms.iter().fold(int(0), |acc, t| &acc + t)
    }

    /// V from the log-det derivative: ρ·[(n+1)φ₂/φ − (n−2)sφ₂₂/D1 + ((b²−s²)φ₂₂₂ − 3sφ₂₂)/D2].
    pub fn v(&self, n: u32) -> Result<SurdExpr, SymbolicError> {
        let d = &self.d;
        let (d1, d2) = (d.d1(), d.d2());
        let sv = s();
        let a = div(&(&int(n as i64 + 1) * &d.phi2), &d.phi)?;
        let b = div(&(&(&int(n as i64 - 2) * &sv) * &d.phi22), &d1)?;
        let c = div(
            &(&(&b2_minus_s2() * &d.phi222) - &(&(&int(3) * &sv) * &d.phi22)),
            &d2,
        )?;
        Ok(&self.rho * &(&(&a - &b) + &c))
    }

    /// The lemma display: first summand over D2, then the two η terms as printed.
    /// `flip` gives the variant whose η-term signs are reversed.
    pub fn v_display(&self, n: u32, flip: bool) -> Result<SurdExpr, SymbolicError> {
        let d = &self.d;
        let (d1, d2) = (d.d1(), d.d2());
        let (bb, sv, phi) = (b2_minus_s2(), s(), &d.phi);
        let k = int(n as i64 + 1);
        let first_num = &(&(&(&bb * &d1) * phi) * &d.phi222) + &(&(&k * &(&d1 * &d1)) * phi);
        let first = div(&first_num, &d2)?;
        let t2 = &(&(&(&(&int(n as i64 - 2) * &bb) * &sv) * phi) * &d.phi22) * &self.eta;
        let t3 = &(&(&k * &d1) * &(&(&bb * &d.phi2) - &(&sv * phi))) * &self.eta;
        Ok(if flip {
            &(&first + &t2) - &t3
        } else {
            &(&first - &t2) + &t3
        })
    }
}

pub fn weak_landsberg_conditions(phi: &PhiSpec) -> Result<ConditionSet, SymbolicError> {
    let p = Pipeline::new(phi)?;
    Ok(ConditionSet {
        ne22: Condition::of(&p.e22),
        nh222: Condition::of(&p.h222),
        np: Condition::of(&p.np()),
        njfi: None,
    })
}

fn check_n(n: u32) -> Result<(), SymbolicError> {
    if n < 2 {
        return Err(SymbolicError::Dimension(n));
    }
    Ok(())
}

pub fn mean_landsberg_scalar(phi: &PhiSpec, n: u32) -> Result<SurdExpr, SymbolicError> {
    check_n(n)?;
    Ok(Pipeline::new(phi)?.w(n))
}

/// V together with a comparison against the two printed forms of the bracket.
#[derive(Clone, Debug)]
pub struct MeanCartanScalar {
    pub v: SurdExpr,
    pub matches_lemma_display: bool,
    pub matches_sign_flipped_display: bool,
}

pub fn mean_cartan_scalar(phi: &PhiSpec, n: u32) -> Result<MeanCartanScalar, SymbolicError> {
    check_n(n)?;
    let p = Pipeline::new(phi)?;
    let v = p.v(n)?;
    let lemma = p.v_display(n, false)?;
    let flipped = p.v_display(n, true)?;
    Ok(MeanCartanScalar {
        matches_lemma_display: (&lemma - &v).is_zero(),
        matches_sign_flipped_display: (&flipped - &v).is_zero(),
        v,
    })
}

/// How the c and c̃ pieces of the relatively isotropic condition are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NjfiConvention {
    /// (φ/2ρ)(C·W + T·V), the lemma's expression.
    Lemma,
    /// C·W + T·(φ/2ρ)·V: the prefactor applied to the c̃ piece only.
    CaseAnalysis,
}

/// NJFI numerators for one φ and n.
#[derive(Clone, Debug)]
pub struct Njfi {
    pub convention: NjfiConvention,
    /// Canonical (fully reduced) numerator, primitive and sign-normalized.
    pub canonical: Poly,
    /// `canonical · canonical_scale` is the numerator over the primitive
    /// canonical denominator.
    pub canonical_scale: BigRational,
    /// Numerator of the expression assembled from the separately reduced
    /// φ, ρ, W and V without cross-cancellation, scaled so that the
    /// assembled denominator is primitive: `assembled = poly · scale`.
    pub assembled: Poly,
    pub assembled_scale: BigRational,
}

pub fn njfi(phi: &PhiSpec, n: u32, convention: NjfiConvention) -> Result<Njfi, SymbolicError> {
    check_n(n)?;
    let p = Pipeline::new(phi)?;
    let w = p.w(n);
    let v = p.v(n)?;
    njfi_from(&p, &w, &v, convention)
}

pub(crate) fn njfi_from(
    p: &Pipeline,
    w: &SurdExpr,
    v: &SurdExpr,
    convention: NjfiConvention,
) -> Result<Njfi, SymbolicError> {
    let (Some(w), Some(v), Some(phi), Some(rho)) = (
        w.as_rational(),
        v.as_rational(),
        p.d.phi.as_rational(),
        p.rho.as_rational(),
    ) else {
        return Err(SymbolicError::NotPolynomialPhi);
    };
    let c = RatExpr::var(Var::C);
    let t = RatExpr::var(Var::T);
    let pre = &(phi / rho) / &RatExpr::int(2);
    let expr = match convention {
        NjfiConvention::Lemma => &pre * &(&(&c * w) + &(&t * v)),
        NjfiConvention::CaseAnalysis => &(&c * w) + &(&(&t * &pre) * v),
    };
    let canonical = expr.numerator_normalized();
    let canonical_scale = if canonical.is_zero() {
        BigRational::one()
    } else {
        let lam = BigRational::new(expr.num().leading_coeff(), canonical.leading_coeff());
        lam / BigRational::from_integer(expr.den().content())
    };

    let (cp, tp) = (Poly::var(Var::C), Poly::var(Var::T));
    // φ/(2ρ) = (φn·ρd) / (2·φd·ρn)
    let pre_n = phi.num() * rho.den();
    let pre_d = (phi.den() * rho.num()).scale(&BigInt::from(2));
    let (num, den) = match convention {
        NjfiConvention::Lemma => {
            let inner = &(&cp * &(w.num() * v.den())) + &(&tp * &(v.num() * w.den()));
            (&pre_n * &inner, &(&pre_d * w.den()) * v.den())
        }
        NjfiConvention::CaseAnalysis => {
            let cpart = &cp * &(&(w.num() * &pre_d) * v.den());
            let tpart = &tp * &(&(&pre_n * v.num()) * w.den());
            (&cpart + &tpart, &(w.den() * &pre_d) * v.den())
        }
    };
    let mut scale = BigRational::new(BigInt::one(), den.content());
    if den.leading_coeff() < BigInt::zero() {
        scale = -scale;
    }
    Ok(Njfi {
        convention,
        canonical,
        canonical_scale,
        assembled: num,
        assembled_scale: scale,
    })
}

/// Splits the s^i coefficient of an NJFI numerator into (f_C, f_T).
pub fn extract_case_coefficients(njfi: &Poly, i: u32) -> Result<(Poly, Poly), SymbolicError> {
    let (c, t) = (Var::C.slot(), Var::T.slot());
    let mut fc = Vec::new();
    let mut ft = Vec::new();
    for (m, k) in njfi.terms() {
        if m.exp(Var::S.slot()) != i {
            continue;
        }
        let rest = m.without(Var::S.slot());
        match (rest.exp(c), rest.exp(t)) {
            (1, 0) => fc.push((rest.without(c), k.clone())),
            (0, 1) => ft.push((rest.without(t), k.clone())),
            _ => return Err(SymbolicError::NotLinearInCT(i)),
        }
    }
    Ok((Poly::from_terms(fc), Poly::from_terms(ft)))
}

/// Rational coefficient of monomial `m` in `p·scale`.
pub fn scaled_coefficient(p: &Poly, scale: &BigRational, m: &Monomial) -> BigRational {
    p.terms()
        .iter()
        .find(|(t, _)| t == m)
        .map(|(_, k)| BigRational::from_integer(k.clone()) * scale)
        .unwrap_or_else(BigRational::zero)
}

/// Left sides of the two case ODE systems. `coeffs` are c_0..c_{m} as
/// functions of u; case 1 needs two, case 2 three.
pub fn case_odes_residual(case: u8, coeffs: &[RatExpr]) -> Result<Vec<RatExpr>, SymbolicError> {
    let need = match case {
        1 => 2,
        2 => 3,
        _ => {
            return Err(SymbolicError::InvalidPhi(format!(
                "no ODE system for case {case}"
            )))
        }
    };
    if coeffs.len() != need {
        return Err(SymbolicError::InvalidPhi(format!(
            "case {case} takes {need} coefficients"
        )));
    }
    let d: Vec<RatExpr> = coeffs
        .iter()
        .map(RatExpr::d_db2)
        .collect::<Result<_, _>>()?;
    let b2 = RatExpr::b2();
    let two = RatExpr::int(2);
    let three = RatExpr::int(3);
    let c = coeffs;
    Ok(match case {
        1 => vec![
            &(&c[0] * &d[1]) - &(&(&two * &c[1]) * &d[0]),
            &(&(&two * &b2) * &d[0]) + &c[0],
        ],
        _ => vec![
            &(&(&two * &b2) * &c[2]) + &c[0],
            &(&(&two * &c[1]) * &d[2]) - &(&(&three * &c[2]) * &d[1]),
            &(&c[2] * &(&(&(&(&two * &b2) * &d[2]) + &(&three * &c[2])) - &(&three * &d[0])))
                + &(&c[0] * &d[2]),
        ],
    })
}
