//! Verdicts for the coefficient family and the generic case analysis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::conditions::{
    extract_case_coefficients, njfi_from, scaled_coefficient, NjfiConvention, Pipeline,
};
use super::{PhiSpec, SymbolicError};
use crate::algebra::{Monomial, Poly, RatExpr, Var};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConditionFlags {
    #[serde(rename = "NE22")]
    pub ne22: bool,
    #[serde(rename = "NH222")]
    pub nh222: bool,
    #[serde(rename = "NP")]
    pub np: bool,
    #[serde(rename = "NJFI_weak")]
    pub njfi_weak: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.ne22 && self.nh222 && self.np && self.njfi_weak
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConditionDegrees {
    #[serde(rename = "NE22")]
    pub ne22: Option<u32>,
    #[serde(rename = "NH222")]
    pub nh222: Option<u32>,
    #[serde(rename = "NP")]
    pub np: Option<u32>,
    #[serde(rename = "NJFI")]
    pub njfi: Option<u32>,
}

/// Per-n verdict, serialized for the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictRecord {
    pub phi: String,
    pub n: u32,
    pub conditions: ConditionFlags,
    pub degrees: ConditionDegrees,
    pub residuals: Vec<String>,
}

fn degree(p: &Poly) -> Option<u32> {
    (!p.is_zero()).then(|| p.degree_in(Var::S.slot()))
}

fn residual_text(name: &str, p: &Poly) -> String {
    format!("{name}: {}", RatExpr::from_poly(p.clone()))
}

/// Runs all conditions for one polynomial φ and dimension n.
pub fn verdict(phi: &PhiSpec, n: u32) -> Result<VerdictRecord, SymbolicError> {
    if n < 2 {
        return Err(SymbolicError::Dimension(n));
    }
    let p = Pipeline::new(phi)?;
    let ne22 = p.e22.zero_test_numerator();
    let nh222 = p.h222.zero_test_numerator();
    let np = p.np().zero_test_numerator();
    let w = p.w(n);
    let (njfi_deg, weak) = if phi.is_rational() {
        let v = p.v(n)?;
        let nj = njfi_from(&p, &w, &v, NjfiConvention::Lemma)?;
        let weak = nj.canonical.substitute_int(Var::T.slot(), &BigInt::zero());
        (degree(&nj.canonical), weak)
    } else {
        (None, w.zero_test_numerator())
    };
    let mut residuals = Vec::new();
    for (name, q) in [
        ("NE22", &ne22),
        ("NH222", &nh222),
        ("NP", &np),
        ("NJFI_weak", &weak),
    ] {
        if !q.is_zero() {
            residuals.push(residual_text(name, q));
        }
    }
    Ok(VerdictRecord {
        phi: phi.text(),
        n,
        conditions: ConditionFlags {
            ne22: ne22.is_zero(),
            nh222: nh222.is_zero(),
            np: np.is_zero(),
            njfi_weak: weak.is_zero(),
        },
        degrees: ConditionDegrees {
            ne22: degree(&ne22),
            nh222: degree(&nh222),
            np: degree(&np),
            njfi: njfi_deg,
        },
        residuals,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyVerdict {
    pub m: usize,
    pub a: Vec<String>,
    pub records: Vec<VerdictRecord>,
    pub holds: bool,
}

/// Builds φ from c_k = a_k/u^{k+1} and checks every condition for each n.
pub fn verify_theorem_family(
    a: &[BigRational],
    n_list: &[u32],
) -> Result<FamilyVerdict, SymbolicError> {
    let phi = PhiSpec::theorem_family(a)?;
    let records: Vec<VerdictRecord> = n_list
        .par_iter()
        .map(|&n| verdict(&phi, n))
        .collect::<Result<_, _>>()?;
    let holds = records.iter().all(|r| r.conditions.all());
    Ok(FamilyVerdict {
        m: a.len() - 1,
        a: a.iter().map(ToString::to_string).collect(),
        records,
        holds,
    })
}

/// Coefficients of the interpolating polynomial through `(n_i, f_i)`, lowest power first.
pub fn fit_in_n(samples: &[(u32, BigRational)]) -> Vec<BigRational> {
    let k = samples.len();
    let mut out = vec![BigRational::zero(); k];
    for (i, (ni, fi)) in samples.iter().enumerate() {
        // basis polynomial Π_{j≠i} (n − n_j)/(n_i − n_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (nj, _)) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            let nj = BigRational::from_integer(BigInt::from(*nj));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (p, b) in basis.iter().enumerate() {
                next[p + 1] += b.clone();
                next[p] -= b * &nj;
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(*ni)) - nj;
        }
        for (p, b) in basis.iter().enumerate() {
            out[p] += b * fi / &denom;
        }
    }
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

/// `Some(λ)` with `a = λ·b` when the two polynomials are rational multiples.
pub fn proportionality(a: &Poly, b: &Poly) -> Option<BigRational> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Some(BigRational::one()),
        (true, false) | (false, true) => return None,
        _ => {}
    }
    let lam = BigRational::new(a.leading_coeff(), b.leading_coeff());
    (a.scale(lam.denom()) == b.scale(lam.numer())).then_some(lam)
}

/// One coefficient split for reports.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientSplit {
    pub index: u32,
    pub f_c: String,
    pub f_t: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NjfiSummary {
    pub convention: NjfiConvention,
    pub canonical_degree: Option<u32>,
    pub assembled_degree: Option<u32>,
    pub canonical_top: Option<CoefficientSplit>,
    pub assembled_top: Option<CoefficientSplit>,
}

fn top_split(p: &Poly) -> Result<Option<CoefficientSplit>, SymbolicError> {
    let Some(r) = degree(p) else { return Ok(None) };
    let (fc, ft) = extract_case_coefficients(p, r)?;
    Ok(Some(CoefficientSplit {
        index: r,
        f_c: fc.to_string(),
        f_t: ft.to_string(),
    }))
}

/// Case analysis for generic polynomial φ of degree m in dimension n.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub m: usize,
    pub n: u32,
    pub forms: Vec<NjfiSummary>,
    /// T-part of the top assembled coefficient divided by n·c_m^k, when it is
    /// a single power of c_m.
    pub kappa: Option<String>,
    /// The same read-off on the canonical lemma-convention numerator.
    pub canonical_kappa: Option<String>,
    pub canonical_kappa_power: Option<u32>,
    pub kappa_power: Option<u32>,
    #[serde(skip)]
    pub kappa_value: Option<BigRational>,
    /// Whether v₂ of the case-analysis canonical form is a rational multiple of
    /// (n+1){2C c1[2c1c0′ − c0c1′] + T c1³}, and the multiplier.
    pub case1_multiplier: Option<String>,
    #[serde(skip)]
    pub canonical: Vec<(NjfiConvention, Poly, BigRational)>,
    #[serde(skip)]
    pub assembled: Vec<(NjfiConvention, Poly, BigRational)>,
}

/// The printed case-1 top coefficient (n+1){2C c1[2c1c0′ − c0c1′] + T c1³}.
pub fn printed_case1_v2(n: u32) -> Poly {
    let c0 = Poly::var(Var::Coef { index: 0, order: 0 });
    let c1 = Poly::var(Var::Coef { index: 1, order: 0 });
    let d0 = Poly::var(Var::Coef { index: 0, order: 1 });
    let d1 = Poly::var(Var::Coef { index: 1, order: 1 });
    let two = Poly::from(2);
    let bracket = &(&(&two * &c1) * &d0) - &(&c0 * &d1);
    let cpart = &(&(&two * &Poly::var(Var::C)) * &c1) * &bracket;
    let tpart = &Poly::var(Var::T) * &c1.pow(3);
    (&cpart + &tpart).scale(&BigInt::from(n + 1))
}

pub fn case_analysis(m: usize, n: u32) -> Result<CaseReport, SymbolicError> {
    if n < 2 {
        return Err(SymbolicError::Dimension(n));
    }
    let phi = PhiSpec::generic(m)?;
    let p = Pipeline::new(&phi)?;
    let w = p.w(n);
    let v = p.v(n)?;
    let mut forms = Vec::new();
    let mut canonical = Vec::new();
    let mut assembled = Vec::new();
    for conv in [NjfiConvention::Lemma, NjfiConvention::CaseAnalysis] {
        let nj = njfi_from(&p, &w, &v, conv)?;
        forms.push(NjfiSummary {
            convention: conv,
            canonical_degree: degree(&nj.canonical),
            assembled_degree: degree(&nj.assembled),
            canonical_top: top_split(&nj.canonical)?,
            assembled_top: top_split(&nj.assembled)?,
        });
        canonical.push((conv, nj.canonical, nj.canonical_scale));
        assembled.push((conv, nj.assembled, nj.assembled_scale));
    }

    let (_, lemma_asm, scale) = &assembled[0];
    let (kappa_value, kappa_power) = top_t_kappa(lemma_asm, scale, m, n)?;
    let (_, lemma_can, cscale) = &canonical[0];
    let (canonical_kappa, canonical_kappa_power) = top_t_kappa(lemma_can, cscale, m, n)?;

    let case1_multiplier = if m == 1 {
        let (_, can, cscale) = &canonical[1];
        let v2 = extract_case_coefficients(can, 2)?;
        let top = &(&Poly::var(Var::C) * &v2.0) + &(&Poly::var(Var::T) * &v2.1);
        proportionality(&top, &printed_case1_v2(n)).map(|l| (l * cscale).to_string())
    } else {
        None
    };

    Ok(CaseReport {
        m,
        n,
        forms,
        kappa: kappa_value.as_ref().map(ToString::to_string),
        kappa_power,
        kappa_value,
        canonical_kappa: canonical_kappa.as_ref().map(ToString::to_string),
        canonical_kappa_power,
        case1_multiplier,
        canonical,
        assembled,
    })
}

/// T-part of the top s-coefficient of `p·scale`, divided by n·c_m^k when it is a
/// single power of c_m.
fn top_t_kappa(
    p: &Poly,
    scale: &BigRational,
    m: usize,
    n: u32,
) -> Result<(Option<BigRational>, Option<u32>), SymbolicError> {
    let Some(r) = degree(p) else {
        return Ok((None, None));
    };
    let (_, ft) = extract_case_coefficients(p, r)?;
    let cm = Var::Coef {
        index: m as u8,
        order: 0,
    }
    .slot();
    Ok(match ft.terms() {
        [(mono, _)] if mono.support() == 1 << cm => {
            let coeff = scaled_coefficient(&ft, scale, mono);
            (
                Some(coeff / BigRational::from_integer(BigInt::from(n))),
                Some(mono.exp(cm)),
            )
        }
        _ => (None, None),
    })
}

/// Monomial c_k^e, for callers inspecting extracted coefficients.
pub fn coef_power(k: u8, e: u32) -> Monomial {
    Monomial::var(Var::Coef { index: k, order: 0 }.slot(), e)
}

/// v₂ of a concrete degree-1 φ next to the printed (n+1){2C c1[2c1c0′ − c0c1′] + T c1³}.
#[derive(Clone, Debug, Serialize)]
pub struct Case1Shape {
    pub n: u32,
    pub degree: Option<u32>,
    pub v2: CoefficientSplit,
    pub printed: CoefficientSplit,
    /// engine/printed when the C- and T-parts share one constant factor.
    pub ratio: Option<String>,
    #[serde(skip)]
    pub ratio_value: Option<BigRational>,
}

pub fn case1_shape(phi: &PhiSpec, n: u32) -> Result<Case1Shape, SymbolicError> {
    let coeffs = match phi.coefficients() {
        Some(c) if c.len() == 2 => c,
        _ => {
            return Err(SymbolicError::InvalidPhi(
                "case-1 shape needs a polynomial φ of degree 1".into(),
            ))
        }
    };
    let nj = super::conditions::njfi(phi, n, NjfiConvention::CaseAnalysis)?;
    let (ec, et) = extract_case_coefficients(&nj.canonical, 2)?;
    let (pc, pt) = extract_case_coefficients(&printed_case1_v2(n), 0)?;
    let mut subs = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        subs.push((
            Var::Coef {
                index: k as u8,
                order: 0,
            },
            c.clone(),
        ));
        subs.push((
            Var::Coef {
                index: k as u8,
                order: 1,
            },
            c.d_db2()?,
        ));
    }
    let bind = |p: &Poly| -> Result<RatExpr, SymbolicError> {
        let mut r = RatExpr::from_poly(p.clone());
        for (v, val) in &subs {
            r = r.substitute(*v, val)?;
        }
        Ok(r)
    };
    let (pc, pt) = (bind(&pc)?, bind(&pt)?);
    let (ec, et) = (RatExpr::from_poly(ec), RatExpr::from_poly(et));
    let ratio = match (pc.is_zero(), pt.is_zero()) {
        (false, false) => {
            let rc = ec.checked_div(&pc)?;
            let rt = et.checked_div(&pt)?;
            match (
                rc == rt,
                rc.num().constant_value(),
                rc.den().constant_value(),
            ) {
                (true, Some(a), Some(b)) => Some(BigRational::new(a, b)),
                _ => None,
            }
        }
        _ => None,
    };
    Ok(Case1Shape {
        n,
        degree: degree(&nj.canonical),
        v2: CoefficientSplit {
            index: 2,
            f_c: show(&ec),
            f_t: show(&et),
        },
        printed: CoefficientSplit {
            index: 2,
            f_c: show(&pc),
            f_t: show(&pt),
        },
        ratio: ratio.as_ref().map(ToString::to_string),
        ratio_value: ratio,
    })
}

fn show(r: &RatExpr) -> String {
    if r.den().is_one() {
        r.num().to_string()
    } else {
        format!("({})/({})", r.num(), r.den())
    }
}
