//! Floating evaluation of φ on jets and of the closed-form scalars at (s, b).

use num_traits::ToPrimitive;

use super::jet::Real;
use super::NumericError;
use crate::algebra::{Poly, RatExpr, SurdExpr, Var};
use crate::symbolic::{bundle_from, PhiDerivatives, PhiSpec, Pipeline};

/// Σ c s^a u^b with float coefficients.
#[derive(Clone, Debug)]
struct FloatPoly {
    terms: Vec<(f64, u32, u32)>,
}

impl FloatPoly {
    fn of(p: &Poly) -> Result<Self, NumericError> {
        let (s, u) = (Var::S.slot(), Var::U.slot());
        let allowed = (1u16 << s) | (1u16 << u);
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            if m.support() & !allowed != 0 {
                return Err(NumericError::NotNumeric(format!("{p}")));
            }
            let c = c
                .to_f64()
                .ok_or_else(|| NumericError::NotNumeric("coefficient overflow".into()))?;
            terms.push((c, m.exp(s), m.exp(u)));
        }
        Ok(FloatPoly { terms })
    }

    fn max_s(&self) -> u32 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    fn max_u(&self) -> u32 {
        self.terms.iter().map(|t| t.2).max().unwrap_or(0)
    }

    fn odd_u(&self) -> bool {
        self.terms.iter().any(|t| t.2 % 2 == 1)
    }

    fn eval<R: Real>(&self, sp: &[R], up: &[R], zero: &R) -> R {
        // group by power of s so each u-sum is formed once
        let mut acc = zero.clone();
        for a in 0..sp.len() as u32 {
            let mut inner: Option<R> = None;
            for &(c, ea, eb) in &self.terms {
                if ea == a {
                    let t = up[eb as usize].clone() * c;
                    inner = Some(match inner {
                        Some(i) => i + t,
                        None => t,
                    });
                }
            }
            if let Some(i) = inner {
                acc = acc + sp[a as usize].clone() * i;
            }
        }
        acc
    }
}

#[derive(Clone, Debug)]
struct FloatRat {
    num: FloatPoly,
    den: FloatPoly,
}

impl FloatRat {
    fn of(r: &RatExpr) -> Result<Self, NumericError> {
        Ok(FloatRat {
            num: FloatPoly::of(r.num())?,
            den: FloatPoly::of(r.den())?,
        })
    }

    fn parts(&self) -> [&FloatPoly; 2] {
        [&self.num, &self.den]
    }
}

/// φ(b², s) in floating arithmetic over any [`Real`].
#[derive(Clone, Debug)]
pub struct PhiNumeric {
    rat: FloatRat,
    irr: Option<(FloatRat, FloatRat)>,
    max_s: u32,
    max_u: u32,
    odd_u: bool,
}

impl PhiNumeric {
    pub fn new(phi: &PhiSpec) -> Result<Self, NumericError> {
        let form = phi.form();
        let rat = FloatRat::of(&form.rat)?;
        let irr = match form.radicand() {
            Some(d) => Some((FloatRat::of(&form.irr)?, FloatRat::of(d)?)),
            None => None,
        };
        let mut polys: Vec<&FloatPoly> = rat.parts().to_vec();
        if let Some((q, d)) = &irr {
            polys.extend(q.parts());
            polys.extend(d.parts());
        }
        Ok(PhiNumeric {
            max_s: polys.iter().map(|p| p.max_s()).max().unwrap_or(0),
            max_u: polys.iter().map(|p| p.max_u()).max().unwrap_or(0),
            odd_u: polys.iter().any(|p| p.odd_u()),
            rat,
            irr,
        })
    }

    /// φ at (b², s); b = √(b²) is only formed when an odd power of b occurs.
    pub fn eval<R: Real>(&self, b2: &R, s: &R) -> R {
        let zero = s.lift(0.0);
        let one = s.lift(1.0);
        let mut sp = vec![one.clone()];
        for _ in 0..self.max_s {
            sp.push(sp.last().unwrap().clone() * s.clone());
        }
        let mut up = vec![one.clone()];
        if self.odd_u {
            let u = b2.sqrt();
            for _ in 0..self.max_u {
                up.push(up.last().unwrap().clone() * u.clone());
            }
        } else {
            for k in 1..=self.max_u as usize {
                up.push(if k % 2 == 0 {
                    up[k - 2].clone() * b2.clone()
                } else {
                    zero.clone()
                });
            }
        }
        let ev = |r: &FloatRat| r.num.eval(&sp, &up, &zero) / r.den.eval(&sp, &up, &zero);
        let mut out = ev(&self.rat);
        if let Some((q, d)) = &self.irr {
            out = out + ev(q) * ev(d).sqrt();
        }
        out
    }
}

/// Closed-form scalars of the metric, kept symbolic and evaluated exactly.
#[derive(Clone, Debug)]
pub struct ClosedForms {
    n: u32,
    exprs: Vec<SurdExpr>,
}

/// The scalars at one (s, b).
#[derive(Clone, Debug, Default)]
pub struct ScalarValues {
    pub phi: f64,
    pub phi2: f64,
    pub d1: f64,
    pub d2: f64,
    pub rho: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub eta: f64,
    pub eta0: f64,
    pub eta1: f64,
    pub q: f64,
    pub r: f64,
    pub theta: f64,
    pub psi: f64,
    pub pi: f64,
    pub omega: f64,
    pub e: f64,
    pub h: f64,
    pub w: f64,
    pub v: f64,
}

impl ClosedForms {
    pub fn new(phi: &PhiSpec, n: u32) -> Result<Self, NumericError> {
        let d = PhiDerivatives::of(phi)?;
        let b = bundle_from(&d)?;
        let p = Pipeline::new(phi)?;
        let exprs = vec![
            d.phi.clone(),
            d.phi2.clone(),
            d.d1(),
            d.d2(),
            b.rho,
            b.rho0,
            b.rho1,
            b.eta,
            b.eta0,
            b.eta1,
            b.q,
            b.r,
            b.theta,
            b.psi,
            b.pi,
            b.omega,
            b.e,
            b.h,
            p.w(n),
            p.v(n)?,
        ];
        Ok(ClosedForms { n, exprs })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn at(&self, s: f64, b: f64) -> Result<ScalarValues, NumericError> {
        let v: Vec<f64> = self
            .exprs
            .iter()
            .map(|e| e.eval_f64(s, b))
            .collect::<Result<_, _>>()?;
        Ok(ScalarValues {
            phi: v[0],
            phi2: v[1],
            d1: v[2],
            d2: v[3],
            rho: v[4],
            rho0: v[5],
            rho1: v[6],
            eta: v[7],
            eta0: v[8],
            eta1: v[9],
            q: v[10],
            r: v[11],
            theta: v[12],
            psi: v[13],
            pi: v[14],
            omega: v[15],
            e: v[16],
            h: v[17],
            w: v[18],
            v: v[19],
        })
    }
}
