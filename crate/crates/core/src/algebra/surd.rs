//! Elements `p + q·√Δ` of a quadratic extension of the rational function field.
//!
//! Δ must not be a square in the base field; all radicands used by the metric
//! constructors satisfy this, so `p + q√Δ = 0` iff `p = q = 0`.

use std::ops::{Add, Mul, Neg, Sub};

use super::{AlgebraError, RatExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdExpr {
    pub rat: RatExpr,
    pub irr: RatExpr,
    radicand: Option<RatExpr>,
}

impl SurdExpr {
    pub fn rational(r: RatExpr) -> Self {
        SurdExpr {
            rat: r,
            irr: RatExpr::zero(),
            radicand: None,
        }
    }

    /// √Δ itself.
    pub fn sqrt(radicand: RatExpr) -> Self {
        SurdExpr {
            rat: RatExpr::zero(),
            irr: RatExpr::one(),
            radicand: Some(radicand),
        }
    }

    pub fn new(rat: RatExpr, irr: RatExpr, radicand: RatExpr) -> Self {
        SurdExpr {
            rat,
            irr,
            radicand: Some(radicand),
        }
    }

    pub fn radicand(&self) -> Option<&RatExpr> {
        if self.irr.is_zero() {
            None
        } else {
            self.radicand.as_ref()
        }
    }

    pub fn as_rational(&self) -> Option<&RatExpr> {
        self.irr.is_zero().then_some(&self.rat)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    fn common(&self, o: &SurdExpr) -> Result<Option<RatExpr>, AlgebraError> {
        match (self.radicand(), o.radicand()) {
            (Some(a), Some(b)) if a != b => Err(AlgebraError::RadicandMismatch),
            (Some(a), _) => Ok(Some(a.clone())),
            (None, Some(b)) => Ok(Some(b.clone())),
            (None, None) => Ok(self.radicand.clone().or_else(|| o.radicand.clone())),
        }
    }

    pub fn try_add(&self, o: &SurdExpr) -> Result<SurdExpr, AlgebraError> {
        let r = self.common(o)?;
        Ok(SurdExpr {
            rat: &self.rat + &o.rat,
            irr: &self.irr + &o.irr,
            radicand: r,
        })
    }

    pub fn try_mul(&self, o: &SurdExpr) -> Result<SurdExpr, AlgebraError> {
        let r = self.common(o)?;
        let cross = if self.irr.is_zero() || o.irr.is_zero() {
            RatExpr::zero()
        } else {
            &(&self.irr * &o.irr) * r.as_ref().unwrap()
        };
        Ok(SurdExpr {
            rat: &(&self.rat * &o.rat) + &cross,
            irr: &(&self.rat * &o.irr) + &(&self.irr * &o.rat),
            radicand: r,
        })
    }

    /// p² − q²Δ; vanishes iff the element does.
    pub fn norm(&self) -> RatExpr {
        match self.radicand() {
            None => &self.rat * &self.rat,
            Some(d) => &(&self.rat * &self.rat) - &(&(&self.irr * &self.irr) * d),
        }
    }

    pub fn recip(&self) -> Result<SurdExpr, AlgebraError> {
        let n = self.norm().recip()?;
        Ok(SurdExpr {
            rat: &self.rat * &n,
            irr: -(&self.irr * &n),
            radicand: self.radicand.clone(),
        })
    }

    pub fn try_div(&self, o: &SurdExpr) -> Result<SurdExpr, AlgebraError> {
        self.try_mul(&o.recip()?)
    }

    pub fn scale(&self, k: &RatExpr) -> SurdExpr {
        SurdExpr {
            rat: &self.rat * k,
            irr: &self.irr * k,
            radicand: self.radicand.clone(),
        }
    }

    fn derive(
        &self,
        d: impl Fn(&RatExpr) -> Result<RatExpr, AlgebraError>,
    ) -> Result<SurdExpr, AlgebraError> {
        let rat = d(&self.rat)?;
        let Some(delta) = self.radicand() else {
            return Ok(SurdExpr {
                rat,
                irr: RatExpr::zero(),
                radicand: self.radicand.clone(),
            });
        };
        // d(q√Δ) = (q' + q Δ'/(2Δ)) √Δ
        let dd = d(delta)?;
        let irr = &d(&self.irr)? + &(&(&self.irr * &dd) / &(delta * &RatExpr::int(2)));
        Ok(SurdExpr {
            rat,
            irr,
            radicand: self.radicand.clone(),
        })
    }

    pub fn d_ds(&self) -> SurdExpr {
        self.derive(|r| Ok(r.d_ds()))
            .expect("s-derivative is total")
    }

    pub fn d_db2(&self) -> Result<SurdExpr, AlgebraError> {
        self.derive(RatExpr::d_db2)
    }

    pub fn eval_f64(&self, s: f64, u: f64) -> Result<f64, AlgebraError> {
        let p = self.rat.eval_f64(s, u)?;
        match self.radicand() {
            None => Ok(p),
            Some(d) => Ok(p + self.irr.eval_f64(s, u)? * d.eval_f64(s, u)?.sqrt()),
        }
    }

    /// Canonical numerator of the condition "self = 0": the numerator of the norm.
    pub fn zero_test_numerator(&self) -> super::Poly {
        self.norm().numerator_normalized()
    }
}

impl From<RatExpr> for SurdExpr {
    fn from(r: RatExpr) -> Self {
        SurdExpr::rational(r)
    }
}

impl Add for &SurdExpr {
    type Output = SurdExpr;
    fn add(self, o: &SurdExpr) -> SurdExpr {
        self.try_add(o).expect("radicand mismatch")
    }
}

impl Sub for &SurdExpr {
    type Output = SurdExpr;
    fn sub(self, o: &SurdExpr) -> SurdExpr {
        self.try_add(&-o).expect("radicand mismatch")
    }
}

impl Mul for &SurdExpr {
    type Output = SurdExpr;
    fn mul(self, o: &SurdExpr) -> SurdExpr {
        self.try_mul(o).expect("radicand mismatch")
    }
}

impl Neg for &SurdExpr {
    type Output = SurdExpr;
    fn neg(self) -> SurdExpr {
        SurdExpr {
            rat: -&self.rat,
            irr: -&self.irr,
            radicand: self.radicand.clone(),
        }
    }
}

impl std::fmt::Display for SurdExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.radicand() {
            None => write!(f, "{}", self.rat),
            Some(d) => write!(f, "[{}] + [{}] * sqrt[{}]", self.rat, self.irr, d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops_and_derivative() {
        let s = RatExpr::s();
        let delta = &RatExpr::one() + &(&s * &s);
        let r = SurdExpr::sqrt(delta.clone());
        let sq = &r * &r;
        assert_eq!(sq.as_rational(), Some(&delta));
        let x = &SurdExpr::rational(s.clone()) + &r;
        let one = &x * &x.recip().unwrap();
        assert_eq!(one.as_rational(), Some(&RatExpr::one()));
        // d/ds √(1+s²) = s/√(1+s²) = (s/(1+s²)) √(1+s²)
        let d = r.d_ds();
        assert_eq!(d.irr, &s / &delta);
        let v = d.eval_f64(0.5, 1.0).unwrap();
        assert!((v - 0.5 / 1.25f64.sqrt()).abs() < 1e-15);
    }
}
