//! Canonical rational functions over Q in s, u, C, T and generic coefficient symbols.
//!
//! Canonical form: integer numerator and denominator with no common
//! polynomial factor, no common integer content, and a denominator whose
//! leading coefficient is positive. Zero is `0/1`. Equality is structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gcd::{content_in, gcd};
use super::poly::{Monomial, Poly, Var, MAX_COEF_INDEX};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatExpr {
    num: Poly,
    den: Poly,
}

fn normalize_units(num: Poly, den: Poly) -> RatExpr {
    if num.is_zero() {
        return RatExpr::zero();
    }
    let c = num.content().gcd(&den.content());
    let (mut num, mut den) = (num.div_int(&c), den.div_int(&c));
    if den.leading_coeff().is_negative() {
        num = -num;
        den = -den;
    }
    RatExpr { num, den }
}

impl RatExpr {
    pub fn zero() -> Self {
        RatExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatExpr::from_poly(Poly::one())
    }

    pub fn int(v: i64) -> Self {
        RatExpr::from_poly(Poly::from(v))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        RatExpr::new(Poly::from(n), Poly::from(d)).expect("nonzero denominator")
    }

    pub fn from_bigrational(q: &BigRational) -> Self {
        normalize_units(
            Poly::constant(q.numer().clone()),
            Poly::constant(q.denom().clone()),
        )
    }

    pub fn var(v: Var) -> Self {
        RatExpr::from_poly(Poly::var(v))
    }

    pub fn s() -> Self {
        RatExpr::var(Var::S)
    }

    pub fn u() -> Self {
        RatExpr::var(Var::U)
    }

    /// Generic coefficient symbol c_k.
    pub fn coef(k: u8) -> Self {
        RatExpr::var(Var::Coef { index: k, order: 0 })
    }

    /// b² as a RatExpr, i.e. u².
    pub fn b2() -> Self {
        RatExpr::from_poly(Poly::var_pow(Var::U.slot(), 2))
    }

    pub fn from_poly(p: Poly) -> Self {
        normalize_units(p, Poly::one())
    }

    /// Reduces `num/den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatExpr::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Ok(normalize_units(num, den))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn pow(&self, e: i32) -> Result<Self, AlgebraError> {
        if e >= 0 {
            Ok(RatExpr {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            })
        } else {
            self.recip()?.pow(-e)
        }
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(normalize_units(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &RatExpr) -> Result<Self, AlgebraError> {
        Ok(self * &o.recip()?)
    }

    pub fn scale_int(&self, k: i64) -> RatExpr {
        self * &RatExpr::int(k)
    }

    /// ∂/∂s by the quotient rule, reduced without squaring the denominator.
    pub fn d_ds(&self) -> RatExpr {
        let s = Var::S.slot();
        let dn = self.num.derivative(s);
        let dd = self.den.derivative(s);
        if dd.is_zero() {
            return RatExpr::new(dn, self.den.clone()).expect("nonzero denominator");
        }
        // (N/D)' = (N' r - N D'/g) / (D r) with g = gcd(D, D'), r = D/g
        let g = gcd(&self.den, &dd);
        let r = self.den.div_exact(&g).expect("gcd divides");
        let q = dd.div_exact(&g).expect("gcd divides");
        let num = &(&dn * &r) - &(&self.num * &q);
        let den = &self.den * &r;
        if num.is_zero() {
            return RatExpr::zero();
        }
        // only the s-free content of D can still share factors with the numerator
        let k = content_in(&self.den, s);
        if k.is_constant() {
            return normalize_units(num, den);
        }
        let h = gcd(&num, &k);
        if h.is_constant() {
            normalize_units(num, den)
        } else {
            normalize_units(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }

    /// ∂/∂(b²) realized as (1/(2u))∂/∂u plus the chain rule c_k ↦ c_k'.
    pub fn d_db2(&self) -> Result<RatExpr, AlgebraError> {
        let dn = poly_delta(&self.num)?;
        let dd = poly_delta(&self.den)?;
        // δ = P_u + 2u Σ c_k' ∂P/∂c_k; result = (δN D − N δD) / (2u D²)
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = (&(&self.den * &self.den) * &Poly::var(Var::U)).scale(&BigInt::from(2));
        RatExpr::new(num, den)
    }

    /// Coefficient list in s; requires an s-free denominator.
    pub fn coeffs_in_s(&self) -> Result<Vec<RatExpr>, AlgebraError> {
        if self.den.contains(Var::S) {
            return Err(AlgebraError::NotPolynomialInS);
        }
        Ok(self
            .num
            .coeffs_in(Var::S.slot())
            .into_iter()
            .map(|c| RatExpr::new(c, self.den.clone()).expect("nonzero denominator"))
            .collect())
    }

    /// Primitive, sign-normalized numerator. Zero iff the expression is zero.
    pub fn numerator_normalized(&self) -> Poly {
        self.num.primitive()
    }

    /// Numerator scaled so that the denominator is primitive with positive
    /// leading coefficient: `self = numerator_over_primitive_den() / pp(den)`.
    pub fn numerator_over_primitive_den(&self) -> (Vec<(Monomial, BigRational)>, Poly) {
        let c = self.den.content();
        let pp = self.den.div_int(&c);
        let terms = self
            .num
            .terms()
            .iter()
            .map(|(m, k)| (*m, BigRational::new(k.clone(), c.clone())))
            .collect();
        (terms, pp)
    }

    /// Exact value at rational s, u, C, T. Generic coefficient symbols must be absent.
    pub fn eval_rational(
        &self,
        s: &BigRational,
        u: &BigRational,
        c: &BigRational,
        t: &BigRational,
    ) -> Result<BigRational, AlgebraError> {
        let vals = [s, u, c, t];
        let d = eval_poly_rational(&self.den, &vals)?;
        if d.is_zero() {
            return Err(AlgebraError::Pole);
        }
        Ok(eval_poly_rational(&self.num, &vals)? / d)
    }

    /// Exact evaluation at binary floating inputs, rounded once at the end.
    pub fn eval_f64(&self, s: f64, u: f64) -> Result<f64, AlgebraError> {
        let n = eval_poly_dyadic(&self.num, s, u)?;
        let d = eval_poly_dyadic(&self.den, s, u)?;
        if d.0.is_zero() {
            return Err(AlgebraError::Pole);
        }
        Ok(dyadic_ratio(&n, &d))
    }

    /// Substitutes a RatExpr for a variable.
    pub fn substitute(&self, v: Var, value: &RatExpr) -> Result<RatExpr, AlgebraError> {
        let n = subs_poly(&self.num, v, value);
        let d = subs_poly(&self.den, v, value);
        n.checked_div(&d)
    }
}

fn subs_poly(p: &Poly, v: Var, value: &RatExpr) -> RatExpr {
    let cs = p.coeffs_in(v.slot());
    let mut acc = RatExpr::zero();
    for c in cs.iter().rev() {
        acc = &(&acc * value) + &RatExpr::from_poly(c.clone());
    }
    acc
}

/// P_u + 2u Σ_k c_k' ∂P/∂c_k.
fn poly_delta(p: &Poly) -> Result<Poly, AlgebraError> {
    let mut out = p.derivative(Var::U.slot());
    let two_u = Poly::var(Var::U).scale(&BigInt::from(2));
    for k in 0..=MAX_COEF_INDEX {
        let d1 = Var::Coef { index: k, order: 1 };
        if p.contains(d1) {
            return Err(AlgebraError::SecondDerivativeSymbol(k));
        }
        let ck = Var::Coef { index: k, order: 0 };
        if p.contains(ck) {
            let dp = p.derivative(ck.slot());
            out = &out + &(&(&dp * &Poly::var(d1)) * &two_u);
        }
    }
    Ok(out)
}

fn eval_poly_rational(p: &Poly, vals: &[&BigRational; 4]) -> Result<BigRational, AlgebraError> {
    if p.support() >> 4 != 0 {
        return Err(AlgebraError::UnboundSymbol);
    }
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = BigRational::from_integer(c.clone());
        for (slot, v) in vals.iter().enumerate() {
            let e = m.exp(slot);
            if e > 0 {
                t *= num_traits::pow::pow((*v).clone(), e as usize);
            }
        }
        acc += t;
    }
    Ok(acc)
}

/// Splits a finite f64 into (mantissa, exponent) with value = m·2^e.
fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    (BigInt::from(sign) * BigInt::from(m), e)
}

fn eval_poly_dyadic(p: &Poly, s: f64, u: f64) -> Result<(BigInt, i64), AlgebraError> {
    if p.support() >> 2 != 0 {
        return Err(AlgebraError::UnboundSymbol);
    }
    let (ms, es) = dyadic(s);
    let (mu, eu) = dyadic(u);
    let ds = p.degree_in(0) as usize;
    let du = p.degree_in(1) as usize;
    let mut ps = vec![BigInt::one()];
    for i in 1..=ds {
        let n = &ps[i - 1] * &ms;
        ps.push(n);
    }
    let mut pu = vec![BigInt::one()];
    for i in 1..=du {
        let n = &pu[i - 1] * &mu;
        pu.push(n);
    }
    let terms: Vec<(BigInt, i64)> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let (a, b) = (m.exp(0) as usize, m.exp(1) as usize);
            (c * &ps[a] * &pu[b], es * a as i64 + eu * b as i64)
        })
        .collect();
    let emin = terms.iter().map(|t| t.1).min().unwrap_or(0);
    let mut acc = BigInt::zero();
    for (v, e) in terms {
        acc += v << ((e - emin) as usize);
    }
    Ok((acc, emin))
}

fn dyadic_ratio(n: &(BigInt, i64), d: &(BigInt, i64)) -> f64 {
    if n.0.is_zero() {
        return 0.0;
    }
    // scale numerator so the integer quotient carries ≥ 64 significant bits
    let shift = (d.0.bits() as i64 - n.0.bits() as i64 + 66).max(0);
    let q = (&n.0 << shift as usize) / &d.0;
    let e = n.1 - d.1 - shift;
    let qb = q.bits() as i64;
    let drop = (qb - 62).max(0);
    let top: i64 = num_traits::ToPrimitive::to_i64(&(q >> drop as usize)).unwrap();
    (top as f64) * 2f64.powi((e + drop).clamp(-2000, 2000) as i32)
}

impl Add for &RatExpr {
    type Output = RatExpr;
    fn add(self, o: &RatExpr) -> RatExpr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, c, d) = (&self.num, &self.den, &o.num, &o.den);
        if b == d {
            let t = a + c;
            return RatExpr::new(t, b.clone()).unwrap();
        }
        let g = gcd(b, d);
        if g.is_constant() {
            return normalize_units(&(a * d) + &(c * b), b * d);
        }
        let b1 = b.div_exact(&g).unwrap();
        let d1 = d.div_exact(&g).unwrap();
        let t = &(a * &d1) + &(c * &b1);
        if t.is_zero() {
            return RatExpr::zero();
        }
        let h = gcd(&t, &g);
        let (t, dh) = if h.is_constant() {
            (t, d.clone())
        } else {
            (t.div_exact(&h).unwrap(), d.div_exact(&h).unwrap())
        };
        normalize_units(t, &b1 * &dh)
    }
}

impl Mul for &RatExpr {
    type Output = RatExpr;
    fn mul(self, o: &RatExpr) -> RatExpr {
        if self.is_zero() || o.is_zero() {
            return RatExpr::zero();
        }
        let (a, b, c, d) = (&self.num, &self.den, &o.num, &o.den);
        let g1 = gcd(a, d);
        let g2 = gcd(c, b);
        let (a, d) = if g1.is_constant() {
            (a.clone(), d.clone())
        } else {
            (a.div_exact(&g1).unwrap(), d.div_exact(&g1).unwrap())
        };
        let (c, b) = if g2.is_constant() {
            (c.clone(), b.clone())
        } else {
            (c.div_exact(&g2).unwrap(), b.div_exact(&g2).unwrap())
        };
        normalize_units(&a * &c, &b * &d)
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        -&self
    }
}

impl Sub for &RatExpr {
    type Output = RatExpr;
    fn sub(self, o: &RatExpr) -> RatExpr {
        self + &(-o)
    }
}

impl Div for &RatExpr {
    type Output = RatExpr;
    /// Panics on a zero divisor; use [`RatExpr::checked_div`] to get an error.
    fn div(self, o: &RatExpr) -> RatExpr {
        self.checked_div(o).expect("division by zero RatExpr")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RatExpr {
            type Output = RatExpr;
            fn $f(self, o: RatExpr) -> RatExpr { (&self).$f(&o) }
        }
        impl $tr<&RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $f(self, o: &RatExpr) -> RatExpr { (&self).$f(o) }
        }
        impl $tr<RatExpr> for &RatExpr {
            type Output = RatExpr;
            fn $f(self, o: RatExpr) -> RatExpr { self.$f(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl From<i64> for RatExpr {
    fn from(v: i64) -> Self {
        RatExpr::int(v)
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "num: {} / den: {}", self.num, self.den)
    }
}
