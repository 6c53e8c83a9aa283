//! Sparse multivariate polynomials over Z.
//!
//! Terms are kept sorted in descending graded-lexicographic order with
//! `s > u > C > T > c0 > c0' > c1 > ...`, so the first term is the leading one.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Number of variable slots packed into a [`Monomial`].
pub const NVARS: usize = 16;

/// Highest coefficient index available for generic symbols `c_k`.
pub const MAX_COEF_INDEX: u8 = 5;

/// A polynomial variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    S,
    U,
    /// Formal symbol for the conformal factor c.
    C,
    /// Formal symbol for the isotropy factor c-tilde.
    T,
    /// Generic coefficient c_k(b²) (`order` 0) or its b²-derivative (`order` 1).
    Coef {
        index: u8,
        order: u8,
    },
}

impl Var {
    pub fn slot(self) -> usize {
        match self {
            Var::S => 0,
            Var::U => 1,
            Var::C => 2,
            Var::T => 3,
            Var::Coef { index, order } => {
                assert!(
                    index <= MAX_COEF_INDEX && order <= 1,
                    "unsupported symbol {self:?}"
                );
                4 + 2 * index as usize + order as usize
            }
        }
    }

    pub fn from_slot(slot: usize) -> Var {
        match slot {
            0 => Var::S,
            1 => Var::U,
            2 => Var::C,
            3 => Var::T,
            k if k < NVARS => Var::Coef {
                index: ((k - 4) / 2) as u8,
                order: ((k - 4) % 2) as u8,
            },
            _ => panic!("slot {slot} out of range"),
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::S => "s".into(),
            Var::U => "u".into(),
            Var::C => "C".into(),
            Var::T => "T".into(),
            Var::Coef { index, order: 0 } => format!("c{index}"),
            Var::Coef { index, .. } => format!("dc{index}"),
        }
    }

    pub fn parse(name: &str) -> Option<Var> {
        match name {
            "s" => Some(Var::S),
            "u" => Some(Var::U),
            "C" => Some(Var::C),
            "T" => Some(Var::T),
            _ => {
                let (order, rest) = match name.strip_prefix("dc") {
                    Some(r) => (1, r),
                    None => (0, name.strip_prefix('c')?),
                };
                let index: u8 = rest.parse().ok()?;
                (index <= MAX_COEF_INDEX).then_some(Var::Coef { index, order })
            }
        }
    }
}

const CARRY_MASK: u128 = {
    let mut m = 0u128;
    let mut k = 1;
    while k < NVARS {
        m |= 1u128 << (8 * k);
        k += 1;
    }
    m
};

/// A monomial: total degree plus 16 packed 8-bit exponents, slot 0 in the top byte.
///
/// The derived ordering compares total degree first and then the packed
/// exponents, which is exactly graded-lex with slot 0 as the largest variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: u128,
}

fn shift(slot: usize) -> u32 {
    (8 * (NVARS - 1 - slot)) as u32
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(slot: usize, e: u32) -> Self {
        assert!(e < 256, "exponent overflow");
        Monomial {
            deg: e,
            exps: (e as u128) << shift(slot),
        }
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        let mut m = Monomial::one();
        for (slot, &e) in exps.iter().enumerate() {
            m = m * Monomial::var(slot, e);
        }
        m
    }

    pub fn exp(&self, slot: usize) -> u32 {
        ((self.exps >> shift(slot)) & 0xff) as u32
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Bitmask of slots with nonzero exponent.
    pub fn support(&self) -> u16 {
        let mut mask = 0u16;
        for slot in 0..NVARS {
            if self.exp(slot) != 0 {
                mask |= 1 << slot;
            }
        }
        mask
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if other.exps < self.exps {
            return false;
        }
        let d = other.exps.wrapping_sub(self.exps);
        (other.exps ^ self.exps ^ d) & CARRY_MASK == 0
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial {
            deg: self.deg - other.deg,
            exps: self.exps - other.exps,
        }
    }

    pub fn without(&self, slot: usize) -> Monomial {
        let e = self.exp(slot);
        Monomial {
            deg: self.deg - e,
            exps: self.exps & !(0xffu128 << shift(slot)),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::one();
        for slot in 0..NVARS {
            let e = self.exp(slot).min(other.exp(slot));
            if e > 0 {
                m = m * Monomial::var(slot, e);
            }
        }
        m
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        let s = self.exps.wrapping_add(o.exps);
        if s < self.exps || (self.exps ^ o.exps ^ s) & CARRY_MASK != 0 {
            panic!("monomial exponent overflow");
        }
        Monomial {
            deg: self.deg + o.deg,
            exps: s,
        }
    }
}

#[derive(Default)]
struct MonoHasher(u64);

impl Hasher for MonoHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }
    fn write_u32(&mut self, v: u32) {
        self.write_u64(v as u64);
    }
    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
    fn write_u128(&mut self, v: u128) {
        self.write_u64(v as u64);
        self.write_u64((v >> 64) as u64);
    }
}

type MonoMap<V> = HashMap<Monomial, V, BuildHasherDefault<MonoHasher>>;

/// Sparse polynomial with integer coefficients, terms sorted descending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly::var_pow(v.slot(), 1)
    }

    pub fn var_pow(slot: usize, e: u32) -> Self {
        Poly::term(Monomial::var(slot, e), BigInt::one())
    }

    /// Builds from unsorted terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        let terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, slot: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(slot)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, slot: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(slot)).min().unwrap_or(0)
    }

    /// Bitmask of variables that occur.
    pub fn support(&self) -> u16 {
        self.terms.iter().fold(0, |acc, t| acc | t.0.support())
    }

    pub fn contains(&self, v: Var) -> bool {
        self.support() & (1 << v.slot()) != 0
    }

    /// Gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.0, |acc, t| acc.gcd(&t.0))
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_int(&self, k: &BigInt) -> Poly {
        if k.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!((c % k).is_zero());
                    (*m, c / k)
                })
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (*t * *m, c.clone()))
                .collect(),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.div(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative in the variable at `slot`.
    pub fn derivative(&self, slot: usize) -> Poly {
        let v = Monomial::var(slot, 1);
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exp(slot);
                (e > 0).then(|| (m.div(&v), c * BigInt::from(e)))
            })
            .collect();
        Poly { terms }
    }

    /// Coefficients with respect to the variable at `slot`; entry `i` multiplies `v^i`.
    pub fn coeffs_in(&self, slot: usize) -> Vec<Poly> {
        let d = self.degree_in(slot) as usize;
        let mut out: Vec<Vec<(Monomial, BigInt)>> =
            vec![Vec::new(); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            out[m.exp(slot) as usize].push((m.without(slot), c.clone()));
        }
        out.into_iter()
            .map(|mut t| {
                t.sort_by_key(|t| Reverse(t.0));
                Poly { terms: t }
            })
            .collect()
    }

    /// Leading coefficient with respect to `slot`.
    pub fn lc_in(&self, slot: usize) -> Poly {
        let d = self.degree_in(slot);
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(slot) == d)
            .map(|(m, c)| (m.without(slot), c.clone()))
            .collect();
        let mut p = Poly { terms };
        p.terms.sort_by_key(|t| Reverse(t.0));
        p
    }

    /// Σ coeffs[i]·v^i.
    pub fn from_coeffs(slot: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(slot, i as u32);
            terms.extend(c.terms.iter().map(|(m, k)| (*m * vm, k.clone())));
        }
        terms.sort_by_key(|t| Reverse(t.0));
        Poly { terms }
    }

    /// Substitutes an integer for the variable at `slot`.
    pub fn substitute_int(&self, slot: usize, value: &BigInt) -> Poly {
        let d = self.degree_in(slot) as usize;
        let mut pows = vec![BigInt::one()];
        for i in 1..=d {
            let next = &pows[i - 1] * value;
            pows.push(next);
        }
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.without(slot), c * &pows[m.exp(slot) as usize])),
        )
    }

    /// Leading-coefficient sign normalization: returns `(±self, sign)` with positive lc.
    pub fn sign_normalized(&self) -> Poly {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        let p = self.div_int(&c);
        p.sign_normalized()
    }

    /// Exact division, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                terms.push((m.div(dm), q));
            }
            return Some(Poly { terms });
        }
        if self.total_degree() < d.total_degree() || self.terms.len() < d.terms.len() {
            return None;
        }
        for slot in 0..NVARS {
            if d.degree_in(slot) > self.degree_in(slot) {
                return None;
            }
        }
        let (dm, dc) = d.terms[0].clone();
        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !dm.divides(&m) {
                return None;
            }
            let (qc, r) = c.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qm = m.div(&dm);
            for (tm, tc) in &d.terms[1..] {
                let key = *tm * qm;
                let entry = rem.entry(key).or_insert_with(BigInt::zero);
                *entry -= tc * &qc;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }
}

fn merge(
    a: &[(Monomial, BigInt)],
    b: &[(Monomial, BigInt)],
    negate_b: bool,
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0, c));
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly {
            terms: merge(&self.terms, &o.terms, false),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        Poly {
            terms: merge(&self.terms, &o.terms, true),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let (small, big) = if self.terms.len() <= o.terms.len() {
            (self, o)
        } else {
            (o, self)
        };
        if small.terms.len() == 1 {
            let (m, c) = &small.terms[0];
            return Poly {
                terms: big.terms.iter().map(|(t, k)| (*t * *m, k * c)).collect(),
            };
        }
        let mut map: MonoMap<BigInt> = MonoMap::with_capacity_and_hasher(
            small.terms.len() * big.terms.len() / 2 + 1,
            Default::default(),
        );
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                let key = *ma * *mb;
                match map.get_mut(&key) {
                    Some(v) => *v += ca * cb,
                    None => {
                        map.insert(key, ca * cb);
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| Reverse(t.0));
        Poly { terms }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly { (&self).$f(&o) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl From<i64> for Poly {
    fn from(v: i64) -> Self {
        Poly::constant(BigInt::from(v))
    }
}

fn fmt_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for slot in 0..NVARS {
        let e = m.exp(slot);
        if e == 0 {
            continue;
        }
        write!(f, "*{}", Var::from_slot(slot).name())?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Monomial-list text form, e.g. `3*s^2*u + -1*u^2`. Zero prints as `0`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            fmt_monomial(m, f)?;
        }
        Ok(())
    }
}
