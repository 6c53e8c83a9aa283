//! Truncated multivariate Taylor arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Scalars the geometry code is generic over: plain `f64` or a [`Jet`].
pub trait Real:
    Clone
    + Send
    + Sync
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// A constant living in the same space as `self`.
    fn lift(&self, v: f64) -> Self;
    fn value(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn recip(&self) -> Self;
    fn powi(&self, k: i32) -> Self;
    fn powf(&self, p: f64) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
}

impl Real for f64 {
    fn lift(&self, v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn recip(&self) -> Self {
        1.0 / *self
    }
    fn powi(&self, k: i32) -> Self {
        f64::powi(*self, k)
    }
    fn powf(&self, p: f64) -> Self {
        f64::powf(*self, p)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
}

/// The set of retained multi-indices and their multiplication table.
pub struct JetSpace {
    nvars: usize,
    order: usize,
    indices: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    factorials: Vec<f64>,
    /// `products[i]` lists `(j, k)` with `indices[i] + indices[j] == indices[k]`.
    products: Vec<Vec<(u32, u32)>>,
}

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "JetSpace(vars={}, order={}, len={})",
            self.nvars,
            self.order,
            self.indices.len()
        )
    }
}

impl JetSpace {
    /// All multi-indices of total degree ≤ `order` accepted by `keep`.
    /// `keep` must be closed downward (if α is kept, so is every β ≤ α).
    pub fn new(nvars: usize, order: usize, keep: impl Fn(&[u8]) -> bool) -> Arc<Self> {
        let mut indices = Vec::new();
        let mut cur = vec![0u8; nvars];
        enumerate(&mut cur, 0, order, &mut indices);
        indices.retain(|a| keep(a));
        indices.sort_by(|a, b| {
            let da: u32 = a.iter().map(|&e| e as u32).sum();
            let db: u32 = b.iter().map(|&e| e as u32).sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let lookup: HashMap<Vec<u8>, usize> = indices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let factorials = indices
            .iter()
            .map(|a| {
                a.iter()
                    .map(|&e| (1..=e as u32).map(f64::from).product::<f64>())
                    .product()
            })
            .collect();
        let mut products = vec![Vec::new(); indices.len()];
        let mut sum = vec![0u8; nvars];
        for (i, a) in indices.iter().enumerate() {
            for (j, b) in indices.iter().enumerate() {
                for v in 0..nvars {
                    sum[v] = a[v] + b[v];
                }
                if let Some(&k) = lookup.get(&sum) {
                    products[i].push((j as u32, k as u32));
                }
            }
        }
        Arc::new(JetSpace {
            nvars,
            order,
            indices,
            lookup,
            factorials,
            products,
        })
    }

    pub fn full(nvars: usize, order: usize) -> Arc<Self> {
        JetSpace::new(nvars, order, |_| true)
    }

    /// Variables x₀..x_{n−1} then y₀..y_{n−1}: at most one x-derivative, y-order
    /// ≤ `fiber`, and y-order ≤ `mixed` alongside an x-derivative.
    pub fn fiber_base(n: usize, fiber: usize, mixed: usize) -> Arc<Self> {
        JetSpace::new(2 * n, fiber.max(mixed + 1), move |a| {
            let dx: usize = a[..n].iter().map(|&e| e as usize).sum();
            let dy: usize = a[n..].iter().map(|&e| e as usize).sum();
            match dx {
                0 => dy <= fiber,
                1 => dy <= mixed,
                _ => false,
            }
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[Vec<u8>] {
        &self.indices
    }

    pub fn index_of(&self, multi: &[u8]) -> Option<usize> {
        self.lookup.get(multi).copied()
    }

    /// α! for the multi-index at position `i`.
    pub fn factorial(&self, i: usize) -> f64 {
        self.factorials[i]
    }

    fn unit(&self, var: usize) -> usize {
        let mut m = vec![0u8; self.nvars];
        m[var] = 1;
        self.index_of(&m).expect("first-order seed not retained")
    }
}

fn enumerate(cur: &mut Vec<u8>, pos: usize, budget: usize, out: &mut Vec<Vec<u8>>) {
    if pos == cur.len() {
        out.push(cur.clone());
        return;
    }
    for e in 0..=budget {
        cur[pos] = e as u8;
        enumerate(cur, pos + 1, budget - e, out);
    }
    cur[pos] = 0;
}

/// A truncated Taylor expansion: `coeffs[i]` multiplies δ^α for the
/// multi-index α at position `i` (Taylor coefficients, not derivatives).
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet({})", self.value())
    }
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, v: f64) -> Self {
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = v;
        Jet {
            space: space.clone(),
            coeffs,
        }
    }

    /// The coordinate function `var` around the point value `v`.
    pub fn variable(space: &Arc<JetSpace>, var: usize, v: f64) -> Self {
        let mut j = Jet::constant(space, v);
        j.coeffs[space.unit(var)] = 1.0;
        j
    }

    pub fn from_coeffs(space: &Arc<JetSpace>, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), space.len());
        Jet {
            space: space.clone(),
            coeffs,
        }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Taylor coefficient at a multi-index; zero if not retained.
    pub fn coeff(&self, multi: &[u8]) -> f64 {
        self.space.index_of(multi).map_or(0.0, |i| self.coeffs[i])
    }

    /// ∂^α at the expansion point.
    pub fn derivative(&self, multi: &[u8]) -> f64 {
        self.space
            .index_of(multi)
            .map_or(0.0, |i| self.coeffs[i] * self.space.factorials[i])
    }

    /// Σ t_k (self − self₀)^k.
    pub fn compose(&self, taylor: &[f64]) -> Jet {
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut r = Jet::constant(&self.space, *taylor.last().unwrap_or(&0.0));
        for &t in taylor.iter().rev().skip(1) {
            r = &r * &h;
            r.coeffs[0] += t;
        }
        r
    }

    fn k(&self) -> usize {
        self.space.order
    }

    fn same(&self, o: &Jet) {
        debug_assert!(
            Arc::ptr_eq(&self.space, &o.space),
            "jets from different spaces"
        );
    }

    fn mul_into(&self, o: &Jet) -> Vec<f64> {
        self.same(o);
        let mut out = vec![0.0; self.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for &(j, k) in &self.space.products[i] {
                out[k as usize] += a * o.coeffs[j as usize];
            }
        }
        out
    }
}

impl Real for Jet {
    fn lift(&self, v: f64) -> Self {
        Jet::constant(&self.space, v)
    }

    fn value(&self) -> f64 {
        self.coeffs[0]
    }

    fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    fn ln(&self) -> Self {
        let x0 = self.value();
        let mut t = vec![x0.ln()];
        for k in 1..=self.k() {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            t.push(sign / (k as f64 * x0.powi(k as i32)));
        }
        self.compose(&t)
    }

    fn exp(&self) -> Self {
        let e0 = self.value().exp();
        let mut t = vec![e0];
        for k in 1..=self.k() {
            t.push(t[k - 1] / k as f64);
        }
        self.compose(&t)
    }

    fn recip(&self) -> Self {
        let x0 = self.value();
        let t: Vec<f64> = (0..=self.k())
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / x0.powi(k as i32 + 1))
            .collect();
        self.compose(&t)
    }

    fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return self.recip().powi(-k);
        }
        let mut r = self.lift(1.0);
        let mut base = self.clone();
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        r
    }

    fn powf(&self, p: f64) -> Self {
        let x0 = self.value();
        let mut t = vec![x0.powf(p)];
        for k in 1..=self.k() {
            t.push(t[k - 1] * (p - (k - 1) as f64) / (k as f64 * x0));
        }
        self.compose(&t)
    }

    fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&trig_series([s, c, -s, -c], self.k()))
    }

    fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&trig_series([c, -s, -c, s], self.k()))
    }
}

fn trig_series(cycle: [f64; 4], order: usize) -> Vec<f64> {
    let mut fact = 1.0;
    (0..=order)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            cycle[k % 4] / fact
        })
        .collect()
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        self.same(o);
        Jet {
            space: self.space.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        self.same(o);
        Jet {
            space: self.space.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        Jet {
            space: self.space.clone(),
            coeffs: self.mul_into(o),
        }
    }
}

impl Div<&Jet> for &Jet {
    type Output = Jet;
    fn div(self, o: &Jet) -> Jet {
        self * &o.recip()
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet {
                (&self).$m(&o)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, o: &Jet) -> Jet {
                (&self).$m(o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.coeffs.iter_mut().for_each(|a| *a = -*a);
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, k: f64) -> Jet {
        self.coeffs[0] += k;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, k: f64) -> Jet {
        self.coeffs[0] -= k;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, k: f64) -> Jet {
        self.coeffs.iter_mut().for_each(|a| *a *= k);
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, k: f64) -> Jet {
        self * (1.0 / k)
    }
}
