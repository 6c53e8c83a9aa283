//! Multivariate polynomial gcd over Z.
//!
//! Strategy: strip integer and monomial content, eliminate variables that occur
//! in only one operand, probe degrees with modular images at random points, try
//! trial division, and fall back to a recursive subresultant PRS.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::poly::{Monomial, Poly, NVARS};

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    let r = (a as u128) * (b as u128);
    let lo = (r as u64) & P;
    let hi = (r >> 61) as u64;
    let s = lo + hi;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn bigint_mod(c: &BigInt) -> u64 {
    let r = c.mod_floor(&BigInt::from(P));
    r.to_u64().unwrap()
}

/// Deterministic point generator (splitmix64); gcds are unique, so the
/// sequence only affects speed, never results.
struct Points(u64);

impl Points {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        (z ^ (z >> 31)) % (P - 2) + 2
    }
}

/// Univariate image in `slot` at a point for all other variables.
fn image(p: &Poly, slot: usize, point: &[u64; NVARS]) -> Vec<u64> {
    let d = p.degree_in(slot) as usize;
    let mut out = vec![0u64; d + 1];
    let mut pows: Vec<Vec<u64>> = vec![vec![1]; NVARS];
    for (m, c) in p.terms() {
        let mut v = bigint_mod(c);
        for k in 0..NVARS {
            if k == slot {
                continue;
            }
            let e = m.exp(k) as usize;
            if e == 0 {
                continue;
            }
            let pw = &mut pows[k];
            while pw.len() <= e {
                let last = *pw.last().unwrap();
                pw.push(mulmod(last, point[k]));
            }
            v = mulmod(v, pw[e]);
        }
        let i = m.exp(slot) as usize;
        out[i] = addmod(out[i], v);
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn uni_degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Degree of the gcd of two univariate images mod P.
fn uni_gcd_degree(a: &[u64], b: &[u64]) -> usize {
    let mut a: Vec<u64> = a.to_vec();
    let mut b: Vec<u64> = b.to_vec();
    loop {
        let Some(db) = uni_degree(&b) else {
            return uni_degree(&a).unwrap_or(0);
        };
        if db == 0 {
            return 0;
        }
        let inv = invmod(b[db]);
        while let Some(da) = uni_degree(&a) {
            if da < db {
                break;
            }
            let f = mulmod(a[da], inv);
            for i in 0..=db {
                a[da - db + i] = submod(a[da - db + i], mulmod(f, b[i]));
            }
        }
        a.truncate(uni_degree(&a).map_or(0, |d| d + 1));
        std::mem::swap(&mut a, &mut b);
    }
}

/// Gcd with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.sign_normalized();
    }
    if b.is_zero() {
        return a.sign_normalized();
    }
    let ca = a.content();
    let cb = b.content();
    let c = ca.gcd(&cb);
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_int(&ca).div_monomial(&ma);
    let b1 = b.div_int(&cb).div_monomial(&mb);
    let g = gcd_primitive(&a1, &b1);
    g.mul_monomial(&m).scale(&c).sign_normalized()
}

/// Content of `p` with respect to `slot`: gcd of its coefficients in that variable.
pub fn content_in(p: &Poly, slot: usize) -> Poly {
    let mut cs: Vec<Poly> = p
        .coeffs_in(slot)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    cs.sort_by_key(|c| c.len());
    fold_gcd(cs)
}

fn fold_gcd(polys: impl IntoIterator<Item = Poly>) -> Poly {
    let mut g = Poly::zero();
    for c in polys {
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// Both inputs are primitive over Z and free of monomial content.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.sign_normalized() == b.sign_normalized() {
        return a.sign_normalized();
    }
    let sa = a.support();
    let sb = b.support();
    if sa != sb {
        // a variable present in only one operand: the gcd is free of it
        let only = sa ^ sb;
        let slot = only.trailing_zeros() as usize;
        let (with, other) = if sa & (1 << slot) != 0 {
            (a, b)
        } else {
            (b, a)
        };
        let mut cs: Vec<Poly> = with
            .coeffs_in(slot)
            .into_iter()
            .filter(|c| !c.is_zero())
            .collect();
        cs.sort_by_key(|c| c.len());
        cs.insert(0, other.clone());
        return fold_gcd(cs).primitive();
    }
    let shared: Vec<usize> = (0..NVARS).filter(|k| sa & (1 << k) != 0).collect();

    // modular degree bounds per shared variable
    let mut pts = Points(a.len() as u64 ^ ((b.len() as u64) << 32));
    let mut bounds = Vec::with_capacity(shared.len());
    for &v in &shared {
        let (da, db) = (a.degree_in(v) as usize, b.degree_in(v) as usize);
        let mut bound = da.min(db);
        for _ in 0..3 {
            let mut point = [0u64; NVARS];
            for p in point.iter_mut() {
                *p = pts.next();
            }
            let ia = image(a, v, &point);
            let ib = image(b, v, &point);
            if uni_degree(&ia) == Some(da) && uni_degree(&ib) == Some(db) {
                bound = uni_gcd_degree(&ia, &ib);
                break;
            }
        }
        if bound == 0 {
            // gcd free of v: it divides the contents in v
            let g = gcd(&content_in(a, v), &content_in(b, v));
            return g.primitive();
        }
        bounds.push((v, bound, da, db));
    }

    // trial division when a bound equals a full degree in every variable
    if bounds.iter().all(|&(_, bd, _, db)| bd == db) && a.div_exact(b).is_some() {
        return b.sign_normalized();
    }
    if bounds.iter().all(|&(_, bd, da, _)| bd == da) && b.div_exact(a).is_some() {
        return a.sign_normalized();
    }

    let &(v, _, _, _) = bounds
        .iter()
        .min_by_key(|&&(_, _, da, db)| da.max(db))
        .unwrap();
    prs_gcd(a, b, v)
}

/// Gcd via the subresultant PRS in main variable `v`.
fn prs_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let cg = gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = subresultant(pa, pb, v);
    let g = if g.degree_in(v) == 0 {
        Poly::one()
    } else {
        let c = content_in(&g, v);
        g.div_exact(&c).expect("content divides").primitive()
    };
    (&cg * &g).sign_normalized()
}

fn subresultant(mut a: Poly, mut b: Poly, v: usize) -> Poly {
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let da = a.degree_in(v);
        let db = b.degree_in(v);
        let delta = da - db;
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r
            .div_exact(&divisor)
            .expect("subresultant division is exact");
        g = a.lc_in(v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).div_exact(&h.pow(delta - 1)).expect("exact"),
        };
    }
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
pub fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lcb = b.lc_in(v);
    let mut r = a.clone();
    let da = a.degree_in(v);
    if da < db {
        return r;
    }
    let mut e = da - db + 1;
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lcr = r.lc_in(v).mul_monomial(&Monomial::var(v, dr - db));
        r = &(&lcb * &r) - &(&lcr * b);
        e -= 1;
    }
    &lcb.pow(e) * &r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Var;

    fn v(x: Var) -> Poly {
        Poly::var(x)
    }

    #[test]
    fn recovers_planted_factor() {
        let s = v(Var::S);
        let u = v(Var::U);
        let c0 = v(Var::Coef { index: 0, order: 0 });
        let g = &(&(&s * &c0) + &u.pow(2)) + &Poly::from(3);
        let a = &g * &(&(&s.pow(2) * &u) - &c0);
        let b = &g * &(&(&s * &c0.pow(2)) + &Poly::from(7));
        assert_eq!(gcd(&a, &b), g.primitive());
    }

    #[test]
    fn coprime_inputs_give_one() {
        let s = v(Var::S);
        let u = v(Var::U);
        let a = &s.pow(3) + &u;
        let b = &(&s * &u) + &Poly::from(1);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn content_and_monomials() {
        let s = v(Var::S);
        let u = v(Var::U);
        let a = (&s.pow(2) * &u).scale(&BigInt::from(6));
        let b = (&s * &u.pow(3)).scale(&BigInt::from(4));
        assert_eq!(gcd(&a, &b), (&s * &u).scale(&BigInt::from(2)));
    }

    #[test]
    fn prs_handles_nontrivial_degree_drop() {
        let s = v(Var::S);
        let u = v(Var::U);
        let g = &(&s.pow(2) * &u) + &(&s - &u.pow(2));
        let a = &g.pow(2) * &(&s + &Poly::from(2));
        let b = &g * &(&s.pow(3) - &u);
        assert_eq!(gcd(&a, &b), g.primitive());
    }
}
