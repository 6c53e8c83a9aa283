use finsler_core::algebra::{
    gcd, parse_expr, parse_ratexpr_text, AlgebraError, Monomial, Poly, RatExpr, Var,
};
use finsler_core::symbolic::{njfi, NjfiConvention, PhiSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn e(text: &str) -> RatExpr {
    parse_expr(text).unwrap()
}

fn poly_su(terms: &[(i64, u32, u32)]) -> Poly {
    Poly::from_terms(
        terms
            .iter()
            .map(|&(c, a, b)| (Monomial::from_exps(&[a, b]), BigInt::from(c))),
    )
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3), 1..4).prop_map(|t| poly_su(&t))
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratexpr() -> impl Strategy<Value = RatExpr> {
    (small_poly(), nonzero_poly()).prop_map(|(n, d)| RatExpr::new(n, d).unwrap())
}

#[test]
fn arithmetic_examples() {
    let s = RatExpr::s();
    let u = RatExpr::u();
    assert_eq!(&s + &s, s.scale_int(2));
    assert_eq!((&u * &u).checked_div(&u).unwrap(), u);
    let d = &u - &s;
    assert!((&d.recip().unwrap() * &d).is_one());
    assert!(matches!(
        RatExpr::one().checked_div(&RatExpr::zero()),
        Err(AlgebraError::DivisionByZero)
    ));
}

#[test]
fn derivative_examples() {
    assert_eq!(e("s^2*u").d_ds(), e("2*s*u"));
    assert!(e("u").d_ds().is_zero());
    assert_eq!(e("s/(1-u^2)").d_ds(), e("1/(1-u^2)"));
    assert!(e("u^2").d_db2().unwrap().is_one());
    assert_eq!(e("u").d_db2().unwrap(), e("1/(2*u)"));
    assert_eq!(e("1/u").d_db2().unwrap(), e("-1/(2*u^3)"));
}

#[test]
fn coefficient_and_numerator_examples() {
    assert_eq!(
        e("3*s^2 + u").coeffs_in_s().unwrap(),
        vec![e("u"), RatExpr::zero(), e("3")]
    );
    assert!(RatExpr::zero().coeffs_in_s().unwrap().is_empty());
    let n = e("(s^2 - u^2)/u").numerator_normalized();
    assert_eq!(n, poly_su(&[(1, 2, 0), (-1, 0, 2)]));
    assert!(RatExpr::new(Poly::zero(), poly_su(&[(1, 0, 0), (1, 1, 0)]))
        .unwrap()
        .numerator_normalized()
        .is_zero());
}

#[test]
fn evaluation_examples() {
    let z = q(0, 1);
    assert_eq!(
        e("s/u").eval_rational(&q(1, 1), &q(2, 1), &z, &z).unwrap(),
        q(1, 2)
    );
    assert_eq!(
        e("1/(u-s)").eval_rational(&q(1, 1), &q(1, 1), &z, &z),
        Err(AlgebraError::Pole)
    );
}

#[test]
fn case2_numerator_has_eighteen_coefficients() {
    // the numerator assembled from the separately reduced pieces; the fully
    // reduced one has lower degree
    let nj = njfi(&PhiSpec::generic(2).unwrap(), 3, NjfiConvention::Lemma).unwrap();
    assert_eq!(nj.assembled.coeffs_in(Var::S.slot()).len(), 18);
    assert_eq!(nj.canonical.coeffs_in(Var::S.slot()).len(), 14);
}

#[test]
fn denominator_is_sign_normalized() {
    let r = e("1/(s - u)");
    assert!(r.den().leading_coeff() > BigInt::zero());
    assert_eq!(r, e("-1/(u - s)"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_laws(a in ratexpr(), b in ratexpr(), c in ratexpr()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn common_factors_cancel(a in small_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let left = RatExpr::new(&a * &c, &b * &c).unwrap();
        let right = RatExpr::new(a, b).unwrap();
        prop_assert_eq!(left.num(), right.num());
        prop_assert_eq!(left.den(), right.den());
        prop_assert!(right.den().leading_coeff() > BigInt::zero());
    }

    #[test]
    fn gcd_divides_and_contains_planted_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let x = &a * &c;
        let y = &b * &c;
        let g = gcd(&x, &y);
        prop_assert!(x.div_exact(&g).is_some());
        prop_assert!(y.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c.primitive()).is_some());
    }

    #[test]
    fn derivations_obey_leibniz(a in ratexpr(), b in ratexpr()) {
        prop_assert_eq!((&a * &b).d_ds(), &(&a.d_ds() * &b) + &(&a * &b.d_ds()));
        let lhs = (&a * &b).d_db2().unwrap();
        let rhs = &(&a.d_db2().unwrap() * &b) + &(&a * &b.d_db2().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratexpr(), b in ratexpr(), sn in -5i64..5, un in 1i64..6) {
        let (s, u, z) = (q(sn, 3), q(un, 2), q(0, 1));
        if let (Ok(x), Ok(y), Ok(p)) = (
            a.eval_rational(&s, &u, &z, &z),
            b.eval_rational(&s, &u, &z, &z),
            (&a * &b).eval_rational(&s, &u, &z, &z),
        ) {
            prop_assert_eq!(p, &x * &y);
            prop_assert_eq!((&a + &b).eval_rational(&s, &u, &z, &z).unwrap(), x + y);
        }
    }

    #[test]
    fn text_form_round_trips(a in ratexpr()) {
        prop_assert_eq!(parse_ratexpr_text(&a.to_string()).unwrap(), a);
    }
}
