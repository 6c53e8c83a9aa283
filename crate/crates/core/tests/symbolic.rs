use finsler_core::algebra::{parse_expr, Poly, RatExpr, SurdExpr, Var};
use finsler_core::numeric::{ChartMetric, Evaluator};
use finsler_core::symbolic::*;
use finsler_core::zoo;
use num_bigint::BigInt;
use num_rational::BigRational;

fn e(text: &str) -> RatExpr {
    parse_expr(text).unwrap()
}

fn ints(a: &[i64]) -> Vec<BigRational> {
    a.iter()
        .map(|&k| BigRational::from_integer(k.into()))
        .collect()
}

fn family(a: &[i64]) -> PhiSpec {
    PhiSpec::theorem_family(&ints(a)).unwrap()
}

fn riemannian() -> PhiSpec {
    PhiSpec::general("1", RatExpr::one()).unwrap()
}

fn poly(cs: &[&str]) -> PhiSpec {
    PhiSpec::polynomial("test", cs.iter().map(|c| e(c)).collect()).unwrap()
}

fn cp(index: u8, order: u8) -> Poly {
    Poly::var(Var::Coef { index, order })
}

#[test]
fn riemannian_bundle_is_trivial() {
    let b = fundamental_quantities(&riemannian()).unwrap();
    for (name, v) in b.named() {
        if name == "rho" {
            assert_eq!(v.as_rational(), Some(&RatExpr::one()), "rho");
        } else {
            assert!(v.is_zero(), "{name} should vanish");
        }
    }
}

#[test]
fn randers_q_matches_float_formula() {
    let b = fundamental_quantities(&zoo::randers_phi()).unwrap();
    let (s, u) = (0.1f64, 0.5f64);
    let w = 1.0 - u * u;
    let root = (w + s * s).sqrt();
    let phi = (root + s) / w;
    let phi2 = (s / root + 1.0) / w;
    let want = phi2 / (phi - s * phi2);
    assert!((b.q.eval_f64(s, u).unwrap() - want).abs() <= 1e-12 * want.abs());
    let rho = phi * (phi - s * phi2);
    assert!((b.rho.eval_f64(s, u).unwrap() - rho).abs() <= 1e-12 * rho.abs());
}

#[test]
fn bundle_identities_hold_exactly() {
    for phi in [
        family(&[1, 1]),
        family(&[2, -1, 3]),
        poly(&["1", "u^2"]),
        zoo::randers_phi(),
        zoo::berwald_phi(),
    ] {
        let d = PhiDerivatives::of(&phi).unwrap();
        let b = fundamental_quantities(&phi).unwrap();
        assert!(
            (&b.rho - &(&d.phi * &d.d1())).is_zero(),
            "rho for {}",
            phi.label()
        );
        assert!(
            (&b.psi.scale(&RatExpr::int(2)) + &b.eta).is_zero(),
            "2Ψ = −η for {}",
            phi.label()
        );
        let s = SurdExpr::rational(RatExpr::s());
        let two = SurdExpr::rational(RatExpr::int(2));
        let first = (&d.phi2 + &(&(&two * &s) * &d.phi1))
            .try_div(&(&two * &d.phi))
            .unwrap();
        let second = (&b.h * &d.m()).try_div(&d.phi).unwrap();
        assert!(
            (&b.e - &(&first - &second)).is_zero(),
            "E relation for {}",
            phi.label()
        );
    }
}

#[test]
fn family_has_vanishing_e22() {
    let b = fundamental_quantities(&family(&[1, 1])).unwrap();
    assert!(b.e.d_ds().d_ds().zero_test_numerator().is_zero());
}

#[test]
fn weak_landsberg_condition_examples() {
    let c = weak_landsberg_conditions(&riemannian()).unwrap();
    assert!(c.ne22.holds() && c.nh222.holds() && c.np.holds());
    let c = weak_landsberg_conditions(&family(&[1, 1, 1])).unwrap();
    assert!(c.ne22.holds() && c.nh222.holds() && c.np.holds());
    let c = weak_landsberg_conditions(&zoo::randers_phi()).unwrap();
    assert!(!c.ne22.holds());
}

#[test]
fn wrong_power_breaks_np() {
    let phi = poly(&["1/u", "1/u^3"]);
    assert!(!weak_landsberg_conditions(&phi).unwrap().np.holds());
}

#[test]
fn mean_landsberg_scalar_examples() {
    assert!(mean_landsberg_scalar(&riemannian(), 3).unwrap().is_zero());
    assert!(mean_landsberg_scalar(&family(&[1, 1]), 3)
        .unwrap()
        .is_zero());
    let phi = poly(&["1", "u^2"]);
    assert!(!mean_landsberg_scalar(&phi, 3).unwrap().is_zero());
    // the definition-based J agrees that this φ is not weak Landsberg
    let entry = zoo::make_polynomial(vec![e("1"), e("u^2")], 3).unwrap();
    let (x, y) = entry.sample_points(1, 3).remove(0);
    let r = entry.evaluator().report(&x, &y, 0.0).unwrap();
    assert!(r.norms.j > 1e-3);
}

#[test]
fn weak_landsberg_implies_vanishing_w() {
    for a in [&[1, 1][..], &[1, 2, 3], &[3, 0, 1, -1]] {
        let phi = family(a);
        let c = weak_landsberg_conditions(&phi).unwrap();
        assert!(c.ne22.holds() && c.nh222.holds() && c.np.holds());
        for n in 2..=5 {
            assert!(mean_landsberg_scalar(&phi, n).unwrap().is_zero());
        }
    }
}

#[test]
fn mean_cartan_scalar_examples() {
    assert!(mean_cartan_scalar(&riemannian(), 3).unwrap().v.is_zero());
    // φ₂₂ ≡ 0 leaves V = (n+1)φ₂(φ − sφ₂)
    let phi = poly(&["1 + u^2", "1/2"]);
    for n in 2..=5u32 {
        let v = mean_cartan_scalar(&phi, n).unwrap().v;
        let want = e(&format!("{}*(1/2)*(1 + u^2)", n + 1));
        assert_eq!(v.as_rational(), Some(&want));
    }
}

#[test]
fn mean_cartan_scalar_matches_numeric_log_det() {
    // Euclidean base, β = ⟨x, y⟩: a point with b = 1/2 and s = 1/10
    let v = mean_cartan_scalar(&zoo::randers_phi(), 3).unwrap().v;
    let rho = fundamental_quantities(&zoo::randers_phi()).unwrap().rho;
    let (s, b) = (0.1f64, 0.5f64);
    let x = [0.5, 0.0, 0.0];
    let y = [s / b, (1.0 - (s / b).powi(2)).sqrt(), 0.0];
    let ev = Evaluator::new(
        ChartMetric::euclidean(3, 0.0, 0.9).unwrap(),
        zoo::randers_phi(),
    )
    .unwrap();
    let r = ev.report(&x, &y, 0.0).unwrap();
    let scale = v.eval_f64(s, b).unwrap() / (2.0 * rho.eval_f64(s, b).unwrap());
    for j in 0..3 {
        let want = scale * (x[j] - s * y[j]);
        assert!(
            (r.i_j.log_det[j] - want).abs() <= 1e-9,
            "I_{j}: {} vs {want}",
            r.i_j.log_det[j]
        );
    }
}

#[test]
fn njfi_examples() {
    for conv in [NjfiConvention::Lemma, NjfiConvention::CaseAnalysis] {
        assert!(njfi(&riemannian(), 3, conv).unwrap().canonical.is_zero());
    }
    let g = PhiSpec::generic(1).unwrap();
    for n in 2..=5u32 {
        let nj = njfi(&g, n, NjfiConvention::CaseAnalysis).unwrap();
        assert_eq!(nj.canonical.degree_in(Var::S.slot()), 2);
        let (fc, ft) = extract_case_coefficients(&nj.canonical, 2).unwrap();
        let bracket = &(&cp(1, 0) * &cp(0, 1)).scale(&BigInt::from(2)) - &(&cp(0, 0) * &cp(1, 1));
        let want_c = (&cp(1, 0) * &bracket).scale(&BigInt::from(2 * (n + 1)));
        let want_t = cp(1, 0).pow(3).scale(&BigInt::from(n + 1));
        let lam = proportionality(&ft, &want_t).expect("T-part is a multiple of (n+1)c1³");
        assert_eq!(proportionality(&fc, &want_c), Some(lam));
    }
}

#[test]
fn coefficients_beyond_degree_are_zero() {
    let nj = njfi(&PhiSpec::generic(1).unwrap(), 3, NjfiConvention::Lemma).unwrap();
    let (fc, ft) = extract_case_coefficients(&nj.canonical, 9).unwrap();
    assert!(fc.is_zero() && ft.is_zero());
}

#[test]
fn njfi_is_linear_in_c_and_t() {
    for m in 1..=6usize {
        let a: Vec<i64> = (0..=m as i64).map(|k| k + 1).collect();
        let nj = njfi(&family(&a), 3, NjfiConvention::Lemma).unwrap();
        for i in 0..=nj.canonical.degree_in(Var::S.slot()) {
            extract_case_coefficients(&nj.canonical, i).unwrap();
        }
    }
    for m in 1..=2usize {
        let nj = njfi(&PhiSpec::generic(m).unwrap(), 3, NjfiConvention::Lemma).unwrap();
        for i in 0..=nj.assembled.degree_in(Var::S.slot()) {
            extract_case_coefficients(&nj.assembled, i).unwrap();
        }
    }
}

#[test]
fn case2_top_coefficient() {
    for n in [2u32, 3] {
        let r = case_analysis(2, n).unwrap();
        let lemma = r
            .forms
            .iter()
            .find(|f| f.convention == NjfiConvention::Lemma)
            .unwrap();
        assert_eq!(lemma.assembled_degree, Some(17));
        assert_eq!(r.kappa.as_deref(), Some("162"));
        assert_eq!(r.kappa_power, Some(9));
    }
}

#[test]
fn ode_examples() {
    let res = case_odes_residual(1, &[e("3/u"), e("5/u^2")]).unwrap();
    assert!(res.iter().all(RatExpr::is_zero));
    let res = case_odes_residual(1, &[e("1"), e("1")]).unwrap();
    assert!(res[0].is_zero());
    assert!(res[1].is_one());
    let res = case_odes_residual(2, &[e("1/u"), e("1/u^2"), e("1/u^3")]).unwrap();
    assert_eq!(res[0], e("3/u"));
    assert!(res[1].is_zero() && res[2].is_zero());
    let res = case_odes_residual(2, &[e("-2/u"), e("7/u^2"), e("1/u^3")]).unwrap();
    assert!(res.iter().all(RatExpr::is_zero));
    assert!(case_odes_residual(1, &[e("1")]).is_err());
}

#[test]
fn family_verdicts() {
    let v = verify_theorem_family(&ints(&[1, 1]), &[3]).unwrap();
    assert!(v.holds);
    let v = verify_theorem_family(&ints(&[1, 1, 1]), &[4]).unwrap();
    assert!(v.holds, "{:?}", v.records);
    let json = serde_json::to_value(&v.records[0]).unwrap();
    for key in ["phi", "n", "conditions", "degrees", "residuals"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    for key in ["NE22", "NH222", "NP", "NJFI_weak"] {
        assert_eq!(json["conditions"][key], true);
    }
}

#[test]
fn concrete_case1_shape() {
    for n in 2..=5u32 {
        let shape = case1_shape(&poly(&["1", "u^2"]), n).unwrap();
        assert_eq!(shape.degree, Some(2));
        assert_eq!(
            shape.ratio_value,
            Some(BigRational::new(1.into(), (n + 1).into()))
        );
    }
}

#[test]
fn interpolation_in_n() {
    let samples: Vec<(u32, BigRational)> = (2..=5)
        .map(|n| (n, BigRational::from_integer((3 * n * n + 1).into())))
        .collect();
    assert_eq!(fit_in_n(&samples), ints(&[1, 0, 3]));
}

#[test]
fn degenerate_phi_is_rejected() {
    // φ − sφ₂ + (b² − s²)φ₂₂ = 0 for φ = s
    assert!(PhiSpec::general("s", RatExpr::s()).is_err());
    assert!(PhiSpec::polynomial("zero top", vec![e("1"), RatExpr::zero()]).is_err());
}
