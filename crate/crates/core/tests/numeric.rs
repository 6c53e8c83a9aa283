use finsler_core::algebra::{parse_expr, RatExpr};
use finsler_core::numeric::linalg::{det, inverse};
use finsler_core::numeric::*;
use finsler_core::symbolic::PhiSpec;
use finsler_core::zoo;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Matrix = Vec<Vec<f64>>;

fn one() -> PhiSpec {
    PhiSpec::general("1", RatExpr::one()).unwrap()
}

fn family(a: &[i64], n: usize) -> Evaluator {
    let a: Vec<_> = a
        .iter()
        .map(|&k| num_rational::BigRational::from_integer(k.into()))
        .collect();
    Evaluator::new(
        ChartMetric::euclidean(n, 0.3, 0.9).unwrap(),
        PhiSpec::theorem_family(&a).unwrap(),
    )
    .unwrap()
}

fn conformal(n: usize) -> ChartMetric {
    ChartMetric::new(n, BaseField::ConformalBall, 0.0, 0.8).unwrap()
}

fn randers(n: usize) -> Evaluator {
    Evaluator::new(
        ChartMetric::euclidean(n, 0.0, 0.9).unwrap(),
        zoo::randers_phi(),
    )
    .unwrap()
}

const X: [f64; 3] = [0.3, -0.2, 0.4];
const Y: [f64; 3] = [0.5, 0.7, -0.3];

fn max_abs(m: &[Matrix]) -> f64 {
    m.iter()
        .flatten()
        .flatten()
        .fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Γ^k_ij from central differences of a_ij.
fn christoffel_fd(metric: &ChartMetric, x: &[f64]) -> Vec<Matrix> {
    let n = metric.n;
    let h = 1e-5;
    let da: Vec<Matrix> = (0..n)
        .map(|k| {
            let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
            xp[k] += h;
            xm[k] -= h;
            let (ap, _) = metric.fields::<f64>(&xp);
            let (am, _) = metric.fields::<f64>(&xm);
            (0..n)
                .map(|i| (0..n).map(|j| (ap[i][j] - am[i][j]) / (2.0 * h)).collect())
                .collect()
        })
        .collect();
    let (a, _) = metric.fields::<f64>(x);
    let ainv = inverse(&a).unwrap();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            0.5 * (0..n)
                                .map(|l| ainv[k][l] * (da[i][l][j] + da[j][l][i] - da[l][i][j]))
                                .sum::<f64>()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[test]
fn jet_product_is_truncated_convolution() {
    let space = JetSpace::full(2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = Jet::from_coeffs(
        &space,
        (0..space.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    );
    let g = Jet::from_coeffs(
        &space,
        (0..space.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    );
    let p = &f * &g;
    for (i, mi) in space.indices().iter().enumerate() {
        let mut want = 0.0;
        for (j, mj) in space.indices().iter().enumerate() {
            for (k, mk) in space.indices().iter().enumerate() {
                if mj.iter().zip(mk).map(|(a, b)| a + b).eq(mi.iter().copied()) {
                    want += f.coeffs()[j] * g.coeffs()[k];
                }
            }
        }
        assert!((p.coeffs()[i] - want).abs() < 1e-14, "{mi:?}");
    }
}

#[test]
fn jet_composition_matches_finite_differences() {
    let space = JetSpace::full(2, 3);
    let f = |x: &[f64]| {
        ((1.0 + x[0] * x[0] + 0.5 * x[1]).sqrt() * x[1]).powf(1.5) + (x[0] * x[1]).exp()
    };
    let (a, b) = (0.4, 0.9);
    let jx = Jet::variable(&space, 0, a);
    let jy = Jet::variable(&space, 1, b);
    let inner = (&jx * &jx + jy.clone() * 0.5) + 1.0;
    let jf = (&inner.sqrt() * &jy).powf(1.5) + (&jx * &jy).exp();
    let h = 1e-3;
    // ∂x∂y by central differences
    let fd = (f(&[a + h, b + h]) - f(&[a + h, b - h]) - f(&[a - h, b + h]) + f(&[a - h, b - h]))
        / (4.0 * h * h);
    assert!((jf.derivative(&[1, 1]) - fd).abs() < 1e-5);
    let fd = (f(&[a, b + 2.0 * h]) - 2.0 * f(&[a, b + h]) + 2.0 * f(&[a, b - h])
        - f(&[a, b - 2.0 * h]))
        / (2.0 * h * h * h);
    assert!((jf.derivative(&[0, 3]) - fd).abs() < 1e-4);
    assert!((jf.value() - f(&[a, b])).abs() < 1e-14);
}

#[test]
fn christoffel_examples() {
    let flat = christoffel(&ChartMetric::euclidean(3, 0.0, 0.9).unwrap(), &X).unwrap();
    assert_eq!(max_abs(&flat.gamma), 0.0);
    let klein = ChartMetric::new(3, BaseField::KleinBall, 0.0, 0.9).unwrap();
    let at0 = christoffel(&klein, &[0.0; 3]).unwrap();
    assert!(max_abs(&at0.gamma) < 1e-12);
    let fd = christoffel_fd(&klein, &[0.0; 3]);
    assert!(max_abs(&fd) < 1e-7);
    for metric in [conformal(3), klein] {
        let g = christoffel(&metric, &X).unwrap();
        let fd = christoffel_fd(&metric, &X);
        let diff: Vec<Matrix> = g
            .gamma
            .iter()
            .zip(&fd)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(r, s)| r.iter().zip(s).map(|(p, q)| p - q).collect())
                    .collect()
            })
            .collect();
        assert!(max_abs(&diff) < 1e-7, "{:?}", metric.base);
        assert!(g.compatibility_residual < 1e-8);
        for gk in &g.gamma {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(gk[i][j], gk[j][i]);
                }
            }
        }
    }
}

#[test]
fn beta_invariant_examples() {
    let b = beta_invariants(&ChartMetric::euclidean(3, 0.0, 0.9).unwrap(), &X, &Y).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((b.r_ij[i][j] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            assert_eq!(b.s_ij[i][j], 0.0);
        }
    }
    assert!((b.fitted_c - 1.0).abs() < 1e-14);
    assert!(b.conformal_residual < 1e-14);

    let klein = ChartMetric::new(3, BaseField::KleinBall, 0.0, 0.9).unwrap();
    let b = beta_invariants(&klein, &X, &Y).unwrap();
    assert!(b.conformal_residual <= 1e-8);
    assert!(b.s_ij.iter().flatten().all(|v| v.abs() < 1e-12));
    assert!((b.fitted_c - klein.known_c(&X).unwrap()).abs() < 1e-10);

    let b = beta_invariants(
        &ChartMetric::new(3, BaseField::NonClosed, 0.0, 0.9).unwrap(),
        &X,
        &Y,
    )
    .unwrap();
    assert!(b.s_ij.iter().flatten().any(|v| v.abs() > 1e-3));
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(b.r_ij[i][j], b.r_ij[j][i]);
            assert_eq!(b.s_ij[i][j], -b.s_ij[j][i]);
        }
    }
}

#[test]
fn riemannian_degeneration() {
    let metric = conformal(3);
    let ev = Evaluator::new(metric.clone(), one()).unwrap();
    let r = ev.report(&X, &Y, 0.7).unwrap();
    let (a, _) = metric.fields::<f64>(&X);
    for i in 0..3 {
        for j in 0..3 {
            assert!((r.g_ij[i][j] - a[i][j]).abs() < 1e-12);
        }
    }
    assert!((r.det_g - det(&a).unwrap()).abs() < 1e-12 * r.det_g);
    assert!(max_abs(&r.c_ijk) < 1e-12);
    assert!(max_abs(&r.l_ijk) < 1e-12);
    assert!(r.norms.i < 1e-12 && r.norms.j < 1e-12 && r.norms.b < 1e-12 && r.norms.j_plus < 1e-12);
    let g_alpha = christoffel(&metric, &X).unwrap().spray(&Y);
    for i in 0..3 {
        assert!((r.g_i.definitional[i] - g_alpha[i]).abs() < 1e-12);
    }
}

#[test]
fn randers_is_positive_definite_at_half() {
    let ev = randers(3);
    let x = [0.5, 0.0, 0.0];
    let t = ev.fundamental_tensor(&x, &Y).unwrap();
    let r = ev.report(&x, &Y, 0.0).unwrap();
    assert!(r.positive_definite);
    assert!((r.b - 0.5).abs() < 1e-15);
    assert!(t.residual_det < 1e-9);
}

#[test]
fn inverse_exponent_probe() {
    for ev in [randers(3), family(&[1, 1], 3)] {
        let r = ev.report(&X, &Y, 0.0).unwrap();
        assert!(r.residuals.inverse <= 1e-9);
        assert!(r.residuals.inverse_plus_exponent >= 1e-2);
    }
}

#[test]
fn mean_cartan_paths_agree_on_berwald_example() {
    let entry = zoo::make_berwald_example(3).unwrap();
    for (x, y) in entry.sample_points(10, 2) {
        let r = entry.evaluator().report(&x, &y, 0.0).unwrap();
        assert!(r.residuals.mean_cartan <= 1e-8);
        assert!(r.residuals.mean_cartan_contraction <= 1e-10);
    }
}

#[test]
fn spray_paths() {
    let r = randers(3).report(&X, &Y, 0.0).unwrap();
    let (s, g) = (r.g_i.structured.as_ref().unwrap(), &r.g_i.general);
    assert!(residual(s, g) <= 1e-9);
    assert!(r.residuals.spray.unwrap() <= 1e-9);
    let entry = zoo::make_berwald_example(3).unwrap();
    for (x, y) in entry.sample_points(5, 4) {
        let r = entry.evaluator().report(&x, &y, 0.0).unwrap();
        assert!(r.residuals.spray.unwrap() <= 1e-7);
    }
}

#[test]
fn berwald_curvature_examples() {
    let flat = Evaluator::new(ChartMetric::euclidean(3, 0.0, 0.9).unwrap(), one()).unwrap();
    assert_eq!(flat.report(&X, &Y, 0.0).unwrap().norms.b, 0.0);
    let fam = family(&[1, 1], 3);
    assert!(fam.report(&X, &Y, 0.0).unwrap().norms.b <= 1e-7);
    assert!(randers(3).report(&X, &Y, 0.0).unwrap().norms.b > 1e-3);
}

#[test]
fn landsberg_examples() {
    let fam = family(&[1, 1, 1], 3);
    let r = fam.report(&X, &Y, 0.0).unwrap();
    assert!(norm(&r.j_j.definitional) <= 1e-7);
    assert!(norm(r.j_j.closed_form.as_ref().unwrap()) <= 1e-7);
    let r = randers(3).report(&X, &Y, 0.0).unwrap();
    assert!(r.residuals.mean_landsberg.unwrap() <= 1e-6);
    assert!(r.norms.j > 1e-3);
    assert!(r.residuals.landsberg_contraction <= 1e-8);
}

#[test]
fn relatively_isotropic_residual() {
    let flat = Evaluator::new(conformal(3), one()).unwrap();
    assert!(flat.report(&X, &Y, 2.5).unwrap().norms.j_plus < 1e-12);
    let fam = family(&[1, 1], 3);
    assert!(fam.report(&X, &Y, 0.0).unwrap().norms.j_plus <= 1e-7);
    let r = fam.report(&X, &Y, 0.5).unwrap();
    assert!(r.norms.i > 1e-3);
    assert!((r.norms.j_plus - 0.5 * r.f * r.norms.i).abs() <= 1e-7);
}

#[test]
fn homogeneity_in_y() {
    for ev in [randers(3), family(&[1, 2], 3)] {
        let base = ev.report(&X, &Y, 0.0).unwrap();
        for lam in [2.0, 1.0 / 3.0] {
            let y: Vec<f64> = Y.iter().map(|v| v * lam).collect();
            let r = ev.report(&X, &y, 0.0).unwrap();
            let scaled: Vec<f64> = base
                .g_i
                .definitional
                .iter()
                .map(|v| v * lam * lam)
                .collect();
            assert!(residual(&r.g_i.definitional, &scaled) <= 1e-9);
            let g0: Vec<f64> = base.g_ij.concat();
            assert!(residual(&r.g_ij.concat(), &g0) <= 1e-12);
            assert!((r.f - lam * base.f).abs() <= 1e-12 * r.f);
        }
    }
}

#[test]
fn contractions_vanish() {
    let entry = zoo::make_theorem_family(2, &zoo::default_family_constants(2), 3).unwrap();
    for (x, y) in entry.sample_points(5, 9) {
        let r = entry.evaluator().report(&x, &y, 0.0).unwrap();
        assert!(r.residuals.mean_cartan_contraction <= 1e-10);
        assert!(r.residuals.landsberg_contraction <= 1e-8);
        // y^j B^i_jkl
        for bi in &r.b_ijkl {
            for k in 0..3 {
                for l in 0..3 {
                    let c: f64 = (0..3).map(|j| y[j] * bi[j][k][l]).sum();
                    assert!(c.abs() <= 1e-8);
                }
            }
        }
    }
}

#[test]
fn boundary_directions() {
    // y parallel to b gives s = ±b, y orthogonal gives s = 0
    let ev = randers(3);
    for y in [[0.3, -0.2, 0.4], [-0.6, 0.4, -0.8], [0.2, 0.3, 0.0]] {
        let r = ev.report(&X, &y, 0.0).unwrap();
        assert!(r.failures().is_empty(), "{:?}", r.failures());
    }
}

#[test]
fn convexity_examples() {
    let v = convexity_check(&one(), 1.0, 32).unwrap();
    assert_eq!(v.status, ConvexityStatus::Pass);
    assert_eq!(v.worst_margin, 1.0);
    assert!(convexity_check(&zoo::randers_phi(), 0.9, 48)
        .unwrap()
        .passes());
    let bad = PhiSpec::general("1-3s^2", parse_expr("1 - 3*s^2").unwrap()).unwrap();
    assert_eq!(
        convexity_check(&bad, 1.0, 32).unwrap().status,
        ConvexityStatus::Fail
    );
}

#[test]
fn report_json_shape() {
    let r = randers(2).report(&X[..2], &Y[..2], 0.0).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in [
        "x",
        "y",
        "F",
        "g_ij",
        "det_g",
        "g^ij",
        "C_ijk",
        "I_j",
        "G^i",
        "B^i_jkl",
        "L_ijk",
        "J_j",
        "residuals",
        "tolerances",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["C_ijk"][1][0][1], r.c_ijk[1][0][1]);
    assert_eq!(v["B^i_jkl"].as_array().unwrap().len(), 2);
}

#[test]
fn domain_errors() {
    let ev = randers(2);
    assert!(matches!(
        ev.report(&[0.95, 0.0], &[1.0, 0.0], 0.0),
        Err(NumericError::Domain(_))
    ));
    assert!(ev.report(&[0.1, 0.0], &[0.0, 0.0], 0.0).is_err());
    assert!(ChartMetric::new(1, BaseField::Euclidean, 0.0, 0.9).is_err());
}
