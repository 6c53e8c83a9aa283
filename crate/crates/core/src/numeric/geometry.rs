//! Finsler tensors of F = α φ(b², β/α) from their definitions, with the
//! closed-form counterparts alongside.

use std::sync::Arc;

use serde::Serialize;

use super::chart::{base_frame, BaseFrame, ChartMetric};
use super::closed::{ClosedForms, PhiNumeric, ScalarValues};
use super::jet::{Jet, JetSpace, Real};
use super::linalg::{dot, identity_defect, inverse_det, is_positive_definite, mat_mul, Matrix};
use super::NumericError;
use crate::symbolic::PhiSpec;

/// Fiber order of the main jet space; ∂³ of the spray needs ∂⁵ of F².
pub const FIBER_ORDER: usize = 5;
/// Fiber order retained next to one base derivative.
pub const MIXED_FIBER_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    /// g_ij, det g, g^{ij}.
    pub algebraic: f64,
    /// y^j I_j.
    pub contraction: f64,
    /// The three mean Cartan paths.
    pub cartan: f64,
    pub spray: f64,
    /// Landsberg-level quantities.
    pub third: f64,
    /// Largest |b_{i|j} − c a_ij| accepted as closed and conformal.
    pub conformal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-9,
            contraction: 1e-10,
            cartan: 1e-8,
            spray: 1e-7,
            third: 1e-6,
            conformal: 1e-6,
        }
    }
}

/// max |a − b| / max(max |a|, 1).
pub fn residual(a: &[f64], b: &[f64]) -> f64 {
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let scale = a.iter().map(|x| x.abs()).fold(1.0, f64::max);
    diff / scale
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn flat2(m: &[Vec<f64>]) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

fn flat3(t: &[Matrix<f64>]) -> Vec<f64> {
    t.iter().flat_map(|m| flat2(m)).collect()
}

/// Quantities read off the jets of F² at one point.
#[derive(Clone, Debug)]
struct Definitional {
    f: f64,
    g: Matrix<f64>,
    g_inv: Matrix<f64>,
    det_g: f64,
    c: Vec<Matrix<f64>>,
    i_trace: Vec<f64>,
    i_log_det: Vec<f64>,
    spray: Vec<f64>,
    berwald: Vec<Vec<Matrix<f64>>>,
    landsberg: Vec<Matrix<f64>>,
    j: Vec<f64>,
}

/// Point data for the closed-form paths.
#[derive(Clone, Debug)]
struct Frame {
    base: BaseFrame,
    alpha: f64,
    s: f64,
    b: f64,
    y: Vec<f64>,
    l_low: Vec<f64>,
    sc: ScalarValues,
}

#[derive(Clone, Debug, Serialize)]
pub struct SprayPaths {
    pub definitional: Vec<f64>,
    /// G_α + cα²E l + cα²H b; absent when β is not closed and conformal.
    pub structured: Option<Vec<f64>>,
    /// The general formula through r_ij, s_ij.
    pub general: Vec<f64>,
    pub residual: Option<f64>,
    pub residual_general: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoPath {
    pub definitional: Vec<f64>,
    pub closed_form: Option<Vec<f64>>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Residuals {
    /// g_ij from jets vs the ρ-expansion.
    pub fundamental_tensor: f64,
    /// Relative error of the determinant product formula.
    pub determinant: f64,
    /// max |g^{ij}_closed g_jk − δ| with the α^{−1} reading.
    pub inverse: f64,
    /// The same with α^{+1}.
    pub inverse_plus_exponent: f64,
    /// Max pairwise spread of the three mean Cartan paths.
    pub mean_cartan: f64,
    /// |y^j I_j|.
    pub mean_cartan_contraction: f64,
    /// max |y^i L_ijk|.
    pub landsberg_contraction: f64,
    pub spray: Option<f64>,
    pub spray_general: f64,
    pub mean_landsberg: Option<f64>,
    /// ‖J + c̃ F I‖.
    pub rimlc: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Norms {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "J_plus")]
    pub j_plus: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanCartanPaths {
    pub trace: Vec<f64>,
    pub log_det: Vec<f64>,
    pub closed_form: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub b: f64,
    pub s: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub g_ij: Matrix<f64>,
    pub det_g: f64,
    #[serde(rename = "g^ij")]
    pub g_inv: Matrix<f64>,
    pub positive_definite: bool,
    #[serde(rename = "C_ijk")]
    pub c_ijk: Vec<Matrix<f64>>,
    #[serde(rename = "I_j")]
    pub i_j: MeanCartanPaths,
    #[serde(rename = "G^i")]
    pub g_i: SprayPaths,
    #[serde(rename = "B^i_jkl")]
    pub b_ijkl: Vec<Vec<Matrix<f64>>>,
    #[serde(rename = "L_ijk")]
    pub l_ijk: Vec<Matrix<f64>>,
    #[serde(rename = "J_j")]
    pub j_j: TwoPath,
    pub c: f64,
    pub conformal_residual: f64,
    pub ctilde: f64,
    #[serde(rename = "J_plus_cFI")]
    pub j_plus: Vec<f64>,
    pub residuals: Residuals,
    pub norms: Norms,
    pub tolerances: Tolerances,
}

impl CurvatureReport {
    /// Identity checks that exceed their tolerance, by name.
    pub fn failures(&self) -> Vec<&'static str> {
        let t = &self.tolerances;
        let r = &self.residuals;
        let mut out = Vec::new();
        let mut check = |name, v: f64, tol: f64| {
            if !(v <= tol) {
                out.push(name);
            }
        };
        check("fundamental_tensor", r.fundamental_tensor, t.algebraic);
        check("determinant", r.determinant, t.algebraic);
        check("inverse", r.inverse, t.algebraic);
        check("mean_cartan", r.mean_cartan, t.cartan);
        check(
            "mean_cartan_contraction",
            r.mean_cartan_contraction,
            t.contraction,
        );
        check("landsberg_contraction", r.landsberg_contraction, t.third);
        if let Some(v) = r.spray {
            check("spray", v, t.spray);
        }
        check("spray_general", r.spray_general, t.spray);
        if let Some(v) = r.mean_landsberg {
            check("mean_landsberg", v, t.third);
        }
        out
    }
}

/// Everything needed to evaluate one (φ, base) pair at many points.
pub struct Evaluator {
    metric: ChartMetric,
    phi: PhiSpec,
    phi_num: PhiNumeric,
    closed: ClosedForms,
    big: Arc<JetSpace>,
    fiber: Arc<JetSpace>,
    pub tolerances: Tolerances,
}

impl Evaluator {
    pub fn new(metric: ChartMetric, phi: PhiSpec) -> Result<Self, NumericError> {
        let n = metric.n;
        Ok(Evaluator {
            phi_num: PhiNumeric::new(&phi)?,
            closed: ClosedForms::new(&phi, n as u32)?,
            big: JetSpace::fiber_base(n, FIBER_ORDER, MIXED_FIBER_ORDER),
            fiber: JetSpace::full(n, 3),
            metric,
            phi,
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, t: Tolerances) -> Self {
        self.tolerances = t;
        self
    }

    pub fn metric(&self) -> &ChartMetric {
        &self.metric
    }

    pub fn phi(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn phi_numeric(&self) -> &PhiNumeric {
        &self.phi_num
    }

    /// F(x, y) by direct floating evaluation.
    pub fn finsler_norm(&self, x: &[f64], y: &[f64]) -> f64 {
        self.f_squared(x, y).sqrt()
    }

    /// F² over any scalar type.
    pub fn f_squared<R: Real>(&self, x: &[R], y: &[R]) -> R {
        let n = self.metric.n;
        let (a, b) = self.metric.fields(x);
        let zero = x[0].lift(0.0);
        let mut alpha2 = zero.clone();
        let mut beta = zero.clone();
        for i in 0..n {
            beta = beta + b[i].clone() * y[i].clone();
            for j in 0..n {
                alpha2 = alpha2 + a[i][j].clone() * y[i].clone() * y[j].clone();
            }
        }
        let ainv = super::linalg::inverse(&a).expect("a_ij nondegenerate");
        let mut b2 = zero;
        for i in 0..n {
            for j in 0..n {
                b2 = b2 + ainv[i][j].clone() * b[i].clone() * b[j].clone();
            }
        }
        let alpha = alpha2.sqrt();
        let s = beta / alpha;
        let phi = self.phi_num.eval(&b2, &s);
        alpha2 * phi.clone() * phi
    }

    fn frame(&self, x: &[f64], y: &[f64]) -> Result<Frame, NumericError> {
        if norm(y) == 0.0 {
            return Err(NumericError::Domain("y = 0".into()));
        }
        let base = base_frame(&self.metric, x, y)?;
        let ay = super::linalg::mat_vec(&base.a, y);
        let alpha = dot(&ay, y).sqrt();
        let s = dot(&base.b, y) / alpha;
        let b = base.b2.sqrt();
        let l_low = ay.iter().map(|v| v / alpha).collect();
        let sc = self.closed.at(s, b)?;
        Ok(Frame {
            base,
            alpha,
            s,
            b,
            y: y.to_vec(),
            l_low,
            sc,
        })
    }

    fn definitional(&self, x: &[f64], y: &[f64]) -> Result<Definitional, NumericError> {
        let n = self.metric.n;
        let sp = &self.big;
        let xj: Vec<Jet> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(sp, i, v))
            .collect();
        let yj: Vec<Jet> = y
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(sp, n + i, v))
            .collect();
        let f2 = self.f_squared(&xj, &yj);
        let fv = f2.value();
        if !(fv > 0.0) || !fv.is_finite() {
            return Err(NumericError::Domain(format!("F² = {fv} at x = {x:?}")));
        }
        let f = fv.sqrt();
        let ey = |idx: &[usize]| {
            let mut m = vec![0u8; 2 * n];
            for &i in idx {
                m[n + i] += 1;
            }
            m
        };
        let f_y: Vec<f64> = (0..n)
            .map(|m| f2.derivative(&ey(&[m])) / (2.0 * f))
            .collect();
        let c: Vec<Matrix<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| 0.25 * f2.derivative(&ey(&[i, j, k])))
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let slice = |xvar: Option<usize>, delta: &[usize]| self.fiber_slice(&f2, xvar, delta);
        let g_y: Matrix<Jet> = (0..n)
            .map(|i| (0..n).map(|j| slice(None, &[i, j]) * 0.5).collect())
            .collect();
        let (ginv_y, det_y) =
            inverse_det(&g_y).ok_or_else(|| NumericError::Singular("g_ij".into()))?;
        let yv: Vec<Jet> = y
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(&self.fiber, i, v))
            .collect();
        let bracket: Vec<Jet> = (0..n)
            .map(|l| {
                let mut t = -slice(Some(l), &[]);
                for (m, ym) in yv.iter().enumerate() {
                    t = t + slice(Some(m), &[l]) * ym.clone();
                }
                t
            })
            .collect();
        let spray_y: Vec<Jet> = (0..n)
            .map(|i| {
                let mut t = Jet::constant(&self.fiber, 0.0);
                for l in 0..n {
                    t = t + ginv_y[i][l].clone() * bracket[l].clone();
                }
                t * 0.25
            })
            .collect();
        let half_log_det = det_y.ln() * 0.5;

        let e = |idx: &[usize]| {
            let mut m = vec![0u8; n];
            for &i in idx {
                m[i] += 1;
            }
            m
        };
        let g: Matrix<f64> = g_y
            .iter()
            .map(|r| r.iter().map(Real::value).collect())
            .collect();
        let g_inv: Matrix<f64> = ginv_y
            .iter()
            .map(|r| r.iter().map(Real::value).collect())
            .collect();
        let berwald: Vec<Vec<Matrix<f64>>> = spray_y
            .iter()
            .map(|gi| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| (0..n).map(|l| gi.derivative(&e(&[j, k, l]))).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let landsberg: Vec<Matrix<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                -0.5 * f * (0..n).map(|m| f_y[m] * berwald[m][i][j][k]).sum::<f64>()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let trace = |t: &[Matrix<f64>]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| g_inv[j][k] * t[i][j][k]).sum::<f64>())
                        .sum()
                })
                .collect()
        };
        Ok(Definitional {
            f,
            det_g: det_y.value(),
            i_trace: trace(&c),
            i_log_det: (0..n).map(|j| half_log_det.derivative(&e(&[j]))).collect(),
            spray: spray_y.iter().map(Real::value).collect(),
            j: trace(&landsberg),
            g,
            g_inv,
            c,
            berwald,
            landsberg,
        })
    }

    /// The y-expansion of ∂_x^{xvar} ∂_y^{delta} h as a jet in the fiber space.
    fn fiber_slice(&self, h: &Jet, xvar: Option<usize>, delta: &[usize]) -> Jet {
        let n = self.metric.n;
        let mut d = vec![0u8; n];
        for &i in delta {
            d[i] += 1;
        }
        let mut full = vec![0u8; 2 * n];
        let coeffs = self
            .fiber
            .indices()
            .iter()
            .map(|beta| {
                full.iter_mut().for_each(|e| *e = 0);
                if let Some(m) = xvar {
                    full[m] = 1;
                }
                let mut ratio = 1.0;
                for v in 0..n {
                    let tot = beta[v] + d[v];
                    full[n + v] = tot;
                    for k in (beta[v] + 1)..=tot {
                        ratio *= f64::from(k);
                    }
                }
                let idx = h
                    .space()
                    .index_of(&full)
                    .expect("jet order too low for this slice");
                h.coeffs()[idx] * ratio
            })
            .collect();
        Jet::from_coeffs(&self.fiber, coeffs)
    }

    /// g_ij from jets and from the ρ-expansion; det g and g^{ij} likewise.
    pub fn fundamental_tensor(
        &self,
        x: &[f64],
        y: &[f64],
    ) -> Result<FundamentalTensor, NumericError> {
        let d = self.definitional(x, y)?;
        let fr = self.frame(x, y)?;
        Ok(self.fundamental_from(&d, &fr))
    }

    fn fundamental_from(&self, d: &Definitional, fr: &Frame) -> FundamentalTensor {
        let n = self.metric.n;
        let (sc, b, l) = (&fr.sc, &fr.base.b, &fr.l_low);
        let a = &fr.base.a;
        let g_closed: Matrix<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        sc.rho * a[i][j]
                            + sc.rho0 * b[i] * b[j]
                            + sc.rho1 * (b[i] * l[j] + b[j] * l[i])
                            - fr.s * sc.rho1 * l[i] * l[j]
                    })
                    .collect()
            })
            .collect();
        let det_closed =
            sc.phi.powi(n as i32 + 1) * sc.d1.powi(n as i32 - 2) * sc.d2 * fr.base.det_a;
        let inv_closed = |exponent: i32| -> Matrix<f64> {
            let (bu, y, ai) = (&fr.base.b_up, &fr.y, &fr.base.a_inv);
            let k0 = sc.eta0 * fr.alpha.powi(exponent);
            let k1 = sc.eta1 / (fr.alpha * fr.alpha);
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (ai[i][j]
                                + sc.eta * bu[i] * bu[j]
                                + k0 * (bu[i] * y[j] + bu[j] * y[i])
                                + k1 * y[i] * y[j])
                                / sc.rho
                        })
                        .collect()
                })
                .collect()
        };
        let g_inv_closed = inv_closed(-1);
        let g_inv_plus = inv_closed(1);
        FundamentalTensor {
            residual_g: residual(&flat2(&d.g), &flat2(&g_closed)),
            residual_det: ((d.det_g - det_closed) / d.det_g).abs(),
            inverse_defect: identity_defect(&mat_mul(&g_inv_closed, &d.g)),
            inverse_defect_plus: identity_defect(&mat_mul(&g_inv_plus, &d.g)),
            positive_definite: is_positive_definite(&d.g),
            g: d.g.clone(),
            g_closed,
            det_g: d.det_g,
            det_closed,
            g_inv: d.g_inv.clone(),
            g_inv_closed,
        }
    }

    /// Full report at (x, y) for the given c̃.
    pub fn report(
        &self,
        x: &[f64],
        y: &[f64],
        ctilde: f64,
    ) -> Result<CurvatureReport, NumericError> {
        let n = self.metric.n;
        let d = self.definitional(x, y)?;
        let fr = self.frame(x, y)?;
        let ft = self.fundamental_from(&d, &fr);
        let sc = &fr.sc;
        let beta = &fr.base.beta;
        let c = beta.fitted_c;
        let closed_conformal = beta.conformal_residual <= self.tolerances.conformal;

        // b_j − s l_j
        let transverse: Vec<f64> = (0..n).map(|j| fr.base.b[j] - fr.s * fr.l_low[j]).collect();
        let i_closed: Vec<f64> = transverse
            .iter()
            .map(|t| sc.v / (2.0 * fr.alpha * sc.rho) * t)
            .collect();
        let mean_cartan = [
            residual(&d.i_trace, &d.i_log_det),
            residual(&d.i_trace, &i_closed),
            residual(&d.i_log_det, &i_closed),
        ]
        .into_iter()
        .fold(0.0, f64::max);

        let g_alpha = fr.base.christoffel.spray(y);
        let a2 = fr.alpha * fr.alpha;
        let l_up = fr.y.iter().map(|v| v / fr.alpha).collect::<Vec<_>>();
        let structured = closed_conformal.then(|| {
            (0..n)
                .map(|i| g_alpha[i] + c * a2 * sc.e * l_up[i] + c * a2 * sc.h * fr.base.b_up[i])
                .collect::<Vec<_>>()
        });
        let general = self.general_spray(&fr, &g_alpha, y);
        let j_closed = closed_conformal.then(|| {
            transverse
                .iter()
                .map(|t| -(c * sc.phi / (2.0 * sc.rho)) * sc.w * t)
                .collect::<Vec<_>>()
        });

        let j_plus: Vec<f64> = (0..n)
            .map(|j| d.j[j] + ctilde * d.f * d.i_trace[j])
            .collect();
        let landsberg_contraction = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| {
                (0..n)
                    .map(|i| y[i] * d.landsberg[i][j][k])
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max);
        let berwald_norm = d
            .berwald
            .iter()
            .map(|t| flat3(t).iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            .sqrt();

        let residuals = Residuals {
            fundamental_tensor: ft.residual_g,
            determinant: ft.residual_det,
            inverse: ft.inverse_defect,
            inverse_plus_exponent: ft.inverse_defect_plus,
            mean_cartan,
            mean_cartan_contraction: dot(y, &d.i_trace).abs(),
            landsberg_contraction,
            spray: structured.as_ref().map(|g| residual(&d.spray, g)),
            spray_general: residual(&d.spray, &general),
            mean_landsberg: j_closed.as_ref().map(|j| residual(&d.j, j)),
            rimlc: norm(&j_plus),
        };
        Ok(CurvatureReport {
            x: x.to_vec(),
            y: y.to_vec(),
            b: fr.b,
            s: fr.s,
            f: d.f,
            g_ij: d.g.clone(),
            det_g: d.det_g,
            g_inv: d.g_inv.clone(),
            positive_definite: ft.positive_definite,
            c_ijk: d.c.clone(),
            i_j: MeanCartanPaths {
                trace: d.i_trace.clone(),
                log_det: d.i_log_det.clone(),
                closed_form: i_closed,
            },
            g_i: SprayPaths {
                definitional: d.spray.clone(),
                residual: residuals.spray,
                residual_general: residuals.spray_general,
                structured,
                general,
            },
            b_ijkl: d.berwald.clone(),
            l_ijk: d.landsberg.clone(),
            j_j: TwoPath {
                definitional: d.j.clone(),
                residual: residuals.mean_landsberg,
                closed_form: j_closed,
            },
            c,
            conformal_residual: beta.conformal_residual,
            ctilde,
            norms: Norms {
                b: berwald_norm,
                j: norm(&d.j),
                i: norm(&d.i_trace),
                j_plus: norm(&j_plus),
            },
            j_plus,
            residuals,
            tolerances: self.tolerances,
        })
    }

    /// G_α + αQ s^i₀ + {Θ(−2αQs₀ + r₀₀ + 2α²Rr) + αΩ(r₀ + s₀)} l^i
    ///   + {Ψ(−2αQs₀ + r₀₀ + 2α²Rr) + αΠ(r₀ + s₀)} b^i − α²R(r^i + s^i).
    fn general_spray(&self, fr: &Frame, g_alpha: &[f64], y: &[f64]) -> Vec<f64> {
        let (sc, bt, al) = (&fr.sc, &fr.base.beta, fr.alpha);
        let common = -2.0 * al * sc.q * bt.s_0 + bt.r_00 + 2.0 * al * al * sc.r * bt.r;
        let lc = sc.theta * common + al * sc.omega * (bt.r_0 + bt.s_0);
        let bc = sc.psi * common + al * sc.pi * (bt.r_0 + bt.s_0);
        (0..self.metric.n)
            .map(|i| {
                g_alpha[i] + al * sc.q * bt.s_up_0[i] + lc * y[i] / al + bc * fr.base.b_up[i]
                    - al * al * sc.r * (bt.r_up[i] + bt.s_up[i])
            })
            .collect()
    }

    pub fn cartan_and_mean_cartan(
        &self,
        x: &[f64],
        y: &[f64],
    ) -> Result<(Vec<Matrix<f64>>, MeanCartanPaths), NumericError> {
        let r = self.report(x, y, 0.0)?;
        Ok((r.c_ijk, r.i_j))
    }

    pub fn spray(&self, x: &[f64], y: &[f64]) -> Result<SprayPaths, NumericError> {
        Ok(self.report(x, y, 0.0)?.g_i)
    }

    /// Definitional spray only.
    pub fn spray_definitional(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>, NumericError> {
        Ok(self.definitional(x, y)?.spray)
    }

    pub fn berwald_curvature(
        &self,
        x: &[f64],
        y: &[f64],
    ) -> Result<Vec<Vec<Matrix<f64>>>, NumericError> {
        Ok(self.definitional(x, y)?.berwald)
    }

    pub fn landsberg_and_mean(
        &self,
        x: &[f64],
        y: &[f64],
    ) -> Result<(Vec<Matrix<f64>>, TwoPath), NumericError> {
        let r = self.report(x, y, 0.0)?;
        Ok((r.l_ijk, r.j_j))
    }

    /// J + c̃ F I.
    pub fn rimlc_residual(
        &self,
        x: &[f64],
        y: &[f64],
        ctilde: f64,
    ) -> Result<Vec<f64>, NumericError> {
        let d = self.definitional(x, y)?;
        Ok((0..self.metric.n)
            .map(|j| d.j[j] + ctilde * d.f * d.i_trace[j])
            .collect())
    }

    /// min(φ, φ − sφ₂, φ − sφ₂ + (b² − s²)φ₂₂) at the point.
    pub fn convexity_margin(&self, x: &[f64], y: &[f64]) -> Result<f64, NumericError> {
        let fr = self.frame(x, y)?;
        Ok(fr.sc.phi.min(fr.sc.d1).min(fr.sc.d2))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FundamentalTensor {
    pub g: Matrix<f64>,
    pub g_closed: Matrix<f64>,
    pub det_g: f64,
    pub det_closed: f64,
    pub g_inv: Matrix<f64>,
    pub g_inv_closed: Matrix<f64>,
    pub residual_g: f64,
    pub residual_det: f64,
    pub inverse_defect: f64,
    pub inverse_defect_plus: f64,
    pub positive_definite: bool,
}
