//! Base manifolds: a Riemannian metric a_ij(x) and a 1-form b_i(x) on a chart.

use rand::Rng;
use serde::Serialize;

use super::jet::{Jet, JetSpace, Real};
use super::linalg::{dot, inverse, Matrix};
use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseField {
    /// a = δ, b_i = x^i.
    Euclidean,
    /// Klein model of hyperbolic space with b_i = x^i (1 − |x|²)^{−3/2}.
    KleinBall,
    /// a = δ/(1 − |x|²)², b_i = x^i.
    ConformalBall,
    /// a = δ, b = (x², 0, …): not closed.
    NonClosed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartMetric {
    pub n: usize,
    pub base: BaseField,
    /// The domain is the shell r_min ≤ |x| ≤ r_max.
    pub r_min: f64,
    pub r_max: f64,
}

impl ChartMetric {
    pub fn new(n: usize, base: BaseField, r_min: f64, r_max: f64) -> Result<Self, NumericError> {
        if n < 2 {
            return Err(NumericError::Dimension(n));
        }
        let curved = matches!(base, BaseField::KleinBall | BaseField::ConformalBall);
        if !(0.0..r_max).contains(&r_min) || (curved && r_max >= 1.0) {
            return Err(NumericError::Domain(format!(
                "bad shell [{r_min}, {r_max}] for {base:?}"
            )));
        }
        Ok(ChartMetric {
            n,
            base,
            r_min,
            r_max,
        })
    }

    pub fn euclidean(n: usize, r_min: f64, r_max: f64) -> Result<Self, NumericError> {
        ChartMetric::new(n, BaseField::Euclidean, r_min, r_max)
    }

    /// a_ij(x) and b_i(x).
    pub fn fields<R: Real>(&self, x: &[R]) -> (Matrix<R>, Vec<R>) {
        let n = self.n;
        let zero = x[0].lift(0.0);
        let r2 = x
            .iter()
            .fold(zero.clone(), |acc, xi| acc + xi.clone() * xi.clone());
        let diag = |d: R| -> Matrix<R> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { d.clone() } else { zero.clone() })
                        .collect()
                })
                .collect()
        };
        match self.base {
            BaseField::Euclidean => (diag(x[0].lift(1.0)), x.to_vec()),
            BaseField::KleinBall => {
                let w = -(r2 - 1.0);
                let iw = w.recip();
                let iw2 = iw.clone() * iw.clone();
                let a = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let t = x[i].clone() * x[j].clone() * iw2.clone();
                                if i == j {
                                    t + iw.clone()
                                } else {
                                    t
                                }
                            })
                            .collect()
                    })
                    .collect();
                let f = w.powf(-1.5);
                (a, x.iter().map(|xi| xi.clone() * f.clone()).collect())
            }
            BaseField::ConformalBall => {
                let w = -(r2 - 1.0);
                (diag((w.clone() * w).recip()), x.to_vec())
            }
            BaseField::NonClosed => {
                let mut b = vec![zero.clone(); n];
                b[0] = x[1].clone();
                (diag(x[0].lift(1.0)), b)
            }
        }
    }

    /// The conformal factor c(x) in b_{i|j} = c a_ij, when known in closed form.
    pub fn known_c(&self, x: &[f64]) -> Option<f64> {
        match self.base {
            BaseField::Euclidean => Some(1.0),
            BaseField::KleinBall => Some(1.0 / (1.0 - dot(x, x)).sqrt()),
            _ => None,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let r = dot(x, x).sqrt();
        x.len() == self.n && r >= self.r_min && r <= self.r_max
    }

    /// ‖β‖_α at radius r along a coordinate axis (all bases are radial in b).
    pub fn b_at_radius(&self, r: f64) -> f64 {
        let mut x = vec![0.0; self.n];
        x[0] = r;
        if self.base == BaseField::NonClosed {
            x[0] = 0.0;
            x[1] = r;
        }
        let (a, b) = self.fields(&x);
        let ainv = inverse(&a).expect("metric is nondegenerate on its domain");
        let bu: Vec<f64> = ainv.iter().map(|row| dot(row, &b)).collect();
        dot(&bu, &b).sqrt()
    }

    /// The range of b over the domain.
    pub fn b_range(&self) -> (f64, f64) {
        (self.b_at_radius(self.r_min), self.b_at_radius(self.r_max))
    }

    /// Uniform point of the shell (rejection from the cube).
    pub fn sample_x(&self, rng: &mut impl Rng) -> Vec<f64> {
        loop {
            let x: Vec<f64> = (0..self.n)
                .map(|_| rng.gen_range(-self.r_max..=self.r_max))
                .collect();
            if self.contains(&x) {
                return x;
            }
        }
    }

    /// A tangent vector with 0.3 ≤ |y| ≤ 1.
    pub fn sample_y(&self, rng: &mut impl Rng) -> Vec<f64> {
        loop {
            let y: Vec<f64> = (0..self.n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let r = dot(&y, &y).sqrt();
            if (0.3..=1.0).contains(&r) {
                return y;
            }
        }
    }

    fn check(&self, x: &[f64]) -> Result<(), NumericError> {
        if x.len() != self.n {
            return Err(NumericError::Dimension(x.len()));
        }
        if !self.contains(x) {
            return Err(NumericError::Domain(format!("x = {x:?} outside the shell")));
        }
        Ok(())
    }

    /// First x-jets of a_ij and b_i.
    fn first_jets(&self, x: &[f64]) -> (Matrix<Jet>, Vec<Jet>) {
        let sp = JetSpace::full(self.n, 1);
        let xj: Vec<Jet> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(&sp, i, v))
            .collect();
        self.fields(&xj)
    }
}

fn unit(n: usize, k: usize) -> Vec<u8> {
    let mut m = vec![0u8; n];
    m[k] = 1;
    m
}

/// Levi-Civita symbols `gamma[k][i][j]` = Γ^k_ij of a_ij.
#[derive(Clone, Debug, Serialize)]
pub struct Christoffel {
    pub gamma: Vec<Matrix<f64>>,
    /// max |∇_k a_ij|.
    pub compatibility_residual: f64,
}

impl Christoffel {
    /// G_α^i = ½ Γ^i_jk y^j y^k.
    pub fn spray(&self, y: &[f64]) -> Vec<f64> {
        self.gamma
            .iter()
            .map(|g| 0.5 * dot(y, &super::linalg::mat_vec(g, y)))
            .collect()
    }
}

pub fn christoffel(metric: &ChartMetric, x: &[f64]) -> Result<Christoffel, NumericError> {
    metric.check(x)?;
    let (aj, _) = metric.first_jets(x);
    christoffel_from(metric.n, &aj)
}

fn christoffel_from(n: usize, aj: &Matrix<Jet>) -> Result<Christoffel, NumericError> {
    let a: Matrix<f64> = aj
        .iter()
        .map(|r| r.iter().map(Real::value).collect())
        .collect();
    let ainv = inverse(&a).ok_or_else(|| NumericError::Singular("a_ij".into()))?;
    // da[k][i][j] = ∂_k a_ij
    let da: Vec<Matrix<f64>> = (0..n)
        .map(|k| {
            aj.iter()
                .map(|r| r.iter().map(|e| e.derivative(&unit(n, k))).collect())
                .collect()
        })
        .collect();
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for i in 0..n {
            for j in 0..n {
                gk[i][j] = 0.5
                    * (0..n)
                        .map(|l| ainv[k][l] * (da[i][l][j] + da[j][l][i] - da[l][i][j]))
                        .sum::<f64>();
            }
        }
    }
    let mut worst = 0.0f64;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let corr: f64 = (0..n)
                    .map(|l| gamma[l][k][i] * a[l][j] + gamma[l][k][j] * a[i][l])
                    .sum();
                worst = worst.max((da[k][i][j] - corr).abs());
            }
        }
    }
    Ok(Christoffel {
        gamma,
        compatibility_residual: worst,
    })
}

/// The covariant-derivative invariants of β at (x, y).
#[derive(Clone, Debug, Serialize)]
pub struct BetaInvariants {
    pub r_ij: Matrix<f64>,
    pub r_00: f64,
    pub r_i: Vec<f64>,
    pub r_0: f64,
    pub r: f64,
    #[serde(rename = "r^i")]
    pub r_up: Vec<f64>,
    pub s_ij: Matrix<f64>,
    #[serde(rename = "s^i_0")]
    pub s_up_0: Vec<f64>,
    pub s_i: Vec<f64>,
    pub s_0: f64,
    #[serde(rename = "s^i")]
    pub s_up: Vec<f64>,
    pub conformal_residual: f64,
    pub fitted_c: f64,
}

/// Pointwise base data shared by the closed-form paths.
#[derive(Clone, Debug)]
pub struct BaseFrame {
    pub a: Matrix<f64>,
    pub a_inv: Matrix<f64>,
    pub det_a: f64,
    pub b: Vec<f64>,
    pub b_up: Vec<f64>,
    pub b2: f64,
    pub christoffel: Christoffel,
    pub beta: BetaInvariants,
}

pub fn beta_invariants(
    metric: &ChartMetric,
    x: &[f64],
    y: &[f64],
) -> Result<BetaInvariants, NumericError> {
    Ok(base_frame(metric, x, y)?.beta)
}

pub fn base_frame(metric: &ChartMetric, x: &[f64], y: &[f64]) -> Result<BaseFrame, NumericError> {
    metric.check(x)?;
    if y.len() != metric.n {
        return Err(NumericError::Dimension(y.len()));
    }
    let n = metric.n;
    let (aj, bj) = metric.first_jets(x);
    let chr = christoffel_from(n, &aj)?;
    let a: Matrix<f64> = aj
        .iter()
        .map(|r| r.iter().map(Real::value).collect())
        .collect();
    let (a_inv, det_a) =
        super::linalg::inverse_det(&a).ok_or_else(|| NumericError::Singular("a_ij".into()))?;
    let b: Vec<f64> = bj.iter().map(Real::value).collect();
    // b_{i|j} = ∂_j b_i − Γ^k_ij b_k
    let bij: Matrix<f64> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    bj[i].derivative(&unit(n, j))
                        - (0..n).map(|k| chr.gamma[k][i][j] * b[k]).sum::<f64>()
                })
                .collect()
        })
        .collect();
    let raise = |v: &[f64]| -> Vec<f64> { a_inv.iter().map(|row| dot(row, v)).collect() };
    let b_up = raise(&b);
    let b2 = dot(&b_up, &b);
    let r_ij: Matrix<f64> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (bij[i][j] + bij[j][i])).collect())
        .collect();
    let s_ij: Matrix<f64> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (bij[i][j] - bij[j][i])).collect())
        .collect();
    let quad = |m: &Matrix<f64>| dot(y, &super::linalg::mat_vec(m, y));
    let r_i: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| b_up[j] * r_ij[j][i]).sum())
        .collect();
    let s_i: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| b_up[j] * s_ij[j][i]).sum())
        .collect();
    let s_low_0 = super::linalg::mat_vec(&s_ij, y);
    let fitted_c = (0..n)
        .map(|i| (0..n).map(|j| a_inv[i][j] * bij[i][j]).sum::<f64>())
        .sum::<f64>()
        / n as f64;
    let mut conformal_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            conformal_residual = conformal_residual.max((bij[i][j] - fitted_c * a[i][j]).abs());
        }
    }
    let beta = BetaInvariants {
        r_00: quad(&r_ij),
        r_0: dot(&r_i, y),
        r: dot(&b_up, &r_i),
        r_up: raise(&r_i),
        s_up_0: raise(&s_low_0),
        s_0: dot(&s_i, y),
        s_up: raise(&s_i),
        r_i,
        s_i,
        r_ij,
        s_ij,
        conformal_residual,
        fitted_c,
    };
    Ok(BaseFrame {
        a,
        a_inv,
        det_a,
        b,
        b_up,
        b2,
        christoffel: chr,
        beta,
    })
}
