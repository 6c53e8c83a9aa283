//! Named example metrics, each on a base where β is closed and conformal.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{parse_expr, RatExpr, SurdExpr};
use crate::numeric::{
    beta_invariants, convexity_check_on, BaseField, ChartMetric, ConvexityVerdict, Evaluator,
    NumericError,
};
use crate::symbolic::PhiSpec;

/// Sample points closer than this to the boundary of the convexity region are redrawn.
pub const MARGIN_REJECT: f64 = 1e-3;
/// Annulus used by the coefficient family, whose coefficients blow up at b = 0.
pub const FAMILY_SHELL: (f64, f64) = (0.3, 0.9);
const BALL_RADIUS: f64 = 0.9;
const CONVEXITY_GRID: usize = 48;
const FLAG_POINTS: usize = 5;
const FLAG_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedFlags {
    pub closed_conformal: bool,
    pub berwald_expected: bool,
    pub weak_landsberg_expected: bool,
}

#[derive(Clone)]
pub struct ZooEntry {
    pub name: String,
    pub params: String,
    pub phi: PhiSpec,
    pub chart: ChartMetric,
    /// `None` for user-supplied φ, which only get identity checks.
    pub expected: Option<ExpectedFlags>,
    pub citation: &'static str,
    pub convexity: ConvexityVerdict,
    evaluator: Arc<Evaluator>,
}

impl std::fmt::Debug for ZooEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ZooEntry({})", self.name)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ZooError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("unknown zoo entry `{0}`")]
    Unknown(String),
    #[error("entry `{name}` contradicts its expected flags: {detail}")]
    FlagMismatch { name: String, detail: String },
    #[error("entry `{name}` violates strong convexity: worst margin {margin} at (b, s) = {at:?}")]
    NotConvex {
        name: String,
        margin: f64,
        at: (f64, f64),
    },
    #[error("{0}")]
    Parameters(String),
}

impl ZooEntry {
    fn build(
        name: impl Into<String>,
        params: impl Into<String>,
        phi: PhiSpec,
        chart: ChartMetric,
        expected: Option<ExpectedFlags>,
        citation: &'static str,
    ) -> Result<Self, ZooError> {
        let name = name.into();
        let (b_lo, b_hi) = chart.b_range();
        // the range of b is closed on the sampled shell; extend slightly so it is covered
        let convexity =
            convexity_check_on(&phi, b_lo, b_hi * (1.0 + 1e-9) + 1e-12, CONVEXITY_GRID)?;
        if !convexity.passes() {
            return Err(ZooError::NotConvex {
                name,
                margin: convexity.worst_margin,
                at: convexity.worst_at,
            });
        }
        let evaluator = Arc::new(Evaluator::new(chart.clone(), phi.clone())?);
        let entry = ZooEntry {
            name,
            params: params.into(),
            phi,
            chart,
            expected,
            citation,
            convexity,
            evaluator,
        };
        entry.validate()?;
        Ok(entry)
    }

    pub fn evaluator(&self) -> &Arc<Evaluator> {
        &self.evaluator
    }

    /// `k` deterministic points of the domain away from the convexity boundary.
    pub fn sample_points(&self, k: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let x = self.chart.sample_x(&mut rng);
            let y = self.chart.sample_y(&mut rng);
            match self.evaluator.convexity_margin(&x, &y) {
                Ok(m) if m >= MARGIN_REJECT => out.push((x, y)),
                _ => {}
            }
        }
        out
    }

    /// Checks the flags against β's invariants and the curvature norms at a few points.
    fn validate(&self) -> Result<(), ZooError> {
        let Some(e) = &self.expected else {
            return Ok(());
        };
        let mismatch = |detail: String| ZooError::FlagMismatch {
            name: self.name.clone(),
            detail,
        };
        let pts = self.sample_points(FLAG_POINTS, FLAG_SEED);
        let mut conformal = 0.0f64;
        let mut b_max = 0.0f64;
        let mut j_max = 0.0f64;
        for (x, y) in &pts {
            conformal = conformal.max(beta_invariants(&self.chart, x, y)?.conformal_residual);
            let r = self.evaluator.report(x, y, 0.0)?;
            b_max = b_max.max(r.norms.b);
            j_max = j_max.max(r.norms.j);
        }
        if e.closed_conformal != (conformal <= 1e-8) {
            return Err(mismatch(format!(
                "closed_conformal = {} but residual {conformal:e}",
                e.closed_conformal
            )));
        }
        if e.berwald_expected != (b_max <= 1e-7) {
            return Err(mismatch(format!(
                "berwald_expected = {} but max ‖B‖ = {b_max:e}",
                e.berwald_expected
            )));
        }
        if e.weak_landsberg_expected != (j_max <= 1e-7) {
            return Err(mismatch(format!(
                "weak_landsberg_expected = {} but max ‖J‖ = {j_max:e}",
                e.weak_landsberg_expected
            )));
        }
        Ok(())
    }

    /// One line for `zoo list`.
    pub fn summary_line(&self) -> String {
        let flags = match &self.expected {
            Some(e) => format!(
                "closed_conformal={} berwald={} weak_landsberg={}",
                e.closed_conformal, e.berwald_expected, e.weak_landsberg_expected
            ),
            None => "flags=unspecified".into(),
        };
        format!(
            "{} [{}] n={} {flags} convexity={:?}",
            self.name, self.params, self.chart.n, self.convexity.status
        )
    }
}

fn expr(text: &str) -> RatExpr {
    parse_expr(text).expect("built-in expression parses")
}

const NON_BERWALD: ExpectedFlags = ExpectedFlags {
    closed_conformal: true,
    berwald_expected: false,
    weak_landsberg_expected: false,
};
const BERWALD: ExpectedFlags = ExpectedFlags {
    closed_conformal: true,
    berwald_expected: true,
    weak_landsberg_expected: true,
};

fn ball(n: usize) -> Result<ChartMetric, ZooError> {
    Ok(ChartMetric::euclidean(n, 0.0, BALL_RADIUS)?)
}

pub fn make_riemannian(n: usize) -> Result<ZooEntry, ZooError> {
    let phi = PhiSpec::general("1", RatExpr::one()).map_err(NumericError::from)?;
    ZooEntry::build(
        "riemannian",
        "phi=1",
        phi,
        ball(n)?,
        Some(BERWALD),
        "Riemannian metric",
    )
}

/// φ = (√(1 − b² + s²) + s)/(1 − b²).
pub fn randers_phi() -> PhiSpec {
    let inv = expr("1/(1 - b2)");
    let form = SurdExpr::new(&RatExpr::s() * &inv, inv, expr("1 - b2 + s^2"));
    PhiSpec::surd("(sqrt(1-b2+s^2)+s)/(1-b2)", form).expect("valid")
}

/// φ = (√(1 − b² + s²) + s)²/((1 − b²)²√(1 − b² + s²)).
pub fn square_phi() -> PhiSpec {
    // (r + s)²/((1−b²)² r) = 2s/(1−b²)² + (Δ + s²)/(Δ(1−b²)²) · r,  r = √Δ
    let form = SurdExpr::new(
        expr("2*s/(1 - b2)^2"),
        expr("(1 - b2 + 2*s^2)/((1 - b2 + s^2)*(1 - b2)^2)"),
        expr("1 - b2 + s^2"),
    );
    PhiSpec::surd("(sqrt(1-b2+s^2)+s)^2/((1-b2)^2 sqrt(1-b2+s^2))", form).expect("valid")
}

/// φ = (√(1 + b²) + s)², the profile reproducing Berwald's metric on the Klein ball.
pub fn berwald_phi() -> PhiSpec {
    let form = SurdExpr::new(expr("1 + b2 + s^2"), expr("2*s"), expr("1 + b2"));
    PhiSpec::surd("(sqrt(1+b2)+s)^2", form).expect("valid")
}

/// φ = (√(1 + b²) + s²)², the profile as literally printed next to the example.
pub fn berwald_literal_phi() -> PhiSpec {
    let form = SurdExpr::new(expr("1 + b2 + s^4"), expr("2*s^2"), expr("1 + b2"));
    PhiSpec::surd("(sqrt(1+b2)+s^2)^2", form).expect("valid")
}

pub fn make_randers(n: usize) -> Result<ZooEntry, ZooError> {
    ZooEntry::build(
        "randers",
        "b0=1",
        randers_phi(),
        ball(n)?,
        Some(NON_BERWALD),
        "Randers metric",
    )
}

pub fn make_square(n: usize) -> Result<ZooEntry, ZooError> {
    ZooEntry::build(
        "square",
        "b0=1",
        square_phi(),
        ball(n)?,
        Some(NON_BERWALD),
        "square metric",
    )
}

pub fn make_berwald_example(n: usize) -> Result<ZooEntry, ZooError> {
    let chart = ChartMetric::new(n, BaseField::KleinBall, 0.0, BALL_RADIUS)?;
    ZooEntry::build(
        "berwald",
        "Klein ball",
        berwald_phi(),
        chart,
        Some(NON_BERWALD),
        "Berwald's metric",
    )
}

/// Berwald's metric written directly in x and y.
pub fn berwald_direct(x: &[f64], y: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let y2: f64 = y.iter().map(|v| v * v).sum();
    let xy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let w = 1.0 - r2;
    let root = (w * y2 + xy * xy).sqrt();
    (root + xy).powi(2) / (w * w * root)
}

/// How well a candidate profile reproduces [`berwald_direct`] through the Klein α, β.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateResidual {
    pub label: String,
    /// Largest relative deviation; infinite when the candidate is undefined somewhere.
    pub max_relative_error: f64,
}

pub fn berwald_candidate_probe(
    n: usize,
    points: usize,
    seed: u64,
) -> Result<Vec<CandidateResidual>, ZooError> {
    let chart = ChartMetric::new(n, BaseField::KleinBall, 0.0, BALL_RADIUS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(Vec<f64>, Vec<f64>)> = (0..points)
        .map(|_| (chart.sample_x(&mut rng), chart.sample_y(&mut rng)))
        .collect();
    let cands = [
        ("corrected (sqrt(1+b2)+s)^2", berwald_phi()),
        ("literal (sqrt(1+b2)+s^2)^2", berwald_literal_phi()),
        ("square metric profile", square_phi()),
    ];
    Ok(cands
        .iter()
        .map(|(label, phi)| {
            let mut worst = 0.0f64;
            for (x, y) in &pts {
                let (a, b) = chart.fields(x);
                let ainv = crate::numeric::linalg::inverse(&a).expect("nondegenerate");
                let alpha = (0..n)
                    .map(|i| (0..n).map(|j| a[i][j] * y[i] * y[j]).sum::<f64>())
                    .sum::<f64>()
                    .sqrt();
                let beta: f64 = (0..n).map(|i| b[i] * y[i]).sum();
                let b2: f64 = (0..n)
                    .map(|i| (0..n).map(|j| ainv[i][j] * b[i] * b[j]).sum::<f64>())
                    .sum();
                let f = phi
                    .eval(b2, beta / alpha)
                    .map(|v| alpha * v)
                    .unwrap_or(f64::NAN);
                let want = berwald_direct(x, y);
                let err = ((f - want) / want).abs();
                worst = if err.is_finite() {
                    worst.max(err)
                } else {
                    f64::INFINITY
                };
            }
            CandidateResidual {
                label: label.to_string(),
                max_relative_error: worst,
            }
        })
        .collect())
}

/// a₀ = 1, a_k = 4^{−k}: strongly convex on every shell since Σ_k k(k−1)4^{−k} stays small.
pub fn default_family_constants(m: usize) -> Vec<BigRational> {
    (0..=m)
        .map(|k| BigRational::new(BigInt::one(), BigInt::from(4).pow(k as u32)))
        .collect()
}

pub fn make_theorem_family(m: usize, a: &[BigRational], n: usize) -> Result<ZooEntry, ZooError> {
    if m == 0 || a.len() != m + 1 {
        return Err(ZooError::Parameters(format!(
            "family needs m ≥ 1 and m + 1 constants, got m={m}, {}",
            a.len()
        )));
    }
    if a[m].is_zero() {
        return Err(ZooError::Parameters("a_m must be nonzero".into()));
    }
    let phi = PhiSpec::theorem_family(a).map_err(NumericError::from)?;
    let chart = ChartMetric::euclidean(n, FAMILY_SHELL.0, FAMILY_SHELL.1)?;
    let params = format!(
        "m={m} a={}",
        a.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    ZooEntry::build(
        format!("family-m{m}"),
        params,
        phi,
        chart,
        Some(BERWALD),
        "polynomial family",
    )
}

/// Polynomial φ = Σ c_k(b²) s^k on the Euclidean shell used by the family.
pub fn make_polynomial(coeffs: Vec<RatExpr>, n: usize) -> Result<ZooEntry, ZooError> {
    let label = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| format!("c{k}={c}"))
        .collect::<Vec<_>>()
        .join("; ");
    let phi = PhiSpec::polynomial(label.clone(), coeffs).map_err(NumericError::from)?;
    let chart = ChartMetric::euclidean(n, FAMILY_SHELL.0, FAMILY_SHELL.1)?;
    ZooEntry::build("poly", label, phi, chart, None, "user polynomial")
}

pub const NAMES: [&str; 10] = [
    "riemannian",
    "randers",
    "square",
    "berwald",
    "family-m1",
    "family-m2",
    "family-m3",
    "family-m4",
    "family-m5",
    "family-m6",
];

pub fn by_name(name: &str, n: usize) -> Result<ZooEntry, ZooError> {
    match name {
        "riemannian" => make_riemannian(n),
        "randers" => make_randers(n),
        "square" => make_square(n),
        "berwald" => make_berwald_example(n),
        _ => {
            let m = name
                .strip_prefix("family-m")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|m| (1..=6).contains(m))
                .ok_or_else(|| ZooError::Unknown(name.to_string()))?;
            make_theorem_family(m, &default_family_constants(m), n)
        }
    }
}

pub fn all(n: usize) -> Result<Vec<ZooEntry>, ZooError> {
    NAMES.iter().map(|name| by_name(name, n)).collect()
}
