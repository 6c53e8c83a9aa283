//! Browser bindings. Every export takes plain strings and numbers and returns
//! a JSON string; the `*_json` functions carry the logic and run natively too.

use finsler_core::numeric::ConvexityStatus;
use finsler_core::symbolic::{verdict, PhiDerivatives, PhiSpec, VerdictRecord};
use finsler_core::zoo::{self, ZooEntry};
use num_rational::BigRational;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_GRID: usize = 400;
const MAX_POINTS: usize = 2000;

fn parse_constants(a: &str) -> Result<Vec<BigRational>, String> {
    let a: Vec<BigRational> = a
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<BigRational>()
                .map_err(|_| format!("bad constant `{}`", t.trim()))
        })
        .collect::<Result<_, _>>()?;
    if a.len() < 2 {
        return Err("give at least a0, a1".into());
    }
    Ok(a)
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ConvexityMap {
    b: Vec<f64>,
    /// s/b on each row.
    t: Vec<f64>,
    /// min(φ, φ − sφ₂, φ − sφ₂ + (b² − s²)φ₂₂), row per b; null where undefined.
    margin: Vec<Vec<Option<f64>>>,
    status: ConvexityStatus,
}

/// Margins of the coefficient family with constants `a` on b ∈ [b_min, b_max].
pub fn convexity_map_json(a: &str, b_min: f64, b_max: f64, grid: usize) -> Result<String, String> {
    if !(0.0 < b_min && b_min < b_max) {
        return Err("need 0 < b_min < b_max".into());
    }
    let grid = grid.clamp(2, MAX_GRID);
    let phi = PhiSpec::theorem_family(&parse_constants(a)?).map_err(|e| e.to_string())?;
    let d = PhiDerivatives::of(&phi).map_err(|e| e.to_string())?;
    let exprs = [d.phi.clone(), d.d1(), d.d2()];
    let b: Vec<f64> = (0..grid)
        .map(|i| b_min + (b_max - b_min) * i as f64 / (grid - 1) as f64)
        .collect();
    let t: Vec<f64> = (0..grid)
        .map(|j| -1.0 + 2.0 * j as f64 / (grid - 1) as f64)
        .collect();
    let mut margin = Vec::with_capacity(grid);
    let mut interior = f64::INFINITY;
    let mut overall = f64::INFINITY;
    for &bi in &b {
        let row: Vec<Option<f64>> = t
            .iter()
            .enumerate()
            .map(|(j, &tj)| {
                let vals: Option<Vec<f64>> =
                    exprs.iter().map(|e| e.eval_f64(tj * bi, bi).ok()).collect();
                let m = vals?.into_iter().fold(f64::INFINITY, f64::min);
                overall = overall.min(m);
                if j != 0 && j != grid - 1 {
                    interior = interior.min(m);
                }
                Some(m)
            })
            .collect();
        margin.push(row);
    }
    let status = if interior <= 0.0 || overall < -1e-12 {
        ConvexityStatus::Fail
    } else if overall <= 1e-12 {
        ConvexityStatus::BoundaryDegenerate
    } else {
        ConvexityStatus::Pass
    };
    json(&ConvexityMap {
        b,
        t,
        margin,
        status,
    })
}

#[derive(Serialize)]
struct ScanRow {
    x: Vec<f64>,
    y: Vec<f64>,
    b: f64,
    s: f64,
    #[serde(rename = "normB")]
    norm_b: f64,
    #[serde(rename = "normJ")]
    norm_j: f64,
    #[serde(rename = "normJplus")]
    norm_j_plus: f64,
    detg: f64,
    failures: Vec<&'static str>,
}

#[derive(Serialize)]
struct Scan {
    entry: String,
    params: String,
    rows: Vec<ScanRow>,
}

/// Curvature norms at seeded points. `entry` is a zoo name or `family`,
/// which then takes the constants `a`.
pub fn curvature_scan_json(
    entry: &str,
    a: &str,
    n: usize,
    points: usize,
    seed: u64,
    ctilde: f64,
) -> Result<String, String> {
    if !(2..=5).contains(&n) {
        return Err("n must be between 2 and 5".into());
    }
    let e: ZooEntry = if entry == "family" {
        let a = parse_constants(a)?;
        zoo::make_theorem_family(a.len() - 1, &a, n)
    } else {
        zoo::by_name(entry, n)
    }
    .map_err(|e| e.to_string())?;
    let ev = e.evaluator();
    let rows = e
        .sample_points(points.min(MAX_POINTS), seed)
        .into_iter()
        .map(|(x, y)| {
            let r = ev.report(&x, &y, ctilde).map_err(|e| e.to_string())?;
            Ok(ScanRow {
                b: r.b,
                s: r.s,
                norm_b: r.norms.b,
                norm_j: r.norms.j,
                norm_j_plus: r.norms.j_plus,
                detg: r.det_g,
                failures: r.failures(),
                x,
                y,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    json(&Scan {
        entry: e.name.clone(),
        params: e.params.clone(),
        rows,
    })
}

/// Exact verdicts for the coefficient family in each dimension of `n_list`.
pub fn verify_family_json(a: &str, n_list: &str) -> Result<String, String> {
    let phi = PhiSpec::theorem_family(&parse_constants(a)?).map_err(|e| e.to_string())?;
    let records: Vec<VerdictRecord> = n_list
        .split(',')
        .map(|t| {
            let n: u32 = t
                .trim()
                .parse()
                .map_err(|_| format!("bad dimension `{}`", t.trim()))?;
            if !(2..=8).contains(&n) {
                return Err(format!("dimension {n} outside 2..8"));
            }
            verdict(&phi, n).map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    json(&records)
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn convexity_map(a: &str, b_min: f64, b_max: f64, grid: usize) -> Result<String, JsError> {
    js(convexity_map_json(a, b_min, b_max, grid))
}

#[wasm_bindgen]
pub fn curvature_scan(
    entry: &str,
    a: &str,
    n: usize,
    points: usize,
    seed: u64,
    ctilde: f64,
) -> Result<String, JsError> {
    js(curvature_scan_json(entry, a, n, points, seed, ctilde))
}

#[wasm_bindgen]
pub fn verify_family(a: &str, n_list: &str) -> Result<String, JsError> {
    js(verify_family_json(a, n_list))
}

#[wasm_bindgen]
pub fn zoo_names() -> String {
    zoo::NAMES.join(",")
}
