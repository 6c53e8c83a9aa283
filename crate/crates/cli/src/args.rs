use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finsler_core::algebra::{parse_expr, RatExpr};
use finsler_core::numeric::Tolerances;
use finsler_core::zoo;
use num_rational::BigRational;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "finsler-lab",
    version,
    about = "Curvature checks for general (α,β)-metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Curvature reports at seeded sample points, as JSON.
    Report(RunArgs),
    /// Exact condition verdicts and case analysis for a polynomial φ.
    Verify(RunArgs),
    /// Curvature norms at seeded sample points, one row per point.
    Scan(RunArgs),
    /// Built-in metrics.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZooAction {
    /// One line per entry with its parameters and expected flags.
    List {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Built-in entry (see `zoo list`).
    #[arg(long, group = "selector")]
    pub zoo: Option<String>,
    /// Coefficient family: m=M [a=a0,a1,...].
    #[arg(long, group = "selector", num_args = 1..=2, value_name = "m=M a=LIST")]
    pub family: Option<Vec<String>>,
    /// Polynomial φ: c0=EXPR c1=EXPR ..., with EXPR in u = √b² or b2.
    #[arg(long, group = "selector", num_args = 1.., value_name = "cK=EXPR")]
    pub poly: Option<Vec<String>>,
    /// Dimensions.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Sample points per dimension.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "tol-alg", value_name = "X", allow_negative_numbers = true)]
    pub tol_alg: Option<f64>,
    #[arg(long = "tol-spray", value_name = "X", allow_negative_numbers = true)]
    pub tol_spray: Option<f64>,
    #[arg(long = "tol-third", value_name = "X", allow_negative_numbers = true)]
    pub tol_third: Option<f64>,
    /// c̃ in J + c̃FI.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ctilde: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Which metric a run is about.
#[derive(Clone, Debug)]
pub enum Selector {
    Zoo(String),
    Family {
        m: usize,
        a: Vec<BigRational>,
    },
    Poly {
        text: Vec<String>,
        coeffs: Vec<RatExpr>,
    },
}

impl Selector {
    pub fn describe(&self) -> String {
        match self {
            Selector::Zoo(name) => format!("zoo {name}"),
            Selector::Family { m, a } => {
                format!(
                    "family m={m} a={}",
                    a.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
            Selector::Poly { text, .. } => format!("poly {}", text.join(" ")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub selector: Selector,
    pub n: Vec<usize>,
    pub points: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub ctilde: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub enum Kind {
    Report,
    Verify,
    Scan,
}

impl RunArgs {
    pub fn config(self, kind: Kind) -> Result<RunConfig, CliError> {
        let selector = match (self.zoo, self.family, self.poly) {
            (Some(name), None, None) => {
                if !zoo::NAMES.contains(&name.as_str()) {
                    return Err(CliError::Usage(format!(
                        "unknown zoo entry `{name}`; known: {}",
                        zoo::NAMES.join(", ")
                    )));
                }
                Selector::Zoo(name)
            }
            (None, Some(f), None) => parse_family(&f)?,
            (None, None, Some(p)) => parse_poly(&p)?,
            _ => {
                return Err(CliError::Usage(
                    "one of --zoo, --family, --poly is required".into(),
                ))
            }
        };
        let (default_n, default_points) = match kind {
            Kind::Verify => (vec![2, 3, 4, 5], 0),
            Kind::Report => (vec![3], 10),
            Kind::Scan => (vec![3], 100),
        };
        let n = self.n.unwrap_or(default_n);
        if n.is_empty() || n.iter().any(|&k| k < 2) {
            return Err(CliError::Usage("--n needs dimensions ≥ 2".into()));
        }
        let mut tolerances = Tolerances::default();
        for (value, slot) in [
            (self.tol_alg, &mut tolerances.algebraic),
            (self.tol_spray, &mut tolerances.spray),
            (self.tol_third, &mut tolerances.third),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!(
                        "tolerances must be positive, got {v}"
                    )));
                }
                *slot = v;
            }
        }
        if !self.ctilde.is_finite() {
            return Err(CliError::Usage("--ctilde must be finite".into()));
        }
        let format = match (kind, self.format) {
            (Kind::Scan, f) => f.unwrap_or(Format::Csv),
            (_, None | Some(Format::Json)) => Format::Json,
            (_, Some(Format::Csv)) => return Err(CliError::Usage("only `scan` writes csv".into())),
        };
        Ok(RunConfig {
            selector,
            n,
            points: self.points.unwrap_or(default_points),
            seed: self.seed,
            tolerances,
            ctilde: self.ctilde,
            out: self.out,
            format,
        })
    }
}

fn parse_family(values: &[String]) -> Result<Selector, CliError> {
    let mut m = None;
    let mut a = None;
    for v in values {
        match v.split_once('=') {
            Some(("m", k)) => {
                m = Some(
                    k.parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("bad family degree `{k}`")))?,
                )
            }
            Some(("a", list)) => {
                let parsed = list
                    .split(',')
                    .map(|t| t.trim().parse::<BigRational>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| CliError::Usage(format!("bad constant list `{list}`")))?;
                a = Some(parsed);
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "expected m=M or a=LIST, got `{v}`"
                )))
            }
        }
    }
    let m = match (m, &a) {
        (Some(m), _) => m,
        (None, Some(a)) if !a.is_empty() => a.len() - 1,
        _ => return Err(CliError::Usage("--family needs m=M".into())),
    };
    if m == 0 {
        return Err(CliError::Usage("family degree must be at least 1".into()));
    }
    let a = a.unwrap_or_else(|| zoo::default_family_constants(m));
    if a.len() != m + 1 {
        return Err(CliError::Usage(format!(
            "m={m} takes {} constants, got {}",
            m + 1,
            a.len()
        )));
    }
    Ok(Selector::Family { m, a })
}

fn parse_poly(values: &[String]) -> Result<Selector, CliError> {
    let mut slots: Vec<Option<RatExpr>> = Vec::new();
    for v in values {
        let (key, expr) = v
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected cK=EXPR, got `{v}`")))?;
        let k = key
            .strip_prefix('c')
            .and_then(|k| k.parse::<usize>().ok())
            .ok_or_else(|| CliError::Usage(format!("bad coefficient name `{key}`")))?;
        let e =
            parse_expr(expr).map_err(|e| CliError::Usage(format!("cannot parse `{expr}`: {e}")))?;
        if slots.len() <= k {
            slots.resize(k + 1, None);
        }
        if slots[k].replace(e).is_some() {
            return Err(CliError::Usage(format!("c{k} given twice")));
        }
    }
    let coeffs = slots
        .into_iter()
        .enumerate()
        .map(|(k, c)| c.ok_or_else(|| CliError::Usage(format!("c{k} missing"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.is_empty() {
        return Err(CliError::Usage("--poly needs at least c0".into()));
    }
    Ok(Selector::Poly {
        text: values.to_vec(),
        coeffs,
    })
}
