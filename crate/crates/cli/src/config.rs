//! Run configuration: a point set, a monomial order and one pair recipe,
//! read from a JSON file or assembled from flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use evcodes::algebra::{prime_power, AxisSpec, FieldSpec, PointSet, PointSetConfig};
use evcodes::construct::{
    higher_dim_small_pair, large_codim_pair, sigma_family, small_codim_pair, Orientation,
};
use evcodes::fengrao::{weight_profile, CodePairSpec, WeightProfile};
use evcodes::monomial::{DeltaSet, Monomial, MonomialOrder};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    #[serde(flatten)]
    pub points: PointSetConfig,
    #[serde(default = "deglex")]
    pub order: MonomialOrder,
    pub pair: PairRecipe,
}

fn deglex() -> MonomialOrder {
    MonomialOrder::Deglex
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum PairRecipe {
    Large { delta: u64, delta_perp: u64 },
    Small { i: usize, j: usize },
    Segment { sigma: usize, ell: usize, #[serde(default)] orientation: Option<Orientation> },
    Higherdim { exps: Vec<u32> },
    /// Explicit exponent vectors for `L_1` and `L_2`.
    Explicit { l1: Vec<Vec<u32>>, l2: Vec<Vec<u32>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Large,
    Small,
    Segment,
    Higherdim,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    PrimaryLarge,
    DualLarge,
}

/// Pair selection, either `--config FILE` or the individual flags.
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// JSON configuration file; overrides every other pair flag
    #[arg(long, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,
    /// Field size q = p^e
    #[arg(long)]
    pub q: Option<u32>,
    /// Comma-separated axes: full, mult, roots:N, roots0:N, explicit:a/b/c
    #[arg(long)]
    pub axes: Option<String>,
    /// deglex or wdeglex:w1/w2/...
    #[arg(long, default_value = "deglex")]
    pub order: String,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long)]
    pub delta: Option<u64>,
    #[arg(long = "delta-perp")]
    pub delta_perp: Option<u64>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub sigma: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,
    /// Exponents of the top monomial, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub exps: Option<Vec<u32>>,
    /// Semicolon-separated exponent vectors, e.g. "0,0;1,0"
    #[arg(long)]
    pub l1: Option<String>,
    #[arg(long)]
    pub l2: Option<String>,
}

fn parse_axis(text: &str) -> Result<AxisSpec> {
    let (kind, arg) = match text.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (text, None),
    };
    let number = |a: Option<&str>| -> Result<u32> {
        let a = a.with_context(|| format!("axis {text:?} needs a parameter"))?;
        a.parse().with_context(|| format!("bad axis parameter {a:?}"))
    };
    Ok(match kind {
        "full" => AxisSpec::FullField,
        "mult" => AxisSpec::MultGroup,
        "roots" => AxisSpec::RootsOfUnity { n: number(arg)? },
        "roots0" => AxisSpec::RootsWithZero { n: number(arg)? },
        "explicit" => {
            let a = arg.with_context(|| format!("axis {text:?} needs elements"))?;
            let elements = a
                .split('/')
                .map(|x| x.trim().parse::<u32>().with_context(|| format!("bad element {x:?}")))
                .collect::<Result<_>>()?;
            AxisSpec::Explicit { elements }
        }
        other => bail!("unknown axis kind {other:?}"),
    })
}

fn parse_order(text: &str) -> Result<MonomialOrder> {
    if text == "deglex" {
        return Ok(MonomialOrder::Deglex);
    }
    let Some(w) = text.strip_prefix("wdeglex:") else {
        bail!("unknown order {text:?}");
    };
    let weights = w.split('/').map(|x| x.parse::<u32>().with_context(|| format!("bad weight {x:?}"))).collect::<Result<_>>()?;
    Ok(MonomialOrder::weighted(weights)?)
}

fn parse_monomials(text: &str) -> Result<Vec<Vec<u32>>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|m| m.split(',').map(|x| x.trim().parse::<u32>().with_context(|| format!("bad exponent {x:?}"))).collect())
        .collect()
}

impl PairArgs {
    pub fn load(&self) -> Result<Config> {
        if let Some(path) = &self.config {
            return read_config(path);
        }
        let q = self.q.context("--q is required without --config")?;
        let (p, e) = prime_power(q)?;
        let axes = self.axes.as_deref().context("--axes is required without --config")?;
        let axes = axes.split(',').map(|a| parse_axis(a.trim())).collect::<Result<_>>()?;
        let need = |v: Option<u64>, name: &str| v.with_context(|| format!("--{name} is required for this method"));
        let need_u = |v: Option<usize>, name: &str| v.with_context(|| format!("--{name} is required for this method"));
        let pair = match self.method.context("--method is required without --config")? {
            Method::Large => {
                PairRecipe::Large { delta: need(self.delta, "delta")?, delta_perp: need(self.delta_perp, "delta-perp")? }
            }
            Method::Small => PairRecipe::Small { i: need_u(self.i, "i")?, j: need_u(self.j, "j")? },
            Method::Segment => PairRecipe::Segment {
                sigma: need_u(self.sigma, "sigma")?,
                ell: need_u(self.ell, "ell")?,
                orientation: self.orientation.map(|o| match o {
                    OrientationArg::PrimaryLarge => Orientation::PrimaryLarge,
                    OrientationArg::DualLarge => Orientation::DualLarge,
                }),
            },
            Method::Higherdim => PairRecipe::Higherdim { exps: self.exps.clone().context("--exps is required")? },
            Method::Explicit => PairRecipe::Explicit {
                l1: parse_monomials(self.l1.as_deref().context("--l1 is required")?)?,
                l2: parse_monomials(self.l2.as_deref().unwrap_or(""))?,
            },
        };
        Ok(Config {
            points: PointSetConfig { field: FieldSpec { p, e, modulus: Vec::new() }, axes },
            order: parse_order(&self.order)?,
            pair,
        })
    }
}

pub fn read_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A constructed pair with its bound profile and recipe-specific details.
pub struct Built {
    pub points: PointSet,
    pub pair: CodePairSpec,
    pub profile: WeightProfile,
    pub details: Value,
}

impl Config {
    pub fn build(&self) -> Result<Built> {
        let points = PointSet::from_config(&self.points)?;
        let delta = DeltaSet::new(&points.sizes(), self.order.clone())?;
        let (pair, profile, details) = match &self.pair {
            PairRecipe::Large { delta: d, delta_perp } => {
                let pair = large_codim_pair(&delta, *d, *delta_perp)?;
                let profile = weight_profile(&pair);
                (pair, profile, json!({ "delta": d, "delta_perp": delta_perp }))
            }
            PairRecipe::Small { i, j } => {
                let built = small_codim_pair(&delta, *i, *j)?;
                (built.pair, built.profile, json!({ "i": i, "j": j }))
            }
            PairRecipe::Segment { sigma, ell, orientation } => {
                let orientation = orientation.unwrap_or(Orientation::PrimaryLarge);
                let sp = sigma_family(&delta, *sigma, *ell, orientation)?;
                let details = json!({
                    "sigma": sp.sigma,
                    "orientation": sp.orientation,
                    "i": sp.i,
                    "j": sp.j,
                    "d_c1": sp.d_c1,
                    "impure": sp.impure,
                });
                (sp.inner.pair, sp.inner.profile, details)
            }
            PairRecipe::Higherdim { exps } => {
                let built = higher_dim_small_pair(&delta, exps)?;
                (built.pair, built.profile, json!({ "exps": exps }))
            }
            PairRecipe::Explicit { l1, l2 } => {
                let to_m = |v: &[Vec<u32>]| v.iter().map(|e| Monomial(e.clone())).collect::<Vec<_>>();
                let pair = CodePairSpec::new(delta, &to_m(l1), &to_m(l2))?;
                let profile = weight_profile(&pair);
                (pair, profile, Value::Null)
            }
        };
        Ok(Built { points, pair, profile, details })
    }
}
