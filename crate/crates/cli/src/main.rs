use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use evcodes::apps::{css_params, sss_profile};
use evcodes::codes::{
    build_pair_codes, exact_rghw_budget, exact_rghw_dual_budget, matrix_json, parity_matrix, CodesError, RghwMethod,
    ORACLE_BUDGET,
};
use evcodes::construct::ConstructError;
use evcodes::fengrao::{rghw_bound_dual, rghw_bound_primary, BasisContext, FengRaoError, WeightEntry};
use evcodes::monomial::DeltaSet;
use evcodes::tables::{run_table, TableId};
use serde::Serialize;
use serde_json::json;

mod config;

use config::PairArgs;

const EXIT_OTHER: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_UNSOUND: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "evcodes", version, about = "Nested evaluation code pairs and their relative weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Generator1,
    Generator2,
    Parity1,
    Parity2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMethod {
    Subspaces,
    Supports,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a code pair and print its relative weight bounds
    Construct {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Recompute a reference table and diff it against the stored values
    Table {
        id: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Compare bounds with exhaustively computed values
    Oracle {
        #[command(flatten)]
        pair: PairArgs,
        /// Values of v to check (default 1)
        #[arg(long = "v", value_delimiter = ',')]
        vs: Vec<usize>,
        /// Work limit for the exhaustive search
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
        #[arg(long = "oracle", value_enum, default_value = "subspaces")]
        oracle: OracleMethod,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a generator or parity-check matrix
    Matrix {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cell(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn kind(e: &WeightEntry) -> String {
    serde_json::to_value(e.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn names(delta: &DeltaSet, positions: &[usize]) -> Vec<String> {
    positions.iter().map(|&p| delta.monomial(p).to_string()).collect()
}

fn construct(args: &PairArgs, format: Format) -> Result<ExitCode> {
    let cfg = args.load()?;
    let built = cfg.build()?;
    let pair = &built.pair;
    let q = built.points.field().order();
    let delta = pair.delta();
    let css = css_params(pair, &built.profile, q).ok();
    let sss = sss_profile(&built.profile, pair.n()).ok();
    match format {
        Format::Json => print_json(&json!({
            "field": cfg.points.field,
            "axes": cfg.points.axes,
            "order": cfg.order,
            "pair": cfg.pair,
            "details": built.details,
            "n": pair.n(),
            "k1": pair.k1(),
            "k2": pair.k2(),
            "ell": pair.ell(),
            "l1": names(delta, pair.l1_positions()),
            "l2": names(delta, pair.l2_positions()),
            "profile": built.profile,
            "css": css.as_ref().map(|c| c.to_string()),
            "sss": sss,
        }))?,
        Format::Csv => {
            println!("# n={},k1={},k2={},ell={}", pair.n(), pair.k1(), pair.k2(), pair.ell());
            println!("# L1 = {}", names(delta, pair.l1_positions()).join(" "));
            println!("# L2 = {}", names(delta, pair.l2_positions()).join(" "));
            if let Some(c) = &css {
                println!("# css = {c}");
            }
            println!("v,primary,primary_kind,dual,dual_kind");
            for (p, d) in built.profile.primary.iter().zip(&built.profile.dual) {
                println!("{},{},{},{},{}", p.v, cell(p.value), kind(p), cell(d.value), kind(d));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn table(id: &str, format: Format) -> Result<ExitCode> {
    let id: TableId = id.parse()?;
    let report = run_table(id)?;
    match format {
        Format::Csv => print!("{}", report.to_csv()),
        Format::Json => print_json(&report)?,
    }
    Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_OTHER) })
}

#[derive(Debug, Serialize)]
struct OracleRow {
    side: &'static str,
    v: usize,
    /// `None` when the bound search was capped.
    bound: Option<u64>,
    exact: usize,
    sound: bool,
    tight: bool,
}

fn oracle(args: &PairArgs, vs: &[usize], budget: u128, method: OracleMethod, format: Format) -> Result<ExitCode> {
    let cfg = args.load()?;
    let built = cfg.build()?;
    let pair = &built.pair;
    let ctx = BasisContext::new(built.points.clone(), cfg.order.clone())?;
    let (c1, c2) = build_pair_codes(&ctx, pair)?;
    let method = match method {
        OracleMethod::Subspaces => RghwMethod::Subspaces,
        OracleMethod::Supports => RghwMethod::SupportSubsets,
    };
    let vs = if vs.is_empty() { vec![1] } else { vs.to_vec() };
    let budget = budget.min(ORACLE_BUDGET);
    let mut rows = Vec::new();
    for &v in &vs {
        let bound = |r: Result<u64, FengRaoError>| match r {
            Ok(b) => Ok(Some(b)),
            Err(FengRaoError::BoundNotComputed { .. }) => Ok(None),
            Err(e) => Err(e),
        };
        let primary = bound(rghw_bound_primary(pair, v))?;
        let exact = exact_rghw_budget(&c1, &c2, v, method, budget)?;
        rows.push(row("primary", v, primary, exact));
        let dual = bound(rghw_bound_dual(pair, v))?;
        let exact = exact_rghw_dual_budget(&c1, &c2, v, method, budget)?;
        rows.push(row("dual", v, dual, exact));
    }
    match format {
        Format::Json => print_json(&rows)?,
        Format::Csv => {
            println!("side,v,bound,exact,sound,tight");
            for r in &rows {
                println!("{},{},{},{},{},{}", r.side, r.v, cell(r.bound), r.exact, r.sound, r.tight);
            }
        }
    }
    if rows.iter().all(|r| r.sound) {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: a bound exceeds the exact value");
        Ok(ExitCode::from(EXIT_UNSOUND))
    }
}

fn row(side: &'static str, v: usize, bound: Option<u64>, exact: usize) -> OracleRow {
    let exact64 = exact as u64;
    OracleRow { side, v, bound, exact, sound: bound.is_none_or(|b| b <= exact64), tight: bound == Some(exact64) }
}

fn matrix(args: &PairArgs, which: Which, format: Format) -> Result<ExitCode> {
    let cfg = args.load()?;
    let built = cfg.build()?;
    let ctx = BasisContext::new(built.points, cfg.order)?;
    let (c1, c2) = build_pair_codes(&ctx, &built.pair)?;
    let m = match which {
        Which::Generator1 => c1.generator().clone(),
        Which::Generator2 => c2.generator().clone(),
        Which::Parity1 => parity_matrix(&c1).context("parity1")?,
        Which::Parity2 => parity_matrix(&c2).context("parity2")?,
    };
    match format {
        Format::Csv => print!("{}", m.to_csv()),
        Format::Json => print_json(&matrix_json(&m))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<ConstructError>().is_some() {
            return EXIT_INFEASIBLE;
        }
        if let Some(e) = cause.downcast_ref::<FengRaoError>() {
            if matches!(
                e,
                FengRaoError::NotNested { .. } | FengRaoError::ZeroCodimension | FengRaoError::DuplicateMonomial { .. }
            ) {
                return EXIT_INFEASIBLE;
            }
        }
        if let Some(CodesError::BudgetExceeded { .. }) = cause.downcast_ref::<CodesError>() {
            return EXIT_BUDGET;
        }
    }
    EXIT_OTHER
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct { pair, format } => construct(pair, *format),
        Command::Table { id, format } => table(id, *format),
        Command::Oracle { pair, vs, budget, oracle: method, format } => oracle(pair, vs, *budget, *method, *format),
        Command::Matrix { pair, which, format } => matrix(pair, *which, *format),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
