//! `cfn`: catalog inspection, c-function evaluation, pole listing and
//! verification runs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod grid;
mod verify;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use cfn_core::catalog::{Catalog, LoadedEntry};
use cfn_core::cfunc::{
    c_full, c_omega, c_r, c_zero, functional_from_coroot_values, pole_sheets, CValue, Functional,
};
use cfn_core::rootsys::{PositiveSystem, RootSystem};

#[derive(Parser)]
#[command(name = "cfn", version, about = "c-functions of non-compactly causal symmetric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect catalog entries (CFN_DATA_DIR overrides the bundled data).
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Evaluate a c-function on a grid of λ.
    Eval(EvalArgs),
    /// List the pole hyperplane families of every factor.
    Poles {
        /// Entry name.
        #[arg(long)]
        entry: String,
        #[arg(long, value_enum, default_value_t = TextOut::Text)]
        out: TextOut,
    },
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long, value_enum, default_value_t = TextOut::Text)]
        out: TextOut,
    },
    Describe {
        name: String,
        #[arg(long, value_enum, default_value_t = TextOut::Text)]
        out: TextOut,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TextOut {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Func {
    Comega,
    C0,
    C,
    Cr,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Comega => "comega",
            Func::C0 => "c0",
            Func::C => "c",
            Func::Cr => "cr",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableOut {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct EvalArgs {
    #[arg(long)]
    entry: String,
    #[arg(long, value_enum, default_value_t = Func::Comega)]
    func: Func,
    /// Positive system for `--func cr`: `standard`, `flipped` (−Δ_n⁺ ∪ Δ_k⁺)
    /// or a regular vector `v1,v2,…` (R = {α : α(v) > 0}).
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Points `x1,x2;y1,y2;…`; coordinates may be complex (`-2+0.5i`).
    #[arg(long, conflicts_with = "line", required_unless_present = "line", allow_hyphen_values = true)]
    grid: Option<String>,
    /// Affine line `ORIGIN:DIRECTION:T0:T1:STEP`.
    #[arg(long, allow_hyphen_values = true)]
    line: Option<String>,
    /// Read each point as the values λ(H_γ₁), …, λ(H_γᵣ) on the cascade
    /// coroots instead of as coordinates.
    #[arg(long)]
    coroot_values: bool,
    #[arg(long, value_enum, default_value_t = TableOut::Csv)]
    out: TableOut,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Rank1,
    Rank1Riemannian,
    Sp4Mc,
    Structure,
    Projection,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Multiplicity for the rank-one suites (default: 1, 2 and 3).
    #[arg(long)]
    m: Option<u32>,
    /// Sample count; accepts `1e6`.
    #[arg(long, value_parser = parse_count)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Relative tolerance (rank-one suites, projection slice; default 1e-8) or
    /// number of standard errors (sp4-mc; default 3).
    #[arg(long)]
    tol: Option<f64>,
    /// Restrict the structure suite to one entry.
    #[arg(long)]
    entry: Option<String>,
}

fn parse_count(s: &str) -> Result<usize, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !(v >= 1.0 && v.fract() == 0.0 && v <= 1e12) {
        return Err(format!("sample count must be a positive integer, got {s}"));
    }
    Ok(v as usize)
}

enum Failure {
    Input(String),
    Verification,
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Input(s)
    }
}

fn load(name: &str) -> Result<LoadedEntry, Failure> {
    Catalog::from_env().load_entry(name).map_err(|e| Failure::Input(e.to_string()))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn fmt_root(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{}", (v * 1e12).round() / 1e12)).collect();
    format!("({})", parts.join(", "))
}

fn catalog(action: CatalogAction) -> Result<String, Failure> {
    let cat = Catalog::from_env();
    match action {
        CatalogAction::List { out } => {
            let list = cat.list_entries().map_err(|e| Failure::Input(e.to_string()))?;
            Ok(match out {
                TextOut::Json => json(&list),
                TextOut::Text => {
                    let mut s = format!("{:<18} {:<4} {:<4} {:<3} {}\n", "name", "type", "rank", "|Γ|", "realization");
                    for e in &list {
                        let _ = writeln!(s, "{:<18} {:<4} {:<4} {:<3} {}", e.name, e.cartan_type.to_string(), e.rank, e.cascade_len, e.realization);
                    }
                    s
                }
            })
        }
        CatalogAction::Describe { name, out } => {
            let l = load(&name)?;
            let rs = &l.root_system;
            let roots: Vec<serde_json::Value> = (0..rs.len())
                .map(|i| {
                    let a = rs.root(i);
                    serde_json::json!({
                        "coords": a.coords, "multiplicity": a.multiplicity, "compact": a.compact,
                        "positive": rs.is_positive(i), "coroot": rs.coroot_of(i),
                    })
                })
                .collect();
            let gamma: Vec<&[f64]> = rs.gamma_indices().iter().map(|&i| rs.root(i).coords.as_slice()).collect();
            Ok(match out {
                TextOut::Json => json(&serde_json::json!({
                    "entry": l.entry, "roots": roots, "gamma": gamma, "rho": rs.rho(), "validation": l.report,
                })),
                TextOut::Text => {
                    let e = &l.entry;
                    let mut s = String::new();
                    let _ = writeln!(s, "{} — type {}{}, X₀ = {}, realization {}", e.name, e.cartan_type, e.rank, fmt_root(&e.x0), e.realization);
                    if !e.notes.is_empty() {
                        let _ = writeln!(s, "{}", e.notes);
                    }
                    let list = |idx: Vec<usize>| idx.iter().map(|&i| fmt_root(&rs.root(i).coords)).collect::<Vec<_>>().join(", ");
                    let _ = writeln!(s, "Δ_n⁺ = {{{}}}", list(rs.noncompact_positive()));
                    let _ = writeln!(s, "Δ_k⁺ = {{{}}}", list(rs.compact_positive()));
                    let _ = writeln!(s, "Γ = {{{}}}", list(rs.gamma_indices().to_vec()));
                    let _ = writeln!(s, "ρ = {}", fmt_root(&rs.rho()));
                    let _ = writeln!(s, "{:<28} {:>3} {:<11} coroot", "root", "m", "kind");
                    for i in rs.positive_indices() {
                        let a = rs.root(i);
                        let kind = if a.compact { "compact" } else { "non-compact" };
                        let _ = writeln!(s, "{:<28} {:>3} {:<11} {}", fmt_root(&a.coords), a.multiplicity, kind, fmt_root(rs.coroot_of(i)));
                    }
                    let _ = writeln!(s, "validation:");
                    s.push_str(&l.report.to_string());
                    s
                }
            })
        }
    }
}

fn positive_system(rs: &RootSystem, spec: Option<&str>) -> Result<PositiveSystem, String> {
    match spec.map(str::trim) {
        None | Some("standard") => Ok(PositiveSystem::standard(rs)),
        Some("flipped") => Ok(PositiveSystem::noncompact_flipped(rs)),
        Some(v) => {
            let v: Vec<f64> = v
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad --r coordinate {x:?}")))
                .collect::<Result<_, _>>()?;
            PositiveSystem::from_regular_vector(rs, &v).map_err(|e| e.to_string())
        }
    }
}

#[derive(Serialize)]
struct Row {
    lambda: Vec<f64>,
    lambda_im: Vec<f64>,
    func: &'static str,
    re: Option<f64>,
    im: Option<f64>,
    in_domain: bool,
    pole: bool,
}

fn csv_number(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn eval(args: EvalArgs) -> Result<String, Failure> {
    let l = load(&args.entry)?;
    let rs = &l.root_system;
    let points = match (&args.grid, &args.line) {
        (Some(g), _) => grid::parse_grid(g),
        (None, Some(l)) => grid::parse_line(l),
        (None, None) => Err("either --grid or --line is required".to_string()),
    }
    .map_err(|e| Failure::Input(format!("bad grid: {e}")))?;
    if args.r.is_some() && args.func != Func::Cr {
        return Err(Failure::Input("--r only applies to --func cr".into()));
    }
    let r = positive_system(rs, args.r.as_deref())?;
    let lambdas: Vec<Functional> = points
        .iter()
        .map(|p| {
            if args.coroot_values {
                functional_from_coroot_values(rs, p).map_err(|e| e.to_string())
            } else if p.len() != rs.rank() {
                Err(format!("point has {} coordinates, entry has rank {}", p.len(), rs.rank()))
            } else {
                Ok(Functional::from_complex(p))
            }
        })
        .collect::<Result<_, _>>()?;
    let values: Vec<CValue> = lambdas
        .par_iter()
        .map(|lam| match args.func {
            Func::Comega => c_omega(rs, lam),
            Func::C0 => c_zero(rs, lam),
            Func::C => c_full(rs, lam),
            Func::Cr => c_r(rs, lam, &r),
        })
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    if args.func == Func::C {
        // c = c₀·c_Ω, regrouped from the same factors.
        let worst = lambdas
            .iter()
            .zip(&values)
            .filter_map(|(lam, v)| {
                let p = c_zero(rs, lam).ok()?.times(c_omega(rs, lam).ok()?);
                Some((v.value? - p.value?).norm() / v.value?.norm().max(f64::MIN_POSITIVE))
            })
            .fold(0.0, f64::max);
        eprintln!("regrouping check: max |c − c₀·c_Ω| / |c| = {worst:e}");
    }
    let rows: Vec<Row> = lambdas
        .iter()
        .zip(&values)
        .map(|(lam, v)| Row {
            lambda: lam.re.clone(),
            lambda_im: lam.im.clone(),
            func: args.func.name(),
            re: v.value.map(|z: Complex64| z.re),
            im: v.value.map(|z| z.im),
            in_domain: v.in_domain,
            pole: v.pole,
        })
        .collect();
    Ok(match args.out {
        TableOut::Json => json(&rows),
        TableOut::Csv => {
            let n = rs.rank();
            let mut header: Vec<String> = (1..=n).map(|k| format!("lambda_{k}")).collect();
            header.extend((1..=n).map(|k| format!("lambda_im_{k}")));
            header.extend(["func", "re", "im", "in_domain", "pole"].map(String::from));
            let mut s = header.join(",") + "\n";
            for row in &rows {
                let mut cells: Vec<String> = row.lambda.iter().chain(&row.lambda_im).map(|x| format!("{x}")).collect();
                cells.push(row.func.to_string());
                cells.push(csv_number(row.re));
                cells.push(csv_number(row.im));
                cells.push(row.in_domain.to_string());
                cells.push(row.pole.to_string());
                s += &(cells.join(",") + "\n");
            }
            s
        }
    })
}

fn poles(entry: &str, out: TextOut) -> Result<String, Failure> {
    let l = load(entry)?;
    let sheets = pole_sheets(&l.root_system);
    Ok(match out {
        TextOut::Json => json(&sheets),
        TextOut::Text => sheets.iter().map(|s| format!("{s}\n")).collect(),
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Catalog { action } => catalog(action),
        Command::Eval(args) => eval(args),
        Command::Poles { entry, out } => poles(&entry, out),
        Command::Verify(v) => {
            let suite = match v.suite {
                Suite::Rank1 => "rank1",
                Suite::Rank1Riemannian => "rank1-riemannian",
                Suite::Sp4Mc => "sp4-mc",
                Suite::Structure => "structure",
                Suite::Projection => "projection",
            };
            let opts = verify::Options { m: v.m, samples: v.samples, seed: v.seed, tol: v.tol, entry: v.entry };
            let report = verify::run(suite, &opts).map_err(Failure::Input)?;
            let text = json(&report);
            if report["passed"] == serde_json::Value::Bool(true) {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
