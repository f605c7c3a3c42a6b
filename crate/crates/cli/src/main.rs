//! `hardwall`: JSON/CSV reports on hard-wall Coulomb gas partition functions.
//!
//! No environment variables are consulted.

mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardwall::term_asym::TermExpansions;
use hardwall::{
    compute_universal_constants, droplet_geometry, expansion_coefficients, identity_residuals,
    log_partition_hard, log_uj_gamma_oracle, log_uj_quadrature, predict_log_partition, remainder_sweep,
    Error, Method, QuadratureConfig, RadialPotential,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use report::{cell, num, opt_num, Report, Table};

#[derive(Parser)]
#[command(
    name = "hardwall",
    version,
    about = "Partition functions of the 2D Coulomb gas with a hard wall"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Potential descriptor, e.g. "annulus-log a=0.5"
    #[arg(long, global = true)]
    potential: Option<String>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Worker threads, or "auto"
    #[arg(long, global = true, default_value = "auto")]
    threads: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Quad,
    Gamma,
}

#[derive(Clone, Copy, ValueEnum)]
enum Compare {
    Oracle,
    Quad,
}

#[derive(Subcommand)]
enum Command {
    /// The six universal constants and the two identity residuals
    Constants,
    /// Droplet radii, η and the regime
    Geometry,
    /// Exact log(Z_N / (2π)^N)
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Quad)]
        method: MethodArg,
    },
    /// Per-term asymptotics against exact values
    Terms {
        #[arg(long)]
        n: usize,
        /// Half-open range a:b of term indices (default: all)
        #[arg(long)]
        j_range: Option<String>,
        #[arg(long, value_enum, default_value_t = Compare::Quad)]
        compare: Compare,
    },
    /// Coefficients of the large-N expansion, and its value at --n
    Predict {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Remainder of the expansion against exact sums
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
}

enum Failure {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

/// `(j, asymptotic, exact, regime tag, x)`
type TermRow = (usize, f64, f64, String, Option<f64>);

struct Output {
    report: Report,
    table: Table,
}

fn potential(common: &Common) -> Result<RadialPotential, Failure> {
    let d = common
        .potential
        .as_deref()
        .ok_or_else(|| Failure::Usage("--potential is required for this command".into()))?;
    RadialPotential::parse(d).map_err(|e| Failure::Usage(format!("bad --potential: {e}")))
}

fn config(common: &Common) -> Result<QuadratureConfig, Failure> {
    let cfg = QuadratureConfig::default();
    match common.tol {
        Some(t) => cfg
            .with_rel_tol(t)
            .map_err(|e| Failure::Usage(format!("bad --tol: {e}"))),
        None => Ok(cfg),
    }
}

fn parse_range(s: &str, n: usize) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--j-range must look like a:b with a < b <= n, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a >= b || b > n {
        return Err(bad());
    }
    Ok((a, b))
}

fn base_inputs(common: &Common) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    if let Some(p) = &common.potential {
        m.insert("potential".into(), json!(p));
    }
    if let Some(t) = common.tol {
        m.insert("tol".into(), num(t));
    }
    m.insert(
        "emit".into(),
        json!(if common.emit == Emit::Csv { "csv" } else { "json" }),
    );
    m
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let common = &cli.common;
    let cfg = config(common)?;
    let mut inputs = base_inputs(common);

    let (name, outputs, table) = match &cli.command {
        Command::Constants => {
            let k = compute_universal_constants(&cfg)?;
            let (res_in, res_out) = identity_residuals(&k);
            let e = &k.errors;
            let out = json!({
                "alpha_in": num(k.alpha_in),
                "beta_in": num(k.beta_in),
                "gamma_in": num(k.gamma_in),
                "alpha_out": num(k.alpha_out),
                "beta_out": num(k.beta_out),
                "gamma_out": num(k.gamma_out),
                "residual_in": num(res_in),
                "residual_out": num(res_out),
                "error_estimates": {
                    "alpha_in": num(e.alpha_in),
                    "beta_in": num(e.beta_in),
                    "gamma_in": num(e.gamma_in),
                    "alpha_out": num(e.alpha_out),
                    "beta_out": num(e.beta_out),
                    "gamma_out": num(e.gamma_out),
                },
            });
            let mut flat = out.clone();
            flat.as_object_mut().unwrap().remove("error_estimates");
            let table = Table::from_object(&flat);
            ("constants", out, table)
        }
        Command::Geometry => {
            let pot = potential(common)?;
            let g = droplet_geometry(&pot)?;
            let out = json!({
                "r0": num(g.r0),
                "r1": num(g.r1),
                "tau0": num(g.tau0),
                "eta": num(g.eta),
                "regime": g.regime.name(),
            });
            let table = Table::from_object(&out);
            ("geometry", out, table)
        }
        Command::Exact { n, method } => {
            let pot = potential(common)?;
            let method = match method {
                MethodArg::Quad => Method::Quadrature,
                MethodArg::Gamma => Method::GammaOracle,
            };
            inputs.insert("n".into(), json!(n));
            inputs.insert("method".into(), json!(method));
            let r = log_partition_hard(&pot, *n, method, &cfg)?;
            let out = json!({
                "log_z_over_2pi_pow_n": num(r.log_z_over_2pi_pow_n),
                "per_term_logs": r.per_term_logs.iter().map(|&v| num(v)).collect::<Vec<_>>(),
            });
            let rows = r
                .per_term_logs
                .iter()
                .enumerate()
                .map(|(j, &v)| vec![j.to_string(), cell(v)])
                .collect();
            (
                "exact",
                out,
                Table {
                    header: vec!["j", "log_uj"],
                    rows,
                },
            )
        }
        Command::Terms { n, j_range, compare } => {
            let pot = potential(common)?;
            if *n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let (a, b) = match j_range {
                Some(s) => parse_range(s, *n)?,
                None => (0, *n),
            };
            inputs.insert("n".into(), json!(n));
            inputs.insert("j_range".into(), json!(format!("{a}:{b}")));
            inputs.insert(
                "compare".into(),
                json!(match compare {
                    Compare::Oracle => "oracle",
                    Compare::Quad => "quad",
                }),
            );
            let exp = TermExpansions::new(&pot)?;
            let rows: Vec<Result<TermRow, Error>> = (a..b)
                .into_par_iter()
                .map(|j| {
                    let (asym, regime) = exp.dispatch(*n, j)?;
                    let exact = match compare {
                        Compare::Oracle => log_uj_gamma_oracle(&pot, *n, j)?,
                        Compare::Quad => log_uj_quadrature(&pot, *n, j, &cfg)?,
                    };
                    Ok((j, asym, exact, regime.tag.name().to_string(), regime.x))
                })
                .collect();
            let mut json_rows = Vec::with_capacity(rows.len());
            let mut csv_rows = Vec::with_capacity(rows.len());
            for r in rows {
                let (j, asym, exact, tag, x) = r?;
                let rel = (asym - exact).exp_m1().abs();
                json_rows.push(json!({
                    "j": j,
                    "regime": tag,
                    "x": opt_num(x),
                    "log_uj_asym": num(asym),
                    "log_uj_exact": num(exact),
                    "rel_err": num(rel),
                }));
                csv_rows.push(vec![j.to_string(), tag, cell(asym), cell(exact), cell(rel)]);
            }
            let table = Table {
                header: vec!["j", "regime", "log_uj_asym", "log_uj_exact", "rel_err"],
                rows: csv_rows,
            };
            ("terms", json!({ "terms": json_rows }), table)
        }
        Command::Predict { n } => {
            let pot = potential(common)?;
            let k = compute_universal_constants(&cfg)?;
            let c = expansion_coefficients(&pot, &k, &cfg)?;
            let mut out = json!({
                "regime": c.regime.name(),
                "c2": num(c.c2),
                "c1log": num(c.c1log),
                "c1": num(c.c1),
                "chalf": num(c.chalf),
                "clog": num(c.clog),
                "clog_exact": c.clog_exact.to_string(),
                "c0": num(c.c0),
                "fractional_note": c.fractional_note,
            });
            if let Some(n) = n {
                inputs.insert("n".into(), json!(n));
                out["predicted"] = num(predict_log_partition(&c, *n)?);
            }
            let table = Table::from_object(&out);
            ("predict", out, table)
        }
        Command::Verify { n } => {
            let pot = potential(common)?;
            inputs.insert("n".into(), json!(n));
            let k = compute_universal_constants(&cfg)?;
            let rows = remainder_sweep(&pot, n, &k, Method::Quadrature, &cfg)?;
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "exact": num(r.exact),
                        "predicted": num(r.predicted),
                        "remainder": num(r.remainder),
                        "ratio": opt_num(r.ratio),
                    })
                })
                .collect();
            let csv_rows = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        cell(r.exact),
                        cell(r.predicted),
                        cell(r.remainder),
                        r.ratio.map(cell).unwrap_or_default(),
                    ]
                })
                .collect();
            let table = Table {
                header: vec!["n", "exact", "predicted", "remainder", "ratio"],
                rows: csv_rows,
            };
            ("verify", json!({ "rows": json_rows }), table)
        }
    };
    Ok(Output {
        report: Report::new(name, inputs, outputs, &cfg),
        table,
    })
}

fn init_threads(spec: &str) -> Result<(), Failure> {
    let threads = if spec == "auto" {
        0
    } else {
        match spec.parse::<usize>() {
            Ok(t) if t > 0 => t,
            _ => {
                return Err(Failure::Usage(format!(
                    "--threads must be a positive integer or auto, got {spec:?}"
                )))
            }
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = init_threads(&cli.common.threads).and_then(|_| run(&cli));
    match result {
        Ok(out) => {
            match cli.common.emit {
                Emit::Json => println!("{}", out.report.to_json()),
                Emit::Csv => print!("{}", out.table.to_csv()),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            println!("{}", report::error_json(e.code(), &e.to_string()));
            ExitCode::from(1)
        }
    }
}
