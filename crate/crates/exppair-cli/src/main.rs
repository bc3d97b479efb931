//! Command-line front end: hull construction and export, the verification
//! suites, the dual (alpha, beta) pipeline, exact optimization queries, and
//! theorem-table reproduction.
//!
//! Exit codes: 0 success, 1 mathematical failure (a check failed or the
//! region is infeasible), 2 usage error (bad arguments or malformed input).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use exppair::apps;
use exppair::beta;
use exppair::catalog;
use exppair::exact::{fmt_rat, parse_rat, Rat};
use exppair::hull;
use exppair::optimizer::sweep::{ParamConstraint, ParamObjective};
use exppair::optimizer::{
    minimize, objective_from_json, OptError, Rel,
};
use exppair::poly::Poly;
use exppair::report::Report;

#[derive(Parser)]
#[command(name = "exppair", version, about = "Exact exponent-pair hull toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Working precision for certified interval arithmetic (min 53).
    /// Overridden by EXPPAIR_PRECISION_BITS.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Worker threads for the verification sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    parallelism: usize,
    /// Suppress the timestamp header line so outputs are byte-stable.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Use open-interior membership instead of boundary-inclusive.
    #[arg(long, global = true)]
    strict_membership: bool,
}

impl RunConfig {
    fn bits(&self) -> Result<u32, String> {
        let bits = match std::env::var("EXPPAIR_PRECISION_BITS") {
            Ok(v) => v
                .parse::<u32>()
                .map_err(|_| format!("EXPPAIR_PRECISION_BITS not an integer: {v:?}"))?,
            Err(_) => self.precision_bits.unwrap_or(128),
        };
        if bits < 53 {
            return Err(format!("precision must be at least 53 bits, got {bits}"));
        }
        Ok(bits)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build or print the finite hull H_N.
    Hull {
        #[command(subcommand)]
        action: HullAction,
    },
    /// Run a verification suite.
    Verify {
        /// program1 | slopes | closure | containment | all
        #[arg(long)]
        suite: String,
        /// Truncation index N for hull-based suites.
        #[arg(long, default_value_t = 1000)]
        n: u32,
        /// Largest chain index for the slope checks.
        #[arg(long, default_value_t = 100)]
        n_max: i64,
        /// Family cap for containment.
        #[arg(long, default_value_t = 100)]
        family_cap: u32,
        #[arg(long, value_parser = ["text", "json"], default_value = "text")]
        format: String,
        /// Write the full report here (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate exponent pairs from a piecewise exponential-sum envelope.
    Dual {
        /// Use the built-in published envelope table.
        #[arg(long)]
        table3: bool,
        /// Custom envelope: JSON array of {"A","B","X","Y"} rational strings.
        #[arg(long, conflicts_with = "table3")]
        envelope: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize a fractional-linear objective over a hull.
    Optimize {
        /// Hull JSON produced by `hull build`; otherwise use --n.
        #[arg(long)]
        hull: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        n: u32,
        /// Objective JSON file.
        #[arg(long)]
        objective: PathBuf,
        /// Sweep parameter name (enables the parametric mode).
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a published piecewise table or constant and diff it.
    Reproduce {
        /// 2.1 | 2.2 | 2.3 | 2.6 | 2.7 | 2.8 | 2.9 | 2.10 | 2.11 | 2.12
        #[arg(long)]
        theorem: String,
        #[arg(long, value_parser = ["text", "json", "csv"], default_value = "text")]
        emit: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the catalog of known primitive pairs.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum HullAction {
    /// Write the hull to a JSON file.
    Build {
        #[arg(long, default_value_t = 1000)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the hull JSON to stdout.
    Export {
        #[arg(long, default_value_t = 1000)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    Export {
        #[arg(long, default_value_t = 100)]
        family_cap: u32,
        /// Leave out the derivative-test table rows.
        #[arg(long)]
        no_derivative_table: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_MATH: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.run.parallelism > 0 {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.run.parallelism)
            .build_global();
    }
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Math(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(EXIT_MATH)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

enum CliError {
    Usage(String),
    Math(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn timestamp_line(cfg: &RunConfig) -> String {
    if cfg.no_timestamp {
        String::new()
    } else {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!("# generated at unix time {secs}\n")
    }
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_report(
    report: &Report,
    format: &str,
    out: &Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<ExitCode, CliError> {
    let body = match format {
        "json" => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).unwrap()),
        _ => report.render_text(),
    };
    let content = format!("{}{}", timestamp_line(cfg), body);
    write_or_print(out, &content)?;
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in report.failures() {
            eprintln!("FAIL {}: {}", f.name, f.details);
        }
        Ok(ExitCode::from(EXIT_MATH))
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = cli.run.clone();
    let bits = cfg.bits().map_err(CliError::Usage)?;
    match cli.command {
        Command::Hull { action } => match action {
            HullAction::Build { n, out } => {
                let h = hull::build_hull(n);
                let mut j = h.to_json();
                if !cfg.no_timestamp {
                    j["generated_at"] = json!(unix_now());
                }
                fs::write(&out, serde_json::to_string(&j).unwrap())?;
                println!("wrote H_{n} with {} vertices", h.polygon().len());
                Ok(ExitCode::SUCCESS)
            }
            HullAction::Export { n } => {
                let h = hull::build_hull(n);
                println!("{}", serde_json::to_string(&h.to_json()).unwrap());
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Verify {
            suite,
            n,
            n_max,
            family_cap,
            format,
            out,
        } => {
            let closed = !cfg.strict_membership;
            let report = match suite.as_str() {
                "program1" => hull::program1_suite(bits),
                "slopes" => {
                    if n_max < 9 {
                        return Err(CliError::Usage("slopes needs --n-max >= 9".into()));
                    }
                    hull::check_convexity_slopes(n_max)
                }
                "closure" => {
                    let mut r = hull::verify_closure(catalog::TransformOp::A, 100, n);
                    r.merge(hull::verify_closure(catalog::TransformOp::C, 100, n));
                    r
                }
                "containment" => hull::verify_containment(n.max(300), family_cap, bits, closed),
                "all" => {
                    let mut r = hull::program1_suite(bits);
                    r.merge(hull::check_convexity_slopes(n_max.max(9)));
                    r.merge(hull::verify_closure(catalog::TransformOp::A, 100, n));
                    r.merge(hull::verify_closure(catalog::TransformOp::C, 100, n));
                    r.merge(hull::verify_containment(n.max(300), family_cap, bits, closed));
                    r
                }
                other => {
                    return Err(CliError::Usage(format!("unknown suite {other:?}")));
                }
            };
            emit_report(&report, &format, &out, &cfg)
        }
        Command::Dual {
            table3,
            envelope,
            out,
        } => {
            let env = if table3 {
                beta::table3_envelope()
            } else {
                let path = envelope
                    .ok_or_else(|| CliError::Usage("need --table3 or --envelope FILE".into()))?;
                let text = fs::read_to_string(&path)?;
                let v: Json = serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("malformed envelope JSON: {e}")))?;
                beta::envelope_from_json(&v).map_err(|e| CliError::Usage(e.to_string()))?
            };
            let hull = beta::envelope_hull(&env).map_err(|e| CliError::Math(e.to_string()))?;
            let duals =
                beta::dual_pairs(&env, &hull.chain).map_err(|e| CliError::Math(e.to_string()))?;
            let check = env.validate();
            let payload = json!({
                "chain": hull.chain.iter().map(|p| json!([fmt_rat(&p.x), fmt_rat(&p.y)])).collect::<Vec<_>>(),
                "junction_disagreements": check.discontinuities.iter().map(|(i, x, l, r)| json!({
                    "after_row": i, "alpha": fmt_rat(x), "left": fmt_rat(l), "right": fmt_rat(r),
                })).collect::<Vec<_>>(),
                "pairs": duals.iter().map(|d| json!({
                    "k": fmt_rat(&d.k),
                    "l": fmt_rat(&d.l),
                    "kept": d.kept,
                    "dominates_envelope": d.dominates,
                    "catalog_match": d.catalog_match,
                    "new": d.is_new(),
                    "note": d.note,
                })).collect::<Vec<_>>(),
            });
            write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&payload).unwrap()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize {
            hull: hull_path,
            n,
            objective,
            param,
            from,
            to,
            out,
        } => {
            let h = match hull_path {
                Some(p) => {
                    let text = fs::read_to_string(&p)?;
                    let v: Json = serde_json::from_str(&text)
                        .map_err(|e| CliError::Usage(format!("malformed hull JSON: {e}")))?;
                    hull::hull_from_json(&v).map_err(|e| CliError::Usage(e.to_string()))?
                }
                None => hull::build_hull(n),
            };
            let text = fs::read_to_string(&objective)?;
            let v: Json = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("malformed objective JSON: {e}")))?;
            match param {
                None => {
                    let (obj, cons) =
                        objective_from_json(&v).map_err(|e| CliError::Usage(e.to_string()))?;
                    let opt = minimize(h.polygon(), &obj, &cons, None).map_err(map_opt_err)?;
                    let payload = json!({
                        "value": fmt_rat(&opt.value),
                        "argmin": [fmt_rat(&opt.argmin.x), fmt_rat(&opt.argmin.y)],
                        "infimum_only": opt.strict_boundary.is_some(),
                        "witness": opt.strict_boundary.as_ref().map(|sb| json!({
                            "point": [fmt_rat(&sb.witness.x), fmt_rat(&sb.witness.y)],
                            "value": fmt_rat(&sb.witness_value),
                        })),
                    });
                    write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&payload).unwrap()))?;
                    Ok(ExitCode::SUCCESS)
                }
                Some(name) => {
                    let lo = parse_cli_rat(from.as_deref(), "--from")?;
                    let hi = parse_cli_rat(to.as_deref(), "--to")?;
                    let (pobj, pcons) = parametric_from_json(&v).map_err(CliError::Usage)?;
                    let pw = exppair::optimizer::sweep::sweep(
                        h.polygon(),
                        &pobj,
                        &pcons,
                        &lo,
                        &hi,
                        &name,
                    )
                    .map_err(map_opt_err)?;
                    let payload = json!({
                        "parameter": name,
                        "pieces": pw.pieces.iter().map(|p| {
                            let (num, den) = p.expr.render(&name);
                            json!({
                                "lo": p.lo.describe(),
                                "hi": p.hi.describe(),
                                "num": num,
                                "den": den,
                                "argmin_sample": [fmt_rat(&p.argmin_sample.x), fmt_rat(&p.argmin_sample.y)],
                            })
                        }).collect::<Vec<_>>(),
                    });
                    write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&payload).unwrap()))?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Reproduce { theorem, emit, out } => {
            let (report, table) = apps::reproduce(&theorem)
                .ok_or_else(|| CliError::Usage(format!("unknown theorem id {theorem:?}")))?;
            match emit.as_str() {
                "csv" => {
                    let table = table.ok_or_else(|| {
                        CliError::Usage(format!("theorem {theorem} has no piecewise table"))
                    })?;
                    let content = format!("{}{}", timestamp_line(&cfg), table.to_csv());
                    write_or_print(&out, &content)?;
                    if report.passed() {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        Ok(ExitCode::from(EXIT_MATH))
                    }
                }
                "json" => {
                    let payload = json!({
                        "report": report.to_json(),
                        "table": table.map(|t| t.to_json()),
                    });
                    write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&payload).unwrap()))?;
                    if report.passed() {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        Ok(ExitCode::from(EXIT_MATH))
                    }
                }
                _ => emit_report(&report, "text", &out, &cfg),
            }
        }
        Command::Catalog { action } => match action {
            CatalogAction::Export {
                family_cap,
                no_derivative_table,
                out,
            } => {
                if family_cap < 3 {
                    return Err(CliError::Usage("--family-cap must be at least 3".into()));
                }
                let entries =
                    catalog::enumerate_known_pairs(!no_derivative_table, family_cap, bits);
                let payload = catalog::catalog_json(&entries);
                write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&payload).unwrap()))?;
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn map_opt_err(e: OptError) -> CliError {
    match e {
        OptError::Infeasible => CliError::Math("feasible region is empty".into()),
        other => CliError::Math(other.to_string()),
    }
}

fn parse_cli_rat(s: Option<&str>, flag: &str) -> Result<Rat, CliError> {
    let s = s.ok_or_else(|| CliError::Usage(format!("{flag} required with --param")))?;
    parse_rat(s).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

/// Parametric objective JSON: "num"/"den" are 3-arrays whose entries are
/// either a rational string (constant) or a 2-array [c0, c1] meaning
/// c0 + c1 * t; the first two entries of each must be constant. Constraint
/// right-hand sides use the same convention.
fn parametric_from_json(v: &Json) -> Result<(ParamObjective, Vec<ParamConstraint>), String> {
    let coeff_const = |e: &Json, what: &str| -> Result<Rat, String> {
        e.as_str()
            .ok_or_else(|| format!("{what} must be a constant rational string"))
            .and_then(|s| parse_rat(s).map_err(|x| x.to_string()))
    };
    let coeff_affine = |e: &Json, what: &str| -> Result<Poly, String> {
        match e {
            Json::String(s) => Ok(Poly::constant(
                parse_rat(s).map_err(|x| x.to_string())?,
            )),
            Json::Array(a) if a.len() == 2 => {
                let c0 = coeff_const(&a[0], what)?;
                let c1 = coeff_const(&a[1], what)?;
                Ok(Poly::affine(c0, c1))
            }
            _ => Err(format!("{what} must be a string or a [c0, c1] pair")),
        }
    };
    let triple = |key: &str| -> Result<(Rat, Rat, Poly), String> {
        let arr = v
            .get(key)
            .and_then(Json::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| format!("objective: {key} must be a 3-array"))?;
        Ok((
            coeff_const(&arr[0], key)?,
            coeff_const(&arr[1], key)?,
            coeff_affine(&arr[2], key)?,
        ))
    };
    let (a, b, c) = triple("num")?;
    let (d, e, f) = if v.get("den").is_some() {
        triple("den")?
    } else {
        (
            Rat::new(0.into(), 1.into()),
            Rat::new(0.into(), 1.into()),
            Poly::constant(Rat::new(1.into(), 1.into())),
        )
    };
    let mut pcons = Vec::new();
    if let Some(arr) = v.get("constraints").and_then(Json::as_array) {
        for cst in arr {
            let g = coeff_const(&cst["g"], "g")?;
            let h = coeff_const(&cst["h"], "h")?;
            let rhs = coeff_affine(&cst["t"], "t")?;
            let rel = Rel::parse(
                cst.get("rel")
                    .and_then(Json::as_str)
                    .ok_or_else(|| "constraint: rel".to_string())?,
            )
            .map_err(|e| e.to_string())?;
            pcons.push(ParamConstraint { g, h, rhs, rel });
        }
    }
    Ok((
        ParamObjective {
            a,
            b,
            c,
            d,
            e,
            f,
        },
        pcons,
    ))
}
