use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

use wstab::cones::{cone_membership, fnef_certificate, Membership};
use wstab::gitcalc::{verify_git_descent, CheckStatus};
use wstab::markings::WeightVector;
use wstab::morphisms::{pullback, pushforward, ReductionMap};
use wstab::picard::{DivisorClass, GitWeights, SpaceTag};

use wstab_cli::expr::{eval, parse};
use wstab_cli::report::SuiteReport;
use wstab_cli::suites::{run_all, run_suite, SuiteOptions};

/// Exact divisor-class calculator for moduli of weighted pointed rational
/// curves: tautological classes, reduction/replacement transport, F-curve
/// pairings, F-nef certificates and exact cone-membership probes.
#[derive(Parser)]
#[command(name = "wstab", version, max_term_width = 100)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the randomized suites (echoed in report headers).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for fingerprint sweeps (output order is unaffected).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Enforce the stronger admissibility threshold (total weight above 4)
    /// when an ambient weighted space is constructed from --weights.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct AmbientArgs {
    /// Number of markings; alone it selects M0bar(n).
    #[arg(long)]
    n: Option<usize>,

    /// Weights "a1,...,an" (entries p/q or integers) selecting the weighted
    /// space.
    #[arg(long)]
    weights: Option<String>,

    /// GIT weights "x1,...,xn" with total exactly 2, selecting the quotient.
    #[arg(long)]
    x: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression (or a batch file) to a divisor class.
    Eval {
        #[command(flatten)]
        ambient: AmbientArgs,
        /// Batch file: one expression per line, '#' comments.
        #[arg(long)]
        batch: Option<PathBuf>,
        /// The expression, unless --batch is given.
        expr: Option<String>,
    },
    /// F-nefness certificate: the full F-curve degree sweep of a class.
    Nef {
        #[command(flatten)]
        ambient: AmbientArgs,
        #[arg(long)]
        class: String,
        /// Include the full fingerprint in the JSON output.
        #[arg(long)]
        verbose: bool,
    },
    /// Exact cone membership of a target among generators read from a file
    /// (prefix the path with '@'), one expression per line.
    Member {
        #[command(flatten)]
        ambient: AmbientArgs,
        #[arg(long)]
        target: String,
        #[arg(long)]
        gens: String,
    },
    /// Pull an expression back from the weighted space to M0bar(n).
    Pull {
        #[arg(long)]
        weights: String,
        expr: String,
    },
    /// Push an expression forward from M0bar(n) to the weighted space.
    Push {
        #[arg(long)]
        weights: String,
        expr: String,
    },
    /// Run a verification suite (or "all").
    Verify {
        /// One of: keel, positivity, mumford, replacement, discrepancy,
        /// n6-relations, git-descent, theorem-nef, all.
        suite: String,
        /// Range "lo..hi" (inclusive) or a single value.
        #[arg(long)]
        n: Option<String>,
        /// Sample count for randomized suites.
        #[arg(long)]
        samples: Option<usize>,
        /// Weight vector for the suites that accept one.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Symbolic GIT descent report for one linearization.
    GitVerify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        x: String,
    },
}

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore the error if a pool already exists (e.g. repeated flag).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn parse_weights(text: &str, strict: bool) -> Result<WeightVector, String> {
    let w: WeightVector = text.parse().map_err(|e| format!("--weights: {e}"))?;
    if !w.is_admissible() {
        return Err(format!(
            "--weights: total weight {} must exceed 2",
            w.total()
        ));
    }
    if strict && !w.is_strict_admissible() {
        return Err(format!(
            "--weights: total weight {} must exceed 4 under --strict",
            w.total()
        ));
    }
    Ok(w)
}

fn ambient_space(args: &AmbientArgs, strict: bool) -> Result<SpaceTag, String> {
    match (&args.x, &args.weights, args.n) {
        (Some(x), None, n) => {
            let gw: GitWeights = x.parse().map_err(|e| format!("--x: {e}"))?;
            if let Some(n) = n {
                if n != gw.n() {
                    return Err(format!("--n {n} conflicts with {} GIT weights", gw.n()));
                }
            }
            Ok(SpaceTag::git_quotient(gw))
        }
        (None, Some(w), n) => {
            let wv = parse_weights(w, strict)?;
            if let Some(n) = n {
                if n != wv.n() {
                    return Err(format!("--n {n} conflicts with {} weights", wv.n()));
                }
            }
            SpaceTag::hassett(wv).map_err(|e| e.to_string())
        }
        (None, None, Some(n)) => SpaceTag::moduli_bar(n).map_err(|e| e.to_string()),
        (None, None, None) => Err("declare the ambient space with --n, --weights or --x".into()),
        _ => Err("--weights and --x are mutually exclusive".into()),
    }
}

fn class_output(
    input: &str,
    class: &DivisorClass,
    warnings: &[String],
    as_json: bool,
) -> String {
    if as_json {
        json!({
            "input": input,
            "class": class.to_json(),
            "warnings": warnings,
        })
        .to_string()
    } else {
        let mut out = String::new();
        for w in warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str(&class.to_json().to_string());
        out
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Eval {
            ambient,
            batch,
            expr,
        } => {
            let space = ambient_space(ambient, cli.strict)?;
            match (batch, expr) {
                (Some(path), None) => eval_batch(path, &space, cli.json),
                (None, Some(text)) => {
                    let ast = parse(text).map_err(|d| d.to_string())?;
                    let (class, warnings) =
                        eval(&ast, &space).map_err(|e| e.to_string())?;
                    println!("{}", class_output(text, &class, &warnings, cli.json));
                    Ok(ExitCode::SUCCESS)
                }
                _ => Err("provide exactly one of EXPR or --batch FILE".into()),
            }
        }
        Command::Nef {
            ambient,
            class,
            verbose,
        } => {
            let space = ambient_space(ambient, cli.strict)?;
            let ast = parse(class).map_err(|d| d.to_string())?;
            let (c, warnings) = eval(&ast, &space).map_err(|e| e.to_string())?;
            let cert = fnef_certificate(&c).map_err(|e| e.to_string())?;
            if cli.json {
                let mut value = cert.to_json(*verbose);
                value["input"] = json!(class);
                value["warnings"] = json!(warnings);
                println!("{value}");
            } else {
                for w in &warnings {
                    println!("warning: {w}");
                }
                println!(
                    "{}: min degree {} over {} F-curves",
                    if cert.is_fnef() { "f-nef" } else { "NOT f-nef" },
                    cert.min_degree(),
                    cert.fingerprint().len()
                );
                for v in cert.violators() {
                    println!("  violator: {v}");
                }
            }
            Ok(if cert.is_fnef() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            })
        }
        Command::Member {
            ambient,
            target,
            gens,
        } => {
            let space = ambient_space(ambient, cli.strict)?;
            let target_ast = parse(target).map_err(|d| d.to_string())?;
            let (target_class, _) = eval(&target_ast, &space).map_err(|e| e.to_string())?;
            let target_bar =
                wstab::cones::on_moduli_bar(&target_class).map_err(|e| e.to_string())?;

            let path = gens.strip_prefix('@').unwrap_or(gens);
            let body = std::fs::read_to_string(path)
                .map_err(|e| format!("--gens {path}: {e}"))?;
            let mut generators = Vec::new();
            let mut labels = Vec::new();
            let mut failures = Vec::new();
            for (idx, line) in body.lines().enumerate() {
                let text = line.trim();
                if text.is_empty() || text.starts_with('#') {
                    continue;
                }
                match parse(text).map_err(|d| d.to_string()).and_then(|ast| {
                    eval(&ast, &space).map_err(|e| e.to_string())
                }) {
                    Ok((class, _)) => match wstab::cones::on_moduli_bar(&class) {
                        Ok(c) => {
                            generators.push(c);
                            labels.push(text.to_string());
                        }
                        Err(e) => failures.push(json!({
                            "line": idx + 1,
                            "input": text,
                            "error": e.to_string(),
                        })),
                    },
                    Err(e) => failures.push(json!({
                        "line": idx + 1,
                        "input": text,
                        "error": e,
                    })),
                }
            }
            if !failures.is_empty() {
                if cli.json {
                    println!("{}", json!({"failed_lines": failures}));
                } else {
                    for f in &failures {
                        eprintln!("failed line {}: {}", f["line"], f["error"]);
                    }
                }
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            let outcome =
                cone_membership(&target_bar, &generators).map_err(|e| e.to_string())?;
            let found = matches!(outcome, Membership::Found(_));
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "target": target,
                        "generators": labels,
                        "outcome": outcome.to_json(),
                    })
                );
            } else {
                match &outcome {
                    Membership::Found(c) => {
                        println!("certificate:");
                        for (label, coeff) in labels.iter().zip(&c.coefficients) {
                            if !num_traits::Zero::is_zero(coeff) {
                                println!("  {coeff} * {label}");
                            }
                        }
                    }
                    Membership::NotFound(f) => {
                        println!(
                            "not in the cone of the supplied generators (Farkas vector of length {})",
                            f.vector.len()
                        );
                    }
                }
            }
            Ok(if found {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            })
        }
        Command::Pull { weights, expr } => {
            let w = parse_weights(weights, cli.strict)?;
            let f = ReductionMap::new(w.n(), w.clone()).map_err(|e| e.to_string())?;
            let ast = parse(expr).map_err(|d| d.to_string())?;
            let (class, warnings) =
                eval(&ast, &f.target_space()).map_err(|e| e.to_string())?;
            let up = pullback(&f, &class).map_err(|e| e.to_string())?;
            println!("{}", class_output(expr, &up, &warnings, cli.json));
            Ok(ExitCode::SUCCESS)
        }
        Command::Push { weights, expr } => {
            let w = parse_weights(weights, cli.strict)?;
            let f = ReductionMap::new(w.n(), w.clone()).map_err(|e| e.to_string())?;
            let ast = parse(expr).map_err(|d| d.to_string())?;
            let (class, warnings) =
                eval(&ast, &f.source_space()).map_err(|e| e.to_string())?;
            let down = pushforward(&f, &class).map_err(|e| e.to_string())?;
            println!("{}", class_output(expr, &down, &warnings, cli.json));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            n,
            samples,
            weights,
        } => {
            let opts = SuiteOptions {
                n_range: n.as_deref().map(parse_range).transpose()?,
                samples: *samples,
                seed: cli.seed,
                weights: weights
                    .as_deref()
                    .map(|w| parse_weights(w, cli.strict))
                    .transpose()?,
            };
            if suite == "all" {
                let reports = run_all(&opts);
                let passed = reports.iter().all(|r| r.passed);
                if cli.json {
                    println!(
                        "{}",
                        json!({
                            "suites": reports,
                            "passed": passed,
                        })
                    );
                } else {
                    for report in &reports {
                        print!("{}", report.render_text());
                    }
                    println!("\nsummary:");
                    for report in &reports {
                        println!(
                            "  {:<14} {}",
                            report.suite,
                            if report.passed { "ok" } else { "VIOLATED" }
                        );
                    }
                }
                return Ok(exit_for(passed));
            }
            let report = run_suite(suite, &opts)?;
            print_report(&report, cli.json);
            Ok(exit_for(report.passed))
        }
        Command::GitVerify { n, x } => {
            let gw: GitWeights = x.parse().map_err(|e| format!("--x: {e}"))?;
            if let Some(n) = n {
                if *n != gw.n() {
                    return Err(format!("--n {n} conflicts with {} GIT weights", gw.n()));
                }
            }
            let report = verify_git_descent(&gw).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!(
                    "GIT descent at x=({}) on (P^1)^{} x P^1:",
                    report.x, report.n
                );
                for check in &report.checks {
                    println!("  [{}] {}", check.status.as_str(), check.name);
                    if check.status == CheckStatus::Violated {
                        if let Some(w) = &check.witness {
                            println!("        {w}");
                        }
                    }
                }
            }
            Ok(exit_for(report.passed))
        }
    }
}

fn exit_for(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn print_report(report: &SuiteReport, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string(report).expect("serializable"));
    } else {
        print!("{}", report.render_text());
    }
}

/// Parses "lo..hi" (inclusive) or a single integer.
fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let t = text.trim();
    if let Some((lo, hi)) = t.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|e| format!("--n {t:?}: {e}"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|e| format!("--n {t:?}: {e}"))?;
        if lo > hi {
            return Err(format!("--n {t:?}: empty range"));
        }
        Ok((lo, hi))
    } else {
        let v: usize = t.parse().map_err(|e| format!("--n {t:?}: {e}"))?;
        Ok((v, v))
    }
}

fn eval_batch(path: &PathBuf, space: &SpaceTag, as_json: bool) -> Result<ExitCode, String> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| format!("--batch {}: {e}", path.display()))?;
    let mut results = Vec::new();
    let mut any_failed = false;
    for (idx, line) in body.lines().enumerate() {
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let entry = match parse(text) {
            Ok(ast) => match eval(&ast, space) {
                Ok((class, warnings)) => json!({
                    "line": idx + 1,
                    "input": text,
                    "class": class.to_json(),
                    "warnings": warnings,
                }),
                Err(e) => {
                    any_failed = true;
                    json!({"line": idx + 1, "input": text, "error": e.to_string()})
                }
            },
            Err(d) => {
                any_failed = true;
                json!({
                    "line": idx + 1,
                    "input": text,
                    "error": d.to_string(),
                    "expected": d.expected,
                    "offset": d.offset,
                })
            }
        };
        results.push(entry);
    }
    if as_json {
        println!("{}", json!({"results": results}));
    } else {
        for entry in &results {
            if entry.get("error").is_some() {
                println!("line {}: error: {}", entry["line"], entry["error"]);
            } else {
                println!("line {}: {}", entry["line"], entry["class"]);
            }
        }
    }
    Ok(if any_failed {
        ExitCode::from(EXIT_USAGE)
    } else {
        ExitCode::SUCCESS
    })
}
