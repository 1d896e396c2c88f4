use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use semisym::classify::ClassifyOptions;
use semisym::corpus;
use semisym::metric_file::{load_metric_file, LoadError, MetricFile};
use semisym::report::{golden_diff, golden_record, render_text, run_analysis, GoldenRecord};
use semisym::spinor::lemma_suite;
use semisym::symmetry::DEFAULT_TOL;

#[derive(Parser)]
#[command(name = "semisym", version, about = "Curvature conditions and Petrov types of closed-form metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full per-point analysis of a metric file.
    Analyze(AnalyzeArgs),
    /// Classification summary of every point of a metric file.
    Classify {
        /// Metric file, or the name of a built-in corpus metric.
        file: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// The built-in corpus.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Component-level checks of the two-spinor identities.
    Lemmas {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Metric file, or the name of a built-in corpus metric.
    file: String,
    /// Analyze only this point.
    #[arg(long, conflicts_with = "all_points")]
    point: Option<String>,
    /// Analyze every point (the default).
    #[arg(long)]
    all_points: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compare the commutator residuals against explicit differentiation.
    #[arg(long)]
    cross_validate: bool,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Names of the built-in metrics.
    List,
    /// Runs every built-in metric against its golden record.
    Run {
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write fresh golden records to this directory instead of comparing.
        #[arg(long)]
        write_golden: Option<PathBuf>,
    },
}

fn load(file: &str) -> Result<MetricFile, LoadError> {
    let path = Path::new(file);
    if !path.exists() {
        if let Some(builtin) = corpus::load_builtin(file) {
            return builtin;
        }
    }
    load_metric_file(path)
}

fn fail(message: impl std::fmt::Display, code: i32) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code as u8)
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn analyze(args: AnalyzeArgs) -> ExitCode {
    let file = match load(&args.file) {
        Ok(f) => f,
        Err(e) => return fail(&e, e.exit_code()),
    };
    let opts = ClassifyOptions {
        tol: args.tol,
        seed: args.seed,
        cross_validate: args.cross_validate,
    };
    match run_analysis(&file, args.point.as_deref(), &opts) {
        Ok(reports) => {
            if args.json {
                println!("{}", to_json(&reports));
            } else {
                print!("{}", render_text(&reports));
                if args.cross_validate {
                    for r in &reports {
                        for c in r.cross_validation.iter().flatten() {
                            println!(
                                "  {} {:?}: disagreement {:.3e}",
                                r.point.name, c.condition, c.disagreement
                            );
                        }
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e, e.exit_code()),
    }
}

fn classify(file: &str, tol: f64, json: bool) -> ExitCode {
    let file = match load(file) {
        Ok(f) => f,
        Err(e) => return fail(&e, e.exit_code()),
    };
    let opts = ClassifyOptions {
        tol,
        ..ClassifyOptions::default()
    };
    match run_analysis(&file, None, &opts) {
        Ok(reports) => {
            let summary: Vec<_> = reports.iter().map(|r| &r.classification).collect();
            if json {
                println!("{}", to_json(&summary));
            } else {
                for c in summary {
                    println!("{}/{}: {} ({})", file.name(), c.point, c.branch, c.petrov);
                    for w in &c.warnings {
                        println!("  warning: {w}");
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e, e.exit_code()),
    }
}

fn corpus_run(tol: f64, write_golden: Option<PathBuf>) -> ExitCode {
    let start = Instant::now();
    let opts = ClassifyOptions {
        tol,
        ..ClassifyOptions::default()
    };
    let mut mismatches = 0;
    for name in corpus::builtin_names() {
        let file = match corpus::load_builtin(name).expect("listed name") {
            Ok(f) => f,
            Err(e) => return fail(format!("{name}: {e}"), e.exit_code()),
        };
        let reports = match run_analysis(&file, None, &opts) {
            Ok(r) => r,
            Err(e) => return fail(format!("{name}: {e}"), e.exit_code()),
        };
        let record = golden_record(name, &reports);
        if let Some(dir) = &write_golden {
            let path = dir.join(format!("{name}.json"));
            if let Err(e) = std::fs::write(&path, to_json(&record) + "\n") {
                return fail(format!("cannot write {}: {e}", path.display()), 1);
            }
            println!("{name}: wrote {}", path.display());
            continue;
        }
        let stored: GoldenRecord = match serde_json::from_str(corpus::golden_source(name).unwrap_or("")) {
            Ok(g) => g,
            Err(e) => return fail(format!("{name}: unreadable golden record: {e}"), 1),
        };
        let diff = golden_diff(&stored, &record);
        if diff.is_empty() {
            let branches: std::collections::BTreeSet<_> =
                record.points.values().map(|p| p.branch.as_str()).collect();
            let branches: Vec<_> = branches.into_iter().collect();
            println!("PASS {name} ({} points, {})", record.points.len(), branches.join(", "));
        } else {
            mismatches += 1;
            println!("FAIL {name}");
            for d in diff {
                println!("  {d}");
            }
        }
    }
    println!("corpus run finished in {:.2} s", start.elapsed().as_secs_f64());
    if mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn lemmas(json: bool) -> ExitCode {
    let checks = lemma_suite();
    if json {
        println!("{}", to_json(&checks));
    } else {
        for c in &checks {
            let expect = if c.expect_zero { "= 0" } else { "!= 0" };
            let status = if c.passed { "PASS" } else { "FAIL" };
            println!("{status} {:<36} expect {expect:<5} residual {:.3e}", c.name, c.residual);
        }
    }
    if checks.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze(args) => analyze(args),
        Command::Classify { file, tol, json } => classify(&file, tol, json),
        Command::Corpus(CorpusCommand::List) => {
            for name in corpus::builtin_names() {
                let points = corpus::load_builtin(name)
                    .and_then(Result::ok)
                    .map_or(0, |f| f.metric.points().len());
                println!("{name} ({points} points)");
            }
            ExitCode::SUCCESS
        }
        Command::Corpus(CorpusCommand::Run { tol, write_golden }) => corpus_run(tol, write_golden),
        Command::Lemmas { json } => lemmas(json),
    }
}
