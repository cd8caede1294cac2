//! `dyverify`: runs the exact verification suites and writes JSON-lines reports.

mod config;
mod error;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use yangian_core::correspondence::correspond_relation;
use yangian_core::report::all_passed;
use yangian_core::{run_suite, CheckRecord, RunConfig, Suite, Verdict};

use config::Settings;
use error::CliError;

#[derive(Parser)]
#[command(name = "dyverify", version, about = "Exact checks of the free-boson realization of DY_ħ(sl_N) at level k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more verification suites.
    Verify(VerifyArgs),
    /// Map the q-affine relations onto the Yangian double relations.
    Correspondence(CorrespondenceArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Config file with [run], [oracle] and [report] sections. Flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated suites, or `all`: ope-lemmas, variant-invariance, linear-relations,
    /// n2-reduction, oracle-relations (alias oracle), cross-engine,
    /// correspondence, screening-check.
    #[arg(long)]
    suite: Option<String>,
    /// Rank: the algebra is sl_N.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Level, as `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<String>,
    /// Oracle truncation level.
    #[arg(long = "L")]
    level: Option<usize>,
    /// Oracle exponent window `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Comma-separated relations, e.g. `y1,y6`.
    #[arg(long)]
    relations: Option<String>,
    /// `â` bosonization: standard or alternate.
    #[arg(long)]
    variant: Option<String>,
    /// Reading of the E⁻ current, e.g. `minus-plus+ahat` or `literal`.
    #[arg(long)]
    en_reading: Option<String>,
    /// Oracle momentum sector: lattice, generic or `[l1,l2,...]`.
    #[arg(long)]
    momenta: Option<String>,
    /// JSON-lines report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Draws the non-integer oracle momenta from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Print only the summary line.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct CorrespondenceArgs {
    /// All eight relations.
    #[arg(long, conflicts_with = "relation")]
    all: bool,
    /// One q-relation, 1 to 8.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
    relation: Option<u8>,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Correspondence(args) => correspondence(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dyverify: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn settings(args: &VerifyArgs) -> Result<Settings, CliError> {
    let mut s = match &args.config {
        Some(p) => Settings::from_file(p)?,
        None => Settings::default(),
    };
    s.set("suite", args.suite.clone());
    s.set("N", args.n.map(|n| n.to_string()));
    s.set("k", args.k.clone());
    s.set("hbar", args.hbar.clone());
    s.set("L", args.level.map(|l| l.to_string()));
    s.set("window", args.window.clone());
    s.set("relations", args.relations.clone());
    s.set("variant", args.variant.clone());
    s.set("en-reading", args.en_reading.clone());
    s.set("momenta", args.momenta.clone());
    s.set("seed", args.seed.map(|x| x.to_string()));
    s.set("path", args.report.as_ref().map(|p| p.display().to_string()));
    Ok(s)
}

fn verify(args: VerifyArgs) -> Result<bool, CliError> {
    let s = settings(&args)?;
    let suites = s.suites()?;
    let cfg = s.run_config()?;
    let report = s.report_path();
    let mut records = Vec::new();
    let mut failure = None;
    for suite in suites {
        match run(suite, &cfg, args.quiet) {
            Ok(mut r) => records.append(&mut r),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    // the report is written even when a suite stopped early
    if let Some(p) = &report {
        write_report(p, &records)?;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    summarize(&records);
    Ok(all_passed(&records))
}

fn run(suite: Suite, cfg: &RunConfig, quiet: bool) -> Result<Vec<CheckRecord>, CliError> {
    let records = run_suite(suite, cfg)?;
    if !quiet {
        for r in &records {
            println!("{}", r.line());
        }
    }
    Ok(records)
}

fn summarize(records: &[CheckRecord]) {
    let count = |v: Verdict| records.iter().filter(|r| r.verdict == v).count();
    let mut parts = vec![format!("{} checks", records.len()), format!("{} pass", count(Verdict::Pass)), format!("{} fail", count(Verdict::Fail))];
    for v in [Verdict::Deferred, Verdict::Obstructed, Verdict::Inconclusive] {
        if count(v) > 0 {
            parts.push(format!("{} {v}", count(v)));
        }
    }
    println!("{}", parts.join(", "));
}

fn write_report(path: &Path, records: &[CheckRecord]) -> Result<(), CliError> {
    let io = |source| CliError::Report {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    for r in records {
        let line = serde_json::to_string(r).expect("records serialize");
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

fn correspondence(args: CorrespondenceArgs) -> Result<bool, CliError> {
    let numbers: Vec<usize> = match (args.all, args.relation) {
        (_, Some(n)) => vec![usize::from(n)],
        (true, None) => (1..=8).collect(),
        (false, None) => return Err(CliError::Usage("pass --all or --relation <1..8>".into())),
    };
    let mut ok = true;
    for n in &numbers {
        let rep = correspond_relation(*n)?;
        println!("{}", rep.render());
        ok &= rep.matched();
    }
    let records: Vec<CheckRecord> = run_suite(Suite::Correspondence, &RunConfig::default())?
        .into_iter()
        .filter(|r| numbers.iter().any(|n| r.relation.starts_with(&format!("({n})"))))
        .collect();
    if let Some(p) = &args.report {
        write_report(p, &records)?;
    }
    let matched = records.iter().filter(|r| r.verdict == Verdict::Pass).count();
    println!("{matched}/{} relations matched", records.len());
    Ok(ok)
}
