use anyhow::Context;
use clap::{Parser, Subcommand};
use hecke_trace::catalog;
use hecke_trace::laurent::DEFAULT_PRIME;
use hecke_trace::verify::{run_group, Check, GroupReport, RunConfig, VerifyError};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Builds matrix models of the Hecke algebras of G4–G15 and verifies that
/// their canonical trace is symmetrising.
#[derive(Parser, Debug)]
#[command(name = "hecke-trace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification pipeline on catalog groups.
    Verify(VerifyArgs),
    /// Write the group catalog as JSON.
    DumpCatalog {
        #[arg(long, short, default_value = "catalog.json")]
        output: PathBuf,
    },
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Comma-separated group ids (g4, G11, ...) or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    groups: Vec<String>,
    /// Comma-separated checks or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    checks: Vec<String>,
    /// Modular determinant trials; by default enough for a 2^-100 bound.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Directory for the generator-matrix cache.
    #[arg(long, env = "HECKE_TRACE_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Where to write the JSON report.
    #[arg(long, short, default_value = "report.json")]
    output: PathBuf,
    /// Groups verified concurrently.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Run det-exact even on groups where it is not feasible by default.
    #[arg(long)]
    force_exact: bool,
    /// Total number of terms the exactly expanded Gram blocks may hold.
    #[arg(long, default_value_t = RunConfig::default().exact_term_budget)]
    exact_term_budget: usize,
    /// Print stage details.
    #[arg(long, short, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Suppress the summary table.
    #[arg(long, short)]
    quiet: bool,
}

/// Failure of the command line rather than of a check: exit code 2.
struct UsageError(String);

fn parse_groups(raw: &[String]) -> Result<Vec<&'static str>, UsageError> {
    if raw.iter().any(|g| g.eq_ignore_ascii_case("all")) {
        return Ok(catalog::all().iter().map(|g| g.id.as_str()).collect());
    }
    let mut out = Vec::new();
    for g in raw {
        let spec = catalog::spec(g.trim()).map_err(|e| UsageError(e.to_string()))?;
        if !out.contains(&spec.id.as_str()) {
            out.push(spec.id.as_str());
        }
    }
    Ok(out)
}

/// `None` means the defaults of each group.
fn parse_checks(raw: &[String]) -> Result<Option<BTreeSet<Check>>, UsageError> {
    if raw.iter().any(|c| c == "all") {
        return Ok(None);
    }
    raw.iter().map(|c| c.trim().parse::<Check>().map_err(UsageError)).collect::<Result<_, _>>().map(Some)
}

fn run_all(ids: &[&'static str], cfg: &RunConfig, jobs: usize, verbose: bool) -> Vec<Result<GroupReport, VerifyError>> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<GroupReport, VerifyError>>>> = Mutex::new((0..ids.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.min(ids.len()).max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(id) = ids.get(i) else { break };
                if verbose {
                    eprintln!("{id}: running");
                }
                let r = run_group(id, cfg);
                if verbose {
                    eprintln!("{id}: done");
                }
                results.lock().expect("no panics while holding the lock")[i] = Some(r);
            });
        }
    });
    results.into_inner().expect("workers joined").into_iter().map(|r| r.expect("every group ran")).collect()
}

fn summary(reports: &[GroupReport], verbose: bool) -> String {
    let mut names: Vec<&str> = Vec::new();
    for c in Check::ALL {
        if reports.iter().any(|r| r.stage(c.name()).is_some()) {
            names.push(c.name());
        }
    }
    let mut out = format!("{:<6}", "group");
    for n in &names {
        out += &format!(" {n:>w$}", w = n.len().max(4));
    }
    out += "  det A\n";
    for r in reports {
        out += &format!("{:<6}", r.group);
        for n in &names {
            let cell = match r.stage(n) {
                Some(s) if s.pass => "ok",
                Some(_) => "FAIL",
                None => "-",
            };
            out += &format!(" {cell:>w$}", w = n.len().max(4));
        }
        let det = r
            .stage("det-exact")
            .and_then(|s| s.details.get("determinant"))
            .or_else(|| r.stage("det-modular").and_then(|s| s.details.get("observed")))
            .and_then(|v| v.as_str())
            .unwrap_or("");
        out += &format!("  {det}\n");
        if verbose {
            for s in &r.stages {
                let mut d = s.details.clone();
                if let Some(o) = d.as_object_mut() {
                    o.remove("evaluations");
                }
                out += &format!("    {:<18} {:>8} ms  {d}\n", s.name, s.duration_ms);
            }
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    out += &format!("{passed}/{} groups pass\n", reports.len());
    out
}

fn verify(args: VerifyArgs) -> anyhow::Result<Result<bool, UsageError>> {
    let ids = match parse_groups(&args.groups) {
        Ok(ids) => ids,
        Err(e) => return Ok(Err(e)),
    };
    let checks = match parse_checks(&args.checks) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    let cfg = RunConfig {
        checks,
        trials: args.trials.map(|t| t as usize),
        seed: args.seed,
        prime: args.prime,
        cache_dir: args.cache_dir,
        force_exact: args.force_exact,
        exact_term_budget: args.exact_term_budget,
        ..RunConfig::default()
    };
    let mut reports = Vec::new();
    for r in run_all(&ids, &cfg, args.jobs as usize, args.verbose > 0) {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => return Ok(Err(UsageError(e.to_string()))),
        }
    }
    let json = serde_json::to_string_pretty(&reports)?;
    std::fs::write(&args.output, json + "\n").with_context(|| format!("writing {}", args.output.display()))?;
    if !args.quiet {
        print!("{}", summary(&reports, args.verbose > 0));
    }
    Ok(Ok(reports.iter().all(|r| r.pass)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::DumpCatalog { output } => std::fs::write(&output, catalog::dump())
            .with_context(|| format!("writing {}", output.display()))
            .map(|_| Ok(true)),
    };
    match outcome {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(UsageError(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
