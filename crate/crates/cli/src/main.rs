//! `swaplab` — reduction, local-search, transition-graph, verification,
//! embedding and benchmark pipelines over SAT and facility-location
//! instances.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure (or a
//! non-embeddable matrix), 2 usage or parse error, 3 enumeration guard
//! exceeded.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod io_util;

#[derive(Parser)]
#[command(
    name = "swaplab",
    version,
    about = "Single-swap local search laboratory: SAT-based instance constructions, \
             brute-force audits, embeddings and benches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a MUFL/DKM/DFKM instance from a wsat2 file.
    Reduce(ReduceArgs),
    /// Run single-swap (or flip) local search from an initial solution.
    Search(SearchArgs),
    /// Enumerate the full transition graph as an edge-list CSV.
    Tg(TgArgs),
    /// Audit instances against the structural checks; exit 0 iff all pass.
    Verify(VerifyArgs),
    /// Test Euclidean embeddability and recover point coordinates.
    Embed(EmbedArgs),
    /// Benchmark local search against brute-force optima on random instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// Input wsat2 file (std for mufl/dkm, nae for dfkm).
    #[arg(long = "in")]
    input: String,
    /// Target objective: mufl, dkm or dfkm.
    #[arg(long)]
    target: String,
    /// Stretch factor c as a rational in (1,2); dkm/dfkm only.
    #[arg(long, default_value = "3/2")]
    c: String,
    /// Output instance JSON path.
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct SearchArgs {
    /// Instance JSON or wsat2 file.
    #[arg(long = "in")]
    input: String,
    /// Initial solution: `lift:<bits>`, `indices:<i,j,...>` (labels like
    /// x1,!x2,b1 allowed), `bits:<bits>` for SAT inputs, or `random`.
    #[arg(long)]
    init: String,
    /// Pivot rule: best or first.
    #[arg(long, default_value = "best")]
    pivot: String,
    /// Seed for `--init random`.
    #[arg(long)]
    seed: Option<u64>,
    /// Trace CSV output path.
    #[arg(long)]
    trace: Option<String>,
}

#[derive(Args)]
struct TgArgs {
    /// Instance JSON or wsat2 file.
    #[arg(long = "in")]
    input: String,
    /// Edge-list CSV output path.
    #[arg(long)]
    out: String,
    /// Cap on the number of enumerated solutions.
    #[arg(long, default_value_t = 1u128 << 20)]
    guard: u128,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input wsat2 or reduced-instance JSON; omit when using --samples.
    #[arg(long = "in")]
    input: Option<String>,
    /// Number of seeded random instances to audit instead of a file.
    #[arg(long)]
    samples: Option<usize>,
    /// Largest variable count for sampled instances.
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    /// Largest clause count for sampled instances.
    #[arg(long, default_value_t = 3)]
    mmax: usize,
    /// Largest clause weight for sampled instances.
    #[arg(long, default_value_t = 3)]
    max_weight: u64,
    /// Target objective: mufl, dkm, dfkm or all.
    #[arg(long, default_value = "all")]
    target: String,
    /// Stretch factor c for dkm/dfkm constructions.
    #[arg(long, default_value = "3/2")]
    c: String,
    /// Seed for sampled instances and sampled checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on enumerated solution spaces.
    #[arg(long, default_value_t = 1u128 << 20)]
    guard: u128,
    /// Fail (exit 3) if any check had to be skipped by the guard.
    #[arg(long)]
    exhaustive: bool,
    /// Samples for the Gamma positivity sweep.
    #[arg(long, default_value_t = 10_000)]
    gamma_samples: usize,
    /// Sample budget for the membership bound on large spaces.
    #[arg(long, default_value_t = 10_000)]
    membership_samples: usize,
    /// Report JSON output path.
    #[arg(long)]
    report: Option<String>,
}

#[derive(Args)]
struct EmbedArgs {
    /// Instance JSON (dkm/dfkm) or matrix CSV with an `n` header line.
    #[arg(long = "in")]
    input: String,
    /// Eigenvalue tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Points CSV output path.
    #[arg(long)]
    points: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// Objective to bench: mufl or dkm.
    #[arg(long, default_value = "mufl")]
    target: String,
    /// Instance family: `metric` (random distances) or `reduced`
    /// (constructed from random SAT instances).
    #[arg(long, default_value = "metric")]
    mode: String,
    /// Number of instances.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Seed for instance generation and initial solutions.
    #[arg(long)]
    seed: u64,
    /// Facility count for metric mufl instances.
    #[arg(long, default_value_t = 8)]
    facilities: usize,
    /// Extra client-only points for metric mufl instances.
    #[arg(long, default_value_t = 2)]
    extra_clients: usize,
    /// Point count for metric dkm instances.
    #[arg(long, default_value_t = 8)]
    points: usize,
    /// Budget K for metric dkm instances.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Largest client weight.
    #[arg(long, default_value_t = 5)]
    max_weight: u64,
    /// Largest variable count in reduced mode.
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    /// Largest clause count in reduced mode.
    #[arg(long, default_value_t = 3)]
    mmax: usize,
    /// Pivot rule for the searched side.
    #[arg(long, default_value = "best")]
    pivot: String,
    /// Cap on enumerated solution spaces for the brute-force optimum.
    #[arg(long, default_value_t = 1u128 << 20)]
    guard: u128,
    /// Bench CSV output path.
    #[arg(long)]
    out: String,
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes, e.g. under `swaplab ... | head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reduce(args) => commands::cmd_reduce(args),
        Command::Search(args) => commands::cmd_search(args),
        Command::Tg(args) => commands::cmd_tg(args),
        Command::Verify(args) => commands::cmd_verify(args),
        Command::Embed(args) => commands::cmd_embed(args),
        Command::Bench(args) => commands::cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
