//! `photon-cluster`: build 2D or 3D cluster states on a simulated chip and
//! verify them.
//!
//! Exit codes: 0 when every run verifies, 2 on a verification failure, 1 on
//! usage or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use photon_cluster::lattice::grid_graph;
use photon_cluster::netsim::{build_2d_layout, build_3d_layout, ControlMode, NetworkLayout, Switching};
use photon_cluster::protocol::CorrectionMode;
use photon_cluster::report::{
    recheck_report, target_3d, to_dot, verify_2d, verify_3d, ReportError, RunOptions, VerificationReport,
};

const USAGE: u8 = 1;
const FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "photon-cluster", version, about = "Build and verify photonic cluster states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Square-lattice cluster state on `rows` rails over `cols` time steps.
    Build2d {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Topological 3D cluster state on `ny × nz` rails over `cols` time steps.
    Build3d {
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        nz: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a saved report against a freshly generated target.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SwitchingArg {
    Active,
    Passive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ControlArg {
    Individual,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorrectionsArg {
    Immediate,
    Deferred,
}

#[derive(Args)]
struct Common {
    #[arg(long, env = "PHOTON_CLUSTER_SEED", default_value_t = 0)]
    seed: u64,
    /// Defaults to active in 2D; 3D layouts are passive only.
    #[arg(long, value_enum)]
    switching: Option<SwitchingArg>,
    #[arg(long, value_enum, default_value = "individual")]
    control: ControlArg,
    #[arg(long, value_enum, default_value = "deferred")]
    corrections: CorrectionsArg,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the target graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the layout descriptor as JSON.
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Include the event log in the report.
    #[arg(long)]
    events: bool,
    /// Record wall time (makes reports non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Run this many consecutive seeds in parallel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
}

impl Common {
    fn options(&self, default_switching: Switching) -> RunOptions {
        RunOptions {
            seed: self.seed,
            corrections: match self.corrections {
                CorrectionsArg::Immediate => CorrectionMode::Immediate,
                CorrectionsArg::Deferred => CorrectionMode::Deferred,
            },
            control: match self.control {
                ControlArg::Individual => ControlMode::Individual,
                ControlArg::Global => ControlMode::Global,
            },
            switching: match self.switching {
                Some(SwitchingArg::Active) => Switching::ActiveFlipflop,
                Some(SwitchingArg::Passive) => Switching::PassivePbs,
                None => default_switching,
            },
            events: self.events,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run_trials(
    common: &Common,
    opts: RunOptions,
    run: impl Fn(&RunOptions) -> Result<VerificationReport, ReportError> + Sync,
) -> Result<(), CliError> {
    let timed = |o: RunOptions| -> Result<VerificationReport, ReportError> {
        let start = Instant::now();
        let mut r = run(&o)?;
        if common.timing {
            r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        Ok(r)
    };
    let reports: Vec<VerificationReport> = if common.trials == 1 {
        vec![timed(opts)?]
    } else {
        let seeds: Vec<u64> = (0..common.trials).map(|i| opts.seed.wrapping_add(i)).collect();
        let results: Vec<_> = std::thread::scope(|s| {
            let handles: Vec<_> = seeds
                .iter()
                .map(|&seed| {
                    let timed = &timed;
                    s.spawn(move || timed(RunOptions { seed, ..opts }))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("trial thread panicked"))
                .collect()
        });
        results.into_iter().collect::<Result<_, _>>()?
    };

    let json = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        let all: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| serde_json::to_value(r).expect("report serializes"))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "trials": all })).expect("trials serialize")
    };
    match &common.out {
        Some(path) => write_file(path, &format!("{json}\n"))?,
        None => println!("{json}"),
    }

    let failed: Vec<u64> = reports.iter().filter(|r| !r.pass).map(|r| r.seed).collect();
    for r in &reports {
        eprintln!(
            "seed {}: {} ({} measurements, {} mismatched generators)",
            r.seed,
            if r.pass { "pass" } else { "FAIL" },
            r.resources.measurement_count,
            r.mismatched_generators.len()
        );
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("verification failed for seeds {failed:?}")))
    }
}

fn write_layout(
    common: &Common,
    layout: Result<NetworkLayout, photon_cluster::netsim::SimError>,
) -> Result<(), CliError> {
    if let Some(path) = &common.layout {
        let layout = layout.map_err(|e| CliError::Usage(e.to_string()))?;
        write_file(path, &format!("{}\n", layout.to_json()))?;
    }
    Ok(())
}

fn build2d(rows: usize, cols: usize, common: &Common) -> Result<(), CliError> {
    if rows == 0 || cols == 0 {
        return Err(CliError::Usage("--rows and --cols must be at least 1".into()));
    }
    let opts = common.options(Switching::ActiveFlipflop);
    if let Some(path) = &common.dot {
        write_file(path, &to_dot(&grid_graph(rows, cols).map_err(ReportError::from)?))?;
    }
    if common.layout.is_some() {
        write_layout(common, build_2d_layout(rows, cols, opts.switching, opts.control))?;
    }
    run_trials(common, opts, |o| verify_2d(rows, cols, o))
}

fn build3d(ny: usize, nz: usize, cols: usize, common: &Common) -> Result<(), CliError> {
    if ny == 0 || nz == 0 || cols == 0 {
        return Err(CliError::Usage("--ny, --nz and --cols must be at least 1".into()));
    }
    let opts = common.options(Switching::PassivePbs);
    if opts.switching != Switching::PassivePbs {
        return Err(CliError::Usage("3D layouts support passive switching only".into()));
    }
    if let Some(path) = &common.dot {
        write_file(path, &to_dot(&target_3d(cols, ny, nz).map_err(ReportError::from)?))?;
    }
    if common.layout.is_some() {
        write_layout(common, build_3d_layout(ny, nz, cols, opts.control))?;
    }
    run_trials(common, opts, |o| verify_3d(cols, ny, nz, o))
}

fn verify(path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed report: {e}")))?;
    let entries = match value.get("trials") {
        Some(serde_json::Value::Array(items)) => items.clone(),
        Some(_) => return Err(CliError::Usage("malformed report: \"trials\" is not a list".into())),
        None => vec![value],
    };
    let mut failures = 0;
    for entry in entries {
        let report: VerificationReport =
            serde_json::from_value(entry).map_err(|e| CliError::Usage(format!("malformed report: {e}")))?;
        let bad = recheck_report(&report)?;
        for &v in &bad {
            let c = report.photons.list.iter().find(|p| p.id == v).map(|p| p.coords);
            eprintln!(
                "seed {}: generator of vertex {v} at {c:?} is not stabilized",
                report.seed
            );
        }
        if bad.is_empty() {
            eprintln!("seed {}: pass", report.seed);
        } else {
            failures += 1;
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failures} report(s) failed verification")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Build2d { rows, cols, common } => build2d(*rows, *cols, common),
        Command::Build3d { ny, nz, cols, common } => build3d(*ny, *nz, *cols, common),
        Command::Verify { report } => verify(report),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(FAILED)
        }
    }
}
