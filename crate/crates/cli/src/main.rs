//! `jcm`: photon-number distributions and Jaynes-Cummings correlation sums
//! from the command line.

mod commands;
mod error;
mod state;
mod svg;
mod sweep;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jcm_core::dynamics::DynamicsConfig;
use jcm_core::xcheck::DEFAULT_ORACLE_DIM;

use commands::{dyn_run, moments_run, pmf_run, xcheck_run, xcheck_table, ModeArg};
use error::{CliError, CliResult};
use state::StateArgs;
use table::{Format, Table};

#[derive(Parser, Debug)]
#[command(
    name = "jcm",
    version,
    about = "Photon statistics and Jaynes-Cummings correlation sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Photon-number distribution rho_nn.
    Pmf(PmfArgs),
    /// Correlation sum S1 at and off resonance.
    Dyn(DynArgs),
    /// Closed-form moments against the computed distribution.
    Moments(MomentsArgs),
    /// Cross-validation suite.
    Xcheck(XcheckArgs),
    /// Batch runs from a TOML manifest.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Data file; without it the data go to standard output and the
    /// summary to standard error.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG plot file.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct PmfArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Detuning used for the weighted column.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DynArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long, default_value_t = 100.0)]
    zmax: f64,
    /// Samples per half period of the fastest term.
    #[arg(long, default_value_t = 20)]
    spp: usize,
    /// Which sums to sample: r, nr or both.
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct XcheckArgs {
    /// Run a single named check.
    #[arg(long)]
    only: Option<String>,
    /// Leading entries compared against the oracle.
    #[arg(long, default_value_t = DEFAULT_ORACLE_DIM)]
    dim: usize,
    /// Print the reports as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    manifest: PathBuf,
    /// Output directory; one subdirectory per run plus index.json.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json_line<T: serde::Serialize, W: Write>(mut w: W, v: &T) -> CliResult<()> {
    serde_json::to_writer(&mut w, v)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Data to `--out` (summary to stdout), or data to stdout (summary to stderr).
fn emit<T: serde::Serialize>(
    table: &Table,
    summary: &T,
    o: &OutputArgs,
    svg: impl FnOnce() -> String,
) -> CliResult<()> {
    match &o.out {
        Some(p) => {
            let mut f = create(p)?;
            table.write(o.format, &mut f)?;
            f.flush()?;
            write_json_line(io::stdout().lock(), summary)?;
        }
        None => {
            table.write(o.format, io::stdout().lock())?;
            write_json_line(io::stderr().lock(), summary)?;
        }
    }
    if let Some(p) = &o.svg {
        std::fs::write(p, svg()).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Pmf(a) => {
            let input = a.state.input()?;
            let out = pmf_run(&input.spec()?, input.policy()?, a.delta)?;
            emit(&out.table, &out.summary, &a.output, || out.svg())
        }
        Command::Dyn(a) => {
            let input = a.state.input()?;
            let cfg = DynamicsConfig {
                delta: a.delta,
                z_max: a.zmax,
                samples_per_period: a.spp,
                eps_tail: input.eps_tail,
                prefactor: 1.0,
            };
            let out = dyn_run(&input.spec()?, input.policy()?, &cfg, a.mode)?;
            emit(&out.table, &out.summary, &a.output, || out.svg())
        }
        Command::Moments(a) => {
            let input = a.state.input()?;
            let m = moments_run(&input.spec()?, input.policy()?)?;
            match &a.out {
                Some(p) => write_json_line(create(p)?, &m),
                None => write_json_line(io::stdout().lock(), &m),
            }
        }
        Command::Xcheck(a) => {
            let reports = xcheck_run(a.only.as_deref(), a.dim)?;
            if a.json {
                write_json_line(io::stdout().lock(), &reports)?;
            } else {
                print!("{}", xcheck_table(&reports));
            }
            let failed: Vec<&str> = reports
                .iter()
                .filter(|r| r.mandatory && !r.passed)
                .map(|r| r.name)
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Xcheck(format!(
                    "mandatory checks failed: {}",
                    failed.join(", ")
                )))
            }
        }
        Command::Sweep(a) => {
            let res = sweep::sweep(&a.manifest, &a.out, a.jobs)?;
            println!(
                "{} runs, {} failed; index at {}",
                res.runs,
                res.failed,
                res.index.display()
            );
            if res.failed > 0 {
                Err(CliError::Numeric(format!("{} of {} runs failed", res.failed, res.runs)))
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("jcm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
