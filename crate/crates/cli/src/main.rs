use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use irn_seeding::Error;
use irn_seeding_cli::commands::{self, Selection, DEFAULT_SIMULATION_N, DEFAULT_TRIALS};
use irn_seeding_cli::{exit_code, parse_scenario};

/// Optimal seeding on inhomogeneous random networks.
#[derive(Debug, Parser)]
#[command(name = "irn-seed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Giant-component probabilities, small-component sizes and phases.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal seed type and count.
    Optimize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every analytic quantity with a Monte Carlo estimate.
    Simulate {
        file: PathBuf,
        /// Simulated network size.
        #[arg(long, default_value_t = DEFAULT_SIMULATION_N)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Product states to simulate.
        #[arg(long, value_enum, default_value_t = StateArg::Both)]
        state: StateArg,
        /// Comma-separated subset of: giant, small, adoption.
        #[arg(long, value_delimiter = ',', default_value = "giant,small,adoption")]
        quantities: Vec<QuantityArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal integer seed count across network sizes.
    Sweep {
        file: PathBuf,
        /// Comma-separated, strictly increasing network sizes.
        #[arg(long = "n-list")]
        n_list: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StateArg {
    Good,
    Bad,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum QuantityArg {
    Giant,
    Small,
    Adoption,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { file, out } => {
            let s = parse_scenario(&file)?;
            commands::analyze(&s)?.write_csv(output(out.as_deref())?)?;
        }
        Command::Optimize { file, out } => {
            let s = parse_scenario(&file)?;
            let table = commands::optimize_report(&s).map_err(|e| match e {
                Error::UnboundedSeeding { .. } | Error::MarginalCostTooLow { .. } => anyhow::Error::new(e).context(
                    "no finite optimum: the good-state small-component benefit of a seed \
                     outweighs its bad-state cost, so seeding more is always better",
                ),
                e => e.into(),
            })?;
            table.write_csv(output(out.as_deref())?)?;
        }
        Command::Simulate {
            file,
            n,
            trials,
            seed,
            state,
            quantities,
            out,
        } => {
            let s = parse_scenario(&file)?;
            let selection = Selection {
                good: matches!(state, StateArg::Good | StateArg::Both),
                bad: matches!(state, StateArg::Bad | StateArg::Both),
                giant: quantities.contains(&QuantityArg::Giant),
                small: quantities.contains(&QuantityArg::Small),
                adoption: quantities.contains(&QuantityArg::Adoption),
            };
            let report = commands::simulate(&s, n, trials, seed, selection)?;
            report.write_csv(output(out.as_deref())?)?;
            let agreeing = report.rows.iter().filter(|r| r.agrees()).count();
            eprintln!("{agreeing}/{} quantities agree within 3 standard errors", report.rows.len());
        }
        Command::Sweep { file, n_list, out } => {
            let s = parse_scenario(&file)?;
            let rows = commands::sweep(&s, &commands::parse_n_list(&n_list)?)?;
            commands::write_sweep_csv(&rows, output(out.as_deref())?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
