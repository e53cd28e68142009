use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lambdachirp::{final_observables, EquationVariant};
use lambdachirp_cli::commands::{self, RunOverrides};
use lambdachirp_cli::{selfcheck, CliError};

/// Non-RWA dynamics of a Lambda atom driven by chirped few-cycle pulses.
#[derive(Debug, Parser)]
#[command(name = "lambdachirp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one configuration and write its trajectory CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Step size, fs.
        #[arg(long)]
        dt: Option<f64>,
        /// Total integration window in fs, centred on t = 0.
        #[arg(long = "t-span")]
        t_span: Option<f64>,
        /// derived | paper-literal
        #[arg(long)]
        variant: Option<EquationVariant>,
    },
    /// Run the two-parameter grid described by the config's [sweep] section.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: LAMBDACHIRP_WORKERS, else all CPUs).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Regenerate a built-in scenario (2, 3 or 4) into a directory.
    Reproduce {
        #[arg(long)]
        figure: u8,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the invariant and oracle self-checks.
    Check,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            dt,
            t_span,
            variant,
        } => {
            let overrides = RunOverrides { dt, t_span, variant };
            let traj = commands::run(&config, &out, &overrides)?;
            let f = final_observables(&traj)?;
            eprintln!(
                "wrote {} ({} samples): |rho21| = {:.6}, rho11 = {:.6}, rho22 = {:.6}, rho33 = {:.6}",
                out.display(),
                traj.len(),
                f.abs_rho21,
                f.rho11,
                f.rho22,
                f.rho33
            );
        }
        Command::Sweep {
            config,
            out,
            workers,
        } => {
            let result = commands::sweep(&config, &out, workers)?;
            eprintln!(
                "wrote {} ({} cells, max observable {:.6})",
                out.display(),
                result.cells.len(),
                result.max_value().unwrap_or(f64::NAN)
            );
        }
        Command::Reproduce {
            figure,
            out,
            workers,
        } => {
            let path = commands::reproduce(figure, &out, workers)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Check => {
            let results = selfcheck::run_checks();
            let failed = results.iter().filter(|r| !r.passed).count();
            for r in &results {
                println!(
                    "[{}] {}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
            }
            if failed > 0 {
                return Err(CliError::CheckFailed(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
