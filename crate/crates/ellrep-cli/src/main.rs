use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ellrep_cli::{run_count, run_fixture_checks, run_sweep, run_weil_table, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "ellrep",
    about = "Exact verification sweeps for a family of mod-ell Galois representations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum FormatArg {
    #[default]
    JsonLines,
    Markdown,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::JsonLines => OutputFormat::JsonLines,
            FormatArg::Markdown => OutputFormat::Markdown,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify every prime in a range and emit one report per prime.
    Verify {
        /// Lowest prime to verify (must exceed 7).
        #[arg(long)]
        ell_min: u64,
        /// Highest prime to verify (inclusive).
        #[arg(long)]
        ell_max: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Run the built-in regression battery on the ell = 7 example curve.
    Fixtures,
    /// Print the excluded-prime table for trace polynomials at p.
    WeilTable {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_degree: u64,
    },
    /// Count points on the family member E^ell over F_p.
    Count {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let outcome: anyhow::Result<ExitCode> = match cli.command {
        Command::Verify {
            ell_min,
            ell_max,
            jobs,
            format,
        } => {
            let cfg = RunConfig {
                ell_min,
                ell_max,
                parallelism: jobs,
                output_format: format.into(),
                ..RunConfig::default()
            };
            run_sweep(&cfg, &mut out).map(|summary| {
                if summary.all_hold() {
                    ExitCode::SUCCESS
                } else {
                    let _ = writeln!(
                        std::io::stderr(),
                        "verification FAILED at ell = {:?}",
                        summary.failed
                    );
                    ExitCode::from(1)
                }
            })
        }
        Command::Fixtures => run_fixture_checks(&mut out).map(|passed| {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }),
        Command::WeilTable { p, max_degree } => {
            let cfg = RunConfig {
                weil_p: p,
                weil_max_degree: max_degree,
                ..RunConfig::default()
            };
            run_weil_table(&cfg, &mut out).map(|()| ExitCode::SUCCESS)
        }
        Command::Count { ell, p } => run_count(ell, p, &mut out).map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            // a reader that closed the pipe early (e.g. `| head`) got
            // everything it asked for; don't call that an error
            if err
                .root_cause()
                .downcast_ref::<std::io::Error>()
                .map(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
                .unwrap_or(false)
            {
                return ExitCode::SUCCESS;
            }
            let _ = writeln!(std::io::stderr(), "error: {:#}", err);
            ExitCode::from(2)
        }
    }
}
