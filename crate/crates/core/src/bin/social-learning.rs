use std::path::PathBuf;

use clap::{Parser, Subcommand};
use social_learning::cli::{cmd_check, cmd_run, RunOverrides};

/// Social learning with uncertain Gaussian likelihood models.
///
/// Set SOCIAL_LEARNING_LOG (e.g. `info`, `debug`) for log output.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write the results table and summary.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        /// Results table path; the summary is written beside it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use this entry of [regimes] as the default evidence.
        #[arg(long)]
        regime: Option<String>,
        /// Add a linear-scale belief column.
        #[arg(long)]
        linear_beliefs: bool,
    },
    /// Check network and identifiability conditions and print the KL table.
    Check { config: PathBuf },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SOCIAL_LEARNING_LOG")).init();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = match Cli::parse().command {
        Command::Run {
            config,
            seed,
            horizon,
            runs,
            out: out_path,
            regime,
            linear_beliefs,
        } => {
            let o = RunOverrides {
                seed,
                horizon,
                runs,
                out: out_path,
                regime,
                linear_beliefs,
            };
            cmd_run(&config, &o, &mut out, &mut err)
        }
        Command::Check { config } => cmd_check(&config, &mut out, &mut err),
    };
    std::process::exit(code);
}
