use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tmm_cli::analyze::{self, AnalyzeArgs};
use tmm_cli::profile::{self, ProfileArgs};
use tmm_cli::simulate::{self, SimulateArgs};
use tmm_cli::{server, CliError};

#[derive(Parser)]
#[command(
    name = "tmm",
    version,
    about = "Tennis momentum analysis, simulation and live tracking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a point log and write the per-point momentum series
    Analyze(AnalyzeArgs),
    /// Run a Monte Carlo experiment and write its report
    Simulate(SimulateArgs),
    /// Build player histories from a directory of match logs
    Profile(ProfileArgs),
    /// Run the live session service
    Serve {
        #[arg(long, default_value = "127.0.0.1:7878")]
        bind: SocketAddr,
        /// Directory served as static files (e.g. the coach console build)
        #[arg(long, value_name = "DIR")]
        static_dir: Option<PathBuf>,
    },
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze(args) => {
            let samples = analyze::run(&args)?;
            println!("{} points -> {}", samples.len(), args.out.display());
        }
        Command::Simulate(args) => {
            let report = simulate::run(&args)?;
            print!("{}", simulate::summary(&report));
        }
        Command::Profile(args) => {
            let file = profile::run(&args)?;
            println!(
                "{}: {} matches, {}: {} matches -> {}",
                file.player1.label,
                file.player1.matches.len(),
                file.player2.label,
                file.player2.matches.len(),
                args.out.display()
            );
        }
        Command::Serve { bind, static_dir } => {
            let runtime =
                tokio::runtime::Runtime::new().map_err(|e| CliError::io("starting runtime", e))?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(bind)
                    .await
                    .map_err(|e| CliError::io(format!("binding {bind}"), e))?;
                tracing::info!(
                    "listening on {}",
                    listener
                        .local_addr()
                        .map_err(|e| CliError::io("binding", e))?
                );
                server::serve(listener, static_dir, server::HEARTBEAT)
                    .await
                    .map_err(|e| CliError::io("serving", e))
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
