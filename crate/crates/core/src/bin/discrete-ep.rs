use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use discrete_ep::cli_io::{cmd_check, cmd_compare, cmd_convergence, cmd_simulate, CommandOptions, Method, OutputFormat};

/// Log verbosity is read from DISCRETE_EP_LOG (error, warn, info, debug, trace).
#[derive(Parser)]
#[command(name = "discrete-ep", version, about = "Discrete Euler-Poincaré integrators on SO(n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and write it out.
    Simulate(Flags),
    /// Run the invariant suite and print a pass/fail table.
    Check(Flags),
    /// Measure the convergence order over h, h/2, ... at final time steps·h.
    Convergence(Flags),
    /// Drift report for dep_mv, splitting_leapfrog and rk4 on the same data.
    Compare(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    #[arg(long, value_parser = ["dep_mv", "dep_chart", "splitting_first", "splitting_leapfrog", "rk4"])]
    method: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    h: Option<f64>,
}

impl Flags {
    fn options(&self) -> CommandOptions {
        CommandOptions {
            config: self.config.clone(),
            output: self.output.clone(),
            format: self.format.as_deref().map(|f| f.parse::<OutputFormat>().expect("checked by clap")),
            method: self.method.as_deref().map(|m| m.parse::<Method>().expect("checked by clap")),
            steps: self.steps,
            h: self.h,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("DISCRETE_EP_LOG", "warn")).init();
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = match &cli.command {
        Command::Simulate(f) => cmd_simulate(&f.options(), &mut out, &mut err),
        Command::Check(f) => cmd_check(&f.options(), &mut out, &mut err),
        Command::Convergence(f) => cmd_convergence(&f.options(), &mut out, &mut err),
        Command::Compare(f) => cmd_compare(&f.options(), &mut out, &mut err),
    };
    ExitCode::from(code as u8)
}
