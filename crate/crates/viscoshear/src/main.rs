use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use viscoshear::{parse_config, run, Command, Formats, Pool, Status};

#[derive(Parser)]
#[command(name = "viscoshear", version, about = "Spectral stability of viscously diffusing shear flows")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tune M so that k*(0) = 1 - delta
    Calibrate(Common),
    /// k*(t) on a uniform time grid over [0, T]
    KstarSweep(Common),
    /// Unstable eigenvalue c_i(k) at t = T
    Eigencurve(Common),
    /// Fidelity checks plus both scenarios
    Verify(Common),
    /// Periodic-channel scenario
    Torus(Common),
    /// Whole-line scenario
    Line(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides out_dir in the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg
    #[arg(long, value_parser = Formats::parse)]
    format: Option<Formats>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match cli.cmd {
        Cmd::Calibrate(c) => (Command::Calibrate, c),
        Cmd::KstarSweep(c) => (Command::KstarSweep, c),
        Cmd::Eigencurve(c) => (Command::Eigencurve, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Torus(c) => (Command::Torus, c),
        Cmd::Line(c) => (Command::Line, c),
    };
    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.config.display());
            return ExitCode::from(Status::Usage as u8);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", common.config.display());
            return ExitCode::from(Status::Usage as u8);
        }
    };
    if let Some(o) = common.out {
        cfg.out_dir = o;
    }
    if let Some(f) = common.format {
        cfg.formats = f;
    }
    let pool = match Pool::from_env() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::Usage as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cmd, &cfg, &pool, &mut stdout) {
        Ok(s) => ExitCode::from(s as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
