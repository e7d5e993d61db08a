use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spa_witness_cli::commands::{
    cmd_analyze, cmd_cmax, cmd_geometry, cmd_hakye, AnalyzeArgs, CmaxArgs, GeometryArgs, HakyeArgs,
    Outcome,
};

/// Entanglement witnesses, their structural physical approximations and
/// PPT-based violation checks.
#[derive(Debug, Parser)]
#[command(name = "spa-witness", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare lambda0(W) with lambda0(W^Gamma) and PPT-check both approximations.
    Analyze(AnalyzeArgs),
    /// Analyze or scan the 3x3 family W[a,b,c;theta].
    Hakye(HakyeArgs),
    /// Estimate inf <mu nu|sigma|mu nu> over product vectors.
    Cmax(CmaxArgs),
    /// Emit scatter data of tr(W rho) against PT negativity and purity.
    Geometry(GeometryArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Hakye(a) => cmd_hakye(a),
        Command::Cmax(a) => cmd_cmax(a),
        Command::Geometry(a) => cmd_geometry(a),
    };
    match result {
        Ok(Outcome { stdout, status }) => {
            print!("{stdout}");
            ExitCode::from(status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
