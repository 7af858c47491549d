use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use config::{Config, Format, Overrides};

/// Wave-manifold geometry for quadratic conservation laws: region
/// classification, Hugoniot curves, admissible arcs, surface meshes and
/// the oracle verification suite.
#[derive(Debug, Parser)]
#[command(name = "wavemanifold", version)]
struct Cli {
    /// TOML configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    b1: Option<f64>,
    /// Offset c = a3 - a2.
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Clip window |z| <= z_max for arcs and sweeps.
    #[arg(long, global = true)]
    z_max: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long = "membership-tol", global = true)]
    membership: Option<f64>,
    #[arg(long = "root-tol", global = true)]
    root: Option<f64>,
    /// Dead band around zero for sign-based classification.
    #[arg(long = "boundary-tol", global = true)]
    boundary: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Region label and surface values at a chart point.
    Classify(commands::ClassifyArgs),
    /// Sample a Hugoniot or Hugoniot' curve.
    Curve(commands::CurveArgs),
    /// Admissible arcs of a Hugoniot curve (JSON).
    Arcs(commands::ArcsArgs),
    /// Mesh a surface over a (z, t) grid.
    Mesh(commands::MeshArgs),
    /// Run oracle checks; exits 4 if any fails.
    Verify(commands::VerifyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Overrides {
        b1: cli.b1,
        c: cli.c,
        z_max: cli.z_max,
        format: cli.format,
        seed: cli.seed,
        membership: cli.membership,
        root: cli.root,
        boundary: cli.boundary,
    };
    let result = Config::load(cli.config.as_deref(), &flags).and_then(|cfg| match &cli.command {
        Command::Classify(a) => commands::classify(&cfg, a),
        Command::Curve(a) => commands::curve(&cfg, a),
        Command::Arcs(a) => commands::arcs(&cfg, a),
        Command::Mesh(a) => commands::mesh_cmd(&cfg, a),
        Command::Verify(a) => commands::verify(&cfg, a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wavemanifold: {e}");
            e.exit()
        }
    }
}
