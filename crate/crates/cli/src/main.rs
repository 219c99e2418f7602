use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nonent::commands::{self, Output};
use nonent::{parse_seed, CliError, Format, Settings};
use nonent_core::{RngSeed, Tolerance};

/// Classify bipartite unitaries, analyse measurement schemes and profile
/// entanglement along unitary paths.
#[derive(Debug, Parser)]
#[command(name = "nonent", version)]
struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_EPS)]
    tol: f64,
    /// RNG seed, decimal or 0x-prefixed hex.
    #[arg(long, global = true, value_parser = parse_seed, default_value = "0xB05C")]
    seed: u64,
    /// Factor dimensions d1 d2.
    #[arg(long, global = true, num_args = 2, value_names = ["D1", "D2"])]
    dims: Option<Vec<usize>>,
    /// Grid steps for path profiles.
    #[arg(long, global = true, default_value_t = nonent_core::dynamics::DEFAULT_STEPS)]
    steps: usize,
    /// Number of seeded random inputs or states.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Output file (a path prefix for `path`, which writes .csv and .json).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a unitary is a product, a dressed swap, or entangling.
    Classify { unitary: PathBuf },
    /// Classify the slice map φ ↦ U(φ ⊗ φ0).
    Slice { unitary: PathBuf, phi0: PathBuf },
    /// Outcome statistics, measured observable and disturbance of a scheme.
    Measure { scheme: PathBuf, state: PathBuf },
    /// Entanglement profile along exp(itH) from the identity to an endpoint.
    Path {
        endpoint: PathBuf,
        /// Treat the input as the Hermitian generator H instead of the endpoint.
        #[arg(long)]
        generator: bool,
        /// Probe state (Matrix JSON); defaults to the first basis vector.
        #[arg(long)]
        probe: Option<PathBuf>,
    },
    /// Run the built-in invariant suites.
    Verify,
    /// Emit a named JSON fixture.
    Gen { name: String },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let tol = Tolerance::new(cli.tol).map_err(CliError::from)?;
    let dims = cli.dims.map(|d| (d[0], d[1]));
    let settings = Settings {
        tol,
        seed: RngSeed(cli.seed),
        dims,
        steps: cli.steps,
        samples: cli.samples,
        format: cli.format,
    };
    let output: Output = match &cli.command {
        Command::Classify { unitary } => commands::classify(&settings, unitary)?,
        Command::Slice { unitary, phi0 } => commands::slice(&settings, unitary, phi0)?,
        Command::Measure { scheme, state } => commands::measure(&settings, scheme, state)?,
        Command::Path {
            endpoint,
            generator,
            probe,
        } => commands::path(&settings, endpoint, *generator, probe.as_deref())?,
        Command::Verify => commands::verify(&settings)?,
        Command::Gen { name } => commands::gen(&settings, name)?,
    };
    commands::emit(&output, cli.format, cli.out.as_deref())?;
    Ok(output.code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
