use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use renyi_cli::app::invoke;
use renyi_cli::params::{parse_assignment, Model, ParamMap};
use renyi_cli::{exit, CliError};

#[derive(Parser)]
#[command(
    name = "renyi",
    version,
    about = "Petz-Renyi entropies of coherent excitations in free bosonic models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thermal chiral current on the half light-ray.
    Chiral {
        /// Test function, e.g. "bump 0.5 1.5" or "scale 2 gauss-bump 1 0.3".
        #[arg(long)]
        test_function: Option<String>,
        /// Inverse temperature.
        #[arg(long)]
        beta: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Free massive scalar in the Rindler wedge.
    Wedge {
        /// Field Cauchy datum.
        #[arg(long)]
        phi: Option<String>,
        /// Momentum Cauchy datum.
        #[arg(long)]
        pi: Option<String>,
        #[arg(long)]
        mass: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Finite-mode standard subspace read from a TOML file, checked against the Fock oracle.
    Subspace {
        /// Subspace description file.
        file: Option<PathBuf>,
        /// Fock occupation cutoff per mode.
        #[arg(long)]
        cutoff: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the acceptance criteria and writes acceptance.csv.
    Selftest {
        /// Comma-separated criterion numbers (1 to 10).
        #[arg(long)]
        criteria: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Comma-separated Renyi parameters in [0, 1).
    #[arg(long)]
    alpha_grid: Option<String>,
    /// Relative tolerance for quadrature and extrapolation.
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory for CSV files and the manifest.
    #[arg(long, default_value = "renyi-out")]
    out_dir: PathBuf,
    /// TOML config with [chiral], [wedge], [subspace] or [selftest] tables, or a run manifest to replay.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Any parameter as KEY=VALUE; repeatable. Named flags take precedence.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn flag(map: &mut ParamMap, key: &str, value: Option<String>) {
    if let Some(v) = value {
        map.insert(key.to_string(), v);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut flags = ParamMap::new();
    let (model, common) = match cli.command {
        Command::Chiral {
            test_function,
            beta,
            common,
        } => {
            flag(&mut flags, "test_function", test_function);
            flag(&mut flags, "beta", beta);
            (Model::Chiral, common)
        }
        Command::Wedge { phi, pi, mass, common } => {
            flag(&mut flags, "phi", phi);
            flag(&mut flags, "pi", pi);
            flag(&mut flags, "mass", mass);
            (Model::Wedge, common)
        }
        Command::Subspace { file, cutoff, common } => {
            flag(&mut flags, "file", file.map(|p| p.display().to_string()));
            flag(&mut flags, "cutoff", cutoff);
            (Model::Subspace, common)
        }
        Command::Selftest { criteria, common } => {
            flag(&mut flags, "criteria", criteria);
            (Model::Selftest, common)
        }
    };
    let mut layered = ParamMap::new();
    for s in &common.set {
        let (k, v) = parse_assignment(s)?;
        layered.insert(k, v);
    }
    flag(&mut flags, "alpha_grid", common.alpha_grid);
    flag(&mut flags, "tol", common.tol);
    flag(&mut flags, "seed", common.seed);
    layered.extend(flags);

    let mut stdout = std::io::stdout();
    let manifest = invoke(model, &layered, common.config.as_deref(), &common.out_dir, &mut stdout)?;
    for (name, digest) in &manifest.outputs {
        println!("{}  {}", &digest[..16], common.out_dir.join(name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit::SUCCESS as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
