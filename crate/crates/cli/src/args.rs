//! Command-line grammar and the optional JSON config file.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::scan::{Target, DEFAULT_RESOLUTION};

#[derive(Debug, Parser)]
#[command(
    name = "boxwig",
    version,
    about = "Particle in a box under general self-adjoint boundary conditions"
)]
pub struct Cli {
    /// Output file; a `<out>.json` sidecar records the invocation. Defaults to stdout (also `-`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for grid evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Bracket width at which root bisection stops.
    #[arg(long, global = true)]
    pub tol_root: Option<f64>,

    /// RNG seed for simulations.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// JSON file with defaults for the global flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Matrix, eigenvalues and regular/singular, local/non-local class of a boundary condition.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        bc: String,
    },
    /// Positive wave numbers k_1..k_N.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        bc: String,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Samples of the n-th normalized eigenfunction.
    Eigenfunction {
        #[arg(long, allow_hyphen_values = true)]
        bc: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Wigner function of the n-th eigenfunction with hbar = pc / k_n.
    Wigner {
        #[arg(long, allow_hyphen_values = true)]
        bc: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        pc: f64,
        #[arg(long, default_value_t = 201)]
        nx: usize,
        #[arg(long = "np", default_value_t = 401)]
        np: usize,
    },
    /// omega_n = |C+|^2 / N^2 for n = 1..N.
    Omega {
        #[arg(long, allow_hyphen_values = true)]
        bc: String,
        #[arg(long, default_value_t = 52)]
        n_max: usize,
    },
    /// Even/odd omega limits and the classical limit distribution.
    Limit {
        #[arg(long, allow_hyphen_values = true)]
        bc: String,
        #[arg(long, default_value_t = 1.0)]
        pc: f64,
        #[arg(long, default_value_t = 52)]
        n_max: usize,
    },
    /// k_n or omega_n over the (m0, m1) disk at fixed eta.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = Target::Omega)]
        target: Target,
        #[arg(long, default_value_t = 52)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Comma-separated beta values.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0"
        )]
        beta: Vec<f64>,
    },
    /// Monte-Carlo particle on a ring with a door at the junction.
    Ringdoor {
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 1e5)]
        t_max: f64,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long, default_value_t = 1)]
        replicas: u64,
        #[arg(long, default_value_t = 1.0)]
        speed: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Spectrum { .. } => "spectrum",
            Command::Eigenfunction { .. } => "eigenfunction",
            Command::Wigner { .. } => "wigner",
            Command::Omega { .. } => "omega",
            Command::Limit { .. } => "limit",
            Command::Scan { .. } => "scan",
            Command::Ringdoor { .. } => "ringdoor",
        }
    }
}

/// Config file contents; every field mirrors a global flag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub tol_root: Option<f64>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Global settings after merging flags over the config file over defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub tol_root: f64,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 42;

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let tol_root = cli
            .tol_root
            .or(file.tol_root)
            .unwrap_or(boxwig_core::spectrum::SpectrumOptions::default().bisection_tol);
        if !(tol_root > 0.0 && tol_root < 1e-3) {
            return Err(CliError::Usage(format!(
                "--tol-root must lie in (0, 1e-3), got {tol_root}"
            )));
        }
        let threads = cli.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        Ok(Settings {
            out: cli.out.clone().or(file.out),
            threads,
            tol_root,
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        })
    }
}
