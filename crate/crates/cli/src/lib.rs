//! Library behind the `boxwig` binary: argument grammar, presets, scans and output.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod presets;
pub mod scan;

use serde_json::json;

pub use args::{Cli, Command, Settings};
pub use error::{CliError, Result};
pub use presets::parse_bc;
pub use scan::{run_scan, ScanRow, ScanSpec, Target};

/// Runs a parsed invocation, writing its output.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<()> {
    let settings = Settings::resolve(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = settings.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| {
        CliError::Usage(format!("cannot start {:?} threads: {e}", settings.threads))
    })?;
    let outcome = pool.install(|| commands::execute(&cli.command, &settings))?;
    let sidecar = output::Sidecar {
        tool: "boxwig",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name().to_string(),
        argv,
        parameters: json!({ "command": cli.command, "settings": settings }),
        notes: outcome.notes,
    };
    output::emit(&outcome.payload, settings.out.as_deref(), &sidecar)
}
