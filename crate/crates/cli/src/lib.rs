//! Batch front end for `squeezed-np`: figure-ready tables as CSV or JSON.

pub mod commands;
pub mod grid;
pub mod spec;
pub mod table;

use std::io::Write;

use anyhow::{Context, Result};

pub use commands::{execute, Output};
pub use spec::{Command, OutputFormat, Overrides, RunSpec};
pub use table::{format_number, Table};

/// Executes `spec` and writes the rendered output to its target.
pub fn run(spec: &RunSpec) -> Result<()> {
    let text = execute(spec)?.render(spec.output_format)?;
    match &spec.output_path {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
