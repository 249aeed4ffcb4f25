use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{Format, RunConfig};

pub const UNITS_NOTE: &str = "hbar = m = 1";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    units: &'static str,
    command: &'a str,
    lambda: f64,
    q: f64,
    rows: &'a [T],
}

/// Renders rows as CSV (with a leading `#` units line) or as a JSON envelope.
pub fn render<T: Serialize>(cfg: &RunConfig, command: &str, rows: &[T]) -> anyhow::Result<String> {
    match cfg.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            let body = String::from_utf8(w.into_inner()?)?;
            Ok(format!("# units: {UNITS_NOTE}\n{body}"))
        }
        Format::Json => {
            let env = Envelope {
                units: UNITS_NOTE,
                command,
                lambda: cfg.lambda,
                q: cfg.q,
                rows,
            };
            Ok(serde_json::to_string_pretty(&env)? + "\n")
        }
    }
}

/// Writes `text` to `<out>/<stem>.<ext>` when an output directory is set,
/// otherwise to stdout.
pub fn emit(cfg: &RunConfig, stem: &str, text: &str) -> anyhow::Result<()> {
    match &cfg.out {
        Some(dir) => {
            let ext = match cfg.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            write_file(dir, &format!("{stem}.{ext}"), text)
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn write_file(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
