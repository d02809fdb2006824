use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::cli::{Format, Output};
use crate::CliError;

/// Reals in CSV cells: 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).map_err(CliError::io)?;
    for row in rows {
        w.write_record(row).map_err(CliError::io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(e.into_error()))?;
    String::from_utf8(bytes).map_err(CliError::io)
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize> {
    config: &'a C,
    results: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_path: Option<&'a Value>,
}

pub fn json_document<C: Serialize>(
    config: &C,
    results: &Value,
    witness_path: Option<&Value>,
) -> Result<String, CliError> {
    let env = Envelope {
        config,
        results,
        witness_path,
    };
    let mut text = serde_json::to_string_pretty(&env).map_err(CliError::io)?;
    text.push('\n');
    Ok(text)
}

/// Format from `--format`, else from the extension of `--out`, else CSV.
pub fn resolve_format(output: &Output) -> Format {
    if let Some(f) = output.format {
        return f;
    }
    let ext = output
        .out
        .as_deref()
        .and_then(Path::extension)
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("json") => Format::Json,
        Some("svg") => Format::Svg,
        _ => Format::Csv,
    }
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so a failed run leaves nothing behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::output(path, e))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::output(path, e))?;
    tmp.persist(path)
        .map_err(|e| CliError::output(path, e.error))?;
    Ok(())
}

/// Sends a rendered artifact to `--out`, or to stdout when no path is given.
pub fn emit(output: &Output, contents: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
