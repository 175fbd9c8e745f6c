use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub fn open_output(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Pretty JSON followed by a newline, to `path` or stdout.
pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    let name = path.map_or("stdout".to_string(), |p| p.display().to_string());
    let write = |w: &mut dyn Write| writeln!(w, "{text}").and_then(|_| w.flush());
    let res = match path {
        Some(p) => write(&mut open_output(p)?),
        None => write(&mut std::io::stdout().lock()),
    };
    res.map_err(|source| CliError::Io { path: name, source })
}
