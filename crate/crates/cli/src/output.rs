use std::io::Write;
use std::path::Path;

use glinf::qseries::QSeries;
use serde_json::Value;

use crate::config::{Format, Params};
use crate::error::{CliError, CliResult};

/// A command's result: the JSON document, an optional `(degree, ...)` table,
/// and whether every check it ran passed.
pub struct Artifact {
    pub json: Value,
    pub table: Option<Table>,
    pub passed: bool,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// One row per degree, one column per series.
    pub fn series(names: &[&str], series: &[&QSeries]) -> Self {
        let mut header = vec!["degree".to_string()];
        header.extend(names.iter().map(|s| s.to_string()));
        let cutoff = series.iter().map(|s| s.cutoff()).min().unwrap_or(0);
        let rows = (0..=cutoff)
            .map(|k| std::iter::once(k.to_string()).chain(series.iter().map(|s| s.coeff(k).to_string())).collect())
            .collect();
        Table { header, rows }
    }

    fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Commands without a degree table accept JSON only.
pub fn require_json(p: &Params, cmd: &str) -> CliResult<()> {
    if p.format() == Format::Csv {
        return Err(CliError::Config(format!("{cmd} writes JSON only; CSV is limited to degree tables")));
    }
    Ok(())
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn emit(a: &Artifact, p: &Params) -> CliResult<()> {
    let text = match (p.format(), &a.table) {
        (Format::Json, _) => to_pretty(&a.json),
        (Format::Csv, Some(t)) => t.render(),
        (Format::Csv, None) => return Err(CliError::Config("no degree table for CSV output".into())),
    };
    match &p.out {
        Some(path) => write_file(path, &text),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
