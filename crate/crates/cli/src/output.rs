//! Deterministic artifact writing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// Fixed 17-significant-digit rendering used in every CSV file.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `bytes` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// `{"command": .., "config": ..}` header shared by all artifacts.
pub fn echo<C: Serialize>(command: &str, config: &C) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(command.into()));
    m.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    Value::Object(m)
}

/// JSON artifact: the echo header merged with `body`.
pub fn write_json<C: Serialize, B: Serialize>(
    path: &Path,
    command: &str,
    config: &C,
    body: &B,
) -> Result<()> {
    let text = json_text(command, config, body);
    write_atomic(path, text.as_bytes())
}

pub fn json_text<C: Serialize, B: Serialize>(command: &str, config: &C, body: &B) -> String {
    let mut doc = echo(command, config);
    if let Value::Object(extra) = serde_json::to_value(body).expect("body serializes") {
        doc.as_object_mut()
            .expect("echo is an object")
            .extend(extra);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("json serializes");
    text.push('\n');
    text
}

/// Formats a numeric row with [`fmt_f64`].
pub fn fmt_row(values: &[f64]) -> Vec<String> {
    values.iter().map(|&v| fmt_f64(v)).collect()
}

/// CSV artifact whose first line is a `#` comment holding the echo header.
pub fn write_csv<C: Serialize>(
    path: &Path,
    command: &str,
    config: &C,
    header: &[String],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut out = format!(
        "# {}\n",
        serde_json::to_string(&echo(command, config)).expect("json serializes")
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv write");
    for row in rows {
        w.write_record(row).expect("in-memory csv write");
    }
    let body = w.into_inner().expect("in-memory csv flush");
    out.push_str(std::str::from_utf8(&body).expect("csv is utf-8"));
    write_atomic(path, out.as_bytes())
}

/// Numeric CSV table with its optional `#` header comment.
pub struct Table {
    pub meta: Option<Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_csv(path: &Path) -> Result<Table> {
    let text = read_text(path)?;
    let meta = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .and_then(|l| serde_json::from_str(l.trim()).ok());
    let bad = |e: csv::Error| CliError::invalid(format!("{}: {e}", path.display()));
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(bad)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(bad)?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::invalid(format!("{}: row {}: {e}", path.display(), i + 1)))?;
        rows.push(row);
    }
    Ok(Table { meta, header, rows })
}

/// Applies the keys of a JSON config file on top of the flag values.
///
/// The file may be a plain object of parameters or any artifact written by
/// this tool, in which case its embedded `config` is used.
pub fn overlay<T: Serialize + DeserializeOwned>(args: T, file: Option<&Path>) -> Result<T> {
    let Some(path) = file else {
        return Ok(args);
    };
    let text = read_text(path)?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let over = match doc {
        Value::Object(mut m) => match m.remove("config") {
            Some(Value::Object(inner)) if m.contains_key("command") => inner,
            Some(other) => {
                m.insert("config".into(), other);
                m
            }
            None => m,
        },
        _ => {
            return Err(CliError::invalid(format!(
                "{}: config must be a JSON object",
                path.display()
            )))
        }
    };
    let mut base = serde_json::to_value(&args).expect("args serialize");
    base.as_object_mut()
        .expect("args are an object")
        .extend(over);
    serde_json::from_value(base).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}
