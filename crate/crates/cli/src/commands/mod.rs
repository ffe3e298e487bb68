pub mod constants;
pub mod reconstruct;
pub mod signal;
pub mod sweep;
pub mod verify;

use std::path::Path;

use crate::error::{CliError, Result};

/// Parses `a,b` into an interval with `a < b`.
pub fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(a < b) {
        return Err(format!("need a < b, got {a},{b}"));
    }
    Ok((a, b))
}

pub fn require<T>(value: Option<T>, name: &str) -> Result<T> {
    value.ok_or_else(|| CliError::invalid(format!("missing required parameter `{name}`")))
}

pub fn require_path<'a>(value: &'a Option<std::path::PathBuf>, name: &str) -> Result<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| CliError::invalid(format!("missing required parameter `{name}`")))
}

/// Parses a flag value through the serde name of `T`.
pub fn parse_named<T: serde::de::DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}
