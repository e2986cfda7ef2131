//! Byte-stable CSV and JSON output plus run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const SCHEMA: u32 = 1;

/// Seventeen significant digits in scientific notation; `inf`, `-inf` and
/// `nan` for the non-finite values.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Shortest form for grid coordinates, which are already rounded.
pub fn fmt_coord(x: f64) -> String {
    if x.is_infinite() {
        return fmt_float(x);
    }
    format!("{x}")
}

pub fn fmt_bool(b: bool) -> String {
    if b {
        "true".into()
    } else {
        "false".into()
    }
}

/// A CSV file whose first line is a `#` comment describing the columns.
pub struct CsvTable {
    comment: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(comment: impl Into<String>, header: &[&str]) -> Self {
        Self {
            comment: comment.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 2));
        out.push_str("# ");
        out.push_str(&self.comment);
        out.push('\n');
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes `bytes` and returns their SHA-256 in hex.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<String> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

pub fn to_json<V: Serialize>(value: &V) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// File name to SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new<P: Serialize>(command: &str, parameters: &P, seed: Option<u64>) -> Result<Self> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(Self {
            schema: SCHEMA,
            command: command.to_string(),
            parameters: serde_json::to_value(parameters)?,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            outputs: BTreeMap::new(),
        })
    }

    /// Writes an output file and records its digest.
    pub fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        let digest = write_bytes(path, contents.as_bytes())?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.insert(name, digest);
        Ok(())
    }

    pub fn finish(&self, path: &Path) -> Result<()> {
        write_bytes(path, to_json(self)?.as_bytes())?;
        Ok(())
    }
}

/// `<file>.manifest.json` next to a single-file output.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_float(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(0.0), "0.0000000000000000e0");
        let x = 0.1f64 + 0.2;
        assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        assert_eq!(fmt_coord(0.7), "0.7");
        assert_eq!(fmt_coord(2.0), "2");
    }

    #[test]
    fn csv_render() {
        let mut t = CsvTable::new("a: first, b: second", &["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(), "# a: first, b: second\na,b\n1,2\n");
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn manifest_paths() {
        assert_eq!(
            manifest_path_for(Path::new("out/report.json")),
            PathBuf::from("out/report.json.manifest.json")
        );
    }
}
