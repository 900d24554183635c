//! CSV tables with C `%.17g` number formatting, and artifact manifests.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// Format like C's `printf("%.17g", v)`.
pub fn fmt_g17(v: f64) -> String {
    fmt_g(v, 17)
}

/// Format like C's `%.{prec}g`.
pub fn fmt_g(v: f64, prec: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let prec = prec.max(1);
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // Round to `prec` significant digits first; the exponent of the rounded
    // value decides between fixed and scientific notation.
    let sci = format!("{:.*e}", prec - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= prec as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (prec as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Column-oriented table written as CSV with a header row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_g17(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

/// One manifest record describing a written artifact.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub artifact: PathBuf,
    pub scenario: String,
    pub params: Vec<(String, String)>,
    pub iterations: Option<usize>,
    pub final_functional: Option<f64>,
}

impl ManifestEntry {
    pub fn new(artifact: impl Into<PathBuf>, scenario: impl Into<String>) -> Self {
        Self {
            artifact: artifact.into(),
            scenario: scenario.into(),
            params: Vec::new(),
            iterations: None,
            final_functional: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let file = self
            .artifact
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut s = format!("artifact={file} scenario={}", self.scenario);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        if let Some(it) = self.iterations {
            s.push_str(&format!(" iterations={it}"));
        }
        if let Some(f) = self.final_functional {
            s.push_str(&format!(" final_I={}", fmt_g17(f)));
        }
        s
    }
}

/// Append entries to `<dir>/manifest.txt`.
pub fn append_manifest(dir: &Path, entries: &[ManifestEntry]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(dir.join("manifest.txt"))?;
    for e in entries {
        writeln!(f, "{}", e.line())?;
    }
    Ok(())
}
