use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::svg::Plot;
use crate::counting::suites::Check;
use crate::error::Result;

/// Comma-separated table; numbers use the shortest round-trip form so reruns
/// compare byte for byte.
#[derive(Clone, Debug)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.header.len());
        self.rows.push(values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
    }

    pub fn text_row(&mut self, values: &[String]) {
        debug_assert_eq!(values.len(), self.header.len());
        self.rows.push(values.join(","));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}

/// Files land in `dir` as soon as they are produced, so a failing scenario
/// leaves everything computed before the failure on disk.
pub struct Sink {
    dir: PathBuf,
    files: Vec<String>,
}

impl Sink {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn bytes(&mut self, name: &str, data: &[u8]) -> Result<()> {
        fs::write(self.dir.join(name), data)?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: &Table) -> Result<()> {
        self.bytes(name, table.render().as_bytes())
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.bytes(name, s.as_bytes())
    }

    pub fn svg(&mut self, name: &str, plot: &Plot) -> Result<()> {
        self.bytes(name, plot.render().as_bytes())
    }
}

/// What a scenario reports besides its files.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Findings {
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, f64>,
    /// Measured constants of inequalities and fits.
    pub constants: BTreeMap<String, f64>,
    pub labels: BTreeMap<String, String>,
}

impl Findings {
    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn constant(&mut self, name: impl Into<String>, value: f64) {
        self.constants.insert(name.into(), value);
    }

    pub fn label(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.labels.insert(name.into(), value.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_renders_header_and_rows() {
        let mut t = Table::new(&["a", "b"]);
        t.row(&[1.0, 0.1]);
        t.text_row(&["x".into(), "2".into()]);
        assert_eq!(t.render(), "a,b\n1,0.1\nx,2\n");
    }

    #[test]
    fn sink_records_each_file_once() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = Sink::create(&dir.path().join("nested")).unwrap();
        s.bytes("a.txt", b"1").unwrap();
        s.bytes("a.txt", b"2").unwrap();
        assert_eq!(s.files(), ["a.txt"]);
        assert_eq!(fs::read(s.path("a.txt")).unwrap(), b"2");
    }
}
