//! Deterministic CSV/JSON artifact emission.
//!
//! CSV files carry a header row, a units row, then data; floats are printed
//! with a fixed format so identical runs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(names: &[&str], units: &[&str]) -> Self {
        assert_eq!(names.len(), units.len());
        let mut buf = String::new();
        buf.push_str(&names.join(","));
        buf.push('\n');
        buf.push_str(&units.join(","));
        buf.push('\n');
        Self { buf, columns: names.len() }
    }

    pub fn row(&mut self, cells: &[CsvCell]) {
        assert_eq!(cells.len(), self.columns);
        for (k, cell) in cells.iter().enumerate() {
            if k > 0 {
                self.buf.push(',');
            }
            match cell {
                CsvCell::Int(v) => {
                    let _ = write!(self.buf, "{v}");
                }
                CsvCell::Float(v) => {
                    if v.is_nan() {
                        self.buf.push_str("nan");
                    } else {
                        let _ = write!(self.buf, "{v:.9e}");
                    }
                }
                CsvCell::Text(s) => {
                    let _ = write!(self.buf, "{}", s.replace(',', ";"));
                }
                CsvCell::Bool(b) => {
                    let _ = write!(self.buf, "{b}");
                }
            }
        }
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

pub enum CsvCell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

/// Collects artifacts in memory and writes them all at once, so failed runs
/// leave no partial files.
#[derive(Default)]
pub struct ArtifactSet {
    files: Vec<(String, String)>,
}

impl ArtifactSet {
    pub fn add(&mut self, name: impl Into<String>, content: String) {
        self.files.push((name.into(), content));
    }

    pub fn add_json<T: serde::Serialize>(&mut self, name: impl Into<String>, value: &T) {
        let text = serde_json::to_string_pretty(value).expect("serializable artifact");
        self.files.push((name.into(), text + "\n"));
    }

    /// Plot-hints block: axis names/labels for external plotting.
    pub fn add_hints(&mut self, name: &str, x: &str, y: &str, title: &str) {
        self.add_json(
            format!("{name}.hints.json"),
            &serde_json::json!({ "x": x, "y": y, "title": title }),
        );
    }

    pub fn write_all(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (name, content) in &self.files {
            let path = dir.join(name);
            fs::write(&path, content)?;
            written.push(path);
        }
        Ok(written)
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn into_files(self) -> Vec<(String, String)> {
        self.files
    }
}
