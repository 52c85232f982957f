//! Deterministic CSV reports with provenance headers.
//!
//! Every file starts with `#` comment lines echoing the tool version, the
//! command, a SHA-256 hash of the effective configuration, and the rng seed,
//! so a rerun can be matched byte-for-byte to its inputs. Floats are printed
//! with Rust's shortest round-trip formatting, which pins the bytes across
//! platforms.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

/// Shortest decimal representation that parses back to the same f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// First 16 hex digits of the SHA-256 of the canonical configuration string.
pub fn config_hash(config: &str) -> String {
    let digest = Sha256::digest(config.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A CSV table under assembly: provenance comments, then a header row, then
/// data rows.
#[derive(Debug, Clone)]
pub struct Report {
    comments: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    /// Start a report for `command` run with the canonically-serialized
    /// `config` (hashed into the header) and the base rng seed, if any.
    pub fn new(command: &str, config: &str, seed: Option<u64>) -> Self {
        let mut comments = vec![
            ("tool".into(), format!("snowdim {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), command.to_string()),
            ("config".into(), config.to_string()),
            ("config_hash".into(), config_hash(config)),
        ];
        if let Some(seed) = seed {
            comments.push(("seed".into(), seed.to_string()));
        }
        Report { comments, columns: Vec::new(), rows: Vec::new() }
    }

    /// Add an extra provenance comment line.
    pub fn comment(&mut self, key: &str, value: &str) -> &mut Self {
        self.comments.push((key.into(), value.into()));
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row<I, S>(&mut self, cells: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let cells: Vec<String> = cells.into_iter().map(Into::into).collect();
        assert_eq!(
            cells.len(),
            self.columns.len(),
            "row width does not match the declared columns"
        );
        self.rows.push(cells);
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.comments {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv().as_bytes())
    }
}
