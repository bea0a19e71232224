//! CSV tables with a provenance footer.

use std::io::Write;

use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const VERSION: &str = concat!("cvqt ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    config_sha256: String,
    seed: u64,
}

/// Hex SHA-256 of the canonical configuration.
pub fn config_hash(cfg: &RunConfig) -> String {
    hex::encode(Sha256::digest(cfg.canonical().as_bytes()))
}

impl ReportTable {
    pub fn new<S: AsRef<str>>(header: &[S], cfg: &RunConfig) -> Self {
        Self {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
            config_sha256: config_hash(cfg),
            seed: cfg.seed(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(CliError::RowWidth {
                expected: self.header.len(),
                actual: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let mut out = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        writeln!(out, "# config_sha256={}", self.config_sha256)?;
        writeln!(out, "# seed={}", self.seed)?;
        writeln!(out, "# version={VERSION}")?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_width_is_enforced() {
        let cfg = RunConfig::default();
        let mut t = ReportTable::new(&["a", "b"], &cfg);
        assert!(t.push(vec!["1".into(), "2".into()]).is_ok());
        assert!(matches!(
            t.push(vec!["1".into()]),
            Err(CliError::RowWidth { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn footer_carries_hash_and_seed() {
        let mut cfg = RunConfig::default();
        cfg.set("seed", "42").unwrap();
        let mut t = ReportTable::new(&["a"], &cfg);
        t.push(vec!["1".into()]).unwrap();
        let text = t.to_csv_string().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "a");
        assert_eq!(lines[1], "1");
        assert_eq!(lines[2], format!("# config_sha256={}", config_hash(&cfg)));
        assert_eq!(lines[3], "# seed=42");
        assert!(lines[4].starts_with("# version=cvqt "));
        assert_eq!(config_hash(&cfg).len(), 64);
    }

    #[test]
    fn hash_tracks_config() {
        let a = RunConfig::default();
        let mut b = RunConfig::default();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.set("r", "1.0").unwrap();
        assert_ne!(config_hash(&a), config_hash(&b));
    }
}
