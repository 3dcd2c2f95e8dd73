//! Checksums and the provenance header stamped on every report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};
use synant_core::lexdb::required_files;

use crate::CliError;

pub const TOOL_VERSION: &str = concat!("synant ", env!("CARGO_PKG_VERSION"));

pub fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        write!(s, "{b:02x}").expect("writing to a String");
    }
    s
}

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    Ok(sha256_bytes(&bytes))
}

/// Digest over the twelve database files, by name then content.
pub fn database_checksum(dir: &Path) -> Result<String, CliError> {
    let mut h = Sha256::new();
    for name in required_files() {
        let path = dir.join(&name);
        let bytes = fs::read(&path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
        h.update(name.as_bytes());
        h.update([0u8]);
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    Ok(hex(&h.finalize()))
}

/// Ordered `key: value` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.entries.iter().cloned().collect()
    }

    /// `# key: value` lines for the top of a CSV file.
    pub fn csv_comment(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            writeln!(s, "# {k}: {v}").expect("writing to a String");
        }
        s
    }

    /// One XML comment; `--` cannot appear inside it.
    pub fn xml_comment(&self) -> String {
        let mut s = String::from("<!--\n");
        for (k, v) in &self.entries {
            writeln!(s, "  {k}: {}", v.replace("--", "- -")).expect("writing to a String");
        }
        s.push_str("-->\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_bytes(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn comment_forms() {
        let mut p = Provenance::default();
        p.push("tool", TOOL_VERSION);
        p.push("flags", "a--b");
        assert!(p.csv_comment().starts_with("# tool: synant "));
        let xml = p.xml_comment();
        assert!(!xml[4..xml.len() - 4].contains("--"));
    }
}
