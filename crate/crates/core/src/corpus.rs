//! Relation corpus ingestion and tokenization.
//!
//! A corpus is a JSON Lines file, one relation per line:
//!
//! ```text
//! {"id": "wsj_0001.3", "sense": "Comparison.Contrast", "type": "Explicit",
//!  "connective": "but", "arg1": "...", "arg2": "..."}
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, RecordErrorKind, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sense {
    Contrast,
    Concession,
}

impl Sense {
    pub const ALL: [Sense; 2] = [Sense::Contrast, Sense::Concession];

    /// Sense label as written in the corpus file.
    pub fn label(self) -> &'static str {
        match self {
            Sense::Contrast => "Comparison.Contrast",
            Sense::Concession => "Comparison.Concession",
        }
    }

    /// Accepts the two level-2 labels, optionally followed by a level-3
    /// refinement such as `Comparison.Concession.Arg2-as-denier`.
    pub fn parse(label: &str) -> Option<Sense> {
        let label = label.trim();
        for sense in Sense::ALL {
            if let Some(rest) = label.strip_prefix(sense.label()) {
                if rest.is_empty() || rest.starts_with('.') {
                    return Some(sense);
                }
            }
        }
        None
    }

    pub fn name(self) -> &'static str {
        match self {
            Sense::Contrast => "contrast",
            Sense::Concession => "concession",
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Explicitness {
    Explicit,
    Implicit,
}

impl Explicitness {
    pub const ALL: [Explicitness; 2] = [Explicitness::Explicit, Explicitness::Implicit];

    pub fn label(self) -> &'static str {
        match self {
            Explicitness::Explicit => "Explicit",
            Explicitness::Implicit => "Implicit",
        }
    }

    pub fn parse(label: &str) -> Option<Explicitness> {
        match label.trim() {
            "Explicit" => Some(Explicitness::Explicit),
            "Implicit" => Some(Explicitness::Implicit),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Explicitness::Explicit => "explicit",
            Explicitness::Implicit => "implicit",
        }
    }
}

impl fmt::Display for Explicitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One discourse relation `(arg1, connective, arg2)`.
///
/// For implicit relations `connective` holds the annotator-inferred marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationRecord {
    pub id: String,
    pub sense: Sense,
    pub explicitness: Explicitness,
    pub connective: String,
    pub arg1_text: String,
    pub arg2_text: String,
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    id: String,
    sense: String,
    #[serde(rename = "type")]
    kind: String,
    connective: String,
    arg1: String,
    arg2: String,
}

impl RelationRecord {
    fn from_raw(raw: RawRecord) -> std::result::Result<Self, RecordErrorKind> {
        let sense = Sense::parse(&raw.sense).ok_or(RecordErrorKind::UnknownSense(raw.sense))?;
        let explicitness =
            Explicitness::parse(&raw.kind).ok_or(RecordErrorKind::UnknownType(raw.kind))?;
        let connective = raw.connective.trim().to_lowercase();
        if connective.is_empty() {
            return Err(RecordErrorKind::EmptyConnective);
        }
        if raw.arg1.trim().is_empty() {
            return Err(RecordErrorKind::EmptyArgument("arg1"));
        }
        if raw.arg2.trim().is_empty() {
            return Err(RecordErrorKind::EmptyArgument("arg2"));
        }
        Ok(RelationRecord {
            id: raw.id,
            sense,
            explicitness,
            connective,
            arg1_text: raw.arg1,
            arg2_text: raw.arg2,
        })
    }

    /// Serializes back to one line of the corpus format (no trailing newline).
    pub fn to_json_line(&self) -> String {
        let raw = RawRecord {
            id: self.id.clone(),
            sense: self.sense.label().to_string(),
            kind: self.explicitness.label().to_string(),
            connective: self.connective.clone(),
            arg1: self.arg1_text.clone(),
            arg2: self.arg2_text.clone(),
        };
        serde_json::to_string(&raw).expect("record serialization cannot fail")
    }
}

/// Parses a single non-comment corpus line.
pub fn parse_line(line: &str) -> std::result::Result<RelationRecord, RecordErrorKind> {
    let raw: RawRecord =
        serde_json::from_str(line).map_err(|e| RecordErrorKind::Json(e.to_string()))?;
    RelationRecord::from_raw(raw)
}

/// What to do with a line that does not parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorPolicy {
    #[default]
    FailFast,
    Skip,
}

#[derive(Debug, Default)]
pub struct ParsedCorpus {
    pub records: Vec<RelationRecord>,
    /// Lines rejected under [`ErrorPolicy::Skip`], with 1-based line numbers.
    pub skipped: Vec<(usize, RecordErrorKind)>,
}

pub fn parse_corpus<R: BufRead>(reader: R, policy: ErrorPolicy) -> Result<ParsedCorpus> {
    let mut parsed = ParsedCorpus::default();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Record {
            line: lineno,
            kind: RecordErrorKind::Json(e.to_string()),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_line(trimmed) {
            Ok(record) => parsed.records.push(record),
            Err(kind) => match policy {
                ErrorPolicy::FailFast => return Err(Error::Record { line: lineno, kind }),
                ErrorPolicy::Skip => parsed.skipped.push((lineno, kind)),
            },
        }
    }
    Ok(parsed)
}

pub fn parse_corpus_str(text: &str, policy: ErrorPolicy) -> Result<ParsedCorpus> {
    parse_corpus(text.as_bytes(), policy)
}

pub fn write_corpus(records: &[RelationRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&record.to_json_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

/// Splits on whitespace, lowercases and strips non-alphanumeric characters
/// from both token edges. Inner punctuation (`u.s`, `attorney's`) survives.
pub fn tokenize(text: &str) -> Vec<Token> {
    text.split_whitespace()
        .map(|piece| {
            piece
                .to_lowercase()
                .trim_matches(|c: char| !c.is_alphanumeric())
                .to_string()
        })
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(position, surface)| Token { surface, position })
        .collect()
}
