use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The four open-class parts of speech, in lexicon block order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    #[serde(rename = "adj")]
    Adjective,
    Noun,
    Verb,
    #[serde(rename = "adv")]
    Adverb,
}

impl Pos {
    /// Block order of the lexicon: adjectives, nouns, verbs, adverbs.
    pub const ALL: [Pos; 4] = [Pos::Adjective, Pos::Noun, Pos::Verb, Pos::Adverb];

    /// Suffix used by the WNDB file names (`index.adj`, `noun.exc`, ...).
    pub fn file_suffix(self) -> &'static str {
        match self {
            Pos::Adjective => "adj",
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adverb => "adv",
        }
    }

    /// Maps a WNDB syntactic category letter. Satellites (`s`) are adjectives.
    pub fn from_wndb_char(c: char) -> Option<Pos> {
        match c {
            'n' => Some(Pos::Noun),
            'v' => Some(Pos::Verb),
            'a' | 's' => Some(Pos::Adjective),
            'r' => Some(Pos::Adverb),
            _ => None,
        }
    }

    pub fn wndb_char(self) -> char {
        match self {
            Pos::Adjective => 'a',
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adverb => 'r',
        }
    }

    pub(crate) fn slot(self) -> usize {
        match self {
            Pos::Adjective => 0,
            Pos::Noun => 1,
            Pos::Verb => 2,
            Pos::Adverb => 3,
        }
    }

    /// Short label used in set annotations, e.g. `351^V_L`.
    pub fn tag(self) -> &'static str {
        match self {
            Pos::Adjective => "AJ",
            Pos::Noun => "N",
            Pos::Verb => "V",
            Pos::Adverb => "AV",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_suffix())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adj" | "adjective" | "a" => Ok(Pos::Adjective),
            "noun" | "n" => Ok(Pos::Noun),
            "verb" | "v" => Ok(Pos::Verb),
            "adv" | "adverb" | "r" => Ok(Pos::Adverb),
            other => Err(format!("unknown part of speech `{other}`")),
        }
    }
}
