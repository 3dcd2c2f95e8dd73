#![allow(dead_code)]

use synant_core::corpus::{Explicitness, RelationRecord, Sense};
use synant_core::lexdb::LexicalDatabase;
use synant_core::wndb::WndbWriter;
use synant_core::Pos;

pub const PAIRS: &[(Pos, &[&str], &[&str])] = &[
    (Pos::Adjective, &["large", "big"], &["small"]),
    (Pos::Adjective, &["hot"], &["cold"]),
    (Pos::Noun, &["profit", "gain"], &["loss"]),
    (Pos::Noun, &["peace"], &["war"]),
    (Pos::Verb, &["rise", "climb"], &["fall"]),
    (Pos::Verb, &["win"], &["lose"]),
    (Pos::Adverb, &["quickly"], &["slowly"]),
    (Pos::Adverb, &["always"], &["never"]),
];

/// Surface forms drawn for random arguments, including inflections and
/// words the database does not know.
pub const POOL: &[&str] = &[
    "large", "big", "small", "hot", "cold", "profit", "profits", "gain", "gains", "loss", "losses",
    "peace", "war", "wars", "rise", "rose", "rises", "climbed", "climbing", "fall", "fell", "win",
    "won", "lose", "lost", "quickly", "slowly", "always", "never", "japan", "market", "the", "of",
    "but", "xyzzy", "bigger", "coldest",
];

pub fn database() -> LexicalDatabase {
    let mut w = WndbWriter::new();
    for &(pos, left, right) in PAIRS {
        let a = w.synset(pos, left);
        let b = w.synset(pos, right);
        w.antonym(a, 1, b, 1);
    }
    w.synset(Pos::Noun, &["Japan"]);
    w.synset(Pos::Noun, &["market"]);
    w.exception(Pos::Verb, "rose", &["rise"]);
    w.exception(Pos::Verb, "fell", &["fall"]);
    w.exception(Pos::Verb, "won", &["win"]);
    w.exception(Pos::Verb, "lost", &["lose"]);
    w.exception(Pos::Adjective, "bigger", &["big"]);
    w.to_database().expect("test database parses")
}

pub fn record(i: usize, sense: Sense, explicit: bool, connective: &str, arg1: &str, arg2: &str) -> RelationRecord {
    RelationRecord {
        id: format!("r{i}"),
        sense,
        explicitness: if explicit {
            Explicitness::Explicit
        } else {
            Explicitness::Implicit
        },
        connective: connective.to_string(),
        arg1_text: arg1.to_string(),
        arg2_text: arg2.to_string(),
    }
}

/// Records whose arguments are the given pool index lists.
pub fn corpus_from_indices(args: &[(Vec<usize>, Vec<usize>)]) -> Vec<RelationRecord> {
    let text = |ix: &[usize]| {
        let words: Vec<&str> = ix.iter().map(|&i| POOL[i % POOL.len()]).collect();
        let s = words.join(" ");
        if s.is_empty() {
            "the".to_string()
        } else {
            s
        }
    };
    args.iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let sense = if i % 2 == 0 { Sense::Contrast } else { Sense::Concession };
            record(i, sense, i % 3 == 0, "but", &text(a), &text(b))
        })
        .collect()
}
