//! WordNet's morphy: exception lists plus one round of suffix detachment.

use crate::lexdb::LexicalDatabase;
use crate::pos::Pos;

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

pub fn detachment_rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
        Pos::Adjective => ADJ_RULES,
        Pos::Adverb => &[],
    }
}

/// Base form of `surface` for `pos`, or `None` when no candidate is in the
/// database index.
///
/// Candidates are tried in order: the exception list entries, the surface
/// itself, then each detachment rule applied once.
pub fn morphy(surface: &str, pos: Pos, db: &LexicalDatabase) -> Option<String> {
    if surface.is_empty() {
        return None;
    }
    if let Some(bases) = db.exceptions(pos).get(surface) {
        if let Some(base) = bases.iter().find(|b| db.contains(b, pos)) {
            return Some(base.clone());
        }
    }
    if db.contains(surface, pos) {
        return Some(surface.to_string());
    }
    detachment_rules(pos).iter().find_map(|(suffix, ending)| {
        let stem = surface.strip_suffix(suffix)?;
        if stem.is_empty() {
            return None;
        }
        let candidate = format!("{stem}{ending}");
        db.contains(&candidate, pos).then_some(candidate)
    })
}
