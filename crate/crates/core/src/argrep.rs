//! Signed sparse vectors of arguments over the lexicon.
//!
//! Coordinate `j` of an argument counts its distinct `(lemma, pos)` types
//! on the right side of set `j` minus those on the left side.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::bagset::{AblationMask, Lexicon};
use crate::corpus::{tokenize, Explicitness, RelationRecord, Sense, Token};
use crate::error::{Error, Result};
use crate::lexdb::{resolve_token, LexicalDatabase};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArgumentVector {
    dimension: usize,
    coords: BTreeMap<usize, i32>,
}

impl ArgumentVector {
    pub fn zeros(dimension: usize) -> Self {
        ArgumentVector {
            dimension,
            coords: BTreeMap::new(),
        }
    }

    /// Builds a vector from 1-based `(index, value)` pairs; zero values are dropped.
    pub fn from_coords<I>(dimension: usize, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i32)>,
    {
        let mut v = ArgumentVector::zeros(dimension);
        for (j, a) in coords {
            if j == 0 || j > dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    actual: j,
                });
            }
            v.add(j, a);
        }
        Ok(v)
    }

    /// Dense 0-based slice to a vector with 1-based coordinates.
    pub fn from_dense(values: &[i32]) -> Self {
        let mut v = ArgumentVector::zeros(values.len());
        for (i, &a) in values.iter().enumerate() {
            v.add(i + 1, a);
        }
        v
    }

    fn add(&mut self, j: usize, delta: i32) {
        let entry = self.coords.entry(j).or_insert(0);
        *entry += delta;
        if *entry == 0 {
            self.coords.remove(&j);
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn get(&self, j: usize) -> i32 {
        self.coords.get(&j).copied().unwrap_or(0)
    }

    /// Nonzero coordinates in ascending index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.coords.iter().map(|(&j, &a)| (j, a))
    }

    pub fn nnz(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_dense(&self) -> Vec<i32> {
        let mut out = vec![0; self.dimension];
        for (j, a) in self.nonzero() {
            out[j - 1] = a;
        }
        out
    }

    pub fn negated(&self) -> Self {
        ArgumentVector {
            dimension: self.dimension,
            coords: self.coords.iter().map(|(&j, &a)| (j, -a)).collect(),
        }
    }
}

/// Compact rendering, e.g. `{3:-1, 9:2}`.
impl std::fmt::Display for ArgumentVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (k, (j, a)) in self.nonzero().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{j}:{a}")?;
        }
        f.write_str("}")
    }
}

pub fn vectorize(tokens: &[Token], lexicon: &Lexicon, db: &LexicalDatabase) -> ArgumentVector {
    let types: BTreeSet<_> = tokens
        .iter()
        .flat_map(|t| resolve_token(&t.surface, db))
        .collect();
    let mut v = ArgumentVector::zeros(lexicon.len());
    for (lemma, pos) in &types {
        for &(j, side) in lexicon.locate(lemma, *pos) {
            v.add(j, side.sign());
        }
    }
    v
}

pub fn vectorize_text(text: &str, lexicon: &Lexicon, db: &LexicalDatabase) -> ArgumentVector {
    vectorize(&tokenize(text), lexicon, db)
}

/// Keeps the mask's coordinates, re-based densely in ascending order.
pub fn project(v: &ArgumentVector, mask: &AblationMask) -> Result<ArgumentVector> {
    if v.dimension != mask.source_len {
        return Err(Error::DimensionMismatch {
            expected: mask.source_len,
            actual: v.dimension,
        });
    }
    let mut out = ArgumentVector::zeros(mask.kept_indices.len());
    for (j, a) in v.nonzero() {
        if let Ok(k) = mask.kept_indices.binary_search(&j) {
            out.coords.insert(k + 1, a);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationVectors {
    pub id: String,
    pub sense: Sense,
    pub explicitness: Explicitness,
    pub connective: String,
    pub r1: ArgumentVector,
    pub r2: ArgumentVector,
    /// Both arguments are zero under the full lexicon.
    pub discarded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Retention {
    pub relations: usize,
    pub relations_retained: usize,
    pub connectives: usize,
    pub connectives_retained: usize,
}

impl Retention {
    pub fn relation_share(&self) -> f64 {
        if self.relations == 0 {
            0.0
        } else {
            self.relations_retained as f64 / self.relations as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct RepresentedCorpus {
    /// One entry per input record, in input order.
    pub relations: Vec<RelationVectors>,
    pub retention: BTreeMap<Sense, Retention>,
}

impl RepresentedCorpus {
    pub fn retained(&self) -> impl Iterator<Item = &RelationVectors> {
        self.relations.iter().filter(|r| !r.discarded)
    }
}

/// Vectorizes every record under the full lexicon and flags discards.
pub fn vectorize_corpus(corpus: &[RelationRecord], lexicon: &Lexicon, db: &LexicalDatabase) -> Vec<RelationVectors> {
    corpus
        .par_iter()
        .map(|rec| {
            let r1 = vectorize_text(&rec.arg1_text, lexicon, db);
            let r2 = vectorize_text(&rec.arg2_text, lexicon, db);
            let discarded = r1.is_zero() && r2.is_zero();
            RelationVectors {
                id: rec.id.clone(),
                sense: rec.sense,
                explicitness: rec.explicitness,
                connective: rec.connective.clone(),
                r1,
                r2,
                discarded,
            }
        })
        .collect()
}

/// Projects full-lexicon vectors through a mask; discard flags are kept.
pub fn apply_mask(relations: &[RelationVectors], mask: &AblationMask) -> Result<Vec<RelationVectors>> {
    relations
        .iter()
        .map(|r| {
            Ok(RelationVectors {
                r1: project(&r.r1, mask)?,
                r2: project(&r.r2, mask)?,
                ..r.clone()
            })
        })
        .collect()
}

pub fn retention(relations: &[RelationVectors]) -> BTreeMap<Sense, Retention> {
    let mut connectives: BTreeMap<(Sense, &str), bool> = BTreeMap::new();
    let mut out: BTreeMap<Sense, Retention> = Sense::ALL.iter().map(|&s| (s, Retention::default())).collect();
    for r in relations {
        let entry = out.entry(r.sense).or_default();
        entry.relations += 1;
        if !r.discarded {
            entry.relations_retained += 1;
        }
        *connectives.entry((r.sense, &r.connective)).or_insert(false) |= !r.discarded;
    }
    for ((sense, _), kept) in connectives {
        let entry = out.entry(sense).or_default();
        entry.connectives += 1;
        if kept {
            entry.connectives_retained += 1;
        }
    }
    out
}

/// Vectorizes the corpus, flags discards under the full lexicon, then
/// applies `mask` to every relation.
pub fn represent_corpus(
    corpus: &[RelationRecord],
    lexicon: &Lexicon,
    db: &LexicalDatabase,
    mask: &AblationMask,
) -> Result<RepresentedCorpus> {
    let full = vectorize_corpus(corpus, lexicon, db);
    let retention = retention(&full);
    Ok(RepresentedCorpus {
        relations: apply_mask(&full, mask)?,
        retention,
    })
}

/// JSON Lines dump, one line per argument, coordinates in ascending index order.
pub fn dump_vectors(relations: &[RelationVectors]) -> String {
    let mut out = String::new();
    for r in relations {
        let id = serde_json::to_string(&r.id).expect("string serialization cannot fail");
        for (arg, v) in [(1u8, &r.r1), (2u8, &r.r2)] {
            let coords: Vec<String> = v.nonzero().map(|(j, a)| format!("\"{j}\":{a}")).collect();
            out.push_str(&format!("{{\"id\":{id},\"arg\":{arg},\"coords\":{{{}}}}}\n", coords.join(",")));
        }
    }
    out
}
