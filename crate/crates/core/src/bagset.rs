//! Construction, curation and indexing of the POS-ordered collection of
//! two-sided synonym/antonym sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::RelationRecord;
use crate::error::{Error, Result};
use crate::lexdb::{build_vocabulary, lemma_occurrences, retrieve, LexicalDatabase};
use crate::pos::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }

    /// Contribution of a word on this side to an argument coordinate.
    pub fn sign(self) -> i32 {
        match self {
            Side::L => -1,
            Side::R => 1,
        }
    }
}

/// One bag `{left | right}`: same-side words are synonyms, opposite-side
/// words antonyms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynAntSet {
    /// 1-based position in the lexicon.
    pub index: usize,
    pub pos: Pos,
    pub left: BTreeSet<String>,
    pub right: BTreeSet<String>,
}

impl SynAntSet {
    pub fn side(&self, side: Side) -> &BTreeSet<String> {
        match side {
            Side::L => &self.left,
            Side::R => &self.right,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut BTreeSet<String> {
        match side {
            Side::L => &mut self.left,
            Side::R => &mut self.right,
        }
    }

    pub fn side_of(&self, lemma: &str) -> Option<Side> {
        if self.left.contains(lemma) {
            Some(Side::L)
        } else if self.right.contains(lemma) {
            Some(Side::R)
        } else {
            None
        }
    }

    /// Adds `words` to `side`, skipping any already sitting on the other
    /// side. Returns the words actually inserted.
    fn absorb<'a, I>(&mut self, side: Side, words: I) -> Vec<String>
    where
        I: IntoIterator<Item = &'a String>,
    {
        let mut added = Vec::new();
        for w in words {
            if self.side(side.opposite()).contains(w) {
                continue;
            }
            if self.side_mut(side).insert(w.clone()) {
                added.push(w.clone());
            }
        }
        added
    }

    fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

impl fmt::Display for SynAntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<String>| s.iter().map(String::as_str).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "{}^{} {{{} | {}}}",
            self.index,
            self.pos.tag(),
            join(&self.left),
            join(&self.right)
        )
    }
}

/// Last index of each POS block: adjectives `[1, n1]`, nouns `(n1, n2]`,
/// verbs `(n2, n3]`, adverbs `(n3, m]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundaries {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub m: usize,
}

impl Boundaries {
    /// Index range `(start, end]` of a POS block.
    pub fn block(&self, pos: Pos) -> (usize, usize) {
        match pos {
            Pos::Adjective => (0, self.n1),
            Pos::Noun => (self.n1, self.n2),
            Pos::Verb => (self.n2, self.n3),
            Pos::Adverb => (self.n3, self.m),
        }
    }

    pub fn block_size(&self, pos: Pos) -> usize {
        let (start, end) = self.block(pos);
        end - start
    }
}

pub type Membership = HashMap<(String, Pos), Vec<(usize, Side)>>;

/// The full ordered collection of sets, with its inverted index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    sets: Vec<SynAntSet>,
    boundaries: Boundaries,
    membership: Membership,
}

struct Draft {
    pos: Pos,
    left: BTreeSet<String>,
    right: BTreeSet<String>,
}

impl Lexicon {
    /// Orders sets into POS blocks (stable within a block), assigns 1-based
    /// indices and builds the membership index.
    pub fn from_sets<I>(sets: I) -> Result<Lexicon>
    where
        I: IntoIterator<Item = (Pos, BTreeSet<String>, BTreeSet<String>)>,
    {
        let mut drafts: Vec<Draft> = sets
            .into_iter()
            .map(|(pos, left, right)| Draft { pos, left, right })
            .collect();
        drafts.sort_by_key(|d| d.pos);
        let mut out = Vec::with_capacity(drafts.len());
        for (i, d) in drafts.into_iter().enumerate() {
            if let Some(w) = d.left.intersection(&d.right).next() {
                return Err(Error::InvalidLexicon(format!(
                    "`{w}` sits on both sides of set {}",
                    i + 1
                )));
            }
            out.push(SynAntSet {
                index: i + 1,
                pos: d.pos,
                left: d.left,
                right: d.right,
            });
        }
        let count = |pos: Pos| out.iter().filter(|s| s.pos <= pos).count();
        let boundaries = Boundaries {
            n1: count(Pos::Adjective),
            n2: count(Pos::Noun),
            n3: count(Pos::Verb),
            m: out.len(),
        };
        let membership = membership_of(&out);
        Ok(Lexicon {
            sets: out,
            boundaries,
            membership,
        })
    }

    pub fn empty() -> Lexicon {
        Lexicon {
            sets: Vec::new(),
            boundaries: Boundaries::default(),
            membership: HashMap::new(),
        }
    }

    pub fn sets(&self) -> &[SynAntSet] {
        &self.sets
    }

    /// Set by 1-based index.
    pub fn set(&self, index: usize) -> Option<&SynAntSet> {
        index.checked_sub(1).and_then(|i| self.sets.get(i))
    }

    pub fn boundaries(&self) -> Boundaries {
        self.boundaries
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    /// All `(index, side)` positions of a lemma, ascending by index.
    pub fn locate(&self, lemma: &str, pos: Pos) -> &[(usize, Side)] {
        self.membership
            .get(&(lemma.to_string(), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Same lexicon with every set's sides swapped.
    pub fn mirrored(&self) -> Lexicon {
        let sets = self
            .sets
            .iter()
            .map(|s| (s.pos, s.right.clone(), s.left.clone()));
        Lexicon::from_sets(sets).expect("mirroring preserves disjointness")
    }

    /// The sub-lexicon of the mask's kept sets, re-indexed densely.
    pub fn restrict(&self, mask: &AblationMask) -> Result<Lexicon> {
        if mask.source_len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: mask.source_len,
            });
        }
        let sets = mask.kept_indices.iter().map(|&i| {
            let s = &self.sets[i - 1];
            (s.pos, s.left.clone(), s.right.clone())
        });
        Lexicon::from_sets(sets)
    }

    /// Checks every structural invariant, including non-empty left sides.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLexicon(msg));
        let b = self.boundaries;
        if !(b.n1 <= b.n2 && b.n2 <= b.n3 && b.n3 <= b.m && b.m == self.sets.len()) {
            return bad(format!("boundaries {b:?} are not monotone up to {}", self.sets.len()));
        }
        for (i, s) in self.sets.iter().enumerate() {
            if s.index != i + 1 {
                return bad(format!("set at position {} carries index {}", i + 1, s.index));
            }
            if s.left.is_empty() {
                return bad(format!("set {} has an empty left side", s.index));
            }
            if let Some(w) = s.left.intersection(&s.right).next() {
                return bad(format!("`{w}` sits on both sides of set {}", s.index));
            }
            let (start, end) = b.block(s.pos);
            if s.index <= start || s.index > end {
                return bad(format!("set {} ({}) lies outside its POS block", s.index, s.pos));
            }
        }
        if membership_of(&self.sets) != self.membership {
            return bad("membership index is stale".into());
        }
        Ok(())
    }

    pub fn to_json(&self, provenance: &BTreeMap<String, String>) -> String {
        let file = LexiconFile {
            provenance: provenance.clone(),
            boundaries: self.boundaries,
            sets: self.sets.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("lexicon serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Lexicon> {
        let file: LexiconFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidLexicon(e.to_string()))?;
        let sets = file.sets.into_iter().map(|s| (s.pos, s.left, s.right));
        let lexicon = Lexicon::from_sets(sets)?;
        if lexicon.boundaries != file.boundaries {
            return Err(Error::InvalidLexicon(format!(
                "stored boundaries {:?} disagree with the sets {:?}",
                file.boundaries, lexicon.boundaries
            )));
        }
        lexicon.validate()?;
        Ok(lexicon)
    }
}

#[derive(Serialize, Deserialize)]
struct LexiconFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    provenance: BTreeMap<String, String>,
    boundaries: Boundaries,
    sets: Vec<SynAntSet>,
}

fn membership_of(sets: &[SynAntSet]) -> Membership {
    let mut membership: Membership = HashMap::new();
    for s in sets {
        for side in [Side::L, Side::R] {
            for w in s.side(side) {
                membership
                    .entry((w.clone(), s.pos))
                    .or_default()
                    .push((s.index, side));
            }
        }
    }
    membership
}

/// Builds the raw (uncurated) lexicon by a single scan over the corpus
/// vocabulary in first-occurrence order.
///
/// A word found in no set opens a new one (synonyms left, antonyms right).
/// A word already present extends the lowest-indexed set holding it: its
/// synonyms join the word's own side and its antonyms the opposite side.
/// Words already on the other side of that set are left where they are.
pub fn build_lexicon(corpus: &[RelationRecord], db: &LexicalDatabase) -> Result<Lexicon> {
    let vocab = build_vocabulary(corpus, db);
    let mut sets: Vec<SynAntSet> = Vec::new();
    // working membership: (lemma, pos) -> lowest 0-based set position
    let mut first: HashMap<(String, Pos), (usize, Side)> = HashMap::new();

    for (lemma, pos) in lemma_occurrences(corpus, db) {
        let found = retrieve(&lemma, pos, &vocab, db)?;
        match first.get(&(lemma.clone(), pos)).copied() {
            None => {
                let j = sets.len();
                let set = SynAntSet {
                    index: j + 1,
                    pos,
                    left: found.syn,
                    right: found.ant,
                };
                for side in [Side::L, Side::R] {
                    for w in set.side(side) {
                        first.entry((w.clone(), pos)).or_insert((j, side));
                    }
                }
                sets.push(set);
            }
            Some((j, side)) => {
                let set = &mut sets[j];
                let same = set.absorb(side, &found.syn);
                let other = set.absorb(side.opposite(), &found.ant);
                for w in same {
                    first.entry((w, pos)).or_insert((j, side));
                }
                for w in other {
                    first.entry((w, pos)).or_insert((j, side.opposite()));
                }
            }
        }
    }
    Lexicon::from_sets(sets.into_iter().map(|s| (s.pos, s.left, s.right)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    /// Union set `from` (sides swapped when `flip`) into `into`, dropping `from`.
    Merge { into: usize, from: usize, flip: bool },
    Delete(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CurationDirectives {
    /// `(line number, original text, directive)`.
    pub items: Vec<(usize, String, Directive)>,
}

impl CurationDirectives {
    /// Parses `merge I J [flip]` / `delete I` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<CurationDirectives> {
        let mut items = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| Error::Directive {
                line: i + 1,
                directive: line.to_string(),
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let index = |s: &str| s.parse::<usize>().map_err(|_| err("set index must be a positive integer"));
            let directive = match fields.as_slice() {
                ["merge", a, b] => Directive::Merge {
                    into: index(a)?,
                    from: index(b)?,
                    flip: false,
                },
                ["merge", a, b, "flip"] => Directive::Merge {
                    into: index(a)?,
                    from: index(b)?,
                    flip: true,
                },
                ["delete", a] => Directive::Delete(index(a)?),
                _ => return Err(err("expected `merge I J [flip]` or `delete I`")),
            };
            items.push((i + 1, line.to_string(), directive));
        }
        Ok(CurationDirectives { items })
    }
}

/// Deterministic clean-up followed by optional user directives.
///
/// The automatic rules run to a fixed point:
/// (a) a set `{a | b}` is dropped when a larger set of the same POS already
///     holds `a` and `b` on opposite sides;
/// (b) sets with the same unordered pair of sides collapse into the first;
/// (c) a lone word with no antonyms, `{w | }`, is dropped.
///
/// Directive indices refer to the lexicon after the automatic rules.
pub fn curate(lexicon: &Lexicon, directives: Option<&CurationDirectives>) -> Result<Lexicon> {
    let mut sets: Vec<SynAntSet> = lexicon.sets.clone();
    loop {
        let before = sets.len();
        sets = apply_auto_rules(sets);
        if sets.len() == before {
            break;
        }
    }

    if let Some(directives) = directives {
        let mut slots: Vec<Option<SynAntSet>> = sets.into_iter().map(Some).collect();
        for (line, text, directive) in &directives.items {
            let err = |message: String| Error::Directive {
                line: *line,
                directive: text.clone(),
                message,
            };
            let live = |slots: &Vec<Option<SynAntSet>>, i: usize| -> Result<()> {
                match i.checked_sub(1).and_then(|k| slots.get(k)) {
                    Some(Some(_)) => Ok(()),
                    Some(None) => Err(err(format!("set {i} was already removed"))),
                    None => Err(err(format!("set {i} does not exist (m = {})", slots.len()))),
                }
            };
            match *directive {
                Directive::Delete(i) => {
                    live(&slots, i)?;
                    slots[i - 1] = None;
                }
                Directive::Merge { into, from, flip } => {
                    live(&slots, into)?;
                    live(&slots, from)?;
                    if into == from {
                        return Err(err("cannot merge a set into itself".into()));
                    }
                    let donor = slots[from - 1].take().expect("checked live");
                    let target = slots[into - 1].as_mut().expect("checked live");
                    if donor.pos != target.pos {
                        slots[from - 1] = Some(donor);
                        return Err(err(format!("sets {into} and {from} have different parts of speech")));
                    }
                    let (l, r) = if flip {
                        (&donor.right, &donor.left)
                    } else {
                        (&donor.left, &donor.right)
                    };
                    target.absorb(Side::L, l);
                    target.absorb(Side::R, r);
                }
            }
        }
        sets = slots.into_iter().flatten().collect();
    }
    Lexicon::from_sets(sets.into_iter().map(|s| (s.pos, s.left, s.right)))
}

fn apply_auto_rules(sets: Vec<SynAntSet>) -> Vec<SynAntSet> {
    // (c) lone self-synonyms
    let sets: Vec<SynAntSet> = sets
        .into_iter()
        .filter(|s| !(s.left.len() == 1 && s.right.is_empty()))
        .collect();

    // (b) identical unordered side pairs
    let mut kept: Vec<SynAntSet> = Vec::with_capacity(sets.len());
    for s in sets {
        let duplicate = kept.iter().any(|k| {
            k.pos == s.pos
                && ((k.left == s.left && k.right == s.right) || (k.left == s.right && k.right == s.left))
        });
        if !duplicate {
            kept.push(s);
        }
    }

    // (a) single-pair sets subsumed by a larger set
    let subsumed: Vec<bool> = kept
        .iter()
        .map(|s| {
            if s.left.len() != 1 || s.right.len() != 1 {
                return false;
            }
            let a = s.left.iter().next().expect("len 1");
            let b = s.right.iter().next().expect("len 1");
            kept.iter().any(|k| {
                k.pos == s.pos
                    && k.len() > 2
                    && matches!(
                        (k.side_of(a), k.side_of(b)),
                        (Some(x), Some(y)) if x != y
                    )
            })
        })
        .collect();
    kept.into_iter()
        .zip(subsumed)
        .filter_map(|(s, drop)| (!drop).then_some(s))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AblationKind {
    All,
    NoAdjective,
    NoNoun,
    NoVerb,
    NoAdverb,
}

impl AblationKind {
    /// Report order: the full representation, then one POS removed at a time.
    pub const REPORT_ORDER: [AblationKind; 5] = [
        AblationKind::All,
        AblationKind::NoAdjective,
        AblationKind::NoAdverb,
        AblationKind::NoVerb,
        AblationKind::NoNoun,
    ];

    pub fn removed(self) -> Option<Pos> {
        match self {
            AblationKind::All => None,
            AblationKind::NoAdjective => Some(Pos::Adjective),
            AblationKind::NoNoun => Some(Pos::Noun),
            AblationKind::NoVerb => Some(Pos::Verb),
            AblationKind::NoAdverb => Some(Pos::Adverb),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AblationKind::All => "all",
            AblationKind::NoAdjective => "no_adjective",
            AblationKind::NoNoun => "no_noun",
            AblationKind::NoVerb => "no_verb",
            AblationKind::NoAdverb => "no_adverb",
        }
    }

    pub fn parse(name: &str) -> Option<AblationKind> {
        Self::REPORT_ORDER.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for AblationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AblationMask {
    pub kind: AblationKind,
    /// Ascending 1-based indices of the sets kept.
    pub kept_indices: Vec<usize>,
    /// Size of the lexicon the mask was cut from.
    pub source_len: usize,
}

pub fn ablation_mask(lexicon: &Lexicon, kind: AblationKind) -> AblationMask {
    mask_from_boundaries(lexicon.boundaries(), kind)
}

pub fn mask_from_boundaries(b: Boundaries, kind: AblationKind) -> AblationMask {
    let removed = kind.removed().map(|pos| b.block(pos));
    let kept_indices = (1..=b.m)
        .filter(|&i| match removed {
            Some((start, end)) => i <= start || i > end,
            None => true,
        })
        .collect();
    AblationMask {
        kind,
        kept_indices,
        source_len: b.m,
    }
}

pub fn locate(lexicon: &Lexicon, lemma: &str, pos: Pos) -> Vec<(usize, Side)> {
    lexicon.locate(lemma, pos).to_vec()
}
