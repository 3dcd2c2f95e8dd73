//! WordNet database (WNDB) reader and the synonym/antonym retrieval function.
//!
//! Only what the bag construction needs is kept: the per-POS lemma index,
//! the lemma lists of every synset, the `!` (antonym) pointers, and the
//! morphological exception lists.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use crate::corpus::{tokenize, RelationRecord};
use crate::error::{Error, Result};
use crate::morphy::morphy;
use crate::pos::Pos;

/// A lexical `!` pointer. Word numbers are 1-based positions in the
/// respective synset's lemma list, as written in the data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntonymLink {
    pub source_word: u8,
    pub target_pos: Pos,
    pub target_offset: u32,
    pub target_word: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub pos: Pos,
    pub offset: u32,
    /// Lowercased lemmas with adjective markers such as `(p)` removed.
    pub lemmas: Vec<String>,
    pub antonym_links: Vec<AntonymLink>,
}

#[derive(Debug, Default)]
pub struct LexicalDatabase {
    index: [HashMap<String, Vec<u32>>; 4],
    synsets: HashMap<(Pos, u32), Synset>,
    exceptions: [HashMap<String, Vec<String>>; 4],
}

/// Names of the twelve files a database directory must provide.
pub fn required_files() -> Vec<String> {
    let mut names = Vec::with_capacity(12);
    for pos in Pos::ALL {
        let s = pos.file_suffix();
        names.push(format!("index.{s}"));
        names.push(format!("data.{s}"));
        names.push(format!("{s}.exc"));
    }
    names
}

pub fn load_wordnet(dir: &Path) -> Result<LexicalDatabase> {
    LexicalDatabase::load(dir)
}

impl LexicalDatabase {
    pub fn load(dir: &Path) -> Result<Self> {
        let mut sources = HashMap::new();
        for name in required_files() {
            let path = dir.join(&name);
            if !path.is_file() {
                return Err(Error::MissingFile {
                    dir: dir.to_path_buf(),
                    name,
                });
            }
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            // The Princeton files are ASCII, later releases are UTF-8.
            sources.insert(name, String::from_utf8_lossy(&bytes).into_owned());
        }
        Self::from_sources(|name| sources.get(name).map(String::as_str))
    }

    /// Parses a database from in-memory file contents keyed by file name.
    pub fn from_sources<'a, F>(source: F) -> Result<Self>
    where
        F: Fn(&str) -> Option<&'a str>,
    {
        let mut db = LexicalDatabase::default();
        for pos in Pos::ALL {
            let s = pos.file_suffix();
            let fetch = |name: String| {
                source(&name).ok_or_else(|| Error::MissingFile {
                    dir: Default::default(),
                    name,
                })
            };
            let data_name = format!("data.{s}");
            db.parse_data(&data_name, fetch(data_name.clone())?, pos)?;
            let index_name = format!("index.{s}");
            db.parse_index(&index_name, fetch(index_name.clone())?, pos)?;
            let exc_name = format!("{s}.exc");
            db.parse_exceptions(&exc_name, fetch(exc_name.clone())?, pos)?;
        }
        Ok(db)
    }

    fn parse_data(&mut self, file: &str, text: &str, pos: Pos) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            if is_header(line) {
                continue;
            }
            let synset = parse_data_line(line, pos).map_err(|message| Error::Malformed {
                file: file.to_string(),
                line: i + 1,
                message,
            })?;
            self.synsets.insert((pos, synset.offset), synset);
        }
        Ok(())
    }

    fn parse_index(&mut self, file: &str, text: &str, pos: Pos) -> Result<()> {
        let malformed = |line: usize, message: String| Error::Malformed {
            file: file.to_string(),
            line,
            message,
        };
        for (i, line) in text.lines().enumerate() {
            if is_header(line) {
                continue;
            }
            let (lemma, offsets) = parse_index_line(line, pos).map_err(|m| malformed(i + 1, m))?;
            for &offset in &offsets {
                if !self.synsets.contains_key(&(pos, offset)) {
                    return Err(malformed(
                        i + 1,
                        format!("offset {offset:08} of `{lemma}` has no synset in data.{}", pos.file_suffix()),
                    ));
                }
            }
            self.index[pos.slot()].insert(lemma, offsets);
        }
        Ok(())
    }

    fn parse_exceptions(&mut self, file: &str, text: &str, pos: Pos) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let inflected = fields.next().unwrap_or_default();
            let bases: Vec<String> = fields.map(str::to_string).collect();
            if bases.is_empty() {
                return Err(Error::Malformed {
                    file: file.to_string(),
                    line: i + 1,
                    message: format!("exception `{inflected}` has no base form"),
                });
            }
            self.exceptions[pos.slot()]
                .entry(inflected.to_string())
                .or_default()
                .extend(bases);
        }
        Ok(())
    }

    pub fn contains(&self, lemma: &str, pos: Pos) -> bool {
        self.index[pos.slot()].contains_key(lemma)
    }

    /// Synset offsets of `lemma` in sense order, or an empty slice.
    pub fn offsets(&self, lemma: &str, pos: Pos) -> &[u32] {
        self.index[pos.slot()]
            .get(lemma)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn synset(&self, pos: Pos, offset: u32) -> Option<&Synset> {
        self.synsets.get(&(pos, offset))
    }

    pub fn synsets_of(&self, lemma: &str, pos: Pos) -> impl Iterator<Item = &Synset> + '_ {
        self.offsets(lemma, pos)
            .iter()
            .filter_map(move |&offset| self.synset(pos, offset))
    }

    pub fn exceptions(&self, pos: Pos) -> &HashMap<String, Vec<String>> {
        &self.exceptions[pos.slot()]
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn lemma_count(&self, pos: Pos) -> usize {
        self.index[pos.slot()].len()
    }

    pub fn lemmas(&self, pos: Pos) -> impl Iterator<Item = &str> {
        self.index[pos.slot()].keys().map(String::as_str)
    }
}

fn is_header(line: &str) -> bool {
    line.starts_with("  ") || line.trim().is_empty()
}

fn parse_data_line(line: &str, file_pos: Pos) -> std::result::Result<Synset, String> {
    let body = line.split(" | ").next().unwrap_or(line);
    let mut fields = body.split_whitespace();
    let mut next = |what: &str| fields.next().ok_or_else(|| format!("missing {what}"));

    let offset: u32 = next("synset_offset")?
        .parse()
        .map_err(|_| "bad synset_offset".to_string())?;
    next("lex_filenum")?;
    let ss_type = next("ss_type")?;
    let pos = ss_type
        .chars()
        .next()
        .and_then(Pos::from_wndb_char)
        .ok_or_else(|| format!("bad ss_type `{ss_type}`"))?;
    if pos != file_pos {
        return Err(format!("ss_type `{ss_type}` in data.{}", file_pos.file_suffix()));
    }
    let w_cnt = usize::from_str_radix(next("w_cnt")?, 16).map_err(|_| "bad w_cnt".to_string())?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let word = next("word")?;
        next("lex_id")?;
        lemmas.push(strip_marker(word).to_lowercase());
    }
    let p_cnt: usize = next("p_cnt")?.parse().map_err(|_| "bad p_cnt".to_string())?;
    let mut antonym_links = Vec::new();
    for _ in 0..p_cnt {
        let symbol = next("pointer_symbol")?;
        let target_offset: u32 = next("pointer offset")?
            .parse()
            .map_err(|_| "bad pointer offset".to_string())?;
        let target_pos = next("pointer pos")?;
        let source_target = next("source/target")?;
        if symbol != "!" {
            continue;
        }
        let target_pos = target_pos
            .chars()
            .next()
            .and_then(Pos::from_wndb_char)
            .ok_or_else(|| format!("bad pointer pos `{target_pos}`"))?;
        if source_target.len() != 4 {
            return Err(format!("bad source/target `{source_target}`"));
        }
        let hex = |s: &str| u8::from_str_radix(s, 16).map_err(|_| format!("bad source/target `{source_target}`"));
        let source_word = hex(&source_target[..2])?;
        let target_word = hex(&source_target[2..])?;
        if usize::from(source_word) > lemmas.len() {
            return Err(format!("antonym source word {source_word} out of range"));
        }
        antonym_links.push(AntonymLink {
            source_word,
            target_pos,
            target_offset,
            target_word,
        });
    }
    Ok(Synset {
        pos,
        offset,
        lemmas,
        antonym_links,
    })
}

fn parse_index_line(line: &str, file_pos: Pos) -> std::result::Result<(String, Vec<u32>), String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let field = |i: usize, what: &str| fields.get(i).copied().ok_or_else(|| format!("missing {what}"));
    let lemma = field(0, "lemma")?;
    let pos = field(1, "pos")?;
    if pos.chars().next().and_then(Pos::from_wndb_char) != Some(file_pos) {
        return Err(format!("pos `{pos}` in index.{}", file_pos.file_suffix()));
    }
    let synset_cnt: usize = field(2, "synset_cnt")?
        .parse()
        .map_err(|_| "bad synset_cnt".to_string())?;
    let p_cnt: usize = field(3, "p_cnt")?.parse().map_err(|_| "bad p_cnt".to_string())?;
    // pointer symbols, then sense_cnt and tagsense_cnt
    let first_offset = 4 + p_cnt + 2;
    if fields.len() != first_offset + synset_cnt {
        return Err(format!(
            "expected {synset_cnt} synset offsets for `{lemma}`, found {}",
            fields.len().saturating_sub(first_offset)
        ));
    }
    let offsets = fields[first_offset..]
        .iter()
        .map(|s| s.parse::<u32>().map_err(|_| format!("bad synset offset `{s}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((lemma.to_lowercase(), offsets))
}

/// Drops the syntactic marker WordNet appends to some adjectives, e.g. `galore(ip)`.
fn strip_marker(word: &str) -> &str {
    match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    }
}

/// The corpus vocabulary: every `(lemma, pos)` some corpus token resolves to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entries: BTreeSet<(String, Pos)>,
}

impl Vocabulary {
    pub fn contains(&self, lemma: &str, pos: Pos) -> bool {
        // BTreeSet<(String, Pos)> cannot be probed with (&str, Pos); the
        // allocation is cheap next to a WordNet lookup.
        self.entries.contains(&(lemma.to_string(), pos))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, Pos)> {
        self.entries.iter()
    }

    pub fn insert(&mut self, lemma: String, pos: Pos) -> bool {
        self.entries.insert((lemma, pos))
    }
}

impl FromIterator<(String, Pos)> for Vocabulary {
    fn from_iter<I: IntoIterator<Item = (String, Pos)>>(iter: I) -> Self {
        Vocabulary {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Resolves one surface token to its `(lemma, pos)` readings, in block order.
pub fn resolve_token(surface: &str, db: &LexicalDatabase) -> Vec<(String, Pos)> {
    Pos::ALL
        .iter()
        .filter_map(|&pos| {
            morphy(surface, pos, db)
                .filter(|lemma| !is_multiword(lemma))
                .map(|lemma| (lemma, pos))
        })
        .collect()
}

fn is_multiword(lemma: &str) -> bool {
    lemma.contains('_') || lemma.contains(' ')
}

/// Distinct `(lemma, pos)` pairs in first-occurrence order over
/// arg1 then arg2 of every record.
pub fn lemma_occurrences(corpus: &[RelationRecord], db: &LexicalDatabase) -> Vec<(String, Pos)> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    for record in corpus {
        for text in [&record.arg1_text, &record.arg2_text] {
            for token in tokenize(text) {
                for entry in resolve_token(&token.surface, db) {
                    if seen.insert(entry.clone()) {
                        order.push(entry);
                    }
                }
            }
        }
    }
    order
}

pub fn build_vocabulary(corpus: &[RelationRecord], db: &LexicalDatabase) -> Vocabulary {
    lemma_occurrences(corpus, db).into_iter().collect()
}

/// Synonyms and antonyms of one word, restricted to the vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Retrieved {
    pub syn: BTreeSet<String>,
    pub ant: BTreeSet<String>,
}

/// The retrieval function: sense-aggregated synonyms of `(lemma, pos)` and
/// the full lemma sets of every synset targeted by a `!` pointer, both
/// intersected with the vocabulary. A lemma reachable both ways stays a synonym.
pub fn retrieve(lemma: &str, pos: Pos, vocab: &Vocabulary, db: &LexicalDatabase) -> Result<Retrieved> {
    if !vocab.contains(lemma, pos) {
        return Err(Error::NotInVocabulary {
            lemma: lemma.to_string(),
            pos,
        });
    }
    let mut out = Retrieved::default();
    out.syn.insert(lemma.to_string());
    for synset in db.synsets_of(lemma, pos) {
        for member in &synset.lemmas {
            if vocab.contains(member, pos) {
                out.syn.insert(member.clone());
            }
        }
        for link in &synset.antonym_links {
            if link.target_pos != pos {
                continue;
            }
            let Some(target) = db.synset(link.target_pos, link.target_offset) else {
                continue;
            };
            for member in &target.lemmas {
                if vocab.contains(member, pos) {
                    out.ant.insert(member.clone());
                }
            }
        }
    }
    let syn = &out.syn;
    out.ant.retain(|a| !syn.contains(a));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wndb::WndbWriter;

    fn tiny() -> LexicalDatabase {
        let mut w = WndbWriter::new();
        let large = w.synset(Pos::Adjective, &["large", "big"]);
        let small = w.synset(Pos::Adjective, &["small", "little"]);
        w.antonym(large, 1, small, 1);
        w.antonym(large, 2, small, 2);
        w.synset(Pos::Noun, &["Japan", "Nippon"]);
        w.exception(Pos::Adjective, "larger", &["large"]);
        w.to_database().unwrap()
    }

    fn vocab(entries: &[(&str, Pos)]) -> Vocabulary {
        entries.iter().map(|(l, p)| (l.to_string(), *p)).collect()
    }

    #[test]
    fn data_lemmas_are_lowercased() {
        let db = tiny();
        assert!(db.contains("japan", Pos::Noun));
        let s = db.synsets_of("japan", Pos::Noun).next().unwrap();
        assert_eq!(s.lemmas, ["japan", "nippon"]);
    }

    #[test]
    fn retrieve_large() {
        let db = tiny();
        let v = vocab(&[
            ("large", Pos::Adjective),
            ("big", Pos::Adjective),
            ("small", Pos::Adjective),
            ("little", Pos::Adjective),
        ]);
        let r = retrieve("large", Pos::Adjective, &v, &db).unwrap();
        assert_eq!(r.syn, BTreeSet::from(["big".into(), "large".into()]));
        assert_eq!(r.ant, BTreeSet::from(["little".into(), "small".into()]));
    }

    #[test]
    fn retrieve_restricts_to_vocabulary() {
        let db = tiny();
        let v = vocab(&[("large", Pos::Adjective), ("small", Pos::Adjective)]);
        let r = retrieve("large", Pos::Adjective, &v, &db).unwrap();
        assert_eq!(r.syn, BTreeSet::from(["large".into()]));
        assert_eq!(r.ant, BTreeSet::from(["small".into()]));
    }

    #[test]
    fn retrieve_without_antonyms() {
        let db = tiny();
        let v = vocab(&[("japan", Pos::Noun)]);
        let r = retrieve("japan", Pos::Noun, &v, &db).unwrap();
        assert_eq!(r.syn, BTreeSet::from(["japan".into()]));
        assert!(r.ant.is_empty());
    }

    #[test]
    fn retrieve_outside_vocabulary_fails() {
        let db = tiny();
        let err = retrieve("large", Pos::Adjective, &Vocabulary::default(), &db).unwrap_err();
        assert!(matches!(err, Error::NotInVocabulary { .. }));
    }

    #[test]
    fn data_line_with_markers_and_other_pointers() {
        let line = "00001740 00 a 02 able(p) 0 big 1 003 = 05207437 n 0000 ! 00002098 a 0101 + 05207437 n 0101 | (usually followed by `to') having the necessary means";
        let s = parse_data_line(line, Pos::Adjective).unwrap();
        assert_eq!(s.lemmas, ["able", "big"]);
        assert_eq!(
            s.antonym_links,
            [AntonymLink {
                source_word: 1,
                target_pos: Pos::Adjective,
                target_offset: 2098,
                target_word: 1
            }]
        );
    }

    #[test]
    fn satellite_synsets_are_adjectives() {
        let line = "00002312 00 s 01 abaxial 0 000 | facing away";
        assert_eq!(parse_data_line(line, Pos::Adjective).unwrap().pos, Pos::Adjective);
    }

    #[test]
    fn index_line_count_mismatch_is_rejected() {
        let err = parse_index_line("dog n 2 1 @ 2 1 02084071", Pos::Noun).unwrap_err();
        assert!(err.contains("expected 2"), "{err}");
        let (lemma, offs) = parse_index_line("dog n 1 1 @ 1 1 02084071  ", Pos::Noun).unwrap();
        assert_eq!((lemma.as_str(), offs), ("dog", vec![2084071]));
    }

    #[test]
    fn malformed_data_line_reports_file_and_line() {
        let mut w = WndbWriter::new();
        w.synset(Pos::Noun, &["dog"]);
        let mut files = w.render();
        files.insert("data.verb".into(), "  1 header\n00000000 29 v zz\n".into());
        let err = LexicalDatabase::from_sources(|n| files.get(n).map(String::as_str)).unwrap_err();
        match err {
            Error::Malformed { file, line, .. } => assert_eq!((file.as_str(), line), ("data.verb", 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_index_offset_is_rejected() {
        let mut w = WndbWriter::new();
        w.synset(Pos::Noun, &["dog"]);
        let mut files = w.render();
        files.insert("index.adv".into(), "ever r 1 0 1 0 00099999\n".into());
        let err = LexicalDatabase::from_sources(|n| files.get(n).map(String::as_str)).unwrap_err();
        assert!(err.to_string().contains("index.adv:1"), "{err}");
    }

    #[test]
    fn missing_file_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = WndbWriter::new();
        w.synset(Pos::Noun, &["dog"]);
        w.write_dir(dir.path()).unwrap();
        fs::remove_file(dir.path().join("data.verb")).unwrap();
        let err = load_wordnet(dir.path()).unwrap_err();
        assert!(matches!(&err, Error::MissingFile { name, .. } if name == "data.verb"));
        assert!(err.to_string().contains("data.verb"));
    }
}
