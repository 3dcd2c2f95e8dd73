//! Writer for small databases in the WNDB on-disk layout.
//!
//! Offsets are the byte positions of each synset line in its data file,
//! as in the Princeton distribution, so the output is readable by any
//! WNDB consumer as well as by [`LexicalDatabase`].

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexdb::LexicalDatabase;
use crate::pos::Pos;

const HEADER: &[&str] = &[
    "  1 Synthetic lexical database in WordNet database format.",
    "  2 Generated for testing; not derived from Princeton WordNet content.",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId {
    pub pos: Pos,
    index: usize,
}

#[derive(Debug, Clone)]
struct Pointer {
    symbol: &'static str,
    target: SynsetId,
    source_word: u8,
    target_word: u8,
}

#[derive(Debug, Clone)]
struct Entry {
    satellite: bool,
    words: Vec<String>,
    pointers: Vec<Pointer>,
}

#[derive(Debug, Clone, Default)]
pub struct WndbWriter {
    synsets: [Vec<Entry>; 4],
    exceptions: [BTreeMap<String, Vec<String>>; 4],
}

impl WndbWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a synset; words keep their case in the data file.
    pub fn synset(&mut self, pos: Pos, words: &[&str]) -> SynsetId {
        self.push(pos, words, false)
    }

    /// Adds an adjective satellite linked to `head` by similar-to pointers.
    pub fn satellite(&mut self, head: SynsetId, words: &[&str]) -> SynsetId {
        assert_eq!(head.pos, Pos::Adjective, "satellites hang off adjective heads");
        let id = self.push(Pos::Adjective, words, true);
        self.pointer(head, "&", id, 0, 0);
        self.pointer(id, "&", head, 0, 0);
        id
    }

    fn push(&mut self, pos: Pos, words: &[&str], satellite: bool) -> SynsetId {
        assert!(!words.is_empty() && words.len() < 256);
        let list = &mut self.synsets[pos.slot()];
        list.push(Entry {
            satellite,
            words: words.iter().map(|w| w.replace(' ', "_")).collect(),
            pointers: Vec::new(),
        });
        SynsetId {
            pos,
            index: list.len() - 1,
        }
    }

    /// Adds a reciprocal pair of lexical `!` pointers between word
    /// `a_word` of `a` and word `b_word` of `b` (1-based).
    pub fn antonym(&mut self, a: SynsetId, a_word: u8, b: SynsetId, b_word: u8) {
        self.pointer(a, "!", b, a_word, b_word);
        self.pointer(b, "!", a, b_word, a_word);
    }

    /// Adds one pointer of an arbitrary symbol; word numbers 0 mean semantic.
    pub fn pointer(&mut self, from: SynsetId, symbol: &'static str, to: SynsetId, source_word: u8, target_word: u8) {
        self.synsets[from.pos.slot()][from.index].pointers.push(Pointer {
            symbol,
            target: to,
            source_word,
            target_word,
        });
    }

    pub fn exception(&mut self, pos: Pos, inflected: &str, bases: &[&str]) {
        self.exceptions[pos.slot()]
            .entry(inflected.to_string())
            .or_default()
            .extend(bases.iter().map(|b| b.to_string()));
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.iter().map(Vec::len).sum()
    }

    /// Byte offset of every synset line, per POS.
    fn offsets(&self) -> [Vec<u32>; 4] {
        let header_len: usize = HEADER.iter().map(|l| l.len() + 1).sum();
        let zero = [vec![], vec![], vec![], vec![]];
        let mut out: [Vec<u32>; 4] = Default::default();
        for pos in Pos::ALL {
            let mut at = header_len;
            for (i, _) in self.synsets[pos.slot()].iter().enumerate() {
                out[pos.slot()].push(at as u32);
                // line length does not depend on offset values (fixed width)
                at += self.data_line(pos, i, &zero, true).len();
            }
        }
        out
    }

    fn data_line(&self, pos: Pos, i: usize, offsets: &[Vec<u32>; 4], measuring: bool) -> String {
        let entry = &self.synsets[pos.slot()][i];
        let offset_of = |id: SynsetId| {
            if measuring {
                0
            } else {
                offsets[id.pos.slot()][id.index]
            }
        };
        let ss_type = if entry.satellite { 's' } else { pos.wndb_char() };
        let lex_filenum = match pos {
            Pos::Adjective => 0,
            Pos::Adverb => 2,
            Pos::Noun => 3,
            Pos::Verb => 29,
        };
        let mut line = format!(
            "{:08} {:02} {} {:02x}",
            offset_of(SynsetId { pos, index: i }),
            lex_filenum,
            ss_type,
            entry.words.len()
        );
        for word in &entry.words {
            line.push_str(&format!(" {word} 0"));
        }
        line.push_str(&format!(" {:03}", entry.pointers.len()));
        for p in &entry.pointers {
            let target = &self.synsets[p.target.pos.slot()][p.target.index];
            let target_char = if target.satellite { 's' } else { p.target.pos.wndb_char() };
            line.push_str(&format!(
                " {} {:08} {} {:02x}{:02x}",
                p.symbol,
                offset_of(p.target),
                target_char,
                p.source_word,
                p.target_word
            ));
        }
        if pos == Pos::Verb {
            line.push_str(" 01 + 02 00");
        }
        line.push_str(&format!(" | {}  \n", entry.words[0].replace('_', " ")));
        line
    }

    /// Renders all twelve files, keyed by file name.
    pub fn render(&self) -> BTreeMap<String, String> {
        let offsets = self.offsets();
        let mut files = BTreeMap::new();
        for pos in Pos::ALL {
            let suffix = pos.file_suffix();
            let mut data = String::new();
            for line in HEADER {
                data.push_str(line);
                data.push('\n');
            }
            let mut index: BTreeMap<String, (BTreeSet<&str>, Vec<u32>)> = BTreeMap::new();
            for (i, entry) in self.synsets[pos.slot()].iter().enumerate() {
                data.push_str(&self.data_line(pos, i, &offsets, false));
                let symbols: BTreeSet<&str> = entry.pointers.iter().map(|p| p.symbol).collect();
                for word in &entry.words {
                    let slot = index.entry(word.to_lowercase()).or_default();
                    slot.0.extend(symbols.iter().copied());
                    slot.1.push(offsets[pos.slot()][i]);
                }
            }
            let mut idx = String::new();
            for line in HEADER {
                idx.push_str(line);
                idx.push('\n');
            }
            for (lemma, (symbols, offs)) in &index {
                idx.push_str(&format!("{lemma} {} {} {}", pos.wndb_char(), offs.len(), symbols.len()));
                for s in symbols {
                    idx.push_str(&format!(" {s}"));
                }
                idx.push_str(&format!(" {} 0", offs.len()));
                for o in offs {
                    idx.push_str(&format!(" {o:08}"));
                }
                idx.push_str("  \n");
            }
            let mut exc = String::new();
            for (inflected, bases) in &self.exceptions[pos.slot()] {
                exc.push_str(inflected);
                for b in bases {
                    exc.push(' ');
                    exc.push_str(b);
                }
                exc.push('\n');
            }
            files.insert(format!("data.{suffix}"), data);
            files.insert(format!("index.{suffix}"), idx);
            files.insert(format!("{suffix}.exc"), exc);
        }
        files
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, contents) in self.render() {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    pub fn to_database(&self) -> Result<LexicalDatabase> {
        let files = self.render();
        LexicalDatabase::from_sources(|name| files.get(name).map(String::as_str))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_are_byte_positions() {
        let mut w = WndbWriter::new();
        let a = w.synset(Pos::Adjective, &["large", "big"]);
        let b = w.synset(Pos::Adjective, &["small", "little"]);
        w.antonym(a, 1, b, 1);
        w.satellite(b, &["minor"]);
        let files = w.render();
        let data = &files["data.adj"];
        for line in data.lines().filter(|l| !l.starts_with("  ")) {
            let offset: usize = line[..8].parse().unwrap();
            assert!(data[offset..].starts_with(line));
        }
        assert!(files["index.adj"].contains("large a 1 1 ! 1 0"));
        let db = w.to_database().unwrap();
        assert_eq!(db.synset_count(), 3);
        let small = db.synsets_of("small", Pos::Adjective).next().unwrap();
        let large = db.synsets_of("large", Pos::Adjective).next().unwrap();
        assert_eq!(small.antonym_links[0].target_offset, large.offset);
    }
}
