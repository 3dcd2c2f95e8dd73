//! Checks against a real WordNet 3.0 installation. Set `WORDNET_DIR` to the
//! directory holding the `index.*`, `data.*` and `*.exc` files; without it
//! every test returns early.

use std::path::PathBuf;
use std::sync::OnceLock;

use synant_core::lexdb::{retrieve, LexicalDatabase, Vocabulary};
use synant_core::morphy::morphy;
use synant_core::Pos;

fn db() -> Option<&'static LexicalDatabase> {
    static DB: OnceLock<Option<LexicalDatabase>> = OnceLock::new();
    DB.get_or_init(|| {
        let dir = PathBuf::from(std::env::var_os("WORDNET_DIR")?);
        Some(LexicalDatabase::load(&dir).expect("WORDNET_DIR holds a WordNet database"))
    })
    .as_ref()
}

fn vocab(entries: &[(&str, Pos)]) -> Vocabulary {
    entries.iter().map(|&(w, p)| (w.to_string(), p)).collect()
}

#[test]
fn adjective_index_contains_large() {
    let Some(db) = db() else { return };
    assert!(db.contains("large", Pos::Adjective));
    assert!(db.synset_count() > 100_000);
}

#[test]
fn morphy_on_real_data() {
    let Some(db) = db() else { return };
    assert_eq!(morphy("climbed", Pos::Verb, db).as_deref(), Some("climb"));
    assert_eq!(morphy("churches", Pos::Noun, db).as_deref(), Some("church"));
    assert_eq!(morphy("dog", Pos::Noun, db).as_deref(), Some("dog"));
    assert_eq!(morphy("is", Pos::Verb, db).as_deref(), Some("be"));
    assert_eq!(morphy("xyzzy", Pos::Noun, db), None);
}

#[test]
fn large_retrieves_figure_one_sides() {
    let Some(db) = db() else { return };
    let v = vocab(&[
        ("large", Pos::Adjective),
        ("big", Pos::Adjective),
        ("small", Pos::Adjective),
        ("little", Pos::Adjective),
    ]);
    let r = retrieve("large", Pos::Adjective, &v, db).unwrap();
    assert!(r.syn.contains("large") && r.syn.contains("big"));
    assert!(r.ant.contains("small"));
}

/// WordNet 3.0 carries no `!` pointer from either `profit` synset; `loss`
/// opposes `gain`, which shares a synset with `profit`. The two only end up
/// on opposite sides once `gain` is in the vocabulary.
#[test]
fn profit_and_loss_meet_through_gain() {
    let Some(db) = db() else { return };
    let v = vocab(&[("profit", Pos::Noun), ("loss", Pos::Noun)]);
    assert!(retrieve("profit", Pos::Noun, &v, db).unwrap().ant.is_empty());

    let v = vocab(&[("profit", Pos::Noun), ("loss", Pos::Noun), ("gain", Pos::Noun)]);
    let r = retrieve("gain", Pos::Noun, &v, db).unwrap();
    assert!(r.syn.contains("profit"));
    assert_eq!(r.ant.into_iter().collect::<Vec<_>>(), ["loss"]);

    use synant_core::bagset::{build_lexicon, Side};
    use synant_core::corpus::{Explicitness, RelationRecord, Sense};
    let corpus = [RelationRecord {
        id: "1".into(),
        sense: Sense::Contrast,
        explicitness: Explicitness::Explicit,
        connective: "but".into(),
        arg1_text: "a gain and a profit".into(),
        arg2_text: "a loss".into(),
    }];
    let lex = build_lexicon(&corpus, db).unwrap();
    let profit = lex.locate("profit", Pos::Noun).to_vec();
    let loss = lex.locate("loss", Pos::Noun).to_vec();
    assert_eq!(profit.len(), 1);
    assert_eq!(loss, [(profit[0].0, Side::R)]);
    assert_eq!(profit[0].1, Side::L);
}

#[test]
fn japan_has_no_antonyms() {
    let Some(db) = db() else { return };
    let v = vocab(&[("japan", Pos::Noun), ("profit", Pos::Noun)]);
    let r = retrieve("japan", Pos::Noun, &v, db).unwrap();
    assert_eq!(r.syn.into_iter().collect::<Vec<_>>(), ["japan"]);
    assert!(r.ant.is_empty());
}
