//! Deterministic synthetic corpus plus a matching mini database.
//!
//! Every antonym pair becomes its own bag, so the match counts planted in
//! each relation are exactly the counts measured under the full lexicon.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use synant_core::corpus::{Explicitness, RelationRecord, Sense};
use synant_core::wndb::WndbWriter;
use synant_core::Pos;

/// `(pos, left side, right side)`; the first word of each side carries
/// the antonym pointer.
pub const PAIRS: &[(Pos, &[&str], &[&str])] = &[
    (Pos::Adjective, &["large", "big"], &["small", "little"]),
    (Pos::Adjective, &["hot"], &["cold"]),
    (Pos::Adjective, &["good"], &["bad"]),
    (Pos::Adjective, &["high"], &["low"]),
    (Pos::Adjective, &["strong"], &["weak"]),
    (Pos::Adjective, &["fast", "quick"], &["slow"]),
    (Pos::Adjective, &["rich"], &["poor"]),
    (Pos::Adjective, &["happy"], &["sad"]),
    (Pos::Adjective, &["early"], &["late"]),
    (Pos::Adjective, &["young"], &["old"]),
    (Pos::Adjective, &["cheap"], &["expensive"]),
    (Pos::Adjective, &["easy"], &["difficult", "hard"]),
    (Pos::Adjective, &["safe"], &["dangerous"]),
    (Pos::Adjective, &["wide"], &["narrow"]),
    (Pos::Adjective, &["light"], &["heavy"]),
    (Pos::Adjective, &["public"], &["private"]),
    (Pos::Noun, &["profit", "gain"], &["loss"]),
    (Pos::Noun, &["success"], &["failure"]),
    (Pos::Noun, &["victory"], &["defeat"]),
    (Pos::Noun, &["strength"], &["weakness"]),
    (Pos::Noun, &["peace"], &["war"]),
    (Pos::Noun, &["friend", "ally"], &["enemy", "foe"]),
    (Pos::Noun, &["income"], &["expense"]),
    (Pos::Noun, &["majority"], &["minority"]),
    (Pos::Noun, &["morning"], &["evening"]),
    (Pos::Noun, &["summer"], &["winter"]),
    (Pos::Noun, &["import"], &["export"]),
    (Pos::Noun, &["supply"], &["demand"]),
    (Pos::Noun, &["asset"], &["liability"]),
    (Pos::Noun, &["beginning", "start"], &["end"]),
    (Pos::Verb, &["rise", "climb"], &["fall", "drop"]),
    (Pos::Verb, &["win"], &["lose"]),
    (Pos::Verb, &["buy"], &["sell"]),
    (Pos::Verb, &["accept"], &["reject"]),
    (Pos::Verb, &["open"], &["close"]),
    (Pos::Verb, &["agree"], &["disagree"]),
    (Pos::Verb, &["remember"], &["forget"]),
    (Pos::Verb, &["arrive"], &["depart", "leave"]),
    (Pos::Verb, &["succeed"], &["fail"]),
    (Pos::Verb, &["include"], &["exclude"]),
    (Pos::Verb, &["increase"], &["decrease"]),
    (Pos::Verb, &["borrow"], &["lend"]),
    (Pos::Adverb, &["quickly", "rapidly"], &["slowly"]),
    (Pos::Adverb, &["always"], &["never"]),
    (Pos::Adverb, &["often", "frequently"], &["rarely", "seldom"]),
    (Pos::Adverb, &["well"], &["badly"]),
    (Pos::Adverb, &["together"], &["apart"]),
    (Pos::Adverb, &["inside", "indoors"], &["outside", "outdoors"]),
    (Pos::Adverb, &["upward"], &["downward"]),
    (Pos::Adverb, &["forward"], &["backward"]),
    (Pos::Adverb, &["legally"], &["illegally"]),
    (Pos::Adverb, &["happily"], &["sadly"]),
];

/// Satellites of adjective heads: `(head word, satellite words)`.
const SATELLITES: &[(&str, &[&str])] = &[
    ("large", &["huge", "vast"]),
    ("small", &["tiny"]),
    ("hot", &["warm"]),
    ("cold", &["cool"]),
];

/// Database words with no antonyms; they surface as fillers.
const FILLER_NOUNS: &[&str] = &[
    "company", "market", "report", "year", "share", "price", "city", "government", "team", "plan",
    "bank", "country", "quarter", "investor", "analyst", "customer", "product", "industry", "sector",
    "official", "week", "month", "economy", "result", "firm", "president", "board", "deal", "rate",
    "stock", "bond", "fund", "trader", "worker", "union", "court", "law", "policy", "tax", "budget",
    "school", "student", "teacher", "hospital", "doctor", "patient", "village", "road", "river",
    "bridge", "factory", "farm", "crop", "weather", "season", "election", "vote", "party", "leader",
    "minister", "agency", "office", "building", "house", "family", "child", "parent", "game",
    "player", "coach", "season ticket", "share price", "interest rate",
];
const FILLER_VERBS: &[&str] = &["say", "expect", "show", "make", "take", "see", "announce", "plan out"];
const FILLER_ADJECTIVES: &[&str] = &[
    "annual", "national", "local", "recent", "foreign", "federal", "daily", "weekly", "monthly", "central",
];
/// Not in the database.
const FUNCTION_WORDS: &[&str] = &[
    "the", "a", "of", "to", "in", "and", "for", "on", "with", "this", "that", "its", "was", "were",
    "has", "had", "by", "at", "from", "their",
];

/// Past forms used when a verb is inflected, with the exceptions the
/// detachment rules cannot undo.
const PAST: &[(&str, &str, bool)] = &[
    ("rise", "rose", true),
    ("climb", "climbed", false),
    ("fall", "fell", true),
    ("drop", "dropped", true),
    ("win", "won", true),
    ("lose", "lost", true),
    ("buy", "bought", true),
    ("sell", "sold", true),
    ("accept", "accepted", false),
    ("reject", "rejected", false),
    ("open", "opened", false),
    ("close", "closed", false),
    ("agree", "agreed", false),
    ("disagree", "disagreed", false),
    ("remember", "remembered", false),
    ("forget", "forgot", true),
    ("arrive", "arrived", false),
    ("depart", "departed", false),
    ("leave", "left", true),
    ("succeed", "succeeded", false),
    ("fail", "failed", false),
    ("include", "included", false),
    ("exclude", "excluded", false),
    ("increase", "increased", false),
    ("decrease", "decreased", false),
    ("borrow", "borrowed", false),
    ("lend", "lent", true),
];

pub const CONTRAST_CONNECTIVES: &[&str] = &[
    "but", "however", "while", "whereas", "by contrast", "in contrast", "on the other hand", "meanwhile",
];
pub const CONCESSION_CONNECTIVES: &[&str] = &[
    "although", "though", "even though", "nevertheless", "yet", "still", "despite", "even if",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureParams {
    pub seed: u64,
    pub relations: usize,
    /// Instances given to the first connective of each sense (`but`,
    /// `although`); zero leaves every connective in class B.
    pub a_class_size: usize,
    /// Extra matches planted in every explicit concession relation.
    pub match_shift: usize,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            seed: 42,
            relations: 200,
            a_class_size: 0,
            match_shift: 0,
        }
    }
}

pub struct Fixture {
    pub records: Vec<RelationRecord>,
    pub database: WndbWriter,
}

pub fn database() -> WndbWriter {
    let mut w = WndbWriter::new();
    let mut heads = Vec::new();
    for &(pos, left, right) in PAIRS {
        let a = w.synset(pos, left);
        let b = w.synset(pos, right);
        w.antonym(a, 1, b, 1);
        heads.push((left[0], a));
        heads.push((right[0], b));
    }
    for &(head, words) in SATELLITES {
        let id = heads.iter().find(|(w, _)| *w == head).expect("satellite head").1;
        for word in words {
            w.satellite(id, &[word]);
        }
    }
    for &(pos, words) in &[
        (Pos::Noun, FILLER_NOUNS),
        (Pos::Verb, FILLER_VERBS),
        (Pos::Adjective, FILLER_ADJECTIVES),
    ] {
        for word in words {
            w.synset(pos, &[word]);
        }
    }
    for &(base, past, irregular) in PAST {
        if irregular {
            w.exception(Pos::Verb, past, &[base]);
        }
    }
    w
}

#[derive(Debug, Clone, Copy)]
struct Plan {
    sense: Sense,
    explicitness: Explicitness,
    connective: &'static str,
}

fn plan(p: &FixtureParams) -> Vec<Plan> {
    let mut plans = Vec::with_capacity(p.relations);
    let a = p.a_class_size.min(p.relations / 2);
    let push = |plans: &mut Vec<Plan>, sense, connective, k: usize| {
        let explicitness = if k.is_multiple_of(2) {
            Explicitness::Explicit
        } else {
            Explicitness::Implicit
        };
        plans.push(Plan {
            sense,
            explicitness,
            connective,
        });
    };
    for k in 0..a {
        push(&mut plans, Sense::Contrast, CONTRAST_CONNECTIVES[0], k);
        push(&mut plans, Sense::Concession, CONCESSION_CONNECTIVES[0], k);
    }
    // with an A-class connective the rest cycle over the others only
    let skip = usize::from(a > 0);
    let contrast = &CONTRAST_CONNECTIVES[skip..];
    let concession = &CONCESSION_CONNECTIVES[skip..];
    for k in 0..p.relations - 2 * a {
        let (sense, list) = if k % 2 == 0 {
            (Sense::Concession, concession)
        } else {
            (Sense::Contrast, contrast)
        };
        let slot = k / 2;
        push(&mut plans, sense, list[slot % list.len()], slot / list.len());
    }
    plans
}

fn sample_counts(rng: &mut ChaCha8Rng) -> (usize, usize) {
    if rng.gen_bool(0.3) {
        return (0, 0);
    }
    loop {
        let syn = [0, 0, 1, 1, 2][rng.gen_range(0..5)];
        let ant = [0, 0, 1, 1, 2, 3][rng.gen_range(0..6)];
        if syn + ant > 0 {
            return (syn, ant);
        }
    }
}

fn surface(word: &str, pos: Pos, rng: &mut ChaCha8Rng) -> String {
    if pos == Pos::Verb && rng.gen_bool(0.5) {
        if let Some(&(_, past, _)) = PAST.iter().find(|(b, _, _)| *b == word) {
            return past.to_string();
        }
    }
    word.to_string()
}

fn sentence(mut words: Vec<String>, rng: &mut ChaCha8Rng) -> String {
    let fillers = rng.gen_range(2..=5);
    for _ in 0..fillers {
        let w = if rng.gen_bool(0.6) {
            FUNCTION_WORDS[rng.gen_range(0..FUNCTION_WORDS.len())]
        } else {
            let single: Vec<&&str> = FILLER_NOUNS.iter().filter(|w| !w.contains(' ')).collect();
            single[rng.gen_range(0..single.len())]
        };
        words.push(w.to_string());
    }
    words.shuffle(rng);
    let mut text = words.join(" ");
    if let Some(first) = text.get(0..1) {
        text.replace_range(0..1, &first.to_uppercase());
    }
    text.push('.');
    text
}

pub fn generate(p: &FixtureParams) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut plans = plan(p);
    plans.shuffle(&mut rng);

    let mut records = Vec::with_capacity(plans.len());
    for (i, pl) in plans.iter().enumerate() {
        let (mut syn, mut ant) = sample_counts(&mut rng);
        if pl.sense == Sense::Concession && pl.explicitness == Explicitness::Explicit {
            syn += p.match_shift.div_ceil(2);
            ant += p.match_shift / 2;
        }
        let unmatched = rng.gen_range(0..=2);
        let wanted = (syn + ant + unmatched).min(PAIRS.len());
        let chosen: Vec<usize> = rand::seq::index::sample(&mut rng, PAIRS.len(), wanted).into_vec();

        let (mut arg1, mut arg2) = (Vec::new(), Vec::new());
        for (k, &idx) in chosen.iter().enumerate() {
            let (pos, left, right) = PAIRS[idx];
            let (own, other) = if rng.gen_bool(0.5) { (left, right) } else { (right, left) };
            let pick = |side: &[&str], rng: &mut ChaCha8Rng| side[rng.gen_range(0..side.len())].to_string();
            if k < syn {
                let a = pick(own, &mut rng);
                let b = pick(own, &mut rng);
                arg1.push(surface(&a, pos, &mut rng));
                arg2.push(surface(&b, pos, &mut rng));
            } else if k < syn + ant {
                let a = pick(own, &mut rng);
                let b = pick(other, &mut rng);
                arg1.push(surface(&a, pos, &mut rng));
                arg2.push(surface(&b, pos, &mut rng));
            } else {
                let a = pick(own, &mut rng);
                let word = surface(&a, pos, &mut rng);
                if rng.gen_bool(0.5) {
                    arg1.push(word);
                } else {
                    arg2.push(word);
                }
            }
        }
        records.push(RelationRecord {
            id: format!("syn{:05}", i + 1),
            sense: pl.sense,
            explicitness: pl.explicitness,
            connective: pl.connective.to_string(),
            arg1_text: sentence(arg1, &mut rng),
            arg2_text: sentence(arg2, &mut rng),
        });
    }
    Fixture {
        records,
        database: database(),
    }
}
