use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use synant_cli::config::RunConfig;
use synant_cli::fixture::{generate, FixtureParams};
use synant_cli::{CliError, Overrides};
use synant_core::bagset::{build_lexicon, curate};
use synant_core::matchstats::{significance_report, ScalarMode};
use synant_core::relgraph::{classify_connectives, Class};

fn synant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synant"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = synant(args);
    assert!(
        out.status.success(),
        "synant {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Generates a fixture into `dir` and returns its config file.
fn fixture_config(dir: &Path, extra: &str) -> PathBuf {
    let conf = dir.join("run.conf");
    fs::write(
        &conf,
        format!("corpus = corpus.jsonl\nwordnet = wordnet\nout = out\n{extra}"),
    )
    .unwrap();
    ok(&["gen-fixture", "--config", s(&conf)]);
    conf
}

fn pipeline(conf: &Path, out: &Path) {
    for cmd in ["build-lexicon", "phi", "match"] {
        ok(&[cmd, "--config", s(conf), "--out", s(out)]);
    }
}

fn read_csv(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .unwrap();
    let header = r.headers().unwrap().clone();
    r.records()
        .map(|row| {
            let row = row.unwrap();
            header.iter().map(String::from).zip(row.iter().map(String::from)).collect()
        })
        .collect()
}

fn files_under(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn missing_wordnet_is_a_config_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    fixture_config(dir.path(), "relations = 20\n");
    let missing = dir.path().join("no-such-wordnet");
    let out = synant(&[
        "build-lexicon",
        "--corpus",
        s(&dir.path().join("corpus.jsonl")),
        "--wordnet",
        s(&missing),
        "--out",
        s(&dir.path().join("o")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(s(&missing)));
}

#[test]
fn missing_config_file_and_unknown_key_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = synant(&["phi", "--config", s(&dir.path().join("absent.conf"))]);
    assert_eq!(out.status.code(), Some(2));

    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "# comment\ncolour = blue\n").unwrap();
    let out = synant(&["phi", "--config", s(&conf)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.conf:2"));
}

#[test]
fn malformed_corpus_is_a_data_error_unless_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fixture_config(dir.path(), "relations = 20\n");
    let corpus = dir.path().join("corpus.jsonl");
    let mut text = fs::read_to_string(&corpus).unwrap();
    text.push_str("{\"id\": \"broken\"\n");
    fs::write(&corpus, text).unwrap();

    let out = synant(&["build-lexicon", "--config", s(&conf)]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = ok(&["build-lexicon", "--config", s(&conf), "--skip-malformed"]);
    assert!(stdout.contains("skipped"), "{stdout}");
}

#[test]
fn full_pipeline_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fixture_config(dir.path(), "relations = 400\na_class_size = 120\nmatch_shift = 2\n");
    let out = dir.path().join("run1");
    pipeline(&conf, &out);

    let phi = read_csv(&out.join("phi.csv"));
    let summary: Vec<_> = phi.iter().filter(|r| r["row"] == "summary").collect();
    assert_eq!(summary.len(), 20);
    for srow in &summary {
        let rows: Vec<f64> = phi
            .iter()
            .filter(|r| {
                r["row"] == "connective"
                    && r["sense"] == srow["sense"]
                    && r["class"] == srow["class"]
                    && r["mask"] == srow["mask"]
            })
            .map(|r| r["phi"].parse().unwrap())
            .collect();
        assert_eq!(srow["graphs"], rows.len().to_string());
        if rows.is_empty() {
            assert_eq!(srow["mean_phi"], "NA");
        } else {
            let mean: f64 = srow["mean_phi"].parse().unwrap();
            assert!((mean - rows.iter().sum::<f64>() / rows.len() as f64).abs() < 1e-12);
            assert!(rows.iter().all(|&p| p >= 1.0 - 1e-12));
        }
    }
    assert!(phi
        .iter()
        .any(|r| r["class"] == "A" && r["connective"] == "but" && r["row"] == "connective"));

    let heat = read_csv(&out.join("heatmap.csv"));
    let mut sums: BTreeMap<&str, f64> = BTreeMap::new();
    for r in &heat {
        *sums.entry(r["group"].as_str()).or_default() += r["proportion"].parse::<f64>().unwrap();
    }
    assert_eq!(sums.len(), 4);
    for (g, total) in sums {
        assert!((total - 1.0).abs() < 1e-9, "{g}: {total}");
    }

    let sig = read_csv(&out.join("significance.csv"));
    assert_eq!(sig.len(), 4);
    let ids: Vec<&str> = sig.iter().map(|r| r["test_id"].as_str()).collect();
    assert_eq!(ids, ["1", "2", "3", "4"]);
    assert!(sig[3]["p"].parse::<f64>().unwrap() < 0.05);

    let mut svgs = 0;
    for (name, bytes) in files_under(&out) {
        if name.extension().is_some_and(|e| e == "svg") {
            let text = String::from_utf8(bytes).unwrap();
            let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", name.display()));
            assert_eq!(doc.root_element().tag_name().name(), "svg");
            svgs += 1;
        }
    }
    assert_eq!(svgs, 4 + 4, "four phi charts and four heat maps");

    for name in ["phi.csv", "heatmap.csv", "significance.csv", "retention.csv"] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        assert!(text.starts_with("# tool: synant "), "{name}");
        assert!(text.contains("# corpus_sha256: "), "{name}");
        assert!(text.contains("# database_sha256: "), "{name}");
        assert!(text.contains("# curation_sha256: none"), "{name}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fixture_config(dir.path(), "relations = 300\na_class_size = 100\n");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    pipeline(&conf, &a);
    pipeline(&conf, &b);
    ok(&["phi", "--config", s(&conf), "--out", s(&a), "--export-graphs"]);
    ok(&["phi", "--config", s(&conf), "--out", s(&b), "--export-graphs"]);
    let (fa, fb) = (files_under(&a), files_under(&b));
    assert!(fa.keys().any(|k| k.starts_with("graphs")));
    assert_eq!(fa.keys().collect::<Vec<_>>(), fb.keys().collect::<Vec<_>>());
    for (name, bytes) in &fa {
        assert!(bytes == &fb[name], "{} differs", name.display());
    }
}

#[test]
fn gen_fixture_line_count_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let corpus = dir.path().join(name);
        ok(&[
            "gen-fixture",
            "--seed",
            "42",
            "--relations",
            "200",
            "--corpus",
            s(&corpus),
            "--wordnet",
            s(&dir.path().join(format!("{name}.wn"))),
            "--out",
            s(dir.path()),
        ]);
        fs::read_to_string(corpus).unwrap()
    };
    let first = run("c1.jsonl");
    assert_eq!(first.lines().filter(|l| !l.starts_with('#')).count(), 200);
    assert_eq!(first, run("c2.jsonl"));
}

#[test]
fn gen_fixture_rejects_oversized_a_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = synant(&[
        "gen-fixture",
        "--relations",
        "100",
        "--a-class-size",
        "60",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn requested_a_class_connective_is_class_a() {
    let f = generate(&FixtureParams {
        seed: 42,
        relations: 300,
        a_class_size: 120,
        match_shift: 0,
    });
    let classes = classify_connectives(&f.records);
    let a: Vec<_> = classes.iter().filter(|c| c.class == Class::A).collect();
    assert_eq!(a.len(), 2);
    assert!(a.iter().all(|c| c.count == 120));
    assert!(classes.iter().filter(|c| c.class == Class::B).all(|c| c.count < 100));
}

fn test_four_p(seed: u64, shift: usize) -> (f64, f64, f64) {
    let f = generate(&FixtureParams {
        seed,
        relations: 600,
        a_class_size: 0,
        match_shift: shift,
    });
    let db = f.database.to_database().unwrap();
    let lex = curate(&build_lexicon(&f.records, &db).unwrap(), None).unwrap();
    let rows = significance_report(&f.records, &lex, &db, ScalarMode::Total).unwrap();
    let r = rows[3].result.unwrap();
    (r.p, r.u1, r.u2)
}

#[test]
fn match_shift_makes_test_four_significant() {
    let (p, u1, u2) = test_four_p(42, 2);
    assert!(p < 0.05, "p = {p}");
    assert!(u1 > u2, "explicit concession carries the extra matches");
}

#[test]
fn unshifted_fixture_is_not_significant() {
    let (p, _, _) = test_four_p(42, 0);
    assert!(p > 0.2, "p = {p}");
}

fn env_of(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
    let map: BTreeMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    move |k| map.get(k).cloned()
}

#[test]
fn flags_override_env_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("c.conf");
    fs::write(&conf, "seed = 1\nscalar = syn\ncorpus = data/corpus.jsonl\nheatmap_cap = 5\n").unwrap();

    let from_file = Overrides {
        config: Some(conf.clone()),
        ..Default::default()
    };
    let c = from_file.resolve(env_of(&[])).unwrap();
    assert_eq!((c.seed, c.scalar, c.heatmap_cap), (1, ScalarMode::Syn, 5));
    assert_eq!(c.corpus, Some(dir.path().join("data/corpus.jsonl")));
    assert_eq!(c.relations, RunConfig::default().relations);

    let env = [("SYNANT_SEED", "2"), ("SYNANT_SCALAR", "ant")];
    let c = from_file.resolve(env_of(&env)).unwrap();
    assert_eq!((c.seed, c.scalar, c.heatmap_cap), (2, ScalarMode::Ant, 5));

    let flags = Overrides {
        seed: Some(3),
        ..from_file.clone()
    };
    assert_eq!(flags.resolve(env_of(&env)).unwrap().seed, 3);

    let via_env = Overrides::default()
        .resolve(env_of(&[("SYNANT_CONFIG", s(&conf))]))
        .unwrap();
    assert_eq!(via_env.seed, 1);

    let bad = Overrides::default().resolve(env_of(&[("SYNANT_SEED", "many")]));
    assert!(matches!(bad, Err(CliError::Config(_))));
}
