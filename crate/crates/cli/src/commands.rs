use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use synant_core::argrep::{retention, vectorize_corpus, RelationVectors};
use synant_core::bagset::{build_lexicon as build, curate, AblationKind, CurationDirectives, Lexicon};
use synant_core::corpus::{parse_corpus, write_corpus, ErrorPolicy, RelationRecord, Sense};
use synant_core::lexdb::LexicalDatabase;
use synant_core::matchstats::{group_match_counts, heatmap, significance_from_groups, Group};
use synant_core::relgraph::{
    build_graph, classify_connectives, phi_report_from_vectors, Class, GraphOptions, PhiOptions, PhiReport,
};
use synant_core::Pos;

use crate::config::RunConfig;
use crate::fixture::{generate, FixtureParams};
use crate::provenance::{database_checksum, sha256_bytes, sha256_file, Provenance, TOOL_VERSION};
use crate::svg::{BarChart, Series};
use crate::CliError;

fn require(key: &str, value: Option<&PathBuf>, want_dir: bool) -> Result<PathBuf, CliError> {
    let path = value.ok_or_else(|| CliError::Config(format!("`{key}` is not set")))?;
    let ok = if want_dir { path.is_dir() } else { path.is_file() };
    if !ok {
        let what = if want_dir { "directory" } else { "file" };
        return Err(CliError::Config(format!("{key} {what} not found: {}", path.display())));
    }
    Ok(path.clone())
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("output directory {} is not writable: {e}", dir.display())))
}

/// Writes every file once, in the given order.
fn write_all(files: &[(PathBuf, String)]) -> Result<(), CliError> {
    for (path, contents) in files {
        if let Some(parent) = path.parent() {
            prepare_out(parent)?;
        }
        fs::write(path, contents).map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

struct Inputs {
    records: Vec<RelationRecord>,
    db: LexicalDatabase,
    provenance: Provenance,
    database_sha256: String,
    notes: String,
}

fn load_inputs(c: &RunConfig) -> Result<Inputs, CliError> {
    let corpus = require("corpus", c.corpus.as_ref(), false)?;
    let wordnet = require("wordnet", c.wordnet.as_ref(), true)?;
    let curation = match &c.curation {
        Some(_) => Some(require("curation", c.curation.as_ref(), false)?),
        None => None,
    };
    prepare_out(&c.out)?;

    let policy = if c.skip_malformed {
        ErrorPolicy::Skip
    } else {
        ErrorPolicy::FailFast
    };
    let file = fs::File::open(&corpus).map_err(|e| CliError::data(format!("{}: {e}", corpus.display())))?;
    let parsed = parse_corpus(BufReader::new(file), policy)
        .map_err(|e| CliError::data(format!("{}: {e}", corpus.display())))?;
    let mut notes = String::new();
    for (line, kind) in &parsed.skipped {
        writeln!(notes, "skipped {}:{line}: {kind}", corpus.display()).unwrap();
    }
    let db = LexicalDatabase::load(&wordnet)?;

    let mut provenance = Provenance::default();
    provenance.push("tool", TOOL_VERSION);
    provenance.push("corpus_sha256", sha256_file(&corpus)?);
    let database_sha256 = database_checksum(&wordnet)?;
    provenance.push("database_sha256", database_sha256.clone());
    provenance.push(
        "curation_sha256",
        match &curation {
            Some(p) => sha256_file(p)?,
            None => "none".to_string(),
        },
    );
    Ok(Inputs {
        records: parsed.records,
        db,
        provenance,
        database_sha256,
        notes,
    })
}

fn load_lexicon(c: &RunConfig, provenance: &mut Provenance) -> Result<Lexicon, CliError> {
    let path = require("lexicon", Some(&c.lexicon_path()), false)?;
    let text = fs::read_to_string(&path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    provenance.push("lexicon_sha256", sha256_bytes(text.as_bytes()));
    Lexicon::from_json(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

pub fn build_lexicon(c: &RunConfig) -> Result<String, CliError> {
    let mut inputs = load_inputs(c)?;
    let raw = build(&inputs.records, &inputs.db)?;
    let directives = match &c.curation {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            Some(CurationDirectives::parse(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let lexicon =
        curate(&raw, directives.as_ref()).map_err(|e| CliError::data(format!("curation: {e}")))?;

    inputs.provenance.push("flags", c.flag_summary());
    let path = c.lexicon_path();
    write_all(&[(path.clone(), lexicon.to_json(&inputs.provenance.to_map()))])?;

    let b = lexicon.boundaries();
    let mut out = inputs.notes;
    writeln!(out, "m = {}", b.m).unwrap();
    writeln!(out, "m_before_curation = {}", raw.len()).unwrap();
    for pos in Pos::ALL {
        writeln!(out, "block.{} = {}", pos.file_suffix(), b.block_size(pos)).unwrap();
    }
    writeln!(out, "boundaries = {} {} {} {}", b.n1, b.n2, b.n3, b.m).unwrap();
    writeln!(out, "database_sha256 = {}", inputs.database_sha256).unwrap();
    writeln!(out, "wrote {}", path.display()).unwrap();
    Ok(out)
}

fn csv_text(provenance: &Provenance, header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::data(e.to_string());
    w.write_record(header).map_err(to_err)?;
    for row in rows {
        w.write_record(row).map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::data(e.to_string()))?;
    let mut text = provenance.csv_comment();
    text.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
    Ok(text)
}

fn masks_with_all(masks: &[AblationKind]) -> Vec<AblationKind> {
    let mut out = vec![AblationKind::All];
    out.extend(masks.iter().copied().filter(|&m| m != AblationKind::All));
    out
}

pub const PHI_HEADER: &[&str] = &[
    "row",
    "sense",
    "class",
    "mask",
    "connective",
    "explicitness",
    "relations",
    "nodes",
    "edges",
    "phi",
    "graphs",
    "mean_phi",
];

fn phi_rows(report: &PhiReport) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for r in &report.rows {
        rows.push(vec![
            "connective".into(),
            r.sense.name().into(),
            r.class.name().into(),
            r.mask.name().into(),
            r.connective.clone(),
            r.explicitness.map(|e| e.name().to_string()).unwrap_or_default(),
            r.relations.to_string(),
            r.nodes.to_string(),
            r.edges.to_string(),
            r.phi.to_string(),
            String::new(),
            String::new(),
        ]);
    }
    for s in &report.summary {
        rows.push(vec![
            "summary".into(),
            s.sense.name().into(),
            s.class.name().into(),
            s.mask.name().into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            s.graphs.to_string(),
            s.mean_phi.map(|v| v.to_string()).unwrap_or_else(|| "NA".into()),
        ]);
    }
    rows
}

fn phi_chart(report: &PhiReport, mask: AblationKind) -> BarChart {
    let series = [
        (Sense::Contrast, AblationKind::All, "#1f77b4"),
        (Sense::Contrast, mask, "#aec7e8"),
        (Sense::Concession, AblationKind::All, "#d62728"),
        (Sense::Concession, mask, "#ff9896"),
    ];
    let values = [Class::A, Class::B]
        .iter()
        .map(|&class| {
            series
                .iter()
                .map(|&(sense, m, _)| report.summary_for(sense, class, m).and_then(|s| s.mean_phi))
                .collect()
        })
        .collect();
    BarChart {
        title: format!("Mean phi: all vs {}", mask.name()),
        y_label: "mean phi".into(),
        groups: vec!["class A".into(), "class B".into()],
        series: series
            .iter()
            .map(|&(sense, m, color)| Series {
                label: format!("{} / {}", sense.name(), m.name()),
                color,
            })
            .collect(),
        values,
    }
}

fn slug(text: &str) -> String {
    text.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

pub fn phi(c: &RunConfig) -> Result<String, CliError> {
    let mut inputs = load_inputs(c)?;
    let lexicon = load_lexicon(c, &mut inputs.provenance)?;
    inputs.provenance.push("flags", c.flag_summary());

    let full = vectorize_corpus(&inputs.records, &lexicon, &inputs.db);
    let options = PhiOptions {
        masks: masks_with_all(&c.masks),
        split_explicitness: c.split_explicit,
        graph: GraphOptions {
            position_tagged: c.position_tagged,
        },
    };
    let classes = classify_connectives(&inputs.records);
    let report = phi_report_from_vectors(&full, &lexicon, &classes, &options)?;

    let mut files = Vec::new();
    files.push((
        c.out.join("phi.csv"),
        csv_text(&inputs.provenance, PHI_HEADER, &phi_rows(&report))?,
    ));

    let kept = retention(&full);
    let retention_rows: Vec<Vec<String>> = kept
        .iter()
        .map(|(sense, r)| {
            vec![
                sense.name().to_string(),
                r.relations.to_string(),
                r.relations_retained.to_string(),
                r.connectives.to_string(),
                r.connectives_retained.to_string(),
            ]
        })
        .collect();
    files.push((
        c.out.join("retention.csv"),
        csv_text(
            &inputs.provenance,
            &["sense", "relations", "relations_retained", "connectives", "connectives_retained"],
            &retention_rows,
        )?,
    ));

    let comment = inputs.provenance.xml_comment();
    for &mask in options.masks.iter().filter(|&&m| m != AblationKind::All) {
        files.push((
            c.out.join(format!("phi_all_vs_{}.svg", mask.name())),
            phi_chart(&report, mask).render(&comment),
        ));
    }

    if c.export_graphs {
        files.extend(graph_exports(c, &full, &lexicon, &report, &options)?);
    }
    write_all(&files)?;

    let mut out = inputs.notes;
    for (sense, r) in &kept {
        writeln!(
            out,
            "{}: {}/{} relations retained, {}/{} connectives retained",
            sense.name(),
            r.relations_retained,
            r.relations,
            r.connectives_retained,
            r.connectives
        )
        .unwrap();
    }
    for s in &report.summary {
        let mean = s.mean_phi.map(|v| format!("{v:.4}")).unwrap_or_else(|| "NA".into());
        writeln!(
            out,
            "{:<10} class {} {:<13} graphs={:<3} mean_phi={mean}",
            s.sense.name(),
            s.class.name(),
            s.mask.name(),
            s.graphs
        )
        .unwrap();
    }
    for (path, _) in &files {
        writeln!(out, "wrote {}", path.display()).unwrap();
    }
    Ok(out)
}

fn graph_exports(
    c: &RunConfig,
    full: &[RelationVectors],
    lexicon: &Lexicon,
    report: &PhiReport,
    options: &PhiOptions,
) -> Result<Vec<(PathBuf, String)>, CliError> {
    use synant_core::argrep::apply_mask;
    use synant_core::bagset::ablation_mask;

    let dir = c.out.join("graphs");
    let mut files = Vec::new();
    for &mask in &options.masks {
        let masked = apply_mask(full, &ablation_mask(lexicon, mask))?;
        for row in report.rows.iter().filter(|r| r.mask == mask) {
            let rels: Vec<RelationVectors> = masked
                .iter()
                .filter(|r| {
                    !r.discarded
                        && r.sense == row.sense
                        && r.connective == row.connective
                        && row.explicitness.is_none_or(|e| e == r.explicitness)
                })
                .cloned()
                .collect();
            let g = build_graph(&rels, options.graph)?;
            let mut stem = format!("{}_{}_{}", row.sense.name(), mask.name(), slug(&row.connective));
            if let Some(e) = row.explicitness {
                write!(stem, "_{}", e.name()).unwrap();
            }
            files.push((dir.join(format!("{stem}.edges")), g.export_edges()));
            files.push((dir.join(format!("{stem}.nodes")), g.export_nodes()));
        }
    }
    Ok(files)
}

pub fn matches(c: &RunConfig) -> Result<String, CliError> {
    let mut inputs = load_inputs(c)?;
    let lexicon = load_lexicon(c, &mut inputs.provenance)?;
    inputs.provenance.push("flags", c.flag_summary());
    let mut out = inputs.notes;

    let full = vectorize_corpus(&inputs.records, &lexicon, &inputs.db);
    let groups = group_match_counts(&full)?;
    let comment = inputs.provenance.xml_comment();

    let mut files = Vec::new();
    let mut heat_rows = Vec::new();
    for g in Group::ALL {
        let members = groups.get(&g).map(Vec::as_slice).unwrap_or(&[]);
        if members.is_empty() {
            writeln!(out, "notice: group {} is empty; heat map skipped", g.label()).unwrap();
            continue;
        }
        let grid = heatmap(&g.label(), members)?;
        for ((s, a), count, p) in grid.cells() {
            heat_rows.push(vec![g.slug(), s.to_string(), a.to_string(), count.to_string(), p.to_string()]);
        }
        files.push((
            c.out.join(format!("heatmap_{}.svg", g.slug())),
            crate::svg::heatmap(
                &format!("{} (n = {})", g.label(), grid.total),
                &grid.capped(c.heatmap_cap),
                grid.total,
                c.heatmap_cap,
                &comment,
            ),
        ));
    }
    let mut all_files = vec![(
        c.out.join("heatmap.csv"),
        csv_text(
            &inputs.provenance,
            &["group", "n_syn", "n_ant", "count", "proportion"],
            &heat_rows,
        )?,
    )];
    all_files.append(&mut files);

    let tests = significance_from_groups(&groups, c.scalar)?;
    let mut test_rows = Vec::new();
    for t in &tests {
        let (u1, u2, p, method) = match &t.result {
            Some(r) => (r.u1.to_string(), r.u2.to_string(), r.p.to_string(), r.method.name().to_string()),
            None => ("NA".into(), "NA".into(), "NA".into(), "not_computable".into()),
        };
        writeln!(
            out,
            "test {}: {} vs {} (n = {}, {}): p = {p} [{method}, scalar {}]",
            t.test_id,
            t.group1.label(),
            t.group2.label(),
            t.n1,
            t.n2,
            c.scalar.name()
        )
        .unwrap();
        test_rows.push(vec![
            t.test_id.to_string(),
            t.group1.slug(),
            t.group2.slug(),
            t.n1.to_string(),
            t.n2.to_string(),
            u1,
            u2,
            p,
            method,
        ]);
    }
    all_files.push((
        c.out.join("significance.csv"),
        csv_text(
            &inputs.provenance,
            &["test_id", "group1", "group2", "n1", "n2", "u1", "u2", "p", "method"],
            &test_rows,
        )?,
    ));
    write_all(&all_files)?;
    for (path, _) in &all_files {
        writeln!(out, "wrote {}", path.display()).unwrap();
    }
    Ok(out)
}

pub fn gen_fixture(c: &RunConfig) -> Result<String, CliError> {
    if c.a_class_size * 2 > c.relations {
        return Err(CliError::Config(format!(
            "a_class_size {} needs at least {} relations (one A-class connective per sense)",
            c.a_class_size,
            c.a_class_size * 2
        )));
    }
    prepare_out(&c.out)?;
    let params = FixtureParams {
        seed: c.seed,
        relations: c.relations,
        a_class_size: c.a_class_size,
        match_shift: c.match_shift,
    };
    let fixture = generate(&params);
    let corpus = c.corpus.clone().unwrap_or_else(|| c.out.join("corpus.jsonl"));
    let wordnet = c.wordnet.clone().unwrap_or_else(|| c.out.join("wordnet"));

    let mut text = format!(
        "# synthetic fixture: seed={} relations={} a_class_size={} match_shift={}\n",
        params.seed, params.relations, params.a_class_size, params.match_shift
    );
    text.push_str(&write_corpus(&fixture.records));
    let mut files = vec![(corpus.clone(), text)];
    for (name, contents) in fixture.database.render() {
        files.push((wordnet.join(name), contents));
    }
    write_all(&files)?;

    let mut per_sense: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &fixture.records {
        *per_sense.entry(r.sense.name()).or_default() += 1;
    }
    let mut out = String::new();
    writeln!(out, "relations = {}", fixture.records.len()).unwrap();
    for (sense, n) in per_sense {
        writeln!(out, "relations.{sense} = {n}").unwrap();
    }
    writeln!(out, "synsets = {}", fixture.database.synset_count()).unwrap();
    writeln!(out, "wrote {}", corpus.display()).unwrap();
    writeln!(out, "wrote {}", wordnet.display()).unwrap();
    Ok(out)
}
