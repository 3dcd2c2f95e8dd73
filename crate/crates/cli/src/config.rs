//! Run configuration: defaults, then a flat `key = value` file, then
//! `SYNANT_*` environment variables, then command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use synant_core::bagset::AblationKind;
use synant_core::matchstats::ScalarMode;

use crate::CliError;

pub const ENV_PREFIX: &str = "SYNANT_";

/// Every recognised key; path-valued keys are resolved against the
/// directory of the config file that sets them.
pub const KEYS: &[(&str, bool)] = &[
    ("corpus", true),
    ("wordnet", true),
    ("curation", true),
    ("lexicon", true),
    ("out", true),
    ("masks", false),
    ("split_explicit", false),
    ("position_tagged", false),
    ("scalar", false),
    ("heatmap_cap", false),
    ("skip_malformed", false),
    ("export_graphs", false),
    ("seed", false),
    ("relations", false),
    ("a_class_size", false),
    ("match_shift", false),
];

fn is_path_key(key: &str) -> Option<bool> {
    KEYS.iter().find(|(k, _)| *k == key).map(|&(_, p)| p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub wordnet: Option<PathBuf>,
    pub curation: Option<PathBuf>,
    /// Defaults to `<out>/lexicon.json`.
    pub lexicon: Option<PathBuf>,
    pub out: PathBuf,
    pub masks: Vec<AblationKind>,
    pub split_explicit: bool,
    pub position_tagged: bool,
    pub scalar: ScalarMode,
    pub heatmap_cap: usize,
    pub skip_malformed: bool,
    pub export_graphs: bool,
    pub seed: u64,
    pub relations: usize,
    pub a_class_size: usize,
    pub match_shift: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            wordnet: None,
            curation: None,
            lexicon: None,
            out: PathBuf::from("out"),
            masks: AblationKind::REPORT_ORDER.to_vec(),
            split_explicit: false,
            position_tagged: false,
            scalar: ScalarMode::Total,
            heatmap_cap: 12,
            skip_malformed: false,
            export_graphs: false,
            seed: 42,
            relations: 200,
            a_class_size: 0,
            match_shift: 0,
        }
    }
}

/// Settings gathered from all layers, as raw strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Layers a config file over the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for (key, value) in parse_config(&text, path)? {
            let value = if is_path_key(&key) == Some(true) {
                base.join(&value).to_string_lossy().into_owned()
            } else {
                value
            };
            self.set(&key, value);
        }
        Ok(())
    }

    /// Layers `SYNANT_<KEY>` variables, looked up through `env`.
    pub fn apply_env<F>(&mut self, env: F)
    where
        F: Fn(&str) -> Option<String>,
    {
        for (key, _) in KEYS {
            if let Some(v) = env(&format!("{ENV_PREFIX}{}", key.to_uppercase())) {
                self.set(key, v);
            }
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = RunConfig::default();
        let path = |k: &str| self.get(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        c.corpus = path("corpus");
        c.wordnet = path("wordnet");
        c.curation = path("curation");
        c.lexicon = path("lexicon");
        if let Some(out) = path("out") {
            c.out = out;
        }
        if let Some(v) = self.get("masks") {
            c.masks = parse_masks(v)?;
        }
        if let Some(v) = self.get("scalar") {
            c.scalar = ScalarMode::parse(v.trim())
                .ok_or_else(|| bad_value("scalar", v, "expected total, syn or ant"))?;
        }
        c.split_explicit = self.flag("split_explicit", c.split_explicit)?;
        c.position_tagged = self.flag("position_tagged", c.position_tagged)?;
        c.skip_malformed = self.flag("skip_malformed", c.skip_malformed)?;
        c.export_graphs = self.flag("export_graphs", c.export_graphs)?;
        c.heatmap_cap = self.number("heatmap_cap", c.heatmap_cap)?;
        c.seed = self.number("seed", c.seed)?;
        c.relations = self.number("relations", c.relations)?;
        c.a_class_size = self.number("a_class_size", c.a_class_size)?;
        c.match_shift = self.number("match_shift", c.match_shift)?;
        if c.heatmap_cap == 0 {
            return Err(bad_value("heatmap_cap", "0", "must be at least 1"));
        }
        Ok(c)
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.get(key).map(str::trim) {
            None => Ok(default),
            Some("true" | "1" | "yes" | "on") => Ok(true),
            Some("false" | "0" | "no" | "off") => Ok(false),
            Some(v) => Err(bad_value(key, v, "expected true or false")),
        }
    }

    fn number<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| bad_value(key, v, "expected a non-negative integer")),
        }
    }
}

fn bad_value(key: &str, value: &str, hint: &str) -> CliError {
    CliError::Config(format!("invalid value {value:?} for `{key}`: {hint}"))
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config(text: &str, origin: &Path) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| CliError::Config(format!("{}:{}: {msg}", origin.display(), i + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`"))?;
        let key = key.trim().replace('-', "_");
        if is_path_key(&key).is_none() {
            return Err(err(&format!("unknown key `{key}`")));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

pub fn parse_masks(list: &str) -> Result<Vec<AblationKind>, CliError> {
    let mut masks = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind = AblationKind::parse(name).ok_or_else(|| {
            bad_value("masks", name, "expected all, no_adjective, no_noun, no_verb or no_adverb")
        })?;
        if !masks.contains(&kind) {
            masks.push(kind);
        }
    }
    if masks.is_empty() {
        return Err(bad_value("masks", list, "at least one mask is required"));
    }
    Ok(masks)
}

impl RunConfig {
    pub fn lexicon_path(&self) -> PathBuf {
        self.lexicon.clone().unwrap_or_else(|| self.out.join("lexicon.json"))
    }

    /// Non-path settings recorded in report provenance.
    pub fn flag_summary(&self) -> String {
        let masks: Vec<&str> = self.masks.iter().map(|m| m.name()).collect();
        format!(
            "masks={} split_explicit={} position_tagged={} scalar={} heatmap_cap={}",
            masks.join(","),
            self.split_explicit,
            self.position_tagged,
            self.scalar.name(),
            self.heatmap_cap
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_override_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let conf = dir.path().join("run.conf");
        fs::write(&conf, "# comment\ncorpus = data/c.jsonl\nseed = 7\nscalar = syn\n").unwrap();
        let mut s = Settings::default();
        s.set("seed", "1");
        s.apply_file(&conf).unwrap();
        s.apply_env(|k| (k == "SYNANT_SEED").then(|| "9".to_string()));
        let c = s.resolve().unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.scalar, ScalarMode::Syn);
        assert_eq!(c.corpus.unwrap(), dir.path().join("data/c.jsonl"));
        s.set("seed", "11");
        assert_eq!(s.resolve().unwrap().seed, 11);
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        assert!(parse_config("colour = red\n", Path::new("x")).is_err());
        assert!(parse_config("no equals sign\n", Path::new("x")).is_err());
        let mut s = Settings::default();
        s.set("split_explicit", "maybe");
        assert!(s.resolve().is_err());
        assert!(parse_masks("all,no_pronoun").is_err());
        assert_eq!(
            parse_masks("no_verb, all,no_verb").unwrap(),
            vec![AblationKind::NoVerb, AblationKind::All]
        );
    }

    #[test]
    fn default_lexicon_path_follows_out() {
        let c = RunConfig {
            out: PathBuf::from("results"),
            ..RunConfig::default()
        };
        assert_eq!(c.lexicon_path(), PathBuf::from("results/lexicon.json"));
    }
}
