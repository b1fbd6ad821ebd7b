//! Run configuration: flags override a flat `key = value` file, which
//! overrides the defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use meritscan::{Featurization, ModelKind, SplitSpec};

/// Flags shared by every subcommand. Keys in a config file use the same
/// names without the leading dashes.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat key = value file supplying defaults for any flag below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Complaint export (CSV with CFPB headers).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// CPI table with `year,cpi` columns; the bundled CPI-U table otherwise.
    #[arg(long)]
    pub cpi: Option<PathBuf>,
    /// VADER-format lexicon; the bundled lexicon otherwise.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Stop-word list, one word per line.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Extra frequent words to drop, one per line.
    #[arg(long = "frequent-words")]
    pub frequent_words: Option<PathBuf>,
    /// tfidf, tfidf-vader or both.
    #[arg(long)]
    pub featurization: Option<String>,
    /// lr, svm, gb, mlp, rf or all; a comma list is also accepted.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long = "test-frac")]
    pub test_frac: Option<f64>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Comma-separated B-index exponents.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory holding every stage's artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Half-width of the inconclusive band around 1/p.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Break ties among inputs with seeded noise instead of by position.
    #[arg(long)]
    pub jitter: bool,
    /// Count `!` and `?` as words in counts, frequencies and scores.
    #[arg(long = "punctuation-is-word")]
    pub punctuation_is_word: bool,
    /// Show published reference values next to the estimates in the report.
    #[arg(long = "real-data")]
    pub real_data: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub cpi: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub frequent_words: Option<PathBuf>,
    pub featurizations: Vec<Featurization>,
    pub models: Vec<ModelKind>,
    pub split: SplitSpec,
    pub p_values: Vec<f64>,
    pub out: PathBuf,
    pub tau: f64,
    pub jitter: bool,
    pub punctuation_is_word: bool,
    pub real_data: bool,
}

pub const DEFAULT_P: &str = "1.667,1.429,1.25,1.111";
pub const DEFAULT_SEED: u64 = 20_231_001;

const KEYS: [&str; 16] = [
    "input",
    "cpi",
    "lexicon",
    "stopwords",
    "frequent-words",
    "featurization",
    "model",
    "test-frac",
    "repeats",
    "p",
    "seed",
    "out",
    "tau",
    "jitter",
    "punctuation-is-word",
    "real-data",
];

/// Parses `key = value` lines; `#` starts a comment. Relative paths are
/// taken relative to the file's directory.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("config line {}: expected key = value", i + 1))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key `{key}`", i + 1);
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => bail!("config key `{key}`: expected a boolean, got `{v}`"),
    }
}

pub fn parse_featurizations(text: &str) -> Result<Vec<Featurization>> {
    match text.trim() {
        "both" => Ok(Featurization::ALL.to_vec()),
        one => Ok(vec![one.parse()?]),
    }
}

pub fn parse_models(text: &str) -> Result<Vec<ModelKind>> {
    if text.trim() == "all" {
        return Ok(ModelKind::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let m: ModelKind = part.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn parse_p_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let p: f64 = if part.eq_ignore_ascii_case("inf") {
            f64::INFINITY
        } else {
            part.parse().with_context(|| format!("bad p value `{part}`"))?
        };
        if !(p > 0.0) {
            bail!("p values must be positive, got {p}");
        }
        out.push(p);
    }
    Ok(out)
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let (file, base) = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                (parse_config_file(&text)?, base)
            }
            None => (BTreeMap::new(), PathBuf::new()),
        };
        let path = |flag: &Option<PathBuf>, key: &str| -> Option<PathBuf> {
            flag.clone().or_else(|| file.get(key).map(|v| base.join(v)))
        };
        let text = |flag: &Option<String>, key: &str, default: &str| -> String {
            flag.clone()
                .or_else(|| file.get(key).cloned())
                .unwrap_or_else(|| default.to_string())
        };
        let num = |key: &str| -> Result<Option<String>> { Ok(file.get(key).cloned()) };
        let switch = |flag: bool, key: &str| -> Result<bool> {
            if flag {
                return Ok(true);
            }
            file.get(key).map_or(Ok(false), |v| parse_bool(key, v))
        };

        let test_frac = match flags.test_frac {
            Some(v) => v,
            None => num("test-frac")?.map_or(Ok(0.4), |v| v.parse().context("test-frac"))?,
        };
        let repeats = match flags.repeats {
            Some(v) => v,
            None => num("repeats")?.map_or(Ok(500), |v| v.parse().context("repeats"))?,
        };
        let seed = match flags.seed {
            Some(v) => v,
            None => num("seed")?.map_or(Ok(DEFAULT_SEED), |v| v.parse().context("seed"))?,
        };
        let tau = match flags.tau {
            Some(v) => v,
            None => num("tau")?.map_or(Ok(meritscan::indices::DEFAULT_TAU), |v| {
                v.parse().context("tau")
            })?,
        };
        if !(tau >= 0.0) {
            bail!("tau must be non-negative, got {tau}");
        }

        let config = Self {
            input: path(&flags.input, "input"),
            cpi: path(&flags.cpi, "cpi"),
            lexicon: path(&flags.lexicon, "lexicon"),
            stopwords: path(&flags.stopwords, "stopwords"),
            frequent_words: path(&flags.frequent_words, "frequent-words"),
            featurizations: parse_featurizations(&text(&flags.featurization, "featurization", "both"))?,
            models: parse_models(&text(&flags.model, "model", "all"))?,
            split: SplitSpec::new(test_frac, seed, repeats)?,
            p_values: parse_p_values(&text(&flags.p, "p", DEFAULT_P))?,
            out: path(&flags.out, "out").unwrap_or_else(|| PathBuf::from("out")),
            tau,
            jitter: switch(flags.jitter, "jitter")?,
            punctuation_is_word: switch(flags.punctuation_is_word, "punctuation-is-word")?,
            real_data: switch(flags.real_data, "real-data")?,
        };
        for p in [&config.input, &config.cpi, &config.lexicon, &config.stopwords, &config.frequent_words]
            .into_iter()
            .flatten()
        {
            if !p.is_file() {
                bail!("input file {} does not exist", p.display());
            }
        }
        Ok(config)
    }

    pub fn policy(&self) -> meritscan::TokenPolicy {
        meritscan::TokenPolicy {
            punctuation_is_word: self.punctuation_is_word,
        }
    }

    pub fn jitter_seed(&self) -> Option<u64> {
        self.jitter
            .then(|| meritscan::seed::substream(self.split.master_seed(), 0x71E5))
    }
}
