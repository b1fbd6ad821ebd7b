//! Word-level VADER sentiment intensities.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

pub const MAX_INTENSITY: f64 = 4.0;

/// Word → mean intensity in `[-4, 4]`. Unknown words have intensity 0.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    intensities: HashMap<String, f64>,
}

impl SentimentLexicon {
    /// Parses the distributed layout: `token<TAB>mean<TAB>...`.
    ///
    /// Extra columns are ignored and a repeated token keeps its last value.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut intensities = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| Error::Lexicon {
                line: line_no,
                message: e.to_string(),
            })?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let token = cols.next().unwrap_or_default();
            let value = cols.next().ok_or_else(|| Error::Lexicon {
                line: line_no,
                message: "missing intensity column".into(),
            })?;
            let value = parse_intensity(value.trim()).map_err(|message| Error::Lexicon {
                line: line_no,
                message,
            })?;
            intensities.insert(token.to_string(), value);
        }
        Ok(Self { intensities })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    /// The full VADER lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_reader(crate::data::VADER_LEXICON.as_bytes()).expect("bundled lexicon parses")
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut lex = Self::default();
        for (w, v) in pairs {
            lex.set_intensity(w, v)?;
        }
        Ok(lex)
    }

    /// Overrides one entry, e.g. the intensity given to `!` or `?`.
    pub fn set_intensity(&mut self, word: impl Into<String>, value: f64) -> Result<()> {
        let word = word.into();
        if !value.is_finite() || value.abs() > MAX_INTENSITY {
            return Err(Error::Domain(format!(
                "intensity {value} for `{word}` outside [-4, 4]"
            )));
        }
        self.intensities.insert(word, value);
        Ok(())
    }

    pub fn intensity(&self, word: &str) -> f64 {
        self.intensities.get(word).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.intensities.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.intensities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensities.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.intensities.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

fn parse_intensity(text: &str) -> std::result::Result<f64, String> {
    let v: f64 = text
        .parse()
        .map_err(|_| format!("intensity `{text}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("intensity `{text}` is not finite"));
    }
    if v.abs() > MAX_INTENSITY {
        return Err(format!("intensity {v} outside [-4, 4]"));
    }
    Ok(v)
}

/// `W₋`: the words with strictly negative intensity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NegativeWordSet {
    words: HashSet<String>,
}

impl NegativeWordSet {
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

pub fn negative_subset(lex: &SentimentLexicon) -> NegativeWordSet {
    NegativeWordSet {
        words: lex
            .iter()
            .filter(|(_, v)| *v < 0.0)
            .map(|(w, _)| w.to_string())
            .collect(),
    }
}
