//! TF-IDF and TF-IDF-VADER document×term matrices.
//!
//! Term frequencies are raw counts and the inverse document frequency is
//! `ln(n / n_j)`, with no normalisation or smoothing. The VADER variant
//! keeps only words of negative intensity and scales each entry by
//! `|VADER(w)|`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use crate::corpus::{CleanedNarrative, TokenPolicy};
use crate::error::{Error, Result};
use crate::lexicon::SentimentLexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Featurization {
    /// TF-IDF over all words.
    Ti,
    /// TF-IDF × |VADER| over negative words only.
    Tiv,
}

impl Featurization {
    pub const ALL: [Featurization; 2] = [Featurization::Ti, Featurization::Tiv];

    pub fn as_str(self) -> &'static str {
        match self {
            Featurization::Ti => "tfidf",
            Featurization::Tiv => "tfidf-vader",
        }
    }
}

impl fmt::Display for Featurization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Featurization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tfidf" | "tf-idf" | "ti" => Ok(Featurization::Ti),
            "tfidf-vader" | "tf-idf-vader" | "tiv" => Ok(Featurization::Tiv),
            other => Err(Error::Parse(format!("unknown featurization `{other}`"))),
        }
    }
}

/// Ordered distinct words with dense column indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary in lexicographic order.
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let sorted: BTreeSet<String> = words.into_iter().map(Into::into).collect();
        let words: Vec<String> = sorted.into_iter().collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Self { words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn column(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, column: usize) -> &str {
        &self.words[column]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

/// Compressed sparse rows; only strictly positive values are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    featurization: Featurization,
    vocabulary: Arc<Vocabulary>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn featurization(&self) -> Featurization {
        self.featurization
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn n_rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn n_cols(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices (ascending) and values of one row.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.values[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    /// Stored entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows()).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n_cols()]; self.n_rows()];
        for (i, j, v) in self.triplets() {
            dense[i][j] = v;
        }
        dense
    }

    /// A matrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        for &r in rows {
            let (c, v) = self.row(r);
            cols.extend_from_slice(c);
            values.extend_from_slice(v);
            row_ptr.push(cols.len());
        }
        FeatureMatrix {
            featurization: self.featurization,
            vocabulary: Arc::clone(&self.vocabulary),
            row_ptr,
            cols,
            values,
        }
    }

    /// Builds a matrix from per-row `(column, value)` lists. Zero values are
    /// dropped; columns must be in range.
    pub fn from_rows(
        featurization: Featurization,
        vocabulary: Arc<Vocabulary>,
        rows: Vec<Vec<(usize, f64)>>,
    ) -> Result<Self> {
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut values = Vec::new();
        for mut row in rows {
            row.sort_by_key(|(c, _)| *c);
            for (c, v) in row {
                if c >= vocabulary.len() {
                    return Err(Error::WidthMismatch {
                        expected: vocabulary.len(),
                        actual: c + 1,
                    });
                }
                if v != 0.0 {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(FeatureMatrix {
            featurization,
            vocabulary,
            row_ptr,
            cols,
            values,
        })
    }

    /// Writes `row,col,value` triplets with a header line.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e| Error::io("<matrix>", e);
        writeln!(w, "row,col,value").map_err(io)?;
        for (i, j, v) in self.triplets() {
            writeln!(w, "{i},{j},{v}").map_err(io)?;
        }
        w.flush().map_err(io)
    }

    /// Writes the vocabulary sidecar: one word per line in column order.
    pub fn write_vocabulary<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e| Error::io("<vocabulary>", e);
        for word in self.vocabulary.words() {
            writeln!(w, "{word}").map_err(io)?;
        }
        w.flush().map_err(io)
    }
}

/// `TF(d, w)`: occurrences of `w` among the document's words.
pub fn term_frequency(doc: &CleanedNarrative, word: &str, policy: TokenPolicy) -> usize {
    doc.words(policy).filter(|t| *t == word).count()
}

/// `IDF(w) = ln(n / n_j)`.
pub fn inverse_document_frequency(
    corpus: &[CleanedNarrative],
    word: &str,
    policy: TokenPolicy,
) -> Result<f64> {
    let n_j = corpus
        .iter()
        .filter(|d| d.words(policy).any(|t| t == word))
        .count();
    if n_j == 0 {
        return Err(Error::UndefinedWord(word.to_string()));
    }
    Ok((corpus.len() as f64 / n_j as f64).ln())
}

/// Vocabulary, IDF and column weights learned from a training corpus.
///
/// Words absent from the training corpus are ignored when transforming
/// other documents.
#[derive(Debug, Clone)]
pub struct Featurizer {
    featurization: Featurization,
    policy: TokenPolicy,
    vocabulary: Arc<Vocabulary>,
    idf: Vec<f64>,
    /// `|VADER(w)|` for the VADER variant, 1 otherwise.
    weight: Vec<f64>,
}

impl Featurizer {
    pub fn fit(
        corpus: &[CleanedNarrative],
        lexicon: &SentimentLexicon,
        featurization: Featurization,
        policy: TokenPolicy,
    ) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut doc_freq: HashMap<&str, usize> = HashMap::new();
        for doc in corpus {
            let distinct: BTreeSet<&str> = doc.words(policy).collect();
            for w in distinct {
                *doc_freq.entry(w).or_default() += 1;
            }
        }
        let keep = |w: &str| match featurization {
            Featurization::Ti => true,
            Featurization::Tiv => lexicon.intensity(w) < 0.0,
        };
        let vocabulary = Vocabulary::new(doc_freq.keys().copied().filter(|w| keep(w)));
        let n = corpus.len() as f64;
        let idf = vocabulary
            .words()
            .iter()
            .map(|w| (n / doc_freq[w.as_str()] as f64).ln())
            .collect();
        let weight = vocabulary
            .words()
            .iter()
            .map(|w| match featurization {
                Featurization::Ti => 1.0,
                Featurization::Tiv => lexicon.intensity(w).abs(),
            })
            .collect();
        Ok(Self {
            featurization,
            policy,
            vocabulary: Arc::new(vocabulary),
            idf,
            weight,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn featurization(&self) -> Featurization {
        self.featurization
    }

    pub fn transform(&self, docs: &[CleanedNarrative]) -> FeatureMatrix {
        let mut row_ptr = Vec::with_capacity(docs.len() + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        let mut counts: HashMap<usize, usize> = HashMap::new();
        let mut row: Vec<(usize, usize)> = Vec::new();
        for doc in docs {
            counts.clear();
            for w in doc.words(self.policy) {
                if let Some(c) = self.vocabulary.column(w) {
                    *counts.entry(c).or_default() += 1;
                }
            }
            row.clear();
            row.extend(counts.iter().map(|(&c, &tf)| (c, tf)));
            row.sort_unstable();
            for &(c, tf) in &row {
                let v = tf as f64 * self.idf[c] * self.weight[c];
                if v > 0.0 {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        FeatureMatrix {
            featurization: self.featurization,
            vocabulary: Arc::clone(&self.vocabulary),
            row_ptr,
            cols,
            values,
        }
    }
}

/// Featurizes a whole corpus with punctuation excluded from the vocabulary.
pub fn build_matrix(
    corpus: &[CleanedNarrative],
    lexicon: &SentimentLexicon,
    featurization: Featurization,
) -> Result<FeatureMatrix> {
    build_matrix_with_policy(corpus, lexicon, featurization, TokenPolicy::default())
}

pub fn build_matrix_with_policy(
    corpus: &[CleanedNarrative],
    lexicon: &SentimentLexicon,
    featurization: Featurization,
    policy: TokenPolicy,
) -> Result<FeatureMatrix> {
    Ok(Featurizer::fit(corpus, lexicon, featurization, policy)?.transform(corpus))
}
