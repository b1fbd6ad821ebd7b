//! Detection of systematic non-meritorious consumer complaints.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! * [`ingest`]: CFPB-style CSV parsing, merit labels, dollar-amount
//!   extraction and CPI discounting.
//! * [`corpus`]: narrative cleaning and tokenization.
//! * [`lexicon`]: VADER word intensities and the negative-word subset.
//! * [`featurize`]: TF-IDF and sentiment-weighted TF-IDF sparse matrices.
//! * [`classify`]: five reference classifiers evaluated over repeated
//!   random train/test splits.
//! * [`quantify`]: sentiment scores, Cobb-Douglas log-log fits and the
//!   induced input-output pairs.
//! * [`indices`]: concomitant-based I-, S- and B-indices, growth-exponent
//!   estimation and the repeated index computation over classifier output.

pub mod classify;
pub mod corpus;
mod error;
pub mod featurize;
pub mod indices;
pub mod ingest;
pub mod lexicon;
pub mod quantify;
pub mod seed;

pub use classify::{Dataset, EvalMetrics, ModelKind, SplitSpec, TrainedModel};
pub use corpus::{CleanedNarrative, Cleaner, StopWordList, TokenPolicy};
pub use error::{Error, Result};
pub use featurize::{Featurization, FeatureMatrix, Featurizer, Vocabulary};
pub use indices::{ConcomitantSequence, GrowthEstimate, IndexKind, IndexPoint};
pub use ingest::{ComplaintRecord, CpiTable, RawComplaint};
pub use lexicon::{NegativeWordSet, SentimentLexicon};
pub use quantify::{CobbDouglasFit, IoPair, NarrativeQuantities, TransferFunction};

/// Bundled data files.
pub mod data {
    /// English stop words with negations removed, one per line.
    pub const STOP_WORDS: &str = include_str!("../data/stopwords.txt");
    /// Corpus-specific frequent words removed during cleaning.
    pub const FREQUENT_WORDS: &str = include_str!("../data/frequent_words.txt");
    /// Annual CPI-U averages, `year,cpi`.
    pub const CPI_U: &str = include_str!("../data/cpi_u.csv");
    /// The distributed VADER lexicon (MIT licensed, see `VADER_LICENSE.txt`).
    pub const VADER_LEXICON: &str = include_str!("../data/vader_lexicon.txt");
    /// A 12-entry lexicon used by tests.
    pub const MINI_LEXICON: &str = include_str!("../data/mini_lexicon.tsv");
    /// A 50-row synthetic complaint export in the CFPB column layout.
    pub const FIXTURE_COMPLAINTS: &str = include_str!("../data/fixture_complaints.csv");
}
