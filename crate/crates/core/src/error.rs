use std::path::PathBuf;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV at row {row}: {message}")]
    Csv { row: u64, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("CPI table has no value for year(s) {missing:?}")]
    MissingCpiYears { missing: Vec<i32> },

    #[error("invalid CPI table: {0}")]
    Cpi(String),

    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },

    #[error("word `{0}` does not occur in the corpus")]
    UndefinedWord(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("training set contains a single class")]
    DegenerateModel,

    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("feature width mismatch: model expects {expected}, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate sequence: {0}")]
    DegenerateSequence(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_run(run: usize, err: Error) -> Self {
        Error::Run {
            run,
            source: Box::new(err),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let row = err.position().map(|p| p.line()).unwrap_or(0);
        Error::Csv {
            row,
            message: err.to_string(),
        }
    }
}
