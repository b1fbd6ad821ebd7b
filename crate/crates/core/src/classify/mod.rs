//! Merit classification over repeated random train/test splits.
//!
//! Each repetition draws a fresh split from a seed derived from
//! `(master_seed, run_index)`, fits the featurizer on the training part
//! only, trains one model and evaluates it on the held-out part. Runs are
//! independent and are executed in parallel; results come back in run
//! order.

pub mod boost;
pub mod forest;
pub mod linear;
pub mod mlp;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::{CleanedNarrative, TokenPolicy};
use crate::error::{Error, Result};
use crate::featurize::{Featurization, FeatureMatrix, Featurizer};
use crate::lexicon::SentimentLexicon;
use crate::seed::{run_seed, substream};

pub use boost::BoostConfig;
pub use forest::ForestConfig;
pub use linear::{LinearConfig, Loss};
pub use mlp::MlpConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Lr,
    Svm,
    Gb,
    Mlp,
    Rf,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Lr,
        ModelKind::Svm,
        ModelKind::Gb,
        ModelKind::Mlp,
        ModelKind::Rf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Lr => "lr",
            ModelKind::Svm => "svm",
            ModelKind::Gb => "gb",
            ModelKind::Mlp => "mlp",
            ModelKind::Rf => "rf",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lr" => Ok(ModelKind::Lr),
            "svm" => Ok(ModelKind::Svm),
            "gb" => Ok(ModelKind::Gb),
            "mlp" => Ok(ModelKind::Mlp),
            "rf" => Ok(ModelKind::Rf),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}

/// Test fraction `r`, master seed and repetition count `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    test_fraction: f64,
    master_seed: u64,
    repetitions: usize,
}

impl SplitSpec {
    pub fn new(test_fraction: f64, master_seed: u64, repetitions: usize) -> Result<Self> {
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Error::Domain(format!(
                "test fraction must lie in (0, 1), got {test_fraction}"
            )));
        }
        if repetitions == 0 {
            return Err(Error::Domain("repetitions must be at least 1".into()));
        }
        Ok(Self {
            test_fraction,
            master_seed,
            repetitions,
        })
    }

    pub fn test_fraction(&self) -> f64 {
        self.test_fraction
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    /// `round(r * n)`, kept within `1..n` so both parts are non-empty.
    pub fn test_size(&self, n: usize) -> usize {
        ((self.test_fraction * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1))
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            test_fraction: 0.4,
            master_seed: 0,
            repetitions: 500,
        }
    }
}

/// Row positions of one split, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Deterministic in `(master_seed, run_index)`.
pub fn split(n: usize, spec: &SplitSpec, run_index: usize) -> Result<Split> {
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 rows to split, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(substream(run_seed(spec.master_seed, run_index), 0));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let n_test = spec.test_size(n);
    let mut test = order[..n_test].to_vec();
    let mut train = order[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok(Split { train, test })
}

/// All model hyperparameters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ModelConfig {
    pub linear: LinearConfig,
    pub forest: ForestConfig,
    pub boost: BoostConfig,
    pub mlp: MlpConfig,
}

#[derive(Debug, Clone, PartialEq)]
enum Params {
    Linear(linear::LinearModel),
    Boosted(boost::Boosted),
    Mlp(mlp::Mlp),
    Forest(forest::Forest),
}

/// A fitted classifier; meritorious is the positive class.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    kind: ModelKind,
    width: usize,
    params: Params,
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Probability of merit, or the signed margin for the SVM.
    pub fn score(&self, cols: &[usize], vals: &[f64]) -> f64 {
        match &self.params {
            Params::Linear(m) => m.score(cols, vals),
            Params::Boosted(m) => m.probability(cols, vals),
            Params::Mlp(m) => m.probability(cols, vals),
            Params::Forest(m) => m.probability(cols, vals),
        }
    }

    /// Decision threshold applied to [`score`](Self::score).
    pub fn threshold(&self) -> f64 {
        match self.kind {
            ModelKind::Svm => 0.0,
            _ => 0.5,
        }
    }

    pub fn predict(&self, x: &FeatureMatrix) -> Result<Vec<bool>> {
        if x.n_cols() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: x.n_cols(),
            });
        }
        let t = self.threshold();
        Ok((0..x.n_rows())
            .map(|i| {
                let (c, v) = x.row(i);
                self.score(c, v) > t
            })
            .collect())
    }

    /// Per-epoch objective of the full-batch linear models.
    pub fn objective_history(&self) -> Option<&[f64]> {
        match &self.params {
            Params::Linear(m) => Some(&m.objective_history),
            _ => None,
        }
    }
}

pub fn train(
    kind: ModelKind,
    x: &FeatureMatrix,
    labels: &[bool],
    config: &ModelConfig,
    seed: u64,
) -> Result<TrainedModel> {
    if x.n_rows() != labels.len() {
        return Err(Error::WidthMismatch {
            expected: x.n_rows(),
            actual: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::DegenerateModel);
    }
    let params = match kind {
        ModelKind::Lr => Params::Linear(linear::train(Loss::Logistic, x, labels, &config.linear)),
        ModelKind::Svm => Params::Linear(linear::train(Loss::Hinge, x, labels, &config.linear)),
        ModelKind::Gb => Params::Boosted(boost::train(x, labels, &config.boost, seed)),
        ModelKind::Mlp => Params::Mlp(mlp::train(x, labels, &config.mlp, seed)),
        ModelKind::Rf => Params::Forest(forest::train(x, labels, &config.forest, seed)),
    };
    Ok(TrainedModel {
        kind,
        width: x.n_cols(),
        params,
    })
}

/// Confusion matrix with meritorious as the positive class, plus rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalMetrics {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub accuracy: f64,
    /// Share of the test set predicted meritorious.
    pub predicted_merit_rate: f64,
    /// Share of truly meritorious complaints predicted meritorious.
    pub merit_recall: f64,
    pub f1_positive: f64,
    pub f1_negative: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalMetrics {
    pub fn from_predictions(predicted: &[bool], truth: &[bool]) -> Self {
        let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
        for (&p, &t) in predicted.iter().zip(truth) {
            match (p, t) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, false) => tn += 1,
                (false, true) => fn_ += 1,
            }
        }
        let total = tp + fp + tn + fn_;
        Self {
            tp,
            fp,
            tn,
            fn_,
            accuracy: ratio(tp + tn, total),
            predicted_merit_rate: ratio(tp + fp, total),
            merit_recall: ratio(tp, tp + fn_),
            f1_positive: ratio(2 * tp, 2 * tp + fp + fn_),
            f1_negative: ratio(2 * tn, 2 * tn + fp + fn_),
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn predicted_merit(&self) -> usize {
        self.tp + self.fp
    }
}

pub fn evaluate(model: &TrainedModel, x_test: &FeatureMatrix, labels_test: &[bool]) -> Result<EvalMetrics> {
    if x_test.n_rows() == 0 {
        return Err(Error::InsufficientData("empty test set".into()));
    }
    Ok(EvalMetrics::from_predictions(&model.predict(x_test)?, labels_test))
}

/// Cleaned narratives with their merit labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    docs: Vec<CleanedNarrative>,
    labels: Vec<bool>,
    policy: TokenPolicy,
}

impl Dataset {
    pub fn new(docs: Vec<CleanedNarrative>, labels: Vec<bool>, policy: TokenPolicy) -> Result<Self> {
        if docs.len() != labels.len() {
            return Err(Error::Config(format!(
                "{} documents but {} labels",
                docs.len(),
                labels.len()
            )));
        }
        crate::ingest::index_by_id(docs.iter().map(|d| d.id.as_str()))?;
        Ok(Self {
            docs,
            labels,
            policy,
        })
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn docs(&self) -> &[CleanedNarrative] {
        &self.docs
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn policy(&self) -> TokenPolicy {
        self.policy
    }

    fn subset(&self, rows: &[usize]) -> (Vec<CleanedNarrative>, Vec<bool>) {
        (
            rows.iter().map(|&i| self.docs[i].clone()).collect(),
            rows.iter().map(|&i| self.labels[i]).collect(),
        )
    }
}

/// One repetition of split → featurize → train → evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub run: usize,
    pub metrics: EvalMetrics,
    pub test_ids: Vec<String>,
    /// `d_m`: test ids the model predicted meritorious.
    pub predicted_meritorious: Vec<String>,
}

pub fn run_once(
    kind: ModelKind,
    featurization: Featurization,
    dataset: &Dataset,
    lexicon: &SentimentLexicon,
    spec: &SplitSpec,
    config: &ModelConfig,
    run: usize,
) -> Result<RunOutcome> {
    let parts = split(dataset.len(), spec, run)?;
    let (train_docs, train_labels) = dataset.subset(&parts.train);
    let (test_docs, test_labels) = dataset.subset(&parts.test);
    let featurizer = Featurizer::fit(&train_docs, lexicon, featurization, dataset.policy)?;
    let x_train = featurizer.transform(&train_docs);
    let x_test = featurizer.transform(&test_docs);
    let seed = substream(run_seed(spec.master_seed, run), kind.tag());
    let model = train(kind, &x_train, &train_labels, config, seed)?;
    let predicted = model.predict(&x_test)?;
    let metrics = EvalMetrics::from_predictions(&predicted, &test_labels);
    let predicted_meritorious = test_docs
        .iter()
        .zip(&predicted)
        .filter(|(_, &p)| p)
        .map(|(d, _)| d.id.clone())
        .collect();
    Ok(RunOutcome {
        run,
        metrics,
        test_ids: test_docs.into_iter().map(|d| d.id).collect(),
        predicted_meritorious,
    })
}

/// `k` independent repetitions, returned in run order.
pub fn run_repeated(
    kind: ModelKind,
    featurization: Featurization,
    dataset: &Dataset,
    lexicon: &SentimentLexicon,
    spec: &SplitSpec,
    config: &ModelConfig,
) -> Result<Vec<RunOutcome>> {
    (0..spec.repetitions)
        .into_par_iter()
        .map(|run| {
            run_once(kind, featurization, dataset, lexicon, spec, config, run)
                .map_err(|e| Error::in_run(run, e))
        })
        .collect()
}

pub const METRICS_HEADER: &str =
    "run,model,featurization,accuracy,predicted_merit_rate,merit_recall,f1_pos,f1_neg,n_test,n_predicted_merit";

/// One line of the metrics CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub run: usize,
    pub model: ModelKind,
    pub featurization: Featurization,
    pub accuracy: f64,
    pub predicted_merit_rate: f64,
    pub merit_recall: f64,
    pub f1_pos: f64,
    pub f1_neg: f64,
    pub n_test: usize,
    pub n_predicted_merit: usize,
}

impl MetricsRow {
    pub fn new(model: ModelKind, featurization: Featurization, outcome: &RunOutcome) -> Self {
        let m = &outcome.metrics;
        Self {
            run: outcome.run,
            model,
            featurization,
            accuracy: m.accuracy,
            predicted_merit_rate: m.predicted_merit_rate,
            merit_recall: m.merit_recall,
            f1_pos: m.f1_positive,
            f1_neg: m.f1_negative,
            n_test: m.total(),
            n_predicted_merit: m.predicted_merit(),
        }
    }
}

pub fn write_metrics<W: Write>(mut w: W, rows: &[MetricsRow]) -> Result<()> {
    let io = |e| Error::io("<metrics>", e);
    writeln!(w, "{METRICS_HEADER}").map_err(io)?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.run,
            r.model,
            r.featurization,
            r.accuracy,
            r.predicted_merit_rate,
            r.merit_recall,
            r.f1_pos,
            r.f1_neg,
            r.n_test,
            r.n_predicted_merit
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

fn field<T: FromStr>(row: &csv::StringRecord, i: usize, what: &str) -> Result<T> {
    let line = row.position().map(|p| p.line()).unwrap_or(0);
    row.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Csv {
            row: line,
            message: format!("bad {what}"),
        })
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &str) -> Result<()> {
    let got: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if got.join(",") != expected {
        return Err(Error::Parse(format!("expected header `{expected}`")));
    }
    Ok(())
}

pub fn read_metrics<R: Read>(reader: R) -> Result<Vec<MetricsRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    check_header(&mut rdr, METRICS_HEADER)?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        out.push(MetricsRow {
            run: field(&row, 0, "run")?,
            model: field(&row, 1, "model")?,
            featurization: field(&row, 2, "featurization")?,
            accuracy: field(&row, 3, "accuracy")?,
            predicted_merit_rate: field(&row, 4, "predicted_merit_rate")?,
            merit_recall: field(&row, 5, "merit_recall")?,
            f1_pos: field(&row, 6, "f1_pos")?,
            f1_neg: field(&row, 7, "f1_neg")?,
            n_test: field(&row, 8, "n_test")?,
            n_predicted_merit: field(&row, 9, "n_predicted_merit")?,
        });
    }
    Ok(out)
}

pub const PREDICTIONS_HEADER: &str = "run,model,featurization,id";

/// The predicted-meritorious ids of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedSet {
    pub run: usize,
    pub model: ModelKind,
    pub featurization: Featurization,
    pub ids: Vec<String>,
}

/// Writes one line per predicted-meritorious id. Runs with an empty `d_m`
/// get a single line with an empty id so the run is still recorded.
pub fn write_predictions<W: Write>(w: W, sets: &[PredictedSet]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(PREDICTIONS_HEADER.split(','))?;
    for s in sets {
        let run = s.run.to_string();
        if s.ids.is_empty() {
            w.write_record([run.as_str(), s.model.as_str(), s.featurization.as_str(), ""])?;
        }
        for id in &s.ids {
            w.write_record([run.as_str(), s.model.as_str(), s.featurization.as_str(), id])?;
        }
    }
    w.flush().map_err(|e| Error::io("<predictions>", e))
}

pub fn read_predictions<R: Read>(reader: R) -> Result<Vec<PredictedSet>> {
    let mut rdr = csv::Reader::from_reader(reader);
    check_header(&mut rdr, PREDICTIONS_HEADER)?;
    let mut grouped: BTreeMap<(ModelKind, Featurization, usize), Vec<String>> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let run: usize = field(&row, 0, "run")?;
        let model: ModelKind = field(&row, 1, "model")?;
        let feat: Featurization = field(&row, 2, "featurization")?;
        let ids = grouped.entry((model, feat, run)).or_default();
        let id = row.get(3).unwrap_or("");
        if !id.is_empty() {
            ids.push(id.to_string());
        }
    }
    Ok(grouped
        .into_iter()
        .map(|((model, featurization, run), ids)| PredictedSet {
            run,
            model,
            featurization,
            ids,
        })
        .collect())
}

/// Averages over runs for one model and featurization.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    pub model: ModelKind,
    pub featurization: Featurization,
    pub runs: usize,
    pub accuracy: f64,
    pub predicted_merit_rate: f64,
    pub merit_recall: f64,
    pub f1_pos: f64,
    pub f1_neg: f64,
}

pub fn summarize(rows: &[MetricsRow]) -> Vec<MetricsSummary> {
    let mut groups: BTreeMap<(ModelKind, Featurization), Vec<&MetricsRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.model, r.featurization)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((model, featurization), rs)| {
            let k = rs.len() as f64;
            let mean = |f: fn(&MetricsRow) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / k;
            MetricsSummary {
                model,
                featurization,
                runs: rs.len(),
                accuracy: mean(|r| r.accuracy),
                predicted_merit_rate: mean(|r| r.predicted_merit_rate),
                merit_recall: mean(|r| r.merit_recall),
                f1_pos: mean(|r| r.f1_pos),
                f1_neg: mean(|r| r.f1_neg),
            }
        })
        .collect()
}

/// Published averages over 500 splits of the full CFPB subset, in percent:
/// accuracy, share predicted meritorious, F1.
pub mod reference {
    use super::ModelKind;

    pub const TI: [(ModelKind, [f64; 3]); 5] = [
        (ModelKind::Lr, [67.37, 15.41, 78.00]),
        (ModelKind::Svm, [67.30, 13.24, 78.24]),
        (ModelKind::Gb, [64.61, 16.43, 76.03]),
        (ModelKind::Mlp, [58.08, 36.04, 71.22]),
        (ModelKind::Rf, [65.56, 9.80, 77.64]),
    ];

    pub const TIV: [(ModelKind, [f64; 3]); 5] = [
        (ModelKind::Lr, [63.96, 8.52, 76.80]),
        (ModelKind::Svm, [63.72, 7.29, 76.65]),
        (ModelKind::Gb, [62.75, 11.31, 75.44]),
        (ModelKind::Mlp, [56.50, 34.96, 66.38]),
        (ModelKind::Rf, [60.67, 18.71, 73.28]),
    ];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_sizes_and_determinism() {
        let spec = SplitSpec::new(0.4, 11, 3).unwrap();
        let s = split(10, &spec, 0).unwrap();
        assert_eq!(s.test.len(), 4);
        assert_eq!(s.train.len(), 6);
        let mut all: Vec<_> = s.train.iter().chain(&s.test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(split(10, &spec, 0).unwrap(), s);
        assert!(split(1, &spec, 0).is_err());
    }

    #[test]
    fn different_runs_usually_differ() {
        let spec = SplitSpec::new(0.4, 5, 100).unwrap();
        let distinct = (0..100)
            .map(|r| split(50, &spec, r).unwrap().test)
            .collect::<std::collections::HashSet<_>>()
            .len();
        assert!(distinct >= 99, "{distinct} distinct splits of 100");
    }

    #[test]
    fn split_spec_validation() {
        assert!(SplitSpec::new(0.0, 0, 1).is_err());
        assert!(SplitSpec::new(1.0, 0, 1).is_err());
        assert!(SplitSpec::new(0.5, 0, 0).is_err());
        assert_eq!(SplitSpec::new(0.4, 0, 1).unwrap().test_size(2), 1);
    }

    #[test]
    fn metrics_examples() {
        let truth = [true, false, true, false, true, false, true, false, true, false];
        let m = EvalMetrics::from_predictions(&truth, &truth);
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.f1_positive, 1.0);
        assert_eq!(m.f1_negative, 1.0);

        let truth: Vec<bool> = (0..100).map(|i| i < 37).collect();
        let none = vec![false; 100];
        let m = EvalMetrics::from_predictions(&none, &truth);
        assert!((m.accuracy - 0.63).abs() < 1e-12);
        assert_eq!(m.predicted_merit_rate, 0.0);
        assert_eq!(m.merit_recall, 0.0);
        assert_eq!(m.f1_positive, 0.0);
        assert_eq!(m.tp + m.fp + m.tn + m.fn_, 100);
    }

    #[test]
    fn model_names() {
        for k in ModelKind::ALL {
            assert_eq!(k.as_str().parse::<ModelKind>().unwrap(), k);
        }
        assert!("knn".parse::<ModelKind>().is_err());
    }

    #[test]
    fn predictions_round_trip_keeps_empty_runs() {
        let sets = vec![
            PredictedSet {
                run: 0,
                model: ModelKind::Lr,
                featurization: Featurization::Ti,
                ids: vec!["a".into(), "b,c".into()],
            },
            PredictedSet {
                run: 1,
                model: ModelKind::Lr,
                featurization: Featurization::Ti,
                ids: vec![],
            },
        ];
        let mut buf = Vec::new();
        write_predictions(&mut buf, &sets).unwrap();
        assert_eq!(read_predictions(buf.as_slice()).unwrap(), sets);
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use crate::featurize::{Featurization, FeatureMatrix, Vocabulary};

    /// 40 rows over 4 sparse columns; merit iff column 0 outweighs column 1.
    pub fn separable() -> (FeatureMatrix, Vec<bool>) {
        let vocab = Arc::new(Vocabulary::new(["a", "b", "c", "d"]));
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40usize {
            let a = ((i * 7) % 11) as f64;
            let b = ((i * 5) % 13) as f64;
            if a == b {
                continue;
            }
            let mut row = Vec::new();
            if a > 0.0 {
                row.push((0, a));
            }
            if b > 0.0 {
                row.push((1, b));
            }
            row.push((2 + i % 2, 1.0));
            rows.push(row);
            labels.push(a > b);
        }
        let x = FeatureMatrix::from_rows(Featurization::Ti, vocab, rows).unwrap();
        (x, labels)
    }

    pub fn accuracy(x: &FeatureMatrix, labels: &[bool], score: impl Fn(&[usize], &[f64]) -> f64, t: f64) -> f64 {
        let hits = (0..x.n_rows())
            .filter(|&i| {
                let (c, v) = x.row(i);
                (score(c, v) > t) == labels[i]
            })
            .count();
        hits as f64 / x.n_rows() as f64
    }
}
