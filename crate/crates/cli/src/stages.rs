//! One function per subcommand. Each stage reads the artifacts of earlier
//! stages from the output directory and writes its own there.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use meritscan::classify::{self, MetricsRow, ModelConfig, PredictedSet};
use meritscan::corpus::{self, Cleaner, StopWordList};
use meritscan::featurize::build_matrix_with_policy;
use meritscan::indices::{self, GrowthRow, IndexKind};
use meritscan::ingest::{self, ColumnMap, CpiTable, SelectionFilters};
use meritscan::quantify::{self, FitSummary};
use meritscan::{CleanedNarrative, Dataset, Featurization, SentimentLexicon};

use crate::config::RunConfig;

pub const RECORDS: &str = "records.csv";
pub const CLEANED: &str = "cleaned.tsv";
pub const QUANTITIES: &str = "quantities.csv";
pub const FITS: &str = "cobb_douglas.csv";
pub const DIAGNOSTICS: &str = "diagnostics.csv";
pub const METRICS: &str = "metrics.csv";
pub const PREDICTIONS: &str = "predictions.csv";
pub const INDICES: &str = "indices.csv";
pub const GROWTH: &str = "growth.csv";
pub const REPORT_DIR: &str = "report";

pub fn features_file(f: Featurization) -> String {
    format!("features_{f}.csv")
}

pub fn vocabulary_file(f: Featurization) -> String {
    format!("vocabulary_{f}.txt")
}

/// Path of an artifact that an earlier stage must have produced.
fn require(cfg: &RunConfig, name: &str, kind: &str, stage: &str) -> Result<PathBuf> {
    let path = cfg.out.join(name);
    if !path.is_file() {
        bail!(
            "missing {kind} artifact {}: run `meritscan {stage}` first",
            path.display()
        );
    }
    Ok(path)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

/// Writes through a temporary file so a failed write leaves no partial
/// artifact behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("partial");
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> meritscan::Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    write_atomic(path, &buf)
}

fn ensure_out(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out)
        .with_context(|| format!("creating output directory {}", cfg.out.display()))
}

fn lexicon(cfg: &RunConfig) -> Result<SentimentLexicon> {
    Ok(match &cfg.lexicon {
        Some(p) => SentimentLexicon::from_path(p)?,
        None => SentimentLexicon::bundled(),
    })
}

pub fn ingest(cfg: &RunConfig) -> Result<()> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| anyhow!("ingest needs --input <complaints.csv>"))?;
    ensure_out(cfg)?;
    let parsed = ingest::parse_complaints(open(input)?, &ColumnMap::default())
        .with_context(|| format!("parsing {}", input.display()))?;
    let cpi = match &cfg.cpi {
        Some(p) => CpiTable::from_path(p, ingest::default_base_date())?,
        None => CpiTable::bundled(),
    };
    let selection = ingest::select_records(&parsed.complaints, &cpi, &SelectionFilters::default())?;
    write_with(&cfg.out.join(RECORDS), |w| ingest::write_records(w, &selection.records))?;
    let merit = selection.records.iter().filter(|r| r.merit).count();
    println!(
        "ingest: {} rows with narratives ({} blank skipped), {} records kept ({} meritorious)",
        parsed.complaints.len(),
        parsed.skipped_empty,
        selection.records.len(),
        merit
    );
    for (reason, count) in &selection.excluded {
        println!("  excluded {reason:?}: {count}");
    }
    Ok(())
}

fn read_records(cfg: &RunConfig) -> Result<Vec<ingest::StoredRecord>> {
    let path = require(cfg, RECORDS, "record", "ingest")?;
    Ok(ingest::read_records(open(&path)?)?)
}

pub fn clean(cfg: &RunConfig) -> Result<()> {
    let records = read_records(cfg)?;
    let stop_words = match &cfg.stopwords {
        Some(p) => StopWordList::from_path(p)?,
        None => StopWordList::bundled(),
    };
    let frequent: HashSet<String> = match &cfg.frequent_words {
        Some(p) => corpus::word_set_from_text(
            &std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        ),
        None => corpus::word_set_from_text(meritscan::data::FREQUENT_WORDS),
    };
    let cleaner = Cleaner::new(stop_words, frequent);
    let docs = cleaner.clean_all(records.iter().map(|r| (r.id.as_str(), r.narrative.as_str())));
    write_with(&cfg.out.join(CLEANED), |w| corpus::write_cleaned(w, &docs))?;
    println!("clean: {} narratives cleaned", docs.len());
    Ok(())
}

/// Cleaned corpus with labels and amounts aligned by id.
struct Prepared {
    docs: Vec<CleanedNarrative>,
    labels: Vec<bool>,
    amounts: Vec<f64>,
}

fn prepared(cfg: &RunConfig) -> Result<Prepared> {
    let records = read_records(cfg)?;
    let path = require(cfg, CLEANED, "cleaned corpus", "clean")?;
    let docs = corpus::read_cleaned(open(&path)?)?;
    let by_id = ingest::index_by_id(records.iter().map(|r| r.id.as_str()))?;
    let mut labels = Vec::with_capacity(docs.len());
    let mut amounts = Vec::with_capacity(docs.len());
    for d in &docs {
        let i = by_id
            .get(d.id.as_str())
            .ok_or_else(|| anyhow!("cleaned narrative `{}` has no record; re-run `meritscan clean`", d.id))?;
        labels.push(records[*i].merit);
        amounts.push(records[*i].adjusted_amount);
    }
    if docs.is_empty() {
        bail!("the cleaned corpus is empty");
    }
    Ok(Prepared {
        docs,
        labels,
        amounts,
    })
}

pub fn featurize(cfg: &RunConfig) -> Result<()> {
    let data = prepared(cfg)?;
    let lex = lexicon(cfg)?;
    let policy = cfg.policy();
    for &f in &cfg.featurizations {
        let m = build_matrix_with_policy(&data.docs, &lex, f, policy)?;
        write_with(&cfg.out.join(features_file(f)), |w| m.write_triplets(w))?;
        write_with(&cfg.out.join(vocabulary_file(f)), |w| m.write_vocabulary(w))?;
        println!(
            "featurize: {f} matrix {} x {} with {} stored entries",
            m.n_rows(),
            m.n_cols(),
            m.nnz()
        );
    }
    let quantities = quantify::compute_quantities(&data.docs, &data.amounts, &lex, policy)?;
    write_with(&cfg.out.join(QUANTITIES), |w| quantify::write_quantities(w, &quantities))?;

    let mut fits = Vec::new();
    for f in Featurization::ALL {
        match quantify::fit_cobb_douglas(&quantities, f) {
            Ok(fit) => {
                println!(
                    "featurize: {f} alpha = {:.4} (95% CI {:.4} to {:.4}), beta = {:.4}, {} rows, {} excluded{}",
                    fit.alpha_hat,
                    fit.alpha_ci95.0,
                    fit.alpha_ci95.1,
                    fit.beta_hat,
                    fit.fit.len(),
                    fit.excluded,
                    if fit.alpha_exceeds_one() { ", alpha above 1" } else { "" }
                );
                fits.push(fit);
            }
            Err(e) => eprintln!("featurize: no {f} Cobb-Douglas fit: {e}"),
        }
    }
    let summaries: Vec<FitSummary> = fits.iter().map(FitSummary::from).collect();
    write_with(&cfg.out.join(FITS), |w| quantify::write_fit_summaries(w, &summaries))?;
    let refs: Vec<_> = fits.iter().collect();
    write_with(&cfg.out.join(DIAGNOSTICS), |w| quantify::write_diagnostics(w, &refs))?;
    Ok(())
}

pub fn train(cfg: &RunConfig) -> Result<()> {
    let data = prepared(cfg)?;
    let lex = lexicon(cfg)?;
    let dataset = Dataset::new(data.docs, data.labels, cfg.policy())?;
    let model_cfg = ModelConfig::default();
    let mut metrics = Vec::new();
    let mut predictions = Vec::new();
    for &f in &cfg.featurizations {
        for &m in &cfg.models {
            let outcomes = classify::run_repeated(m, f, &dataset, &lex, &cfg.split, &model_cfg)
                .with_context(|| format!("training {m} on {f}"))?;
            for o in &outcomes {
                metrics.push(MetricsRow::new(m, f, o));
                predictions.push(PredictedSet {
                    run: o.run,
                    model: m,
                    featurization: f,
                    ids: o.predicted_meritorious.clone(),
                });
            }
        }
    }
    write_with(&cfg.out.join(METRICS), |w| classify::write_metrics(w, &metrics))?;
    write_with(&cfg.out.join(PREDICTIONS), |w| classify::write_predictions(w, &predictions))?;
    for s in classify::summarize(&metrics) {
        println!(
            "train: {:<4}{:<12} accuracy {:.4}  predicted merit {:.4}  F1+ {:.4}  F1- {:.4}  ({} runs)",
            s.model.as_str(),
            s.featurization.as_str(),
            s.accuracy,
            s.predicted_merit_rate,
            s.f1_pos,
            s.f1_neg,
            s.runs
        );
    }
    Ok(())
}

pub fn index_kinds(p_values: &[f64]) -> Vec<IndexKind> {
    let mut kinds = vec![IndexKind::I, IndexKind::S];
    kinds.extend(p_values.iter().map(|&p| IndexKind::B(p)));
    kinds
}

pub fn indices(cfg: &RunConfig) -> Result<()> {
    let pred_path = require(cfg, PREDICTIONS, "model", "train")?;
    let q_path = require(cfg, QUANTITIES, "quantities", "featurize")?;
    let sets = classify::read_predictions(open(&pred_path)?)?;
    let quantities = quantify::read_quantities(open(&q_path)?)?;
    let (rows, skipped) =
        indices::points_from_predictions(&sets, &quantities, &index_kinds(&cfg.p_values), cfg.jitter_seed())?;
    write_with(&cfg.out.join(INDICES), |w| indices::write_index_rows(w, &rows))?;

    let mut s_points: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.point.kind == IndexKind::S) {
        s_points.entry((r.model, r.featurization)).or_default().push(r.point);
    }
    let mut growth = Vec::new();
    for ((model, featurization), points) in s_points {
        match indices::estimate_growth(&points) {
            Ok(estimate) => growth.push(GrowthRow {
                model,
                featurization,
                verdicts: estimate.verdicts(&cfg.p_values, cfg.tau),
                estimate,
            }),
            Err(e) => eprintln!("indices: no growth estimate for {model} {featurization}: {e}"),
        }
    }
    write_with(&cfg.out.join(GROWTH), |w| indices::write_growth(w, &growth))?;
    println!(
        "indices: {} index values from {} runs, {} runs skipped (fewer than 2 usable pairs or flat)",
        rows.len(),
        sets.len() - skipped,
        skipped
    );
    Ok(())
}

pub fn report(cfg: &RunConfig) -> Result<()> {
    let metrics_path = require(cfg, METRICS, "metrics", "train")?;
    let index_path = require(cfg, INDICES, "index", "indices")?;
    let metrics = classify::read_metrics(open(&metrics_path)?)?;
    let index_rows = indices::read_index_rows(open(&index_path)?)?;
    if index_rows.is_empty() {
        bail!("{} holds no index values; nothing to plot", index_path.display());
    }
    let growth = match cfg.out.join(GROWTH) {
        p if p.is_file() => indices::read_growth(open(&p)?)?,
        _ => Vec::new(),
    };
    let fits = match cfg.out.join(FITS) {
        p if p.is_file() => quantify::read_fit_summaries(open(&p)?)?,
        _ => Vec::new(),
    };
    let diagnostics = match cfg.out.join(DIAGNOSTICS) {
        p if p.is_file() => quantify::read_diagnostics(open(&p)?)?,
        _ => Vec::new(),
    };
    let files = crate::report::render(&crate::report::Inputs {
        metrics: &metrics,
        index_rows: &index_rows,
        growth: &growth,
        fits: &fits,
        diagnostics: &diagnostics,
        real_data: cfg.real_data,
    })?;
    let dir = cfg.out.join(REPORT_DIR);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, body) in &files {
        write_atomic(&dir.join(name), body.as_bytes())?;
    }
    println!("report: {} files written to {}", files.len(), dir.display());
    Ok(())
}

pub fn run_all(cfg: &RunConfig) -> Result<()> {
    ingest(cfg)?;
    clean(cfg)?;
    featurize(cfg)?;
    train(cfg)?;
    indices(cfg)?;
    report(cfg)
}
