//! Classification and index runs over the bundled complaint fixture.

mod common;

use meritscan::classify::{self, ModelConfig};
use meritscan::indices::{run_algorithm1, IndexKind};
use meritscan::quantify::compute_quantities;
use meritscan::{Featurization, ModelKind, SentimentLexicon, SplitSpec, TokenPolicy};

#[test]
fn fixture_shape() {
    let records = common::fixture_records();
    assert_eq!(records.len(), 43);
    assert_eq!(records.iter().filter(|r| r.merit).count(), 21);
    assert!(records.iter().all(|r| r.adjusted_amount > 0.0));
}

#[test]
fn quantities_respect_intensity_bound() {
    let records = common::fixture_records();
    let docs = common::fixture_docs(&records);
    let amounts: Vec<f64> = records.iter().map(|r| r.adjusted_amount).collect();
    let q = compute_quantities(&docs, &amounts, &SentimentLexicon::bundled(), TokenPolicy::default()).unwrap();
    for r in &q {
        assert!(0.0 <= r.s && r.s <= 4.0 * r.m_tiv as f64 && r.m_tiv <= r.m_ti, "{r:?}");
    }
}

#[test]
fn every_model_runs_deterministically() {
    let (dataset, _) = common::fixture_dataset();
    let lex = SentimentLexicon::bundled();
    let spec = SplitSpec::new(0.4, 77, 5).unwrap();
    let cfg = ModelConfig::default();
    for kind in ModelKind::ALL {
        for f in Featurization::ALL {
            let a = classify::run_repeated(kind, f, &dataset, &lex, &spec, &cfg).unwrap();
            let b = classify::run_repeated(kind, f, &dataset, &lex, &spec, &cfg).unwrap();
            assert_eq!(a, b, "{kind} {f}");
            assert_eq!(a.len(), 5);
            for o in &a {
                assert_eq!(o.metrics.total(), 17);
                assert!(o.predicted_meritorious.iter().all(|id| o.test_ids.contains(id)));
            }
        }
    }
}

#[test]
fn algorithm_points_are_in_range() {
    let (dataset, amounts) = common::fixture_dataset();
    let lex = SentimentLexicon::bundled();
    let q = compute_quantities(dataset.docs(), &amounts, &lex, dataset.policy()).unwrap();
    let spec = SplitSpec::new(0.4, 3, 3).unwrap();
    let kinds = [IndexKind::I, IndexKind::S, IndexKind::B(1.25)];
    let out = run_algorithm1(
        ModelKind::Lr,
        Featurization::Ti,
        &dataset,
        &q,
        &lex,
        &spec,
        &ModelConfig::default(),
        &kinds,
        None,
    )
    .unwrap();
    assert_eq!(out.points.len() + kinds.len() * out.skipped, 3 * kinds.len());
    for p in &out.points {
        match p.kind {
            IndexKind::I => assert!((0.0..=1.0).contains(&p.value)),
            _ => assert!(p.value >= 0.0),
        }
    }
}
