use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use meritscan::classify::{self, ModelConfig};
use meritscan::featurize::build_matrix;
use meritscan::indices::{concomitants, generate_synthetic, i_index, Delta, InputDistribution, SyntheticSystemSpec};
use meritscan::ingest::{self, ColumnMap, CpiTable, SelectionFilters};
use meritscan::{data, Cleaner, CleanedNarrative, Featurization, ModelKind, SentimentLexicon};

fn fixture() -> (Vec<CleanedNarrative>, Vec<bool>) {
    let parsed = ingest::parse_complaints(data::FIXTURE_COMPLAINTS.as_bytes(), &ColumnMap::default()).unwrap();
    let records = ingest::select_records(&parsed.complaints, &CpiTable::bundled(), &SelectionFilters::default())
        .unwrap()
        .records;
    let docs = Cleaner::default().clean_all(records.iter().map(|r| (r.id.as_str(), r.narrative.as_str())));
    (docs, records.iter().map(|r| r.merit).collect())
}

fn indices(c: &mut Criterion) {
    let pairs = generate_synthetic(&SyntheticSystemSpec {
        n: 5000,
        alpha: 2.0 / 3.0,
        c2: 1.0,
        delta: Delta::Gaussian { sigma: 0.1 },
        input: InputDistribution::default(),
        seed: 1,
    })
    .unwrap();
    c.bench_function("i_index_5000", |b| {
        b.iter(|| i_index(&concomitants(black_box(&pairs)).unwrap()).unwrap())
    });
}

fn featurize(c: &mut Criterion) {
    let (docs, _) = fixture();
    let lex = SentimentLexicon::bundled();
    c.bench_function("build_matrix_tfidf", |b| {
        b.iter(|| build_matrix(black_box(&docs), &lex, Featurization::Ti).unwrap())
    });
}

fn train(c: &mut Criterion) {
    let (docs, labels) = fixture();
    let x = build_matrix(&docs, &SentimentLexicon::bundled(), Featurization::Ti).unwrap();
    let cfg = ModelConfig::default();
    let mut group = c.benchmark_group("train");
    group.sample_size(10);
    for kind in ModelKind::ALL {
        group.bench_function(kind.as_str(), |b| {
            b.iter(|| classify::train(kind, black_box(&x), &labels, &cfg, 7).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, indices, featurize, train);
criterion_main!(benches);
