//! TF-IDF matrices against a direct count-and-log reference.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use meritscan::featurize::{build_matrix, build_matrix_with_policy};
use meritscan::{CleanedNarrative, Featurization, FeatureMatrix, SentimentLexicon, TokenPolicy};

fn doc(id: &str, text: &str) -> CleanedNarrative {
    CleanedNarrative {
        id: id.into(),
        tokens: text.split_whitespace().map(String::from).collect(),
    }
}

fn toy_corpus() -> Vec<CleanedNarrative> {
    vec![
        doc("1", "fraud charge card fraud not refund !"),
        doc("2", "charge dispute bank refused refund"),
        doc("3", "late fee fee fee unfair"),
        doc("4", "card stolen fraud bank ! !"),
        doc("5", "bank card charge"),
    ]
}

fn toy_lexicon() -> SentimentLexicon {
    SentimentLexicon::from_pairs([
        ("fraud", -3.2),
        ("refused", -1.9),
        ("unfair", -2.1),
        ("stolen", -2.2),
        ("dispute", -1.7),
        ("refund", 0.4),
        ("!", -0.3),
    ])
    .unwrap()
}

/// `(row, word) -> value` computed straight from the definitions.
fn reference(
    corpus: &[CleanedNarrative],
    lex: &SentimentLexicon,
    f: Featurization,
    policy: TokenPolicy,
) -> BTreeMap<(usize, String), f64> {
    let words = |d: &CleanedNarrative| -> Vec<String> {
        d.tokens
            .iter()
            .filter(|t| policy.punctuation_is_word || !(t.as_str() == "!" || t.as_str() == "?"))
            .cloned()
            .collect()
    };
    let n = corpus.len();
    let mut vocab = BTreeSet::new();
    for d in corpus {
        vocab.extend(words(d));
    }
    let mut out = BTreeMap::new();
    for w in vocab {
        let v = lex.intensity(&w);
        if f == Featurization::Tiv && v >= 0.0 {
            continue;
        }
        let df = corpus.iter().filter(|d| words(d).contains(&w)).count();
        let idf = (n as f64 / df as f64).ln();
        for (i, d) in corpus.iter().enumerate() {
            let tf = words(d).iter().filter(|t| **t == w).count();
            let value = match f {
                Featurization::Ti => tf as f64 * idf,
                Featurization::Tiv => tf as f64 * idf * v.abs(),
            };
            if value != 0.0 {
                out.insert((i, w.clone()), value);
            }
        }
    }
    out
}

fn as_map(m: &FeatureMatrix) -> BTreeMap<(usize, String), f64> {
    m.triplets()
        .map(|(i, j, v)| ((i, m.vocabulary().word(j).to_string()), v))
        .collect()
}

#[test]
fn toy_corpus_matches_reference_exactly() {
    let corpus = toy_corpus();
    let lex = toy_lexicon();
    for f in Featurization::ALL {
        for punct in [false, true] {
            let policy = TokenPolicy { punctuation_is_word: punct };
            let m = build_matrix_with_policy(&corpus, &lex, f, policy).unwrap();
            let expected = reference(&corpus, &lex, f, policy);
            assert_eq!(as_map(&m), expected, "{f} punctuation_is_word={punct}");
            assert_eq!(m.n_rows(), corpus.len());
        }
    }
}

#[test]
fn toy_corpus_spot_values() {
    let m = build_matrix(&toy_corpus(), &toy_lexicon(), Featurization::Ti).unwrap();
    let fee = m.vocabulary().column("fee").unwrap();
    assert_eq!(m.get(2, fee), 3.0 * 5f64.ln());
    let bank = m.vocabulary().column("bank").unwrap();
    assert_eq!(m.get(4, bank), (5.0f64 / 3.0).ln());
    assert!(m.vocabulary().column("!").is_none());

    let tiv = build_matrix(&toy_corpus(), &toy_lexicon(), Featurization::Tiv).unwrap();
    let words: Vec<&str> = tiv.vocabulary().words().iter().map(String::as_str).collect();
    assert_eq!(words.len(), 5);
    for w in ["dispute", "fraud", "refused", "stolen", "unfair"] {
        assert!(words.contains(&w), "{w}");
    }
}

#[test]
fn fixture_tiv_is_ti_scaled_by_intensity() {
    let records = common::fixture_records();
    let docs = common::fixture_docs(&records);
    let lex = SentimentLexicon::bundled();
    let ti = build_matrix(&docs, &lex, Featurization::Ti).unwrap();
    let tiv = build_matrix(&docs, &lex, Featurization::Tiv).unwrap();
    assert!(tiv.nnz() > 0);
    for (i, j, v) in tiv.triplets() {
        let w = tiv.vocabulary().word(j);
        let tj = ti.vocabulary().column(w).unwrap();
        assert_eq!(v, ti.get(i, tj) * lex.intensity(w).abs(), "row {i} word {w}");
    }
    for (i, j, v) in ti.triplets() {
        let w = ti.vocabulary().word(j);
        if lex.intensity(w) < 0.0 {
            let tj = tiv.vocabulary().column(w).unwrap();
            assert!(tiv.get(i, tj) > 0.0 || v == 0.0);
        }
    }
}
