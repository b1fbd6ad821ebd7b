//! Runs the binary over the bundled fixture.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/fixture_complaints.csv")
}

fn meritscan(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meritscan"))
        .args(args)
        .arg("--input")
        .arg(fixture())
        .args(["--repeats", "5", "--seed", "5", "--out"])
        .arg(out)
        .output()
        .unwrap()
}

/// Checks that every element is closed in order and every `&` starts an entity.
fn assert_well_formed(svg: &str, name: &str) {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = svg;
    while let Some(open) = rest.find('<') {
        let text = &rest[..open];
        for (i, _) in text.match_indices('&') {
            let ent = &text[i..];
            assert!(
                ["&amp;", "&lt;", "&gt;", "&quot;", "&apos;"].iter().any(|e| ent.starts_with(e)),
                "{name}: bare ampersand"
            );
        }
        let close = rest[open..].find('>').unwrap_or_else(|| panic!("{name}: unterminated tag")) + open;
        let tag = &rest[open + 1..close];
        if tag.starts_with('?') {
        } else if let Some(end) = tag.strip_prefix('/') {
            let top = stack.pop().unwrap_or_else(|| panic!("{name}: stray </{end}>"));
            assert_eq!(top, end.trim(), "{name}: mismatched close");
        } else if !tag.ends_with('/') {
            let el = tag.split_whitespace().next().unwrap().to_string();
            stack.push(el);
        }
        rest = &rest[close + 1..];
    }
    assert!(stack.is_empty(), "{name}: unclosed {stack:?}");
    assert!(svg.contains(r#"viewBox="0 0 800 600""#), "{name}: viewport");
}

fn tick_labels(svg: &str) -> Vec<String> {
    svg.split(r#"text-anchor="end">"#)
        .skip(1)
        .map(|s| s[..s.find('<').unwrap()].to_string())
        .collect()
}

#[test]
fn full_pipeline_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let result = meritscan(&["run"], &out);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));

    for name in [
        "records.csv",
        "cleaned.tsv",
        "quantities.csv",
        "cobb_douglas.csv",
        "diagnostics.csv",
        "features_tfidf.csv",
        "features_tfidf-vader.csv",
        "vocabulary_tfidf.txt",
        "vocabulary_tfidf-vader.txt",
        "metrics.csv",
        "predictions.csv",
        "indices.csv",
        "growth.csv",
        "report/metrics_table.txt",
        "report/summary.txt",
        "report/cobb_douglas_tfidf.svg",
        "report/diagnostics_tfidf-vader.svg",
    ] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let report = out.join("report");
    let mut svgs = 0;
    for model in ["lr", "svm", "gb", "mlp", "rf"] {
        for f in ["tfidf", "tfidf-vader"] {
            for (prefix, lo, hi) in [("i_index", "0", "1"), ("s_n", "0", "200"), ("b_index", "0", "5")] {
                let name = format!("{prefix}_{model}_{f}.svg");
                let svg = std::fs::read_to_string(report.join(&name)).unwrap();
                assert_well_formed(&svg, &name);
                let ticks = tick_labels(&svg);
                assert!(ticks.contains(&lo.to_string()) && ticks.contains(&hi.to_string()), "{name}: {ticks:?}");
                svgs += 1;
            }
        }
    }
    let b = std::fs::read_to_string(report.join("b_index_lr_tfidf.svg")).unwrap();
    assert_eq!(b.matches("<clipPath").count(), 4);
    for entry in std::fs::read_dir(&report).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "svg") {
            assert_well_formed(&std::fs::read_to_string(&p).unwrap(), &p.display().to_string());
        }
    }
    assert_eq!(svgs, 30);
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 1 + 5 * 2 * 5);
}

#[test]
fn indices_before_train_names_the_model_artifact() {
    let dir = tempfile::tempdir().unwrap();
    for stage in ["ingest", "clean", "featurize"] {
        assert!(meritscan(&[stage], dir.path()).status.success(), "{stage}");
    }
    let result = meritscan(&["indices"], dir.path());
    assert!(!result.status.success());
    let err = String::from_utf8_lossy(&result.stderr);
    assert!(err.contains("predictions.csv") && err.contains("train"), "{err}");
    assert!(!dir.path().join("indices.csv").exists());
}

#[test]
fn report_refuses_empty_indices() {
    let dir = tempfile::tempdir().unwrap();
    for stage in ["ingest", "clean", "featurize", "train", "indices"] {
        assert!(meritscan(&[stage], dir.path()).status.success(), "{stage}");
    }
    let indices = dir.path().join("indices.csv");
    let header = std::fs::read_to_string(&indices).unwrap().lines().next().unwrap().to_string();
    std::fs::write(&indices, header + "\n").unwrap();
    let result = meritscan(&["report"], dir.path());
    assert!(!result.status.success());
    let report = dir.path().join("report");
    let svgs = std::fs::read_dir(&report)
        .map(|d| d.filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg")).count())
        .unwrap_or(0);
    assert_eq!(svgs, 0);
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("study.conf");
    std::fs::write(&cfg, "model = lr\nfeaturization = tfidf\nrepeats = 3\n").unwrap();
    let out = dir.path().join("o");
    let result = Command::new(env!("CARGO_BIN_EXE_meritscan"))
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--input")
        .arg(fixture())
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 4);
}
