//! Concomitant-based anomaly indices.
//!
//! Given input-output pairs `(x_i, y_i)`, sort by `x` and read off the
//! accompanying `y` values (the concomitants). Then
//!
//! * `I_n` is the share of the total variation contributed by upward steps,
//! * `S_n` is the total variation itself,
//! * `B_{n,p} = S_n / n^(1/p)`.
//!
//! Under an anomaly-free monotone system the concomitants are monotone and
//! `I_n = 1`; exogenous background risk drives `I_n` toward one half and
//! makes `S_n` grow linearly in `n`.

mod algorithm;
mod growth;
mod synthetic;

use std::fmt;
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::ModelKind;
use crate::error::{Error, Result};
use crate::featurize::Featurization;
use crate::quantify::IoPair;

pub use algorithm::{indices_for_subset, points_from_predictions, run_algorithm1, Algorithm1Output};
pub use growth::{classify_growth, estimate_growth, GrowthEstimate, GrowthRow, Verdict, DEFAULT_TAU};
pub use growth::{read_growth, write_growth, GROWTH_HEADER};
pub use synthetic::{generate_synthetic, Delta, InputDistribution, SyntheticSystemSpec};

/// Published ranges of `p*` on the full CFPB subset.
pub mod reference {
    /// `p*` for TF-IDF lies in `(1/0.8, 1/0.7)`.
    pub const P_STAR_TI: (f64, f64) = (1.0 / 0.8, 1.0 / 0.7);
    /// `p*` for TF-IDF-VADER lies in `(1/0.7, 1/0.6)`.
    pub const P_STAR_TIV: (f64, f64) = (1.0 / 0.7, 1.0 / 0.6);
}

/// Concomitants `y_{1,n}, ..., y_{n,n}` in ascending order of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcomitantSequence {
    y: Vec<f64>,
    tie_count: usize,
}

impl ConcomitantSequence {
    /// Sorts by `x`, breaking ties by position in `pairs`.
    pub fn from_xy(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "need at least 2 pairs, got {}",
                pairs.len()
            )));
        }
        if pairs.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Domain("pairs must be finite".into()));
        }
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.sort_by(|&a, &b| pairs[a].0.total_cmp(&pairs[b].0).then(a.cmp(&b)));
        let tie_count = order
            .windows(2)
            .filter(|w| pairs[w[0]].0 == pairs[w[1]].0)
            .count();
        Ok(Self {
            y: order.iter().map(|&i| pairs[i].1).collect(),
            tie_count,
        })
    }

    /// Wraps values already in concomitant order.
    pub fn from_ordered(y: Vec<f64>) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "need at least 2 values, got {}",
                y.len()
            )));
        }
        Ok(Self { y, tie_count: 0 })
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Adjacent pairs with equal `x` after sorting.
    pub fn tie_count(&self) -> usize {
        self.tie_count
    }

    fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.y.windows(2).map(|w| w[1] - w[0])
    }
}

pub fn concomitants(pairs: &[IoPair]) -> Result<ConcomitantSequence> {
    let xy: Vec<(f64, f64)> = pairs.iter().map(|p| (p.x, p.y)).collect();
    ConcomitantSequence::from_xy(&xy)
}

/// Like [`concomitants`] but adds seeded noise of order `1e-12` to each `x`
/// first, so tied inputs are ordered at random rather than by position.
pub fn concomitants_jittered(pairs: &[IoPair], seed: u64) -> Result<ConcomitantSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xy: Vec<(f64, f64)> = pairs
        .iter()
        .map(|p| (p.x + rng.random_range(-1e-12..1e-12), p.y))
        .collect();
    ConcomitantSequence::from_xy(&xy)
}

pub fn i_index(c: &ConcomitantSequence) -> Result<f64> {
    let mut up = 0.0;
    let mut total = 0.0;
    for d in c.increments() {
        if d > 0.0 {
            up += d;
        }
        total += d.abs();
    }
    if total == 0.0 {
        return Err(Error::DegenerateSequence(
            "all concomitants are equal, total variation is 0".into(),
        ));
    }
    Ok(up / total)
}

pub fn s_n(c: &ConcomitantSequence) -> f64 {
    c.increments().map(f64::abs).sum()
}

/// `p = ∞` gives `S_n`.
pub fn b_index(c: &ConcomitantSequence, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    let s = s_n(c);
    if p.is_infinite() {
        return Ok(s);
    }
    Ok(s / (c.len() as f64).powf(1.0 / p))
}

/// `I_n` and `½(1 + (y_{n,n} - y_{1,n}) / S_n)`.
pub fn i_identity_check(c: &ConcomitantSequence) -> Result<(f64, f64)> {
    let lhs = i_index(c)?;
    let y = c.values();
    let rhs = 0.5 * (1.0 + (y[y.len() - 1] - y[0]) / s_n(c));
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexKind {
    I,
    S,
    B(f64),
}

impl IndexKind {
    pub fn label(&self) -> &'static str {
        match self {
            IndexKind::I => "I",
            IndexKind::S => "S",
            IndexKind::B(_) => "B",
        }
    }

    pub fn p(&self) -> Option<f64> {
        match self {
            IndexKind::B(p) => Some(*p),
            _ => None,
        }
    }

    pub fn evaluate(&self, c: &ConcomitantSequence) -> Result<f64> {
        match self {
            IndexKind::I => i_index(c),
            IndexKind::S => Ok(s_n(c)),
            IndexKind::B(p) => b_index(c, *p),
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexKind::B(p) => write!(f, "B(p={p})"),
            other => f.write_str(other.label()),
        }
    }
}

/// One run's index value over its predicted-meritorious set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexPoint {
    pub run: usize,
    /// Number of pairs the index was computed from.
    pub n: usize,
    pub value: f64,
    pub kind: IndexKind,
}

/// An [`IndexPoint`] labelled with the model and featurization behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexRow {
    pub model: ModelKind,
    pub featurization: Featurization,
    pub point: IndexPoint,
}

pub const INDEX_HEADER: &str = "run,model,featurization,index_kind,p,n,value";

pub fn write_index_rows<W: Write>(w: W, rows: &[IndexRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(INDEX_HEADER.split(','))?;
    for r in rows {
        w.write_record([
            r.point.run.to_string(),
            r.model.to_string(),
            r.featurization.to_string(),
            r.point.kind.label().to_string(),
            r.point.kind.p().map(|p| p.to_string()).unwrap_or_default(),
            r.point.n.to_string(),
            r.point.value.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<indices>", e))
}

pub fn read_index_rows<R: Read>(reader: R) -> Result<Vec<IndexRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    if rdr.headers()?.iter().collect::<Vec<_>>().join(",") != INDEX_HEADER {
        return Err(Error::Parse(format!("expected header `{INDEX_HEADER}`")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |what: &str| Error::Csv {
            row: line,
            message: format!("bad {what}"),
        };
        let kind = match &row[3] {
            "I" => IndexKind::I,
            "S" => IndexKind::S,
            "B" => IndexKind::B(row[4].parse().map_err(|_| bad("p"))?),
            _ => return Err(bad("index_kind")),
        };
        out.push(IndexRow {
            model: row[1].parse().map_err(|_| bad("model"))?,
            featurization: row[2].parse().map_err(|_| bad("featurization"))?,
            point: IndexPoint {
                run: row[0].parse().map_err(|_| bad("run"))?,
                n: row[5].parse().map_err(|_| bad("n"))?,
                value: row[6].parse().map_err(|_| bad("value"))?,
                kind,
            },
        });
    }
    Ok(out)
}
