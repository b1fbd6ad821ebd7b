//! Growth exponent of `S_n` and the p-reasonable-order verdicts.
//!
//! `S_n ≈ c n^slope` is fitted by least squares on the log scale. `B_{n,p}`
//! stays bounded when `slope < 1/p`, so `p* = 1/slope`. Finite samples only
//! support a banded verdict: out of order above `1/p + τ`, in order below
//! `1/p - τ`, inconclusive in between.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::classify::ModelKind;
use crate::error::{Error, Result};
use crate::featurize::Featurization;
use crate::quantify::fit_linear;

use super::{IndexKind, IndexPoint};

pub const DEFAULT_TAU: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEstimate {
    pub slope: f64,
    pub slope_ci95: (f64, f64),
    /// `1/slope`, defined only for a positive slope.
    pub p_star: Option<f64>,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    In,
    Out,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::In => "in",
            Verdict::Out => "out",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Verdict::In),
            "out" => Ok(Verdict::Out),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(Error::Parse(format!("unknown verdict `{other}`"))),
        }
    }
}

pub fn classify_growth(slope: f64, p: f64, tau: f64) -> Verdict {
    let threshold = 1.0 / p;
    if slope > threshold + tau {
        Verdict::Out
    } else if slope < threshold - tau {
        Verdict::In
    } else {
        Verdict::Inconclusive
    }
}

impl GrowthEstimate {
    pub fn verdict(&self, p: f64, tau: f64) -> Verdict {
        classify_growth(self.slope, p, tau)
    }

    pub fn verdicts(&self, p_values: &[f64], tau: f64) -> Vec<(f64, Verdict)> {
        p_values.iter().map(|&p| (p, self.verdict(p, tau))).collect()
    }
}

/// Least-squares fit of `ln S_n` on `ln n` over `S` points.
pub fn estimate_growth(points: &[IndexPoint]) -> Result<GrowthEstimate> {
    if let Some(p) = points.iter().find(|p| p.kind != IndexKind::S) {
        return Err(Error::Config(format!(
            "growth is estimated from S points, got {}",
            p.kind
        )));
    }
    let distinct: BTreeSet<usize> = points.iter().map(|p| p.n).collect();
    if distinct.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "growth estimate needs at least 10 distinct n, got {}",
            distinct.len()
        )));
    }
    if let Some(p) = points.iter().find(|p| !(p.value > 0.0) || p.n == 0) {
        return Err(Error::Domain(format!(
            "S must be positive for the log fit, run {} has {}",
            p.run, p.value
        )));
    }
    let x: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.value.ln()).collect();
    let fit = fit_linear(&x, &y)?;
    Ok(GrowthEstimate {
        slope: fit.slope,
        slope_ci95: fit.slope_ci95,
        p_star: (fit.slope > 0.0).then(|| 1.0 / fit.slope),
        n_points: points.len(),
    })
}

pub const GROWTH_HEADER: &str = "model,featurization,slope,slope_lo,slope_hi,p_star,verdicts_per_p";

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub model: ModelKind,
    pub featurization: Featurization,
    pub estimate: GrowthEstimate,
    pub verdicts: Vec<(f64, Verdict)>,
}

/// Verdicts are written as `p:verdict` joined by `;`.
pub fn write_growth<W: Write>(w: W, rows: &[GrowthRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(GROWTH_HEADER.split(','))?;
    for r in rows {
        let verdicts = r
            .verdicts
            .iter()
            .map(|(p, v)| format!("{p}:{v}"))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.model.to_string(),
            r.featurization.to_string(),
            r.estimate.slope.to_string(),
            r.estimate.slope_ci95.0.to_string(),
            r.estimate.slope_ci95.1.to_string(),
            r.estimate.p_star.map(|p| p.to_string()).unwrap_or_default(),
            verdicts,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<growth>", e))
}

pub fn read_growth<R: Read>(reader: R) -> Result<Vec<GrowthRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    if rdr.headers()?.iter().collect::<Vec<_>>().join(",") != GROWTH_HEADER {
        return Err(Error::Parse(format!("expected header `{GROWTH_HEADER}`")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |what: &str| Error::Csv {
            row: line,
            message: format!("bad {what}"),
        };
        let mut verdicts = Vec::new();
        for item in row[6].split(';').filter(|s| !s.is_empty()) {
            let (p, v) = item.split_once(':').ok_or_else(|| bad("verdict"))?;
            verdicts.push((p.parse().map_err(|_| bad("p"))?, v.parse()?));
        }
        out.push(GrowthRow {
            model: row[0].parse().map_err(|_| bad("model"))?,
            featurization: row[1].parse().map_err(|_| bad("featurization"))?,
            estimate: GrowthEstimate {
                slope: row[2].parse().map_err(|_| bad("slope"))?,
                slope_ci95: (
                    row[3].parse().map_err(|_| bad("slope_lo"))?,
                    row[4].parse().map_err(|_| bad("slope_hi"))?,
                ),
                p_star: if row[5].is_empty() {
                    None
                } else {
                    Some(row[5].parse().map_err(|_| bad("p_star"))?)
                },
                n_points: 0,
            },
            verdicts,
        });
    }
    Ok(out)
}
