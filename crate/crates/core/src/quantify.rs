//! Sentiment scores, Cobb-Douglas fits and the induced input-output pairs.
//!
//! For a narrative with `m` counted words, sentiment score `s` and
//! discounted amount `l`, the Cobb-Douglas relation `m = β s^α l^(1-α)`
//! becomes linear after dividing by `l` and taking logarithms:
//! `ln(m/l) = ln β + α ln(s/l)`.

use std::io::Write;

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::corpus::{CleanedNarrative, TokenPolicy};
use crate::error::{Error, Result};
use crate::featurize::Featurization;
use crate::lexicon::{NegativeWordSet, SentimentLexicon, MAX_INTENSITY};

/// `s_i`, `m_i^TI`, `m_i^TIV` and `l_i` for one narrative.
#[derive(Debug, Clone, PartialEq)]
pub struct NarrativeQuantities {
    pub id: String,
    pub s: f64,
    pub m_ti: usize,
    pub m_tiv: usize,
    pub l: f64,
}

impl NarrativeQuantities {
    pub fn m(&self, variant: Featurization) -> usize {
        match variant {
            Featurization::Ti => self.m_ti,
            Featurization::Tiv => self.m_tiv,
        }
    }
}

/// Sum of `|intensity|` over the words of `doc` that lie in `negative`,
/// counting repeats.
pub fn sentiment_score(
    doc: &CleanedNarrative,
    lexicon: &SentimentLexicon,
    negative: &NegativeWordSet,
    policy: TokenPolicy,
) -> f64 {
    doc.words(policy)
        .filter(|w| negative.contains(w))
        .map(|w| lexicon.intensity(w).abs())
        .sum()
}

pub fn narrative_quantities(
    doc: &CleanedNarrative,
    l: f64,
    lexicon: &SentimentLexicon,
    negative: &NegativeWordSet,
    policy: TokenPolicy,
) -> Result<NarrativeQuantities> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!(
            "amount for `{}` must be positive, got {l}",
            doc.id
        )));
    }
    Ok(NarrativeQuantities {
        id: doc.id.clone(),
        s: sentiment_score(doc, lexicon, negative, policy),
        m_ti: doc.word_count(policy),
        m_tiv: doc.words(policy).filter(|w| negative.contains(w)).count(),
        l,
    })
}

/// Quantities for `docs[i]` paired with `amounts[i]`.
pub fn compute_quantities(
    docs: &[CleanedNarrative],
    amounts: &[f64],
    lexicon: &SentimentLexicon,
    policy: TokenPolicy,
) -> Result<Vec<NarrativeQuantities>> {
    if docs.len() != amounts.len() {
        return Err(Error::Config(format!(
            "{} narratives but {} amounts",
            docs.len(),
            amounts.len()
        )));
    }
    let negative = crate::lexicon::negative_subset(lexicon);
    docs.iter()
        .zip(amounts)
        .map(|(d, &l)| narrative_quantities(d, l, lexicon, &negative, policy))
        .collect()
}

/// Ordinary least squares of `y` on `x` with an intercept, plus the
/// quantities behind the usual four diagnostic panels.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    pub slope_ci95: (f64, f64),
    /// Residual standard error, `n - 2` degrees of freedom.
    pub sigma: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub leverage: Vec<f64>,
    pub standardized_residuals: Vec<f64>,
}

pub fn fit_linear(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::Config(format!("{n} x values but {} y values", y.len())));
    }
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "regression needs at least 3 rows, got {n}"
        )));
    }
    let nf = n as f64;
    let x_bar = x.iter().sum::<f64>() / nf;
    let y_bar = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - x_bar).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData(
            "regressor is constant, slope undefined".into(),
        ));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - x_bar) * (b - y_bar)).sum();
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let fitted: Vec<f64> = x.iter().map(|v| intercept + slope * v).collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, f)| a - f).collect();
    let df = nf - 2.0;
    let sigma = (residuals.iter().map(|r| r * r).sum::<f64>() / df).sqrt();
    let slope_std_error = sigma / sxx.sqrt();
    let t = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| Error::Domain(e.to_string()))?
        .inverse_cdf(0.975);
    let leverage: Vec<f64> = x
        .iter()
        .map(|v| 1.0 / nf + (v - x_bar).powi(2) / sxx)
        .collect();
    let standardized_residuals = residuals
        .iter()
        .zip(&leverage)
        .map(|(r, h)| {
            let scale = sigma * (1.0 - h).sqrt();
            if scale > 0.0 {
                r / scale
            } else {
                0.0
            }
        })
        .collect();
    Ok(LinearFit {
        slope,
        intercept,
        slope_std_error,
        slope_ci95: (slope - t * slope_std_error, slope + t * slope_std_error),
        sigma,
        x: x.to_vec(),
        y: y.to_vec(),
        fitted,
        residuals,
        leverage,
        standardized_residuals,
    })
}

impl LinearFit {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Theoretical normal quantile for each row, matched to the rank of its
    /// standardized residual. Plotting positions follow `ppoints`.
    pub fn normal_quantiles(&self) -> Vec<f64> {
        let n = self.len();
        let a = if n <= 10 { 3.0 / 8.0 } else { 0.5 };
        let normal = Normal::standard();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            self.standardized_residuals[i]
                .total_cmp(&self.standardized_residuals[j])
                .then(i.cmp(&j))
        });
        let mut q = vec![0.0; n];
        for (rank, &i) in order.iter().enumerate() {
            let p = (rank as f64 + 1.0 - a) / (n as f64 + 1.0 - 2.0 * a);
            q[i] = normal.inverse_cdf(p);
        }
        q
    }

    /// `sqrt(|standardized residual|)`.
    pub fn scale_location(&self) -> Vec<f64> {
        self.standardized_residuals
            .iter()
            .map(|r| r.abs().sqrt())
            .collect()
    }

    pub fn cooks_distance(&self) -> Vec<f64> {
        self.standardized_residuals
            .iter()
            .zip(&self.leverage)
            .map(|(r, h)| {
                if *h < 1.0 {
                    r * r / 2.0 * h / (1.0 - h)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Regression of `ln(m/l)` on `ln(s/l)` for one featurization.
#[derive(Debug, Clone, PartialEq)]
pub struct CobbDouglasFit {
    pub variant: Featurization,
    pub alpha_hat: f64,
    /// Collapses to a point when the data are exactly log-linear.
    pub alpha_ci95: (f64, f64),
    pub beta_hat: f64,
    /// Ids of the rows used, aligned with the vectors in `fit`.
    pub ids: Vec<String>,
    /// Rows dropped because `s`, `m` or `l` was not positive.
    pub excluded: usize,
    pub fit: LinearFit,
}

impl CobbDouglasFit {
    /// The form posits `α < 1`; larger estimates are reported, not rejected.
    pub fn alpha_exceeds_one(&self) -> bool {
        self.alpha_hat > 1.0
    }

    pub fn residuals(&self) -> &[f64] {
        &self.fit.residuals
    }

    pub fn fitted(&self) -> &[f64] {
        &self.fit.fitted
    }

    pub fn leverage(&self) -> &[f64] {
        &self.fit.leverage
    }

    pub fn standardized_residuals(&self) -> &[f64] {
        &self.fit.standardized_residuals
    }

    pub fn transfer_function(&self) -> Result<TransferFunction> {
        TransferFunction::from_fit(self.alpha_hat, self.beta_hat)
    }
}

pub fn fit_cobb_douglas(
    quantities: &[NarrativeQuantities],
    variant: Featurization,
) -> Result<CobbDouglasFit> {
    let mut ids = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut excluded = 0;
    for q in quantities {
        let m = q.m(variant) as f64;
        if q.s > 0.0 && m > 0.0 && q.l > 0.0 {
            ids.push(q.id.clone());
            x.push((q.s / q.l).ln());
            y.push((m / q.l).ln());
        } else {
            excluded += 1;
        }
    }
    let fit = fit_linear(&x, &y)?;
    Ok(CobbDouglasFit {
        variant,
        alpha_hat: fit.slope,
        alpha_ci95: fit.slope_ci95,
        beta_hat: fit.intercept.exp(),
        ids,
        excluded,
        fit,
    })
}

/// One constructed input `x ∈ [0, 1]` and output `y > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IoPair {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub featurization: Featurization,
}

/// `x = s / (4m)`, `y = m / l`; `None` unless `m > 0` and `l > 0`.
pub fn io_values(s: f64, m: f64, l: f64) -> Option<(f64, f64)> {
    if !(m > 0.0 && l > 0.0) {
        return None;
    }
    Some(((s / (MAX_INTENSITY * m)).clamp(0.0, 1.0), m / l))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IoPairs {
    pub pairs: Vec<IoPair>,
    pub excluded: usize,
}

pub fn make_io_pairs(quantities: &[NarrativeQuantities], variant: Featurization) -> IoPairs {
    let mut pairs = Vec::with_capacity(quantities.len());
    let mut excluded = 0;
    for q in quantities {
        match io_values(q.s, q.m(variant) as f64, q.l) {
            Some((x, y)) => pairs.push(IoPair {
                id: q.id.clone(),
                x,
                y,
                featurization: variant,
            }),
            None => excluded += 1,
        }
    }
    IoPairs { pairs, excluded }
}

/// `h₀(x) = c₂ x^(α/(1-α))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFunction {
    alpha: f64,
    c2: f64,
}

impl TransferFunction {
    pub fn new(alpha: f64, c2: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha == 1.0 {
            return Err(Error::Domain(format!(
                "exponent α/(1-α) undefined for α = {alpha}"
            )));
        }
        if !(c2 > 0.0 && c2.is_finite()) {
            return Err(Error::Domain(format!("c2 must be positive, got {c2}")));
        }
        Ok(Self { alpha, c2 })
    }

    /// `c₂ = exp(c₁)` with `c₁ = (α/(1-α)) ln 4 + (1/(1-α)) ln β`.
    pub fn from_fit(alpha: f64, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Domain(format!("β must be positive, got {beta}")));
        }
        if alpha == 1.0 {
            return Self::new(alpha, 1.0);
        }
        let c1 = alpha / (1.0 - alpha) * MAX_INTENSITY.ln() + beta.ln() / (1.0 - alpha);
        Self::new(alpha, c1.exp())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c1(&self) -> f64 {
        self.c2.ln()
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Constant of the derivative, `c₂ α/(1-α)`.
    pub fn c3(&self) -> f64 {
        self.c2 * self.exponent()
    }

    pub fn exponent(&self) -> f64 {
        self.alpha / (1.0 - self.alpha)
    }

    /// `+∞` at `x = 0` when the exponent is negative.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.c2 * x.powf(self.exponent()))
    }

    /// `h₀'(x) = c₃ x^((2α-1)/(1-α))`.
    pub fn derivative(&self, x: f64) -> f64 {
        let e = (2.0 * self.alpha - 1.0) / (1.0 - self.alpha);
        if e == 0.0 {
            self.c3()
        } else {
            self.c3() * x.powf(e)
        }
    }

    /// True when `h₀'` stays bounded near 0: `α ∈ [1/2, 1)`, or `α = 0`
    /// where `h₀` is constant.
    pub fn is_lipschitz(&self) -> bool {
        (0.5..1.0).contains(&self.alpha) || self.alpha == 0.0
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} outside [0, 1]")))
    }
}

pub fn transfer_eval(tf: &TransferFunction, x: f64) -> Result<f64> {
    tf.eval(x)
}

/// Largest `|h₀'|` on the grid `k / grid_size`, `k = 1..=grid_size`,
/// together with the analytic boundedness verdict.
pub fn lipschitz_bound_check(tf: &TransferFunction, grid_size: usize) -> Result<(f64, bool)> {
    if grid_size < 2 {
        return Err(Error::Domain(format!(
            "grid needs at least 2 points, got {grid_size}"
        )));
    }
    let max = (1..=grid_size)
        .map(|k| tf.derivative(k as f64 / grid_size as f64).abs())
        .fold(0.0, f64::max);
    Ok((max, tf.is_lipschitz()))
}

pub const QUANTITIES_HEADER: &str = "id,s,m_ti,m_tiv,l,x_ti,y_ti,x_tiv,y_tiv";

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Pair columns are left empty where the pair is undefined.
pub fn write_quantities<W: Write>(w: W, quantities: &[NarrativeQuantities]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(QUANTITIES_HEADER.split(','))?;
    for q in quantities {
        let ti = io_values(q.s, q.m_ti as f64, q.l);
        let tiv = io_values(q.s, q.m_tiv as f64, q.l);
        w.write_record([
            q.id.clone(),
            q.s.to_string(),
            q.m_ti.to_string(),
            q.m_tiv.to_string(),
            q.l.to_string(),
            opt(ti.map(|p| p.0)),
            opt(ti.map(|p| p.1)),
            opt(tiv.map(|p| p.0)),
            opt(tiv.map(|p| p.1)),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<quantities>", e))
}

pub fn read_quantities<R: std::io::Read>(reader: R) -> Result<Vec<NarrativeQuantities>> {
    let mut rdr = csv::Reader::from_reader(reader);
    if rdr.headers()?.iter().collect::<Vec<_>>().join(",") != QUANTITIES_HEADER {
        return Err(Error::Parse(format!("expected header `{QUANTITIES_HEADER}`")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |what: &str| Error::Csv {
            row: line,
            message: format!("bad {what}"),
        };
        out.push(NarrativeQuantities {
            id: row[0].to_string(),
            s: row[1].parse().map_err(|_| bad("s"))?,
            m_ti: row[2].parse().map_err(|_| bad("m_ti"))?,
            m_tiv: row[3].parse().map_err(|_| bad("m_tiv"))?,
            l: row[4].parse().map_err(|_| bad("l"))?,
        });
    }
    Ok(out)
}

pub const DIAGNOSTICS_HEADER: &str = "variant,id,log_s_over_l,log_m_over_l,fitted,residual,std_residual,normal_quantile,sqrt_abs_std_residual,leverage,cooks_distance";

/// Per-row data behind residuals-vs-fitted, normal Q-Q, scale-location and
/// residuals-vs-leverage plots.
pub fn write_diagnostics<W: Write>(w: W, fits: &[&CobbDouglasFit]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(DIAGNOSTICS_HEADER.split(','))?;
    for cd in fits {
        let f = &cd.fit;
        let q = f.normal_quantiles();
        let sl = f.scale_location();
        let cook = f.cooks_distance();
        for i in 0..f.len() {
            w.write_record([
                cd.variant.as_str().to_string(),
                cd.ids[i].clone(),
                f.x[i].to_string(),
                f.y[i].to_string(),
                f.fitted[i].to_string(),
                f.residuals[i].to_string(),
                f.standardized_residuals[i].to_string(),
                q[i].to_string(),
                sl[i].to_string(),
                f.leverage[i].to_string(),
                cook[i].to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io("<diagnostics>", e))
}

/// One diagnostics row as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRow {
    pub variant: Featurization,
    pub id: String,
    pub log_s_over_l: f64,
    pub log_m_over_l: f64,
    pub fitted: f64,
    pub residual: f64,
    pub std_residual: f64,
    pub normal_quantile: f64,
    pub sqrt_abs_std_residual: f64,
    pub leverage: f64,
    pub cooks_distance: f64,
}

pub fn read_diagnostics<R: std::io::Read>(reader: R) -> Result<Vec<DiagnosticRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    if rdr.headers()?.iter().collect::<Vec<_>>().join(",") != DIAGNOSTICS_HEADER {
        return Err(Error::Parse(format!("expected header `{DIAGNOSTICS_HEADER}`")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let num = |i: usize| -> Result<f64> {
            row[i].parse().map_err(|_| Error::Csv {
                row: line,
                message: format!("bad number in column {}", i + 1),
            })
        };
        out.push(DiagnosticRow {
            variant: row[0].parse()?,
            id: row[1].to_string(),
            log_s_over_l: num(2)?,
            log_m_over_l: num(3)?,
            fitted: num(4)?,
            residual: num(5)?,
            std_residual: num(6)?,
            normal_quantile: num(7)?,
            sqrt_abs_std_residual: num(8)?,
            leverage: num(9)?,
            cooks_distance: num(10)?,
        });
    }
    Ok(out)
}

/// Headline numbers of one fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub variant: Featurization,
    pub n: usize,
    pub excluded: usize,
    pub alpha: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub beta: f64,
}

impl FitSummary {
    pub fn alpha_exceeds_one(&self) -> bool {
        self.alpha > 1.0
    }
}

impl From<&CobbDouglasFit> for FitSummary {
    fn from(f: &CobbDouglasFit) -> Self {
        Self {
            variant: f.variant,
            n: f.fit.len(),
            excluded: f.excluded,
            alpha: f.alpha_hat,
            alpha_lo: f.alpha_ci95.0,
            alpha_hi: f.alpha_ci95.1,
            beta: f.beta_hat,
        }
    }
}

pub const FIT_SUMMARY_HEADER: &str = "variant,n,excluded,alpha,alpha_lo,alpha_hi,beta,alpha_gt_1";

pub fn write_fit_summaries<W: Write>(w: W, fits: &[FitSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(FIT_SUMMARY_HEADER.split(','))?;
    for f in fits {
        w.write_record([
            f.variant.to_string(),
            f.n.to_string(),
            f.excluded.to_string(),
            f.alpha.to_string(),
            f.alpha_lo.to_string(),
            f.alpha_hi.to_string(),
            f.beta.to_string(),
            u8::from(f.alpha_exceeds_one()).to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<fits>", e))
}

pub fn read_fit_summaries<R: std::io::Read>(reader: R) -> Result<Vec<FitSummary>> {
    let mut rdr = csv::Reader::from_reader(reader);
    if rdr.headers()?.iter().collect::<Vec<_>>().join(",") != FIT_SUMMARY_HEADER {
        return Err(Error::Parse(format!("expected header `{FIT_SUMMARY_HEADER}`")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |what: &str| Error::Csv {
            row: line,
            message: format!("bad {what}"),
        };
        out.push(FitSummary {
            variant: row[0].parse()?,
            n: row[1].parse().map_err(|_| bad("n"))?,
            excluded: row[2].parse().map_err(|_| bad("excluded"))?,
            alpha: row[3].parse().map_err(|_| bad("alpha"))?,
            alpha_lo: row[4].parse().map_err(|_| bad("alpha_lo"))?,
            alpha_hi: row[5].parse().map_err(|_| bad("alpha_hi"))?,
            beta: row[6].parse().map_err(|_| bad("beta"))?,
        });
    }
    Ok(out)
}

/// Published estimates on the full CFPB subset, for side-by-side display.
pub mod reference {
    pub const ALPHA_TI: f64 = 0.990;
    pub const ALPHA_TI_CI: (f64, f64) = (0.983, 0.997);
    pub const ALPHA_TIV: f64 = 1.004;
    pub const ALPHA_TIV_CI: (f64, f64) = (1.001, 1.007);
}
