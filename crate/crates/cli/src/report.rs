//! Builds every report file in memory; the caller writes them only once all
//! have rendered.

use std::collections::BTreeMap;
use std::fmt::Write;

use anyhow::Result;
use meritscan::classify::{self, MetricsRow};
use meritscan::indices::{self, GrowthRow, IndexKind, IndexRow};
use meritscan::quantify::{self, DiagnosticRow, FitSummary};
use meritscan::{Featurization, ModelKind};

use crate::svg::{self, Panel, Range};

pub struct Inputs<'a> {
    pub metrics: &'a [MetricsRow],
    pub index_rows: &'a [IndexRow],
    pub growth: &'a [GrowthRow],
    pub fits: &'a [FitSummary],
    pub diagnostics: &'a [DiagnosticRow],
    pub real_data: bool,
}

pub const I_RANGE: (f64, f64) = (0.0, 1.0);
pub const S_RANGE: (f64, f64) = (0.0, 200.0);
pub const B_RANGE: (f64, f64) = (0.0, 5.0);

fn published(model: ModelKind, f: Featurization) -> Option<[f64; 3]> {
    let table = match f {
        Featurization::Ti => &classify::reference::TI,
        Featurization::Tiv => &classify::reference::TIV,
    };
    table.iter().find(|(m, _)| *m == model).map(|(_, v)| *v)
}

fn metrics_table(metrics: &[MetricsRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Average over runs, percent. Published columns are the full-data baselines (accuracy, share predicted meritorious, F1)."
    );
    let _ = writeln!(
        out,
        "{:<6}{:<13}{:>6}{:>10}{:>24}{:>10}{:>8}{:>8}   {:>10}{:>10}{:>8}",
        "model", "features", "runs", "accuracy", "merit (predicted rate)", "recall", "F1+", "F1-", "pub acc", "pub merit", "pub F1"
    );
    for s in classify::summarize(metrics) {
        let p = published(s.model, s.featurization);
        let pubcol = |i: usize| p.map(|v| format!("{:.2}", v[i])).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<6}{:<13}{:>6}{:>10.2}{:>24.2}{:>10.2}{:>8.2}{:>8.2}   {:>10}{:>10}{:>8}",
            s.model.as_str(),
            s.featurization.as_str(),
            s.runs,
            100.0 * s.accuracy,
            100.0 * s.predicted_merit_rate,
            100.0 * s.merit_recall,
            100.0 * s.f1_pos,
            100.0 * s.f1_neg,
            pubcol(0),
            pubcol(1),
            pubcol(2)
        );
    }
    out
}

fn summary(inputs: &Inputs<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Cobb-Douglas fits of ln(m/l) on ln(s/l)");
    if inputs.fits.is_empty() {
        let _ = writeln!(out, "  none available");
    }
    for f in inputs.fits {
        let _ = write!(
            out,
            "  {:<12} alpha {:.4} (95% CI {:.4} to {:.4})  beta {:.4}  n {}  excluded {}",
            f.variant.as_str(),
            f.alpha,
            f.alpha_lo,
            f.alpha_hi,
            f.beta,
            f.n,
            f.excluded
        );
        if f.alpha_exceeds_one() {
            out.push_str("  [alpha above 1: transfer function not Lipschitz on [0,1]]");
        }
        out.push('\n');
        if inputs.real_data {
            let (a, (lo, hi)) = match f.variant {
                Featurization::Ti => (quantify::reference::ALPHA_TI, quantify::reference::ALPHA_TI_CI),
                Featurization::Tiv => (quantify::reference::ALPHA_TIV, quantify::reference::ALPHA_TIV_CI),
            };
            let _ = writeln!(out, "  {:<12} published alpha {a:.3} (95% CI {lo:.3} to {hi:.3})", "");
        }
    }

    let _ = writeln!(out, "\nGrowth of S_n (slope of ln S_n on ln n)");
    if inputs.growth.is_empty() {
        let _ = writeln!(out, "  none available (each model needs at least 10 distinct subset sizes)");
    }
    for g in inputs.growth {
        let e = &g.estimate;
        let p_star = e.p_star.map(|p| format!("{p:.4}")).unwrap_or_else(|| "undefined".into());
        let verdicts: Vec<String> = g
            .verdicts
            .iter()
            .map(|(p, v)| format!("1/p={:.2}:{v}", 1.0 / p))
            .collect();
        let _ = write!(
            out,
            "  {:<5}{:<12} slope {:.4} (95% CI {:.4} to {:.4})  p* {}  {}",
            g.model.as_str(),
            g.featurization.as_str(),
            e.slope,
            e.slope_ci95.0,
            e.slope_ci95.1,
            p_star,
            verdicts.join(" ")
        );
        if inputs.real_data {
            let (lo, hi) = match g.featurization {
                Featurization::Ti => indices::reference::P_STAR_TI,
                Featurization::Tiv => indices::reference::P_STAR_TIV,
            };
            let inside = e.p_star.is_some_and(|p| p > lo && p < hi);
            let _ = write!(
                out,
                "  published p* in ({lo:.4}, {hi:.4}): {}",
                if inside { "consistent" } else { "not consistent" }
            );
        }
        out.push('\n');
    }
    out
}

fn x_range_for(points: &[(f64, f64)]) -> Range {
    let max = points.iter().map(|p| p.0).fold(1.0, f64::max);
    Range::new(0.0, (max * 1.05).ceil())
}

fn index_plots(rows: &[IndexRow], files: &mut Vec<(String, String)>) {
    let mut groups: BTreeMap<(ModelKind, Featurization), Vec<&IndexRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.model, r.featurization)).or_default().push(r);
    }
    for ((model, f), rows) in groups {
        let tag = format!("{model}_{f}");
        let pick = |want: fn(&IndexKind) -> bool| -> Vec<(f64, f64)> {
            rows.iter()
                .filter(|r| want(&r.point.kind))
                .map(|r| (r.point.n as f64, r.point.value))
                .collect()
        };
        let i_pts = pick(|k| matches!(k, IndexKind::I));
        if !i_pts.is_empty() {
            let mut p = Panel::new(
                &format!("I-index, {} ({})", model.as_str().to_uppercase(), f),
                "n (predicted meritorious)",
                "I_n",
                x_range_for(&i_pts),
                Range::new(I_RANGE.0, I_RANGE.1),
            );
            p.h_lines.push(0.5);
            p.points = i_pts;
            files.push((format!("i_index_{tag}.svg"), svg::single(&p)));
        }
        let s_pts = pick(|k| matches!(k, IndexKind::S));
        if !s_pts.is_empty() {
            let mut p = Panel::new(
                &format!("S_n, {} ({})", model.as_str().to_uppercase(), f),
                "n (predicted meritorious)",
                "S_n",
                x_range_for(&s_pts),
                Range::new(S_RANGE.0, S_RANGE.1),
            );
            p.points = s_pts;
            files.push((format!("s_n_{tag}.svg"), svg::single(&p)));
        }
        let mut ps: Vec<f64> = Vec::new();
        for r in &rows {
            if let IndexKind::B(p) = r.point.kind {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        if !ps.is_empty() {
            let panels: Vec<Panel> = ps
                .iter()
                .map(|&p| {
                    let pts: Vec<(f64, f64)> = rows
                        .iter()
                        .filter(|r| r.point.kind == IndexKind::B(p))
                        .map(|r| (r.point.n as f64, r.point.value))
                        .collect();
                    let mut panel = Panel::new(
                        &format!("B, 1/p = {:.2}", 1.0 / p),
                        "n",
                        "B_{n,p}",
                        x_range_for(&pts),
                        Range::new(B_RANGE.0, B_RANGE.1),
                    );
                    panel.points = pts;
                    panel
                })
                .collect();
            files.push((format!("b_index_{tag}.svg"), svg::grid(&panels, 2)));
        }
    }
}

fn fit_plots(inputs: &Inputs<'_>, files: &mut Vec<(String, String)>) {
    for f in Featurization::ALL {
        let rows: Vec<&DiagnosticRow> = inputs.diagnostics.iter().filter(|d| d.variant == f).collect();
        if rows.is_empty() {
            continue;
        }
        let xy: Vec<(f64, f64)> = rows.iter().map(|d| (d.log_s_over_l, d.log_m_over_l)).collect();
        let mut line: Vec<(f64, f64)> = rows.iter().map(|d| (d.log_s_over_l, d.fitted)).collect();
        line.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut p = Panel::new(
            &format!("Cobb-Douglas fit ({f})"),
            "ln(s/l)",
            "ln(m/l)",
            Range::covering(xy.iter().map(|p| p.0)),
            Range::covering(xy.iter().map(|p| p.1).chain(line.iter().map(|p| p.1))),
        );
        p.points = xy;
        p.lines.push(line);
        files.push((format!("cobb_douglas_{f}.svg"), svg::single(&p)));

        let panel = |title: &str, xl: &str, yl: &str, pts: Vec<(f64, f64)>, zero: bool| {
            let mut p = Panel::new(
                title,
                xl,
                yl,
                Range::covering(pts.iter().map(|p| p.0)),
                Range::covering(pts.iter().map(|p| p.1)),
            );
            if zero {
                p.h_lines.push(0.0);
            }
            p.points = pts;
            p
        };
        let mut qq = panel(
            "Normal Q-Q",
            "theoretical quantile",
            "standardized residual",
            rows.iter().map(|d| (d.normal_quantile, d.std_residual)).collect(),
            false,
        );
        let lo = qq.x.lo.max(qq.y.lo);
        let hi = qq.x.hi.min(qq.y.hi);
        qq.lines.push(vec![(lo, lo), (hi, hi)]);
        let panels = vec![
            panel(
                "Residuals vs Fitted",
                "fitted",
                "residual",
                rows.iter().map(|d| (d.fitted, d.residual)).collect(),
                true,
            ),
            qq,
            panel(
                "Scale-Location",
                "fitted",
                "sqrt|standardized residual|",
                rows.iter().map(|d| (d.fitted, d.sqrt_abs_std_residual)).collect(),
                false,
            ),
            panel(
                "Residuals vs Leverage",
                "leverage",
                "standardized residual",
                rows.iter().map(|d| (d.leverage, d.std_residual)).collect(),
                true,
            ),
        ];
        files.push((format!("diagnostics_{f}.svg"), svg::grid(&panels, 2)));
    }
}

/// File name and contents of every report artifact.
pub fn render(inputs: &Inputs<'_>) -> Result<Vec<(String, String)>> {
    let mut files = vec![
        ("metrics_table.txt".to_string(), metrics_table(inputs.metrics)),
        ("summary.txt".to_string(), summary(inputs)),
    ];
    index_plots(inputs.index_rows, &mut files);
    fit_plots(inputs, &mut files);
    Ok(files)
}
