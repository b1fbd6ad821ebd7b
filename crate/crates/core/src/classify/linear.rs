//! L2-regularised linear classifiers trained by full-batch gradient descent.
//!
//! Each epoch starts from the scheduled step `lr * decay^epoch` and halves
//! it until the objective does not increase; if no halving helps, the
//! epoch leaves the parameters unchanged. The recorded objective is
//! therefore non-increasing.

use crate::featurize::FeatureMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearConfig {
    pub lambda: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub decay: f64,
    /// Maximum step halvings per epoch.
    pub max_halvings: usize,
}

impl Default for LinearConfig {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            epochs: 300,
            learning_rate: 0.1,
            decay: 0.99,
            max_halvings: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    Logistic,
    Hinge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub loss: Loss,
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Objective before the first epoch followed by one value per epoch.
    pub objective_history: Vec<f64>,
}

impl LinearModel {
    pub fn margin(&self, cols: &[usize], vals: &[f64]) -> f64 {
        self.bias
            + cols
                .iter()
                .zip(vals)
                .map(|(&c, &v)| self.weights[c] * v)
                .sum::<f64>()
    }

    /// Probability of the positive class for the logistic model, the raw
    /// margin for the hinge model.
    pub fn score(&self, cols: &[usize], vals: &[f64]) -> f64 {
        let m = self.margin(cols, vals);
        match self.loss {
            Loss::Logistic => sigmoid(m),
            Loss::Hinge => m,
        }
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn signed(labels: &[bool]) -> Vec<f64> {
    labels.iter().map(|&y| if y { 1.0 } else { -1.0 }).collect()
}

fn margins(x: &FeatureMatrix, w: &[f64], b: f64) -> Vec<f64> {
    (0..x.n_rows())
        .map(|i| {
            let (cols, vals) = x.row(i);
            b + cols.iter().zip(vals).map(|(&c, &v)| w[c] * v).sum::<f64>()
        })
        .collect()
}

/// Mean loss plus `lambda/2 * ||w||²`. The bias is not penalised.
pub fn objective(loss: Loss, x: &FeatureMatrix, y: &[f64], w: &[f64], b: f64, lambda: f64) -> f64 {
    let n = x.n_rows() as f64;
    let data: f64 = margins(x, w, b)
        .iter()
        .zip(y)
        .map(|(&m, &yi)| match loss {
            Loss::Logistic => softplus(-yi * m),
            Loss::Hinge => (1.0 - yi * m).max(0.0),
        })
        .sum();
    data / n + 0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>()
}

fn gradient(loss: Loss, x: &FeatureMatrix, y: &[f64], w: &[f64], b: f64, lambda: f64) -> (Vec<f64>, f64) {
    let n = x.n_rows() as f64;
    let mut gw: Vec<f64> = w.iter().map(|v| lambda * v).collect();
    let mut gb = 0.0;
    for (i, (&m, &yi)) in margins(x, w, b).iter().zip(y).enumerate() {
        // d loss / d margin
        let d = match loss {
            Loss::Logistic => -yi * sigmoid(-yi * m),
            Loss::Hinge if yi * m < 1.0 => -yi,
            Loss::Hinge => 0.0,
        };
        if d == 0.0 {
            continue;
        }
        let (cols, vals) = x.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            gw[c] += d * v / n;
        }
        gb += d / n;
    }
    (gw, gb)
}

pub fn train(loss: Loss, x: &FeatureMatrix, labels: &[bool], cfg: &LinearConfig) -> LinearModel {
    let y = signed(labels);
    let mut w = vec![0.0; x.n_cols()];
    let mut b = 0.0;
    let mut current = objective(loss, x, &y, &w, b, cfg.lambda);
    let mut history = Vec::with_capacity(cfg.epochs + 1);
    history.push(current);
    let mut scheduled = cfg.learning_rate;
    for _ in 0..cfg.epochs {
        let (gw, gb) = gradient(loss, x, &y, &w, b, cfg.lambda);
        let mut step = scheduled;
        for _ in 0..=cfg.max_halvings {
            let cand_w: Vec<f64> = w.iter().zip(&gw).map(|(wi, gi)| wi - step * gi).collect();
            let cand_b = b - step * gb;
            let value = objective(loss, x, &y, &cand_w, cand_b, cfg.lambda);
            if value <= current {
                w = cand_w;
                b = cand_b;
                current = value;
                break;
            }
            step *= 0.5;
        }
        history.push(current);
        scheduled *= cfg.decay;
    }
    LinearModel {
        loss,
        weights: w,
        bias: b,
        objective_history: history,
    }
}
