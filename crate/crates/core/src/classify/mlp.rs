//! One-hidden-layer perceptron with rectified units and a sigmoid output,
//! trained on the cross-entropy by full-batch gradient descent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::linear::sigmoid;
use crate::featurize::FeatureMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlpConfig {
    pub hidden: usize,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: 64,
            epochs: 200,
            learning_rate: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    hidden: usize,
    /// Input weights stored per input column: `w1[col * hidden + h]`.
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
    pub loss_history: Vec<f64>,
}

impl Mlp {
    fn hidden_pre(&self, cols: &[usize], vals: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.b1);
        for (&c, &v) in cols.iter().zip(vals) {
            let w = &self.w1[c * self.hidden..(c + 1) * self.hidden];
            for (o, wi) in out.iter_mut().zip(w) {
                *o += wi * v;
            }
        }
    }

    pub fn probability(&self, cols: &[usize], vals: &[f64]) -> f64 {
        let mut z = vec![0.0; self.hidden];
        self.hidden_pre(cols, vals, &mut z);
        let out = self.b2
            + z.iter()
                .zip(&self.w2)
                .map(|(zi, wi)| zi.max(0.0) * wi)
                .sum::<f64>();
        sigmoid(out)
    }
}

fn cross_entropy(p: f64, y: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
}

pub fn train(x: &FeatureMatrix, labels: &[bool], cfg: &MlpConfig, seed: u64) -> Mlp {
    let (n, d, h) = (x.n_rows(), x.n_cols(), cfg.hidden);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let he = Normal::new(0.0, (2.0 / d.max(1) as f64).sqrt()).expect("valid sd");
    let xavier = Normal::new(0.0, (1.0 / h.max(1) as f64).sqrt()).expect("valid sd");
    let mut net = Mlp {
        hidden: h,
        w1: (0..d * h).map(|_| he.sample(&mut rng)).collect(),
        b1: vec![0.0; h],
        w2: (0..h).map(|_| xavier.sample(&mut rng)).collect(),
        b2: 0.0,
        loss_history: Vec::with_capacity(cfg.epochs),
    };
    let y: Vec<f64> = labels.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let scale = 1.0 / n as f64;
    let mut z = vec![0.0; h];
    let mut delta = vec![0.0; h];
    let mut g_w1 = vec![0.0; d * h];
    let mut g_b1 = vec![0.0; h];
    let mut g_w2 = vec![0.0; h];
    for _ in 0..cfg.epochs {
        g_w1.iter_mut().for_each(|g| *g = 0.0);
        g_b1.iter_mut().for_each(|g| *g = 0.0);
        g_w2.iter_mut().for_each(|g| *g = 0.0);
        let mut g_b2 = 0.0;
        let mut loss = 0.0;
        for i in 0..n {
            let (cols, vals) = x.row(i);
            net.hidden_pre(cols, vals, &mut z);
            let out = net.b2
                + z.iter()
                    .zip(&net.w2)
                    .map(|(zi, wi)| zi.max(0.0) * wi)
                    .sum::<f64>();
            let p = sigmoid(out);
            loss += cross_entropy(p, y[i]);
            let d_out = (p - y[i]) * scale;
            g_b2 += d_out;
            for k in 0..h {
                let a = z[k].max(0.0);
                g_w2[k] += d_out * a;
                delta[k] = if z[k] > 0.0 { d_out * net.w2[k] } else { 0.0 };
                g_b1[k] += delta[k];
            }
            for (&c, &v) in cols.iter().zip(vals) {
                let g = &mut g_w1[c * h..(c + 1) * h];
                for (gk, dk) in g.iter_mut().zip(&delta) {
                    *gk += dk * v;
                }
            }
        }
        net.loss_history.push(loss * scale);
        let lr = cfg.learning_rate;
        net.w1.iter_mut().zip(&g_w1).for_each(|(w, g)| *w -= lr * g);
        net.b1.iter_mut().zip(&g_b1).for_each(|(w, g)| *w -= lr * g);
        net.w2.iter_mut().zip(&g_w2).for_each(|(w, g)| *w -= lr * g);
        net.b2 -= lr * g_b2;
    }
    net
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::testutil::separable;

    #[test]
    fn loss_falls_and_outputs_are_probabilities() {
        let (x, y) = separable();
        let m = train(&x, &y, &MlpConfig::default(), 3);
        let first = m.loss_history[0];
        let last = *m.loss_history.last().unwrap();
        assert!(last < first, "{first} -> {last}");
        for i in 0..x.n_rows() {
            let (c, v) = x.row(i);
            let p = m.probability(c, v);
            assert!((0.0..=1.0).contains(&p));
        }
        assert_eq!(train(&x, &y, &MlpConfig::default(), 3), m);
    }
}
