//! Gradient boosting of shallow regression trees on the logistic loss.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linear::sigmoid;
use super::tree::{Builder, Columns, FeatureSampling, Newton, Tree, TreeParams};
use crate::featurize::FeatureMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub shrinkage: f64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 2,
            shrinkage: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Boosted {
    init: f64,
    shrinkage: f64,
    trees: Vec<Tree>,
}

impl Boosted {
    pub fn raw_score(&self, cols: &[usize], vals: &[f64]) -> f64 {
        self.init
            + self.shrinkage
                * self
                    .trees
                    .iter()
                    .map(|t| t.predict(cols, vals))
                    .sum::<f64>()
    }

    pub fn probability(&self, cols: &[usize], vals: &[f64]) -> f64 {
        sigmoid(self.raw_score(cols, vals))
    }
}

/// Deterministic: every split considers all features.
pub fn train(x: &FeatureMatrix, labels: &[bool], cfg: &BoostConfig, seed: u64) -> Boosted {
    let n = x.n_rows();
    let y: Vec<f64> = labels.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let mean = (y.iter().sum::<f64>() / n as f64).clamp(1e-6, 1.0 - 1e-6);
    let init = (mean / (1.0 - mean)).ln();
    let mut f = vec![init; n];
    let columns = Columns::new(x);
    let params = TreeParams {
        max_depth: cfg.max_depth,
        sampling: FeatureSampling::All,
    };
    // unused by FeatureSampling::All but required by the builder
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees = Vec::with_capacity(cfg.n_trees);
    for _ in 0..cfg.n_trees {
        let stats: Vec<Newton> = f
            .iter()
            .zip(&y)
            .map(|(&fi, &yi)| {
                let p = sigmoid(fi);
                Newton {
                    residual: yi - p,
                    hessian: p * (1.0 - p),
                    count: 1.0,
                }
            })
            .collect();
        let tree = Builder::new(x, &columns, &stats, &params).build((0..n).collect(), &mut rng);
        for (i, fi) in f.iter_mut().enumerate() {
            let (c, v) = x.row(i);
            *fi += cfg.shrinkage * tree.predict(c, v);
        }
        trees.push(tree);
    }
    Boosted {
        init,
        shrinkage: cfg.shrinkage,
        trees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::testutil::{accuracy, separable};

    #[test]
    fn boosting_fits_and_starts_from_log_odds() {
        let (x, y) = separable();
        let zero = train(&x, &y, &BoostConfig { n_trees: 0, ..BoostConfig::default() }, 0);
        let pos = y.iter().filter(|&&v| v).count() as f64;
        let p = pos / y.len() as f64;
        assert!((zero.raw_score(&[], &[]) - (p / (1.0 - p)).ln()).abs() < 1e-12);
        let m = train(&x, &y, &BoostConfig::default(), 0);
        assert!(accuracy(&x, &y, |c, v| m.probability(c, v), 0.5) >= 0.95);
    }
}
