//! Random forest of Gini CART trees on bootstrap samples.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::tree::{Builder, Columns, FeatureSampling, Gini, Tree, TreeParams};
use crate::featurize::FeatureMatrix;
use crate::seed::substream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    /// Features tried per split; `None` means `round(sqrt(width))`.
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 12,
            max_features: None,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    /// Mean of the trees' leaf class frequencies.
    pub fn probability(&self, cols: &[usize], vals: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(cols, vals)).sum();
        sum / self.trees.len() as f64
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Depth of the deepest tree.
    pub fn max_depth(&self) -> usize {
        self.trees.iter().map(Tree::depth).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        self.trees.iter().map(Tree::node_count).sum()
    }
}

pub fn train(x: &FeatureMatrix, labels: &[bool], cfg: &ForestConfig, seed: u64) -> Forest {
    let n = x.n_rows();
    let mtry = cfg
        .max_features
        .unwrap_or_else(|| (x.n_cols() as f64).sqrt().round() as usize)
        .max(1);
    let params = TreeParams {
        max_depth: cfg.max_depth,
        sampling: FeatureSampling::Random(mtry),
    };
    let columns = Columns::new(x);
    let trees = (0..cfg.n_trees)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(substream(seed, t as u64));
            let mut weights = vec![0.0; n];
            if cfg.bootstrap {
                for _ in 0..n {
                    weights[rng.random_range(0..n)] += 1.0;
                }
            } else {
                weights.iter_mut().for_each(|w| *w = 1.0);
            }
            let stats: Vec<Gini> = weights
                .iter()
                .zip(labels)
                .map(|(&w, &y)| Gini {
                    positive: if y { w } else { 0.0 },
                    total: w,
                })
                .collect();
            let rows: Vec<usize> = (0..n).filter(|&i| weights[i] > 0.0).collect();
            Builder::new(x, &columns, &stats, &params).build(rows, &mut rng)
        })
        .collect();
    Forest { trees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::testutil::{accuracy, separable};

    #[test]
    fn fits_training_data_within_depth() {
        let (x, y) = separable();
        let cfg = ForestConfig {
            n_trees: 20,
            max_depth: 4,
            ..ForestConfig::default()
        };
        let f = train(&x, &y, &cfg, 1);
        assert_eq!(f.n_trees(), 20);
        assert!(f.max_depth() <= 4);
        assert!(f.node_count() >= 20);
        assert!(accuracy(&x, &y, |c, v| f.probability(c, v), 0.5) >= 0.9);
        assert_eq!(train(&x, &y, &cfg, 1), f);
        assert_ne!(train(&x, &y, &cfg, 2), f);
    }
}
