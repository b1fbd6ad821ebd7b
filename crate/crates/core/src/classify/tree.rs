//! CART trees over sparse rows.
//!
//! Absent entries are zeros, so a split search only visits the nonzero
//! entries of a column inside the node and treats the remaining rows as a
//! single block at value 0.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::featurize::FeatureMatrix;

/// Sufficient statistics of a set of rows for one split criterion.
pub(crate) trait NodeStats: Copy + Default {
    fn add(&mut self, other: &Self);
    fn sub(&mut self, other: &Self);
    /// Larger is better; a split's gain is `score(left) + score(right) - score(parent)`.
    fn score(&self) -> f64;
    fn leaf_value(&self) -> f64;
    fn is_pure(&self) -> bool;
    /// Effective number of rows.
    fn weight(&self) -> f64;
}

/// Weighted class counts with the Gini criterion.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Gini {
    pub positive: f64,
    pub total: f64,
}

impl NodeStats for Gini {
    fn add(&mut self, o: &Self) {
        self.positive += o.positive;
        self.total += o.total;
    }
    fn sub(&mut self, o: &Self) {
        self.positive -= o.positive;
        self.total -= o.total;
    }
    fn score(&self) -> f64 {
        // -total * gini impurity
        if self.total <= 0.0 {
            return 0.0;
        }
        -2.0 * self.positive * (self.total - self.positive) / self.total
    }
    fn leaf_value(&self) -> f64 {
        if self.total > 0.0 {
            self.positive / self.total
        } else {
            0.5
        }
    }
    fn is_pure(&self) -> bool {
        self.positive <= 0.0 || self.positive >= self.total
    }
    fn weight(&self) -> f64 {
        self.total
    }
}

/// Residuals and Hessians of the logistic loss. Splits minimise squared
/// error on the residuals; leaves take one Newton step.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Newton {
    pub residual: f64,
    pub hessian: f64,
    pub count: f64,
}

impl NodeStats for Newton {
    fn add(&mut self, o: &Self) {
        self.residual += o.residual;
        self.hessian += o.hessian;
        self.count += o.count;
    }
    fn sub(&mut self, o: &Self) {
        self.residual -= o.residual;
        self.hessian -= o.hessian;
        self.count -= o.count;
    }
    fn score(&self) -> f64 {
        if self.count <= 0.0 {
            return 0.0;
        }
        self.residual * self.residual / self.count
    }
    fn leaf_value(&self) -> f64 {
        self.residual / self.hessian.max(1e-12)
    }
    fn is_pure(&self) -> bool {
        self.count <= 1.0
    }
    fn weight(&self) -> f64 {
        self.count
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, cols: &[usize], vals: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf(v) => return *v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let x = lookup(cols, vals, *feature);
                    at = if x <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }
}

fn lookup(cols: &[usize], vals: &[f64], feature: usize) -> f64 {
    cols.binary_search(&feature).map_or(0.0, |k| vals[k])
}

/// Column-major copy of a matrix.
pub(crate) struct Columns {
    ptr: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<f64>,
}

impl Columns {
    pub fn new(x: &FeatureMatrix) -> Self {
        let n_cols = x.n_cols();
        let mut counts = vec![0usize; n_cols + 1];
        for (_, j, _) in x.triplets() {
            counts[j + 1] += 1;
        }
        for j in 0..n_cols {
            counts[j + 1] += counts[j];
        }
        let ptr = counts.clone();
        let mut fill = counts;
        let mut rows = vec![0; x.nnz()];
        let mut vals = vec![0.0; x.nnz()];
        for (i, j, v) in x.triplets() {
            rows[fill[j]] = i;
            vals[fill[j]] = v;
            fill[j] += 1;
        }
        Self { ptr, rows, vals }
    }

    fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.ptr[j], self.ptr[j + 1]);
        (&self.rows[a..b], &self.vals[a..b])
    }
}

/// How candidate features are chosen at each node.
#[derive(Debug, Clone, Copy)]
pub(crate) enum FeatureSampling {
    All,
    /// Evaluate features in random order until this many non-constant ones
    /// have been seen.
    Random(usize),
}

pub(crate) struct TreeParams {
    pub max_depth: usize,
    pub sampling: FeatureSampling,
}

struct Best {
    feature: usize,
    threshold: f64,
    gain: f64,
}

pub(crate) struct Builder<'a, S: NodeStats> {
    x: &'a FeatureMatrix,
    columns: &'a Columns,
    stats: &'a [S],
    params: &'a TreeParams,
    stamp: Vec<u32>,
    current: u32,
    seen: Vec<u32>,
    entries: Vec<(f64, S)>,
}

impl<'a, S: NodeStats> Builder<'a, S> {
    pub fn new(x: &'a FeatureMatrix, columns: &'a Columns, stats: &'a [S], params: &'a TreeParams) -> Self {
        Self {
            x,
            columns,
            stats,
            params,
            stamp: vec![0; x.n_rows()],
            current: 0,
            seen: vec![0; x.n_cols()],
            entries: Vec::new(),
        }
    }

    /// Grows a tree on `rows` (rows with zero weight should be left out).
    pub fn build<R: Rng>(&mut self, rows: Vec<usize>, rng: &mut R) -> Tree {
        let mut nodes = Vec::new();
        self.grow(rows, 0, &mut nodes, rng);
        Tree { nodes }
    }

    fn grow<R: Rng>(&mut self, rows: Vec<usize>, depth: usize, nodes: &mut Vec<Node>, rng: &mut R) -> usize {
        let mut total = S::default();
        for &r in &rows {
            total.add(&self.stats[r]);
        }
        let at = nodes.len();
        nodes.push(Node::Leaf(total.leaf_value()));
        if depth >= self.params.max_depth || total.is_pure() || rows.len() < 2 {
            return at;
        }
        let Some(best) = self.best_split(&rows, &total, rng) else {
            return at;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows.into_iter().partition(|&r| {
            let (c, v) = self.x.row(r);
            lookup(c, v, best.feature) <= best.threshold
        });
        let left = self.grow(left_rows, depth + 1, nodes, rng);
        let right = self.grow(right_rows, depth + 1, nodes, rng);
        nodes[at] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        at
    }

    fn next_stamp(&mut self) -> u32 {
        self.current = self.current.wrapping_add(1);
        if self.current == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.current = 1;
        }
        self.current
    }

    fn best_split<R: Rng>(&mut self, rows: &[usize], total: &S, rng: &mut R) -> Option<Best> {
        let stamp = self.next_stamp();
        let mut active = Vec::new();
        for &r in rows {
            self.stamp[r] = stamp;
            for &c in self.x.row(r).0 {
                if self.seen[c] != stamp {
                    self.seen[c] = stamp;
                    active.push(c);
                }
            }
        }
        active.sort_unstable();
        let wanted = match self.params.sampling {
            FeatureSampling::All => active.len(),
            FeatureSampling::Random(k) => {
                active.shuffle(rng);
                k.max(1)
            }
        };

        let parent = total.score();
        let mut best: Option<Best> = None;
        let mut evaluated = 0;
        for &f in &active {
            if evaluated >= wanted {
                break;
            }
            if let Some((threshold, gain)) = self.scan_feature(f, rows, total, parent, stamp) {
                evaluated += 1;
                if gain > 1e-12 && best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(Best {
                        feature: f,
                        threshold,
                        gain,
                    });
                }
            }
        }
        best
    }

    /// Best threshold on one feature, or `None` when the feature is constant
    /// within the node.
    fn scan_feature(&mut self, f: usize, rows: &[usize], total: &S, parent: f64, stamp: u32) -> Option<(f64, f64)> {
        self.entries.clear();
        let (col_rows, col_vals) = self.columns.column(f);
        if rows.len() * 8 < col_rows.len() {
            for &r in rows {
                let (c, v) = self.x.row(r);
                let x = lookup(c, v, f);
                if x != 0.0 {
                    self.entries.push((x, self.stats[r]));
                }
            }
        } else {
            for (&r, &v) in col_rows.iter().zip(col_vals) {
                if self.stamp[r] == stamp {
                    self.entries.push((v, self.stats[r]));
                }
            }
        }
        let nonzero = self.entries.len();
        if nonzero < rows.len() {
            let mut zero = *total;
            for (_, s) in &self.entries {
                zero.sub(s);
            }
            self.entries.push((0.0, zero));
        }
        self.entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        if self.entries.first()?.0 == self.entries.last()?.0 {
            return None;
        }
        let mut left = S::default();
        let mut best: Option<(f64, f64)> = None;
        for k in 0..self.entries.len() - 1 {
            left.add(&self.entries[k].1);
            let (v, next) = (self.entries[k].0, self.entries[k + 1].0);
            if v == next {
                continue;
            }
            let mut right = *total;
            right.sub(&left);
            if left.weight() <= 0.0 || right.weight() <= 0.0 {
                continue;
            }
            let gain = left.score() + right.score() - parent;
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((0.5 * (v + next), gain));
            }
        }
        best.or(Some((0.0, f64::NEG_INFINITY)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featurize::{Featurization, Vocabulary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn matrix(rows: Vec<Vec<(usize, f64)>>, width: usize) -> FeatureMatrix {
        let words: Vec<String> = (0..width).map(|i| format!("w{i:03}")).collect();
        FeatureMatrix::from_rows(Featurization::Ti, Arc::new(Vocabulary::new(words)), rows).unwrap()
    }

    #[test]
    fn gini_separates_on_the_informative_feature() {
        // feature 1 is present exactly in the positive rows
        let rows: Vec<Vec<(usize, f64)>> = (0..20)
            .map(|i| {
                let mut r = vec![(0, 1.0 + (i % 3) as f64)];
                if i % 2 == 0 {
                    r.push((1, 2.0));
                }
                r
            })
            .collect();
        let x = matrix(rows, 2);
        let stats: Vec<Gini> = (0..20)
            .map(|i| Gini {
                positive: if i % 2 == 0 { 1.0 } else { 0.0 },
                total: 1.0,
            })
            .collect();
        let cols = Columns::new(&x);
        let params = TreeParams {
            max_depth: 5,
            sampling: FeatureSampling::All,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tree = Builder::new(&x, &cols, &stats, &params).build((0..20).collect(), &mut rng);
        assert_eq!(tree.depth(), 1);
        for i in 0..20 {
            let (c, v) = x.row(i);
            assert_eq!(tree.predict(c, v), if i % 2 == 0 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn depth_limit_is_respected() {
        let rows: Vec<Vec<(usize, f64)>> = (0..64).map(|i| vec![(0, i as f64 + 1.0)]).collect();
        let x = matrix(rows, 1);
        let stats: Vec<Gini> = (0..64)
            .map(|i| Gini {
                positive: ((i / 2) % 2) as f64,
                total: 1.0,
            })
            .collect();
        let cols = Columns::new(&x);
        let params = TreeParams {
            max_depth: 3,
            sampling: FeatureSampling::Random(1),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tree = Builder::new(&x, &cols, &stats, &params).build((0..64).collect(), &mut rng);
        assert!(tree.depth() <= 3);
        assert!(tree.node_count() <= 15);
    }

    #[test]
    fn constant_node_is_a_leaf() {
        let x = matrix(vec![vec![(0, 1.0)], vec![(0, 1.0)]], 1);
        let stats = [
            Gini { positive: 1.0, total: 1.0 },
            Gini { positive: 0.0, total: 1.0 },
        ];
        let cols = Columns::new(&x);
        let params = TreeParams {
            max_depth: 4,
            sampling: FeatureSampling::All,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tree = Builder::new(&x, &cols, &stats, &params).build(vec![0, 1], &mut rng);
        assert_eq!(tree.node_count(), 1);
        assert_eq!(tree.predict(&[0], &[1.0]), 0.5);
    }
}
