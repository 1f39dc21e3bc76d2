//! Exact posterior over graph classes by brute-force enumeration (small d only).

use std::collections::{BTreeMap, HashMap};

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphClass, Group};
use crate::score::{graph_log_score_uncached, Hyperparams};

pub const DEFAULT_EXACT_LIMIT: usize = 5;

/// Posterior probability of every graph class (rooted forests merged over
/// root choice, so a class weighs the product of its tree sizes).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPosterior {
    pub classes: BTreeMap<GraphClass, f64>,
    /// Number of rooted, group-labelled forests enumerated.
    pub graphs: usize,
}

impl ExactPosterior {
    pub fn probability(&self, class: &GraphClass) -> f64 {
        self.classes.get(class).copied().unwrap_or(0.0)
    }
}

/// Scores every labelled rooted forest with per-tree group labels on `d <= limit` features.
pub fn enumerate_exact_posterior(data: &Dataset, hp: &Hyperparams, limit: usize) -> Result<ExactPosterior> {
    let d = data.d();
    if d > limit {
        return Err(Error::TooLarge { d, limit });
    }
    let mut log_weights: BTreeMap<GraphClass, Vec<f64>> = BTreeMap::new();
    let mut graphs = 0;
    // digit j == j encodes "no parent"
    let mut digits = vec![0usize; d];
    loop {
        let parents: Vec<Option<usize>> = digits.iter().enumerate().map(|(j, &p)| (p != j).then_some(p)).collect();
        if let Ok(base) = Graph::from_parts(parents.clone(), vec![Group::Noise; d]) {
            let trees: Vec<_> = base.trees().collect();
            for mask in 0u32..(1 << trees.len()) {
                let groups: Vec<Group> = (0..d)
                    .map(|j| {
                        let t = trees.iter().position(|&t| t == base.tree_of(j)).unwrap();
                        if mask >> t & 1 == 1 {
                            Group::Signal
                        } else {
                            Group::Noise
                        }
                    })
                    .collect();
                let g = Graph::from_parts(parents.clone(), groups)?;
                let s = graph_log_score_uncached(&g, data, hp);
                log_weights.entry(g.class_key()).or_default().push(s);
                graphs += 1;
            }
        }
        // odometer
        let mut pos = 0;
        while pos < d {
            digits[pos] += 1;
            if digits[pos] < d {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == d {
            break;
        }
    }

    let max = log_weights.values().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut classes: BTreeMap<GraphClass, f64> =
        log_weights.into_iter().map(|(k, v)| (k, v.iter().map(|s| (s - max).exp()).sum())).collect();
    let z: f64 = classes.values().sum();
    for p in classes.values_mut() {
        *p /= z;
    }
    Ok(ExactPosterior { classes, graphs })
}

/// Total-variation distance between the exact posterior and empirical class
/// counts. With no observations the empirical side is all zeros.
pub fn total_variation(exact: &ExactPosterior, counts: &HashMap<GraphClass, u64>) -> f64 {
    let n: u64 = counts.values().sum();
    let freq = |k: &GraphClass| if n == 0 { 0.0 } else { counts.get(k).copied().unwrap_or(0) as f64 / n as f64 };
    let mut tv: f64 = exact.classes.iter().map(|(k, &p)| (p - freq(k)).abs()).sum();
    tv += counts.keys().filter(|k| !exact.classes.contains_key(*k)).map(freq).sum::<f64>();
    0.5 * tv
}
