#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sbfc::dataio::Dataset;
use sbfc::graph::{Graph, Group};

/// Dirichlet-smoothed naive Bayes written directly from row counts: class
/// prior `(n_y + a/v) / (n + a)`, feature likelihood
/// `(n_{j,x,y} + a/(v v_j)) / (n_y + a/v)`.
pub fn naive_bayes_probs(train: &Dataset, alpha: f64, x: &[u32]) -> Vec<f64> {
    let v = train.class_arity();
    let n = train.n();
    let mut probs = Vec::with_capacity(v);
    for y in 0..v as u32 {
        let rows: Vec<usize> = (0..n).filter(|&i| train.class()[i] == y).collect();
        let ny = rows.len() as f64;
        let mut p = (ny + alpha / v as f64) / (n as f64 + alpha);
        for (j, &xj) in x.iter().enumerate() {
            let vj = train.arity(j) as f64;
            let nxy = rows.iter().filter(|&&i| train.column(j)[i] == xj).count() as f64;
            p *= (nxy + alpha / (v as f64 * vj)) / (ny + alpha / v as f64);
        }
        probs.push(p);
    }
    let z: f64 = probs.iter().sum();
    probs.iter().map(|p| p / z).collect()
}

pub fn argmax_first(p: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..p.len() {
        if p[i] > p[best] {
            best = i;
        }
    }
    best
}

/// Parent-pointer walk, independent of `Graph::descendants`.
pub fn is_ancestor_or_self(parents: &[Option<usize>], anc: usize, node: usize) -> bool {
    let mut cur = Some(node);
    while let Some(c) = cur {
        if c == anc {
            return true;
        }
        cur = parents[c];
    }
    false
}

/// Random partitioned forest built from random re-attachments and switches.
pub fn random_graph<R: Rng>(d: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(d);
    for _ in 0..2 * d {
        let j = rng.gen_range(0..d);
        let options: Vec<usize> = (0..d).filter(|&p| !is_ancestor_or_self(g.parents(), j, p)).collect();
        let group = if rng.gen_bool(0.5) { Group::Signal } else { Group::Noise };
        let parent = if options.is_empty() || rng.gen_bool(0.3) { None } else { options.choose(rng).copied() };
        g.reattach_subtree(j, parent, group).unwrap();
    }
    for _ in 0..rng.gen_range(0..3) {
        let t = g.tree_at(rng.gen_range(0..g.num_trees()));
        g.switch_tree_group(t);
    }
    g
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
