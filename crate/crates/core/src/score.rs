//! Log posterior of a partitioned forest.
//!
//! `log P(G) + log P(y) + sum_j log P(X_j | parents_j)`, where the family terms
//! are Dirichlet-multinomial marginals with total pseudo-count `alpha` spread
//! as `alpha / w_j` per parent configuration and `alpha / (w_j v_j)` per cell.
//! Everything is in natural-log space.

use std::collections::HashMap;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Graph, Group, ParentSet, StructureCounts, TreeId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyperparams {
    /// Total Dirichlet pseudo-count.
    pub alpha: f64,
    /// Exponent coefficient on edge counts in the structure prior.
    pub prior_edge_coeff: f64,
    /// Number of classes `v`.
    pub class_arity: usize,
}

impl Hyperparams {
    pub const DEFAULT_ALPHA: f64 = 5.0;
    pub const DEFAULT_EDGE_COEFF: f64 = 4.0;

    pub fn new(alpha: f64, class_arity: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        if class_arity < 2 {
            return Err(Error::Config(format!("need at least two classes, got {class_arity}")));
        }
        Ok(Self { alpha, prior_edge_coeff: Self::DEFAULT_EDGE_COEFF, class_arity })
    }

    pub fn for_data(data: &Dataset, alpha: f64) -> Result<Self> {
        Self::new(alpha, data.class_arity())
    }
}

/// Per-unit log-prior weights: the prior is `-ln d * (edge[g] per edge + node[g] per node)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PriorWeights {
    ln_d: f64,
    edge: [f64; 2],
    node: [f64; 2],
}

impl PriorWeights {
    pub(crate) fn new(d: usize, hp: &Hyperparams) -> Self {
        let v = hp.class_arity as f64;
        let c = hp.prior_edge_coeff;
        PriorWeights { ln_d: (d as f64).ln(), edge: [c, c / v], node: [0.0, 1.0 / v] }
    }

    pub(crate) fn log_prior(&self, s: StructureCounts) -> f64 {
        -self.ln_d * (self.edge[0] * s.e0 as f64 + self.edge[1] * s.e1 as f64 + self.node[1] * s.d1 as f64)
    }

    /// Change in log prior when a subtree of `m` nodes moves from
    /// (`old_parent`, `from`) to (`new_parent`, `to`).
    pub(crate) fn subtree_move(&self, m: usize, had_parent: bool, from: Group, has_parent: bool, to: Group) -> f64 {
        let (f, t) = (from.index(), to.index());
        let mut units = (m as f64 - 1.0) * (self.edge[t] - self.edge[f]) + m as f64 * (self.node[t] - self.node[f]);
        if had_parent {
            units -= self.edge[f];
        }
        if has_parent {
            units += self.edge[t];
        }
        -self.ln_d * units
    }
}

/// Unnormalized structure log-prior `-(c (E0 + E1/v) + D1/v) ln d`.
pub fn log_prior(counts: StructureCounts, d: usize, hp: &Hyperparams) -> f64 {
    PriorWeights::new(d, hp).log_prior(counts)
}

/// Sufficient statistics of one family: `counts[l * value_arity + k]` is the
/// number of rows with parent configuration `l` and feature value `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub feature: usize,
    pub parent_config_arity: usize,
    pub value_arity: usize,
    pub counts: Vec<u32>,
    pub row_totals: Vec<u32>,
}

impl CountTable {
    pub fn count(&self, config: usize, value: usize) -> u32 {
        self.counts[config * self.value_arity + value]
    }
}

/// Parent configuration index: `parent_value * v + class` with absent parts taken as 0.
#[inline]
pub fn parent_config(parent_value: u32, class: u32, includes_class: bool, class_arity: usize) -> usize {
    if includes_class {
        parent_value as usize * class_arity + class as usize
    } else {
        parent_value as usize
    }
}

pub fn count_family(data: &Dataset, j: usize, ps: ParentSet) -> CountTable {
    let mut counts = Vec::new();
    let (w, vj) = fill_counts(data, j, ps, &mut counts);
    let row_totals = counts.chunks(vj).map(|r| r.iter().sum()).collect();
    CountTable { feature: j, parent_config_arity: w, value_arity: vj, counts, row_totals }
}

/// Tallies family counts into `counts` (cleared and resized) and returns
/// `(parent_config_arity, value_arity)`.
fn fill_counts(data: &Dataset, j: usize, ps: ParentSet, counts: &mut Vec<u32>) -> (usize, usize) {
    let v = data.class_arity();
    let vj = data.arity(j);
    let parent_arity = ps.feature_parent.map_or(1, |p| data.arity(p));
    let w = parent_arity * if ps.includes_class { v } else { 1 };
    counts.clear();
    counts.resize(w * vj, 0);
    let x = data.column(j);
    let y = data.class();
    match (ps.feature_parent, ps.includes_class) {
        (None, false) => {
            for &xi in x {
                counts[xi as usize] += 1;
            }
        }
        (None, true) => {
            for (&xi, &yi) in x.iter().zip(y) {
                counts[yi as usize * vj + xi as usize] += 1;
            }
        }
        (Some(p), false) => {
            for (&xi, &pi) in x.iter().zip(data.column(p)) {
                counts[pi as usize * vj + xi as usize] += 1;
            }
        }
        (Some(p), true) => {
            for ((&xi, &pi), &yi) in x.iter().zip(data.column(p)).zip(y) {
                counts[(pi as usize * v + yi as usize) * vj + xi as usize] += 1;
            }
        }
    }
    (w, vj)
}

/// Log Dirichlet-multinomial marginal likelihood of a family.
pub fn family_log_score(ct: &CountTable, hp: &Hyperparams) -> f64 {
    let (a_row, a_cell) = pseudo_counts(ct.parent_config_arity, ct.value_arity, hp);
    score_counts(&ct.counts, ct.value_arity, |n| ln_gamma(a_row + n as f64), |n| ln_gamma(a_cell + n as f64))
}

/// Dirichlet pseudo-counts per parent configuration and per cell.
fn pseudo_counts(w: usize, vj: usize, hp: &Hyperparams) -> (f64, f64) {
    let a_row = hp.alpha / w as f64;
    (a_row, a_row / vj as f64)
}

/// Family score from raw counts; `lg_row(n)` and `lg_cell(n)` return
/// `ln Γ(a + n)` for the row and cell pseudo-counts respectively.
fn score_counts(counts: &[u32], vj: usize, lg_row: impl Fn(u32) -> f64, lg_cell: impl Fn(u32) -> f64) -> f64 {
    let (row0, cell0) = (lg_row(0), lg_cell(0));
    let mut total = 0.0;
    for row in counts.chunks(vj) {
        let n_l: u32 = row.iter().sum();
        if n_l == 0 {
            continue;
        }
        total += row0 - lg_row(n_l);
        for &c in row.iter().filter(|&&c| c > 0) {
            total += lg_cell(c) - cell0;
        }
    }
    total
}

/// Memoized `ln Γ(a + n)` for the handful of pseudo-counts `a` a dataset
/// produces and `n` up to the number of rows.
#[derive(Debug, Clone, Default)]
struct LnGammaTable {
    tables: HashMap<u64, Vec<f64>>,
}

impl LnGammaTable {
    fn ensure(&mut self, a: f64, rows: usize) {
        self.tables.entry(a.to_bits()).or_insert_with(|| (0..=rows).map(|k| ln_gamma(a + k as f64)).collect());
    }

    fn table(&self, a: f64) -> &[f64] {
        &self.tables[&a.to_bits()]
    }
}

/// Log marginal of the class vector under a symmetric Dirichlet with pseudo-count `alpha / v` per class.
pub fn class_log_marginal(data: &Dataset, hp: &Hyperparams) -> f64 {
    let a = hp.alpha / data.class_arity() as f64;
    let n = data.n() as f64;
    let mut total = ln_gamma(hp.alpha) - ln_gamma(hp.alpha + n);
    for c in data.class_counts() {
        total += ln_gamma(a + c as f64) - ln_gamma(a);
    }
    total
}

const DENSE_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone)]
enum Store {
    Dense(Vec<f64>),
    Sparse(HashMap<usize, f64>),
}

/// Memo of family scores keyed by (feature, feature parent, class flag).
///
/// Dense storage (`2 d (d + 1)` slots) is used while it stays under 4M
/// entries; larger problems fall back to a hash map.
#[derive(Debug, Clone)]
pub struct FamilyScoreCache {
    d: usize,
    store: Store,
    misses: u64,
    lgamma: LnGammaTable,
    scratch: Vec<u32>,
}

impl FamilyScoreCache {
    pub fn new(d: usize) -> Self {
        let slots = 2 * d * (d + 1);
        let store =
            if slots <= DENSE_LIMIT { Store::Dense(vec![f64::NAN; slots]) } else { Store::Sparse(HashMap::new()) };
        Self { d, store, misses: 0, lgamma: LnGammaTable::default(), scratch: Vec::new() }
    }

    #[inline]
    fn key(&self, j: usize, ps: ParentSet) -> usize {
        let p = ps.feature_parent.map_or(0, |p| p + 1);
        ((j * (self.d + 1) + p) << 1) | ps.includes_class as usize
    }

    /// Cached `family_log_score(count_family(data, j, ps))`.
    pub fn score(&mut self, data: &Dataset, hp: &Hyperparams, j: usize, ps: ParentSet) -> f64 {
        let key = self.key(j, ps);
        if let Some(s) = self.get(key) {
            return s;
        }
        self.misses += 1;
        let mut counts = std::mem::take(&mut self.scratch);
        let (w, vj) = fill_counts(data, j, ps, &mut counts);
        let s = self.score_table(&counts, w, vj, data.n(), hp);
        self.scratch = counts;
        self.put(key, s);
        s
    }

    fn score_table(&mut self, counts: &[u32], w: usize, vj: usize, rows: usize, hp: &Hyperparams) -> f64 {
        let (a_row, a_cell) = pseudo_counts(w, vj, hp);
        self.lgamma.ensure(a_row, rows);
        self.lgamma.ensure(a_cell, rows);
        let (row_lg, cell_lg) = (self.lgamma.table(a_row), self.lgamma.table(a_cell));
        score_counts(counts, vj, |n| row_lg[n as usize], |n| cell_lg[n as usize])
    }

    fn get(&self, key: usize) -> Option<f64> {
        match &self.store {
            Store::Dense(v) => Some(v[key]).filter(|s| !s.is_nan()),
            Store::Sparse(m) => m.get(&key).copied(),
        }
    }

    fn put(&mut self, key: usize, s: f64) {
        match &mut self.store {
            Store::Dense(v) => v[key] = s,
            Store::Sparse(m) => {
                m.insert(key, s);
            }
        }
    }

    /// Number of family scores computed from counts so far.
    pub fn misses(&self) -> u64 {
        self.misses
    }
}

pub fn graph_log_score(g: &Graph, data: &Dataset, hp: &Hyperparams, cache: &mut FamilyScoreCache) -> f64 {
    let families: f64 = (0..g.d()).map(|j| cache.score(data, hp, j, g.parent_set(j))).sum();
    log_prior(g.structure_counts(), g.d(), hp) + class_log_marginal(data, hp) + families
}

/// [`graph_log_score`] recomputed from counts, with structure counts taken
/// from a fresh scan of the parent pointers.
pub fn graph_log_score_uncached(g: &Graph, data: &Dataset, hp: &Hyperparams) -> f64 {
    let mut counts = StructureCounts::default();
    let mut families = 0.0;
    for j in 0..g.d() {
        let ps = g.parent_set(j);
        families += family_log_score(&count_family(data, j, ps), hp);
        if ps.includes_class {
            counts.d1 += 1;
        }
        if ps.feature_parent.is_some() {
            if ps.includes_class {
                counts.e1 += 1;
            } else {
                counts.e0 += 1;
            }
        }
    }
    log_prior(counts, g.d(), hp) + class_log_marginal(data, hp) + families
}

/// A Reassign Subtree target: hang the subtree under `parent`, or make it a
/// root of `group` when `parent` is `None`. With a parent the subtree always
/// takes the parent's group and `group` is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Reassignment {
    pub parent: Option<usize>,
    pub group: Group,
}

/// Score differences for re-attaching the subtree rooted at one node.
///
/// Built once per move; each candidate then costs one family lookup. Only
/// the family of the moved node, the families of subtree nodes whose class
/// flag flips, and the prior are touched.
#[derive(Debug, Clone)]
pub struct ReassignDelta {
    j: usize,
    old_parent: Option<usize>,
    old_group: Group,
    subtree_len: usize,
    current_j: f64,
    /// Sum of family changes of the subtree (excluding `j`) if it switches group.
    flip: f64,
    weights: PriorWeights,
}

impl ReassignDelta {
    pub fn new(g: &Graph, data: &Dataset, hp: &Hyperparams, cache: &mut FamilyScoreCache, j: usize) -> Self {
        let subtree = g.descendants(j);
        Self::with_subtree(g, data, hp, cache, j, &subtree)
    }

    pub(crate) fn with_subtree(
        g: &Graph,
        data: &Dataset,
        hp: &Hyperparams,
        cache: &mut FamilyScoreCache,
        j: usize,
        subtree: &[usize],
    ) -> Self {
        let old_group = g.group(j);
        let flipped = old_group.flip().is_signal();
        let flip = subtree[1..]
            .iter()
            .map(|&s| {
                let ps = g.parent_set(s);
                cache.score(data, hp, s, ParentSet { includes_class: flipped, ..ps }) - cache.score(data, hp, s, ps)
            })
            .sum();
        ReassignDelta {
            j,
            old_parent: g.parent(j),
            old_group,
            subtree_len: subtree.len(),
            current_j: cache.score(data, hp, j, g.parent_set(j)),
            flip,
            weights: PriorWeights::new(g.d(), hp),
        }
    }

    /// `score(after) - score(before)`; `to` is the group the subtree ends up in.
    pub fn delta_to(
        &self,
        data: &Dataset,
        hp: &Hyperparams,
        cache: &mut FamilyScoreCache,
        parent: Option<usize>,
        to: Group,
    ) -> f64 {
        let family =
            cache.score(data, hp, self.j, ParentSet { feature_parent: parent, includes_class: to.is_signal() });
        let mut delta = family - self.current_j;
        if to != self.old_group {
            delta += self.flip;
        }
        delta
            + self.weights.subtree_move(
                self.subtree_len,
                self.old_parent.is_some(),
                self.old_group,
                parent.is_some(),
                to,
            )
    }
}

/// Change in [`graph_log_score`] if the subtree at `j` were moved to `candidate`.
pub fn delta_score_reassign(
    g: &Graph,
    data: &Dataset,
    hp: &Hyperparams,
    cache: &mut FamilyScoreCache,
    j: usize,
    candidate: Reassignment,
) -> f64 {
    debug_assert!(candidate.parent.is_none_or(|p| !g.is_descendant(p, j)), "candidate parent inside subtree");
    let to = candidate.parent.map_or(candidate.group, |p| g.group(p));
    ReassignDelta::new(g, data, hp, cache, j).delta_to(data, hp, cache, candidate.parent, to)
}

/// Change in [`graph_log_score`] if tree `t` switched group.
pub fn delta_score_switch(g: &Graph, data: &Dataset, hp: &Hyperparams, cache: &mut FamilyScoreCache, t: TreeId) -> f64 {
    let members = g.tree_members(t);
    let from = g.tree_group(t);
    let to = from.flip();
    let families: f64 = members
        .iter()
        .map(|&s| {
            let ps = g.parent_set(s);
            cache.score(data, hp, s, ParentSet { includes_class: to.is_signal(), ..ps }) - cache.score(data, hp, s, ps)
        })
        .sum();
    let m = members.len();
    families + PriorWeights::new(g.d(), hp).subtree_move(m, false, from, false, to)
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyScore {
    pub feature: usize,
    pub name: String,
    pub parent: Option<usize>,
    pub includes_class: bool,
    pub parent_configs: usize,
    pub score: f64,
}

/// Per-family decomposition of a graph score, for debugging dumps.
#[derive(Debug, Clone, Serialize)]
pub struct ScoreBreakdown {
    pub log_prior: f64,
    pub class_log_marginal: f64,
    pub families: Vec<FamilyScore>,
    pub total: f64,
}

pub fn score_breakdown(g: &Graph, data: &Dataset, hp: &Hyperparams) -> ScoreBreakdown {
    let families: Vec<FamilyScore> = (0..g.d())
        .map(|j| {
            let ps = g.parent_set(j);
            let ct = count_family(data, j, ps);
            FamilyScore {
                feature: j,
                name: data.feature_names()[j].clone(),
                parent: ps.feature_parent,
                includes_class: ps.includes_class,
                parent_configs: ct.parent_config_arity,
                score: family_log_score(&ct, hp),
            }
        })
        .collect();
    let log_prior = log_prior(g.structure_counts(), g.d(), hp);
    let class_log_marginal = class_log_marginal(data, hp);
    let total = log_prior + class_log_marginal + families.iter().map(|f| f.score).sum::<f64>();
    ScoreBreakdown { log_prior, class_log_marginal, families, total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::synthetic::{chained_dataset, tiny_d2};
    use crate::graph::Group::{Noise, Signal};

    fn hp(alpha: f64, v: usize) -> Hyperparams {
        Hyperparams::new(alpha, v).unwrap()
    }

    /// Probability of a specific label sequence under a Pólya urn with
    /// initial weights `a` per colour: the sequential-draw oracle for the
    /// Dirichlet-multinomial marginal.
    fn polya_sequence(colours: &[usize], a: &[f64]) -> f64 {
        let mut w = a.to_vec();
        let mut total: f64 = w.iter().sum();
        let mut p = 1.0;
        for &c in colours {
            p *= w[c] / total;
            w[c] += 1.0;
            total += 1.0;
        }
        p
    }

    #[test]
    fn prior_values() {
        let h = hp(1.0, 2);
        assert_eq!(log_prior(StructureCounts::default(), 7, &h), 0.0);
        let lp = log_prior(StructureCounts { e0: 1, e1: 2, d1: 3 }, 10, &h);
        assert!((lp - (-9.5 * 10f64.ln())).abs() < 1e-12);
        let a = log_prior(StructureCounts { e0: 0, e1: 0, d1: 1 }, 10, &h);
        assert!((a - (-0.5 * 10f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn zero_counts_score_zero() {
        let ct = CountTable {
            feature: 0,
            parent_config_arity: 3,
            value_arity: 2,
            counts: vec![0; 6],
            row_totals: vec![0; 3],
        };
        assert_eq!(family_log_score(&ct, &hp(2.0, 2)), 0.0);
    }

    #[test]
    fn binary_root_matches_polya_urn() {
        let ct =
            CountTable { feature: 0, parent_config_arity: 1, value_arity: 2, counts: vec![3, 1], row_totals: vec![4] };
        let s = family_log_score(&ct, &hp(1.0, 2));
        let urn = polya_sequence(&[0, 0, 0, 1], &[0.5, 0.5]);
        assert!((urn - 0.5 * 1.5 * 2.5 * 0.5 / 24.0).abs() < 1e-15);
        assert!((s - (5.0f64 / 128.0).ln()).abs() < 1e-12);
        assert!((s - urn.ln()).abs() < 1e-12);
    }

    #[test]
    fn config_permutation_invariance() {
        let a = CountTable {
            feature: 0,
            parent_config_arity: 3,
            value_arity: 2,
            counts: vec![3, 1, 0, 5, 2, 2],
            row_totals: vec![4, 5, 4],
        };
        let b = CountTable { counts: vec![2, 2, 3, 1, 0, 5], row_totals: vec![4, 4, 5], ..a.clone() };
        assert!((family_log_score(&a, &hp(3.0, 2)) - family_log_score(&b, &hp(3.0, 2))).abs() < 1e-12);
    }

    #[test]
    fn class_marginal_values() {
        let one = Dataset::new(vec![vec![0]], vec![1], vec![0], 2).unwrap();
        assert!((class_log_marginal(&one, &hp(1.0, 2)) - 0.5f64.ln()).abs() < 1e-12);
        let empty = Dataset::new(vec![vec![]], vec![1], vec![], 2).unwrap();
        assert_eq!(class_log_marginal(&empty, &hp(1.0, 2)), 0.0);
    }

    #[test]
    fn count_family_shapes() {
        let ds = chained_dataset(50, 3, 3, 1);
        let root = count_family(&ds, 1, ParentSet { feature_parent: None, includes_class: false });
        assert_eq!(root.parent_config_arity, 1);
        assert_eq!(root.row_totals, vec![50]);
        let full = count_family(&ds, 1, ParentSet { feature_parent: Some(0), includes_class: true });
        assert_eq!(full.parent_config_arity, 6);
        assert_eq!(full.row_totals.iter().sum::<u32>(), 50);
        for l in 0..6 {
            let row: u32 = (0..3).map(|k| full.count(l, k)).sum();
            assert_eq!(row, full.row_totals[l]);
        }
    }

    #[test]
    fn cached_equals_uncached() {
        let ds = chained_dataset(80, 5, 2, 4);
        let h = Hyperparams::for_data(&ds, 5.0).unwrap();
        let g =
            Graph::from_parts(vec![None, Some(0), Some(1), None, Some(3)], vec![Signal, Signal, Signal, Noise, Noise])
                .unwrap();
        let mut cache = FamilyScoreCache::new(5);
        let a = graph_log_score(&g, &ds, &h, &mut cache);
        let b = graph_log_score_uncached(&g, &ds, &h);
        assert!((a - b).abs() <= 1e-12 * b.abs());
        let bd = score_breakdown(&g, &ds, &h);
        assert!((bd.total - b).abs() <= 1e-12 * b.abs());
    }

    #[test]
    fn identity_reassignment_has_zero_delta() {
        let ds = tiny_d2();
        let h = Hyperparams::for_data(&ds, 5.0).unwrap();
        let g = Graph::from_parts(vec![None, Some(0)], vec![Signal, Signal]).unwrap();
        let mut cache = FamilyScoreCache::new(2);
        let d = delta_score_reassign(&g, &ds, &h, &mut cache, 1, Reassignment { parent: Some(0), group: Noise });
        assert_eq!(d, 0.0);
    }

    #[test]
    fn singleton_merge_delta() {
        let ds = chained_dataset(60, 4, 2, 8);
        let h = Hyperparams::for_data(&ds, 5.0).unwrap();
        let g = Graph::empty(4);
        let mut cache = FamilyScoreCache::new(4);
        let d = delta_score_reassign(&g, &ds, &h, &mut cache, 2, Reassignment { parent: Some(1), group: Noise });
        let with =
            family_log_score(&count_family(&ds, 2, ParentSet { feature_parent: Some(1), includes_class: false }), &h);
        let without =
            family_log_score(&count_family(&ds, 2, ParentSet { feature_parent: None, includes_class: false }), &h);
        assert!((d - (-4.0 * 4f64.ln() + with - without)).abs() < 1e-10);
    }

    #[test]
    fn sparse_store_agrees_with_dense() {
        let ds = chained_dataset(40, 3, 2, 2);
        let h = Hyperparams::for_data(&ds, 5.0).unwrap();
        let mut dense = FamilyScoreCache::new(3);
        let mut sparse = FamilyScoreCache {
            d: 3,
            store: Store::Sparse(HashMap::new()),
            misses: 0,
            lgamma: LnGammaTable::default(),
            scratch: Vec::new(),
        };
        for j in 0..3 {
            for p in [None, Some((j + 1) % 3)] {
                for c in [false, true] {
                    let ps = ParentSet { feature_parent: p, includes_class: c };
                    assert_eq!(dense.score(&ds, &h, j, ps), sparse.score(&ds, &h, j, ps));
                }
            }
        }
        let before = dense.misses();
        dense.score(&ds, &h, 0, ParentSet { feature_parent: None, includes_class: false });
        assert_eq!(dense.misses(), before);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(Hyperparams::new(0.0, 2).is_err());
        assert!(Hyperparams::new(f64::NAN, 2).is_err());
        assert!(Hyperparams::new(1.0, 1).is_err());
    }
}
