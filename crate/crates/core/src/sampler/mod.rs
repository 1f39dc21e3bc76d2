//! MCMC over partitioned forests.
//!
//! One iteration is a Switch Trees sweep (repeated Metropolis flips of whole
//! trees between groups) followed by one Reassign Subtree move (a Gibbs
//! update of a node's parent, preceded by re-rooting its tree at a uniformly
//! chosen node). Snapshots are taken every `thin` iterations after burn-in.

mod exact;
mod trace;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Graph, Group, ParentSet};
use crate::score::{
    delta_score_switch, graph_log_score, graph_log_score_uncached, FamilyScoreCache, Hyperparams, ReassignDelta,
    Reassignment,
};

pub use exact::{enumerate_exact_posterior, total_variation, ExactPosterior, DEFAULT_EXACT_LIMIT};
pub use trace::{read_trace, write_trace, TraceHeader, TraceRecord};

/// Identifier of the random stream recorded in traces.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.3/seed_from_u64";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub iterations: usize,
    pub thin: usize,
    pub burnin_fraction: f64,
    pub switch_k: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub const DEFAULT_THIN: usize = 50;
    pub const DEFAULT_BURNIN: f64 = 0.2;
    pub const DEFAULT_SWITCH_K: usize = 10;

    /// `max(10000, 10 d)`.
    pub fn default_iterations(d: usize) -> usize {
        10_000.max(10 * d)
    }

    /// Defaults for a problem with `d` features.
    pub fn for_features(d: usize) -> Self {
        SamplerConfig {
            iterations: Self::default_iterations(d),
            thin: Self::DEFAULT_THIN,
            burnin_fraction: Self::DEFAULT_BURNIN,
            switch_k: Self::DEFAULT_SWITCH_K,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        if self.iterations < self.thin {
            return Err(Error::Config(format!(
                "iterations ({}) must be at least thin ({})",
                self.iterations, self.thin
            )));
        }
        if !(0.0..1.0).contains(&self.burnin_fraction) {
            return Err(Error::Config(format!("burn-in fraction {} not in [0, 1)", self.burnin_fraction)));
        }
        Ok(())
    }

    pub fn burnin_iterations(&self) -> usize {
        (self.iterations as f64 * self.burnin_fraction).floor() as usize
    }

    pub fn expected_samples(&self) -> usize {
        (self.iterations - self.burnin_iterations()) / self.thin
    }

    /// Whether the state after iteration `iter` (1-based) is recorded.
    pub fn records(&self, iter: usize) -> bool {
        let b = self.burnin_iterations();
        iter > b && (iter - b).is_multiple_of(self.thin)
    }
}

/// Thinned graph samples from one or more chains.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrace {
    pub samples: Vec<Graph>,
    pub log_scores: Vec<f64>,
    pub iterations: Vec<usize>,
    pub config: SamplerConfig,
    pub chains: usize,
    pub rng: String,
    pub feature_names: Vec<String>,
}

impl SampleTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn d(&self) -> usize {
        self.feature_names.len()
    }

    /// Trace holding the given graphs with unit spacing; handy for summaries of hand-built samples.
    pub fn from_graphs(samples: Vec<Graph>, feature_names: Vec<String>) -> SampleTrace {
        let k = samples.len();
        SampleTrace {
            log_scores: vec![0.0; k],
            iterations: (1..=k).collect(),
            config: SamplerConfig { iterations: k.max(1), thin: 1, burnin_fraction: 0.0, switch_k: 0, seed: 0 },
            chains: 1,
            rng: RNG_ALGORITHM.to_string(),
            feature_names,
            samples,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchOutcome {
    pub proposed: usize,
    pub accepted: usize,
}

/// Mutable state of one chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    graph: Graph,
    cache: FamilyScoreCache,
    current_log_score: f64,
    iteration: usize,
    rng: ChaCha8Rng,
    in_subtree: Vec<bool>,
}

impl ChainState {
    /// Starts from the empty graph.
    pub fn new(data: &Dataset, hp: &Hyperparams, seed: u64) -> Self {
        Self::from_graph(Graph::empty(data.d()), data, hp, seed)
    }

    pub fn from_graph(graph: Graph, data: &Dataset, hp: &Hyperparams, seed: u64) -> Self {
        assert_eq!(graph.d(), data.d(), "graph and data disagree on feature count");
        let mut cache = FamilyScoreCache::new(graph.d());
        let current_log_score = graph_log_score(&graph, data, hp, &mut cache);
        let d = graph.d();
        ChainState {
            graph,
            cache,
            current_log_score,
            iteration: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            in_subtree: vec![false; d],
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn current_log_score(&self) -> f64 {
        self.current_log_score
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn cache(&self) -> &FamilyScoreCache {
        &self.cache
    }

    /// Full recomputation from counts, bypassing the cache.
    pub fn recompute_log_score(&self, data: &Dataset, hp: &Hyperparams) -> f64 {
        graph_log_score_uncached(&self.graph, data, hp)
    }

    /// Metropolis flips of `min(k, #trees)` distinct trees drawn without
    /// replacement, proposed one after another.
    pub fn switch_trees_move(&mut self, data: &Dataset, hp: &Hyperparams, k: usize) -> SwitchOutcome {
        let n_trees = self.graph.num_trees();
        let picks: Vec<_> =
            index::sample(&mut self.rng, n_trees, k.min(n_trees)).into_iter().map(|i| self.graph.tree_at(i)).collect();
        let proposed = picks.len();
        let mut accepted = 0;
        for t in picks {
            let delta = delta_score_switch(&self.graph, data, hp, &mut self.cache, t);
            let u: f64 = self.rng.gen();
            if u < delta.exp() {
                self.graph.switch_tree_group(t);
                self.current_log_score += delta;
                accepted += 1;
            }
        }
        SwitchOutcome { proposed, accepted }
    }

    /// Re-roots the tree containing `new_root`; the score changes only by rounding.
    pub fn pivot(&mut self, data: &Dataset, hp: &Hyperparams, new_root: usize) {
        let path = self.graph.pivot_tree(new_root);
        if path.is_empty() {
            return;
        }
        let after: f64 = path.iter().map(|&s| self.cache.score(data, hp, s, self.graph.parent_set(s))).sum();
        let mut old_parent = None;
        let mut before = 0.0;
        for &s in path.iter().rev() {
            // from the old root down, each node's old parent is the previous one
            let ps = ParentSet { feature_parent: old_parent, includes_class: self.graph.group(s).is_signal() };
            before += self.cache.score(data, hp, s, ps);
            old_parent = Some(s);
        }
        self.current_log_score += after - before;
    }

    /// Candidate re-attachments of the subtree at `j` with their score deltas,
    /// in order: every non-descendant parent by index, then the noise and
    /// signal null parents.
    pub fn reassign_candidates(&mut self, data: &Dataset, hp: &Hyperparams, j: usize) -> Vec<(Reassignment, f64)> {
        let subtree = self.graph.descendants(j);
        for &s in &subtree {
            self.in_subtree[s] = true;
        }
        let ctx = ReassignDelta::with_subtree(&self.graph, data, hp, &mut self.cache, j, &subtree);
        let mut out = Vec::with_capacity(self.graph.d() - subtree.len() + 2);
        for p in 0..self.graph.d() {
            if self.in_subtree[p] {
                continue;
            }
            let to = self.graph.group(p);
            let delta = ctx.delta_to(data, hp, &mut self.cache, Some(p), to);
            out.push((Reassignment { parent: Some(p), group: to }, delta));
        }
        for g in Group::BOTH {
            let delta = ctx.delta_to(data, hp, &mut self.cache, None, g);
            out.push((Reassignment { parent: None, group: g }, delta));
        }
        for &s in &subtree {
            self.in_subtree[s] = false;
        }
        out
    }

    /// Gibbs update of the parent of `j` with the current rooting.
    pub fn gibbs_reassign(&mut self, data: &Dataset, hp: &Hyperparams, j: usize) -> Reassignment {
        let candidates = self.reassign_candidates(data, hp, j);
        let max = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = candidates.iter().map(|c| (c.1 - max).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut u = self.rng.gen::<f64>() * total;
        let mut pick = candidates.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                pick = i;
                break;
            }
            u -= w;
        }
        let (choice, delta) = candidates[pick];
        self.graph.reattach_subtree(j, choice.parent, choice.group).expect("candidates exclude descendants");
        self.current_log_score += delta;
        choice
    }

    /// Picks a node uniformly, re-roots its tree at a uniform member, then
    /// applies [`ChainState::gibbs_reassign`].
    pub fn reassign_subtree_move(&mut self, data: &Dataset, hp: &Hyperparams) -> Reassignment {
        let j = self.rng.gen_range(0..self.graph.d());
        let members = self.graph.tree_members(self.graph.tree_of(j));
        let root = members[self.rng.gen_range(0..members.len())];
        self.pivot(data, hp, root);
        self.gibbs_reassign(data, hp, j)
    }

    /// One iteration: a switch sweep then one reassign move.
    pub fn step(&mut self, data: &Dataset, hp: &Hyperparams, switch_k: usize) {
        self.switch_trees_move(data, hp, switch_k);
        self.reassign_subtree_move(data, hp);
        self.iteration += 1;
        if cfg!(debug_assertions) && self.iteration.is_multiple_of(1000) {
            self.graph.validate().expect("forest invariants hold");
        }
    }
}

fn check_inputs(data: &Dataset, hp: &Hyperparams, config: &SamplerConfig) -> Result<()> {
    config.validate()?;
    if hp.class_arity != data.class_arity() {
        return Err(Error::Config(format!(
            "hyperparameters assume {} classes, data has {}",
            hp.class_arity,
            data.class_arity()
        )));
    }
    Ok(())
}

/// Runs one chain from the empty graph and records thinned snapshots.
pub fn run_chain(data: &Dataset, hp: &Hyperparams, config: &SamplerConfig) -> Result<SampleTrace> {
    check_inputs(data, hp, config)?;
    let mut state = ChainState::new(data, hp, config.seed);
    let mut trace = SampleTrace {
        samples: Vec::with_capacity(config.expected_samples()),
        log_scores: Vec::with_capacity(config.expected_samples()),
        iterations: Vec::with_capacity(config.expected_samples()),
        config: *config,
        chains: 1,
        rng: RNG_ALGORITHM.to_string(),
        feature_names: data.feature_names().to_vec(),
    };
    for _ in 0..config.iterations {
        state.step(data, hp, config.switch_k);
        if config.records(state.iteration) {
            trace.samples.push(state.graph.clone());
            trace.log_scores.push(state.current_log_score);
            trace.iterations.push(state.iteration);
        }
    }
    log::debug!("chain seed {}: {} samples, {} family scores computed", config.seed, trace.len(), state.cache.misses());
    Ok(trace)
}

/// Runs `chains` independent chains (seeds `seed, seed + 1, ...`) in parallel
/// and concatenates their post-burn-in samples in chain order.
pub fn run_chains(data: &Dataset, hp: &Hyperparams, config: &SamplerConfig, chains: usize) -> Result<SampleTrace> {
    if chains == 0 {
        return Err(Error::Config("need at least one chain".into()));
    }
    check_inputs(data, hp, config)?;
    if chains == 1 {
        return run_chain(data, hp, config);
    }
    let traces: Vec<Result<SampleTrace>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..chains as u64)
            .map(|c| {
                let cfg = config.with_seed(config.seed.wrapping_add(c));
                s.spawn(move || run_chain(data, hp, &cfg))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("chain thread panicked")).collect()
    });
    let mut merged: Option<SampleTrace> = None;
    for t in traces {
        let t = t?;
        match merged.as_mut() {
            None => merged = Some(t),
            Some(m) => {
                m.samples.extend(t.samples);
                m.log_scores.extend(t.log_scores);
                m.iterations.extend(t.iterations);
            }
        }
    }
    let mut merged = merged.expect("at least one chain");
    merged.chains = chains;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::synthetic::{chained_dataset, tiny_d3};

    fn setup() -> (Dataset, Hyperparams) {
        let ds = chained_dataset(60, 6, 2, 11);
        let hp = Hyperparams::for_data(&ds, 5.0).unwrap();
        (ds, hp)
    }

    #[test]
    fn default_config_arithmetic() {
        let c = SamplerConfig::for_features(6);
        assert_eq!(c.iterations, 10_000);
        assert_eq!(c.expected_samples(), 160);
        assert_eq!(SamplerConfig::for_features(500).iterations, 10_000);
        assert_eq!(SamplerConfig::for_features(5000).iterations, 50_000);
        assert!(SamplerConfig { thin: 0, ..c }.validate().is_err());
        assert!(SamplerConfig { iterations: 10, thin: 50, ..c }.validate().is_err());
        assert!(SamplerConfig { burnin_fraction: 1.0, ..c }.validate().is_err());
    }

    #[test]
    fn trace_length_and_determinism() {
        let (ds, hp) = setup();
        let cfg = SamplerConfig { iterations: 500, thin: 7, burnin_fraction: 0.3, switch_k: 10, seed: 5 };
        let a = run_chain(&ds, &hp, &cfg).unwrap();
        assert_eq!(a.len(), cfg.expected_samples());
        assert_eq!(a.len(), (500 - 150) / 7);
        let b = run_chain(&ds, &hp, &cfg).unwrap();
        assert_eq!(a, b);
        for g in &a.samples {
            g.validate().unwrap();
        }
    }

    #[test]
    fn tracked_score_matches_recomputation() {
        let (ds, hp) = setup();
        let mut st = ChainState::new(&ds, &hp, 3);
        for _ in 0..3 {
            for _ in 0..1000 {
                st.step(&ds, &hp, 10);
            }
            let full = st.recompute_log_score(&ds, &hp);
            assert!((st.current_log_score() - full).abs() < 1e-6);
        }
    }

    #[test]
    fn few_trees_are_each_proposed_once() {
        let ds = tiny_d3();
        let hp = Hyperparams::for_data(&ds, 5.0).unwrap();
        let mut st = ChainState::new(&ds, &hp, 1);
        assert_eq!(st.switch_trees_move(&ds, &hp, 10).proposed, 3);
        assert_eq!(st.switch_trees_move(&ds, &hp, 2).proposed, 2);
    }

    #[test]
    fn candidates_exclude_descendants() {
        let (ds, hp) = setup();
        let g = Graph::from_parts(vec![None, Some(0), Some(1), None, None, None], vec![Group::Noise; 6]).unwrap();
        let mut st = ChainState::from_graph(g, &ds, &hp, 0);
        let parents: Vec<_> = st.reassign_candidates(&ds, &hp, 1).iter().map(|c| c.0.parent).collect();
        assert_eq!(parents, vec![Some(0), Some(3), Some(4), Some(5), None, None]);
    }

    #[test]
    fn multi_chain_concatenates() {
        let (ds, hp) = setup();
        let cfg = SamplerConfig { iterations: 200, thin: 10, burnin_fraction: 0.5, switch_k: 10, seed: 9 };
        let merged = run_chains(&ds, &hp, &cfg, 3).unwrap();
        assert_eq!(merged.len(), 3 * cfg.expected_samples());
        assert_eq!(merged.chains, 3);
        let first = run_chain(&ds, &hp, &cfg).unwrap();
        assert_eq!(&merged.samples[..first.len()], &first.samples[..]);
        assert_eq!(run_chains(&ds, &hp, &cfg, 1).unwrap(), first);
        assert!(run_chains(&ds, &hp, &cfg, 0).is_err());
    }
}
