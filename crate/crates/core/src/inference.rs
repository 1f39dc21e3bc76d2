//! Model-averaged prediction and posterior summaries of a sample trace.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph::ParentSet;
use crate::sampler::SampleTrace;
use crate::score::{count_family, parent_config, CountTable, Hyperparams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub class_probs: Vec<f64>,
    pub label: usize,
}

impl Prediction {
    pub fn from_probs(class_probs: Vec<f64>) -> Prediction {
        let label = argmax(&class_probs);
        Prediction { class_probs, label }
    }
}

/// Index of the largest value; the lowest index wins ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn log_sum_exp_normalize(log_p: &mut [f64]) {
    let max = log_p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = log_p.iter().map(|l| (l - max).exp()).sum();
    for l in log_p.iter_mut() {
        *l = (*l - max).exp() / z;
    }
}

/// Signal-group family of one snapshot: feature, feature parent, index of its count table.
#[derive(Debug, Clone, Copy)]
struct SignalFamily {
    feature: usize,
    parent: Option<usize>,
    table: usize,
}

/// Class posteriors for test rows, averaged with equal weight over every
/// graph in a trace. Count tables come from the training data and are shared
/// between snapshots that contain the same family.
#[derive(Debug, Clone)]
pub struct Predictor {
    alpha: f64,
    class_arity: usize,
    arities: Vec<usize>,
    class_log_prior: Vec<f64>,
    tables: Vec<CountTable>,
    snapshots: Vec<Vec<SignalFamily>>,
}

impl Predictor {
    pub fn new(trace: &SampleTrace, data: &Dataset, hp: &Hyperparams) -> Result<Predictor> {
        Self::from_graphs(&trace.samples, data, hp)
    }

    pub fn from_graphs(graphs: &[Graph], data: &Dataset, hp: &Hyperparams) -> Result<Predictor> {
        if graphs.is_empty() {
            return Err(Error::Inference("cannot predict from an empty trace".into()));
        }
        let v = data.class_arity();
        let n = data.n() as f64;
        let class_log_prior =
            data.class_counts().iter().map(|&c| ((c as f64 + hp.alpha / v as f64) / (n + hp.alpha)).ln()).collect();
        let mut index: HashMap<(usize, Option<usize>), usize> = HashMap::new();
        let mut tables = Vec::new();
        let mut snapshots = Vec::with_capacity(graphs.len());
        for g in graphs {
            if g.d() != data.d() {
                return Err(Error::Validation(format!("graph has {} features, training data has {}", g.d(), data.d())));
            }
            let fams = (0..g.d())
                .filter(|&j| g.group(j).is_signal())
                .map(|j| {
                    let parent = g.parent(j);
                    let table = *index.entry((j, parent)).or_insert_with(|| {
                        tables.push(count_family(data, j, ParentSet { feature_parent: parent, includes_class: true }));
                        tables.len() - 1
                    });
                    SignalFamily { feature: j, parent, table }
                })
                .collect();
            snapshots.push(fams);
        }
        Ok(Predictor {
            alpha: hp.alpha,
            class_arity: v,
            arities: data.arities().to_vec(),
            class_log_prior,
            tables,
            snapshots,
        })
    }

    pub fn num_graphs(&self) -> usize {
        self.snapshots.len()
    }

    /// Per-class probabilities under snapshot `s`.
    pub fn graph_probs(&self, s: usize, x: &[u32]) -> Vec<f64> {
        let mut log_p = self.class_log_prior.clone();
        for fam in &self.snapshots[s] {
            let t = &self.tables[fam.table];
            let a_row = self.alpha / t.parent_config_arity as f64;
            let a_cell = a_row / t.value_arity as f64;
            let xj = x[fam.feature] as usize;
            let pval = fam.parent.map(|p| x[p]);
            let parent_seen = fam.parent.is_none_or(|p| (x[p] as usize) < self.arities[p]);
            for (y, lp) in log_p.iter_mut().enumerate() {
                let (n_kl, n_l) = if parent_seen {
                    let l = parent_config(pval.unwrap_or(0), y as u32, true, self.class_arity);
                    let n_kl = if xj < t.value_arity { t.count(l, xj) } else { 0 };
                    (n_kl as f64, t.row_totals[l] as f64)
                } else {
                    (0.0, 0.0)
                };
                *lp += ((n_kl + a_cell) / (n_l + a_row)).ln();
            }
        }
        log_sum_exp_normalize(&mut log_p);
        log_p
    }

    pub fn predict(&self, x: &[u32]) -> Prediction {
        assert_eq!(x.len(), self.arities.len(), "test row has the wrong number of features");
        let mut mean = vec![0.0; self.class_arity];
        for s in 0..self.snapshots.len() {
            for (m, p) in mean.iter_mut().zip(self.graph_probs(s, x)) {
                *m += p;
            }
        }
        let k = self.snapshots.len() as f64;
        for m in &mut mean {
            *m /= k;
        }
        Prediction::from_probs(mean)
    }

    /// Predictions for every row of an encoded test set.
    pub fn predict_dataset(&self, test: &Dataset) -> Result<Vec<Prediction>> {
        if test.d() != self.arities.len() {
            return Err(Error::Validation(format!(
                "test data has {} features, model has {}",
                test.d(),
                self.arities.len()
            )));
        }
        Ok((0..test.n()).map(|i| self.predict(&test.row(i))).collect())
    }
}

/// Class probabilities of `x` under a single graph.
pub fn predict_one(graph: &Graph, data: &Dataset, hp: &Hyperparams, x: &[u32]) -> Result<Vec<f64>> {
    Ok(Predictor::from_graphs(std::slice::from_ref(graph), data, hp)?.graph_probs(0, x))
}

/// Equal-weight average of [`predict_one`] over the trace.
pub fn predict_bma(trace: &SampleTrace, data: &Dataset, hp: &Hyperparams, x: &[u32]) -> Result<Prediction> {
    Ok(Predictor::new(trace, data, hp)?.predict(x))
}

/// Fraction of correct labels; `None` when there is nothing to score.
pub fn accuracy(predictions: &[Prediction], truth: &[u32]) -> Option<f64> {
    if truth.is_empty() || predictions.len() != truth.len() {
        return None;
    }
    let hits = predictions.iter().zip(truth).filter(|(p, &y)| p.label == y as usize).count();
    Some(hits as f64 / truth.len() as f64)
}

fn signal_counts(trace: &SampleTrace) -> Result<Vec<usize>> {
    if trace.is_empty() {
        return Err(Error::Inference("trace has no samples".into()));
    }
    let mut counts = vec![0usize; trace.samples[0].d()];
    for g in &trace.samples {
        for (j, c) in counts.iter_mut().enumerate() {
            *c += g.group(j).is_signal() as usize;
        }
    }
    Ok(counts)
}

/// Features by descending signal-group frequency, ties by index.
pub fn rank_features(trace: &SampleTrace) -> Result<Vec<(usize, f64)>> {
    let counts = signal_counts(trace)?;
    let s = trace.len() as f64;
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    Ok(order.into_iter().map(|j| (j, counts[j] as f64 / s)).collect())
}

/// Frequency of every undirected edge that occurs in at least one snapshot.
pub fn edge_frequencies(trace: &SampleTrace) -> Result<BTreeMap<(usize, usize), f64>> {
    if trace.is_empty() {
        return Err(Error::Inference("trace has no samples".into()));
    }
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for g in &trace.samples {
        for e in g.edges() {
            *counts.entry(e).or_default() += 1;
        }
    }
    let s = trace.len() as f64;
    Ok(counts.into_iter().map(|(e, c)| (e, c as f64 / s)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Edges shown only at or above this frequency.
    pub edge_min: f64,
    /// In high-dimensional mode, nodes in the noise group more often than this are omitted.
    pub node_omit: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { edge_min: 0.10, node_omit: 0.80 }
    }
}

/// Undirected summary of a trace. `node_relevance` covers every feature;
/// `visible` and `edge_relevance` reflect the display thresholds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AverageGraph {
    pub node_relevance: Vec<f64>,
    pub visible: Vec<bool>,
    pub edge_relevance: BTreeMap<(usize, usize), f64>,
    pub thresholds: Thresholds,
}

pub fn build_average_graph(trace: &SampleTrace, high_dim: bool) -> Result<AverageGraph> {
    build_average_graph_with(trace, high_dim, Thresholds::default())
}

pub fn build_average_graph_with(trace: &SampleTrace, high_dim: bool, thresholds: Thresholds) -> Result<AverageGraph> {
    let signal = signal_counts(trace)?;
    let s = trace.len();
    let sf = s as f64;
    let node_relevance: Vec<f64> = signal.iter().map(|&c| c as f64 / sf).collect();
    let visible: Vec<bool> =
        signal.iter().map(|&c| !high_dim || ((s - c) as f64) <= thresholds.node_omit * sf).collect();
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for g in &trace.samples {
        for e in g.edges() {
            *counts.entry(e).or_default() += 1;
        }
    }
    let edge_relevance = counts
        .into_iter()
        .filter(|&((a, b), c)| c as f64 >= thresholds.edge_min * sf && visible[a] && visible[b])
        .map(|(e, c)| (e, c as f64 / sf))
        .collect();
    Ok(AverageGraph { node_relevance, visible, edge_relevance, thresholds })
}

/// Number of grey levels used for node shading.
pub const SHADE_BUCKETS: usize = 10;
const PEN_MIN: f64 = 1.0;
const PEN_MAX: f64 = 8.0;

/// Shade bucket of a relevance in `[0, 1]`; 1.0 lands in the darkest bucket.
pub fn shade_bucket(relevance: f64) -> usize {
    ((relevance.clamp(0.0, 1.0) * SHADE_BUCKETS as f64) as usize).min(SHADE_BUCKETS - 1)
}

fn shade_color(bucket: usize) -> String {
    let level = 255 - (bucket * 255) / (SHADE_BUCKETS - 1);
    format!("#{level:02x}{level:02x}{level:02x}")
}

/// Pen width linear in frequency over `[edge_min, 1]`.
pub fn pen_width(freq: f64, edge_min: f64) -> f64 {
    let t = ((freq - edge_min) / (1.0 - edge_min)).clamp(0.0, 1.0);
    PEN_MIN + t * (PEN_MAX - PEN_MIN)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected DOT rendering: darker nodes are more often in the signal
/// group, thicker edges occur more often.
pub fn export_dot(avg: &AverageGraph, names: &[String]) -> String {
    let mut out = String::from("graph sbfc {\n  graph [overlap=false];\n  node [shape=ellipse, style=filled];\n");
    for (j, &rel) in avg.node_relevance.iter().enumerate() {
        if !avg.visible.get(j).copied().unwrap_or(true) {
            continue;
        }
        let bucket = shade_bucket(rel);
        let name = names.get(j).cloned().unwrap_or_else(|| format!("X{}", j + 1));
        let font = if bucket >= SHADE_BUCKETS / 2 { "white" } else { "black" };
        let _ = writeln!(
            out,
            "  n{j} [label=\"{}\", fillcolor=\"{}\", fontcolor=\"{font}\", tooltip=\"{rel:.3}\"];",
            dot_escape(&name),
            shade_color(bucket)
        );
    }
    for (&(a, b), &f) in &avg.edge_relevance {
        let _ = writeln!(
            out,
            "  n{a} -- n{b} [penwidth={:.3}, tooltip=\"{f:.3}\"];",
            pen_width(f, avg.thresholds.edge_min)
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSummary {
    pub name: String,
    pub relevance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSummary {
    pub a: String,
    pub b: String,
    pub relevance: f64,
}

/// JSON form of the average graph: visible nodes and retained edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: Vec<NodeSummary>,
    pub edges: Vec<EdgeSummary>,
}

impl GraphSummary {
    pub fn new(avg: &AverageGraph, names: &[String]) -> GraphSummary {
        let nodes = avg
            .node_relevance
            .iter()
            .enumerate()
            .filter(|&(j, _)| avg.visible.get(j).copied().unwrap_or(true))
            .map(|(j, &relevance)| NodeSummary { name: names[j].clone(), relevance })
            .collect();
        let edges = avg
            .edge_relevance
            .iter()
            .map(|(&(a, b), &relevance)| EdgeSummary { a: names[a].clone(), b: names[b].clone(), relevance })
            .collect();
        GraphSummary { nodes, edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::synthetic::chained_dataset;
    use crate::graph::Group::{Noise, Signal};

    fn names(d: usize) -> Vec<String> {
        (1..=d).map(|k| format!("X{k}")).collect()
    }

    #[test]
    fn argmax_ties_pick_lowest() {
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.2, 0.5, 0.5]), 1);
    }

    #[test]
    fn all_noise_equals_smoothed_class_prior() {
        let ds = chained_dataset(40, 3, 2, 1);
        let hp = Hyperparams::for_data(&ds, 5.0).unwrap();
        let p = predict_one(&Graph::empty(3), &ds, &hp, &[1, 0, 1]).unwrap();
        let c = ds.class_counts();
        let expect0 = (c[0] as f64 + 2.5) / (40.0 + 5.0);
        assert!((p[0] - expect0).abs() < 1e-12);
    }

    #[test]
    fn unseen_parent_value_is_uniform() {
        let ds = chained_dataset(40, 2, 2, 3);
        let hp = Hyperparams::for_data(&ds, 5.0).unwrap();
        let g = Graph::from_parts(vec![None, Some(0)], vec![Signal, Signal]).unwrap();
        let noise_root = Graph::from_parts(vec![None, None], vec![Signal, Noise]).unwrap();
        // parent value 2 never occurs in training, so X2 carries no class information
        let a = predict_one(&g, &ds, &hp, &[2, 1]).unwrap();
        let b = predict_one(&noise_root, &ds, &hp, &[2, 1]).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn bma_is_an_equal_weight_mean() {
        let ds = chained_dataset(40, 3, 2, 5);
        let hp = Hyperparams::for_data(&ds, 5.0).unwrap();
        let g1 = Graph::empty(3);
        let g2 = Graph::from_parts(vec![None, Some(0), None], vec![Signal, Signal, Noise]).unwrap();
        let x = [1, 1, 0];
        let p1 = predict_one(&g1, &ds, &hp, &x).unwrap();
        let p2 = predict_one(&g2, &ds, &hp, &x).unwrap();
        let t = SampleTrace::from_graphs(vec![g1.clone(), g2], names(3));
        let bma = predict_bma(&t, &ds, &hp, &x).unwrap();
        for y in 0..2 {
            assert!((bma.class_probs[y] - 0.5 * (p1[y] + p2[y])).abs() < 1e-15);
        }
        let single = predict_bma(&SampleTrace::from_graphs(vec![g1], names(3)), &ds, &hp, &x).unwrap();
        assert_eq!(single.class_probs, p1);
        let empty = SampleTrace::from_graphs(vec![], names(3));
        assert!(matches!(predict_bma(&empty, &ds, &hp, &x), Err(Error::Inference(_))));
    }

    #[test]
    fn ranking_frequencies() {
        let sig = Graph::from_parts(vec![None, None], vec![Signal, Noise]).unwrap();
        let none = Graph::empty(2);
        let mut samples = vec![sig; 80];
        samples.extend(vec![none.clone(); 20]);
        let r = rank_features(&SampleTrace::from_graphs(samples, names(2))).unwrap();
        assert_eq!(r, vec![(0, 0.8), (1, 0.0)]);
        let r = rank_features(&SampleTrace::from_graphs(vec![none; 5], names(2))).unwrap();
        assert_eq!(r, vec![(0, 0.0), (1, 0.0)]);
    }

    #[test]
    fn edge_threshold_and_node_omission() {
        let joined = Graph::from_parts(vec![None, Some(0), None], vec![Noise; 3]).unwrap();
        let other = Graph::from_parts(vec![None, None, Some(0)], vec![Noise; 3]).unwrap();
        let plain = Graph::empty(3);
        let mut samples = vec![joined; 3];
        samples.push(other);
        samples.extend(vec![plain; 16]);
        let t = SampleTrace::from_graphs(samples, names(3));
        let avg = build_average_graph(&t, false).unwrap();
        assert_eq!(avg.edge_relevance.get(&(0, 1)), Some(&0.15));
        assert!(!avg.edge_relevance.contains_key(&(0, 2)));

        let s1 = Graph::from_parts(vec![None, None], vec![Signal, Signal]).unwrap();
        let s0 = Graph::from_parts(vec![None, None], vec![Noise, Signal]).unwrap();
        let mut samples = vec![s1; 3];
        samples.extend(vec![s0; 17]);
        let t = SampleTrace::from_graphs(samples, names(2));
        let avg = build_average_graph(&t, true).unwrap();
        assert_eq!(avg.visible, vec![false, true]);
        assert_eq!(build_average_graph(&t, false).unwrap().visible, vec![true, true]);
    }

    #[test]
    fn dot_output() {
        let empty = export_dot(&AverageGraph::default(), &[]);
        assert!(!empty.contains(" n0 "));
        assert!(empty.starts_with("graph sbfc {"));

        let avg = AverageGraph {
            node_relevance: vec![1.0, 0.0],
            visible: vec![true, true],
            edge_relevance: [((0, 1), 1.0)].into_iter().collect(),
            thresholds: Thresholds::default(),
        };
        let dot = export_dot(&avg, &names(2));
        assert!(dot.contains(r##"n0 [label="X1", fillcolor="#000000""##), "{dot}");
        assert!(dot.contains(r##"n1 [label="X2", fillcolor="#ffffff""##));
        assert!(dot.contains("n0 -- n1 [penwidth=8.000"));
        assert_eq!(dot, export_dot(&avg, &names(2)));
        assert_eq!(shade_bucket(1.0), 9);
        assert_eq!(shade_bucket(0.0), 0);
        assert_eq!(pen_width(0.1, 0.1), 1.0);
    }
}
