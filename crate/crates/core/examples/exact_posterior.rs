//! Exact posterior over forests of a 3-feature dataset, next to a long chain.
//!
//! Run with `cargo run --release --example exact_posterior`.

use std::collections::HashMap;

use sbfc::dataio::synthetic::tiny_d3;
use sbfc::graph::GraphClass;
use sbfc::sampler::{enumerate_exact_posterior, total_variation, ChainState, SamplerConfig, DEFAULT_EXACT_LIMIT};
use sbfc::score::Hyperparams;

fn describe(c: &GraphClass) -> String {
    let groups: String = c.groups.iter().map(|g| if g.is_signal() { 'S' } else { 'N' }).collect();
    let edges: Vec<String> = c.edges.iter().map(|(a, b)| format!("X{}-X{}", a + 1, b + 1)).collect();
    format!("groups {groups}  edges [{}]", edges.join(", "))
}

fn main() -> sbfc::Result<()> {
    let data = tiny_d3();
    let hp = Hyperparams::for_data(&data, Hyperparams::DEFAULT_ALPHA)?;
    let exact = enumerate_exact_posterior(&data, &hp, DEFAULT_EXACT_LIMIT)?;
    println!("{} labelled rooted forests in {} classes", exact.graphs, exact.classes.len());

    let iterations = 500_000;
    let mut state = ChainState::new(&data, &hp, 9);
    let mut counts: HashMap<GraphClass, u64> = HashMap::new();
    for _ in 0..iterations {
        state.step(&data, &hp, SamplerConfig::DEFAULT_SWITCH_K);
        *counts.entry(state.graph().class_key()).or_default() += 1;
    }

    let mut ranked: Vec<_> = exact.classes.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(a.1));
    println!("\n   exact   chain  class");
    for (class, p) in ranked.iter().take(10) {
        let f = counts.get(*class).copied().unwrap_or(0) as f64 / iterations as f64;
        println!("  {p:.4}  {f:.4}  {}", describe(class));
    }
    println!("\ntotal variation distance: {:.4}", total_variation(&exact, &counts));
    Ok(())
}
