//! Rendering the average graph of a corral run as Graphviz DOT.
//!
//! Run with `cargo run --release --example average_graph_dot > corral.dot`
//! and then e.g. `neato -Tpng corral.dot -o corral.png`.

use sbfc::dataio::synthetic::corral;
use sbfc::inference::{build_average_graph, export_dot, GraphSummary};
use sbfc::sampler::{run_chain, SamplerConfig};
use sbfc::score::Hyperparams;

fn main() -> sbfc::Result<()> {
    let data = corral();
    let hp = Hyperparams::for_data(&data, Hyperparams::DEFAULT_ALPHA)?;
    let trace = run_chain(&data, &hp, &SamplerConfig::for_features(data.d()).with_seed(4))?;
    let avg = build_average_graph(&trace, false)?;
    let summary = GraphSummary::new(&avg, data.feature_names());
    eprintln!("{}", serde_json::to_string(&summary).expect("summary serializes"));
    print!("{}", export_dot(&avg, data.feature_names()));
    Ok(())
}
