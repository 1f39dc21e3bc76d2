//! Sampling forests for the corral data and reading off feature relevance.
//!
//! Run with `cargo run --release --example run_sampler [seed] [chains]`.

use sbfc::dataio::synthetic::corral;
use sbfc::inference::{edge_frequencies, rank_features};
use sbfc::sampler::{run_chains, write_trace, SamplerConfig};
use sbfc::score::Hyperparams;

fn main() -> sbfc::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let chains = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let data = corral();
    let hp = Hyperparams::for_data(&data, Hyperparams::DEFAULT_ALPHA)?;
    let config = SamplerConfig::for_features(data.d()).with_seed(seed);
    let start = std::time::Instant::now();
    let trace = run_chains(&data, &hp, &config, chains)?;
    println!(
        "{} chain(s) x {} iterations in {:.2?}: {} snapshots",
        chains,
        config.iterations,
        start.elapsed(),
        trace.len()
    );

    println!("\nfeature relevance (share of snapshots in the signal group):");
    for (j, rel) in rank_features(&trace)? {
        println!("  {:<3} {rel:.3}", data.feature_names()[j]);
    }
    println!("\nedges present in at least 10% of snapshots:");
    for ((a, b), f) in edge_frequencies(&trace)? {
        if f >= 0.1 {
            println!("  {} - {}  {f:.3}", data.feature_names()[a], data.feature_names()[b]);
        }
    }

    let best = trace.log_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("\nbest sampled log score {best:.3}");
    let mut first_lines = Vec::new();
    write_trace(&mut first_lines, &trace)?;
    let text = String::from_utf8(first_lines).expect("trace is UTF-8");
    println!("trace head:\n{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}
