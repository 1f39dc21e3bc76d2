//! Corral padded with 94 shuffled copies of its own columns: the five
//! informative features should still rank first.
//!
//! Run with `cargo run --release --example noise_robustness [d] [runs]`.

use sbfc::dataio::synthetic::{augment_with_shuffled_noise, corral};
use sbfc::inference::{build_average_graph, rank_features};
use sbfc::sampler::{run_chain, SamplerConfig};
use sbfc::score::Hyperparams;

fn main() -> sbfc::Result<()> {
    let mut args = std::env::args().skip(1);
    let d = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);
    let runs: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);

    let data = augment_with_shuffled_noise(&corral(), d, 2016);
    let hp = Hyperparams::for_data(&data, Hyperparams::DEFAULT_ALPHA)?;
    for seed in 1..=runs {
        let trace = run_chain(&data, &hp, &SamplerConfig::for_features(data.d()).with_seed(seed))?;
        let top: Vec<String> = rank_features(&trace)?
            .iter()
            .take(8)
            .map(|(j, r)| format!("{}:{r:.2}", data.feature_names()[*j]))
            .collect();
        // hide nodes that sit in the noise group in more than 80% of snapshots
        let avg = build_average_graph(&trace, true)?;
        let shown = avg.visible.iter().filter(|&&v| v).count();
        println!("seed {seed}: {}  ({shown} nodes in the average graph)", top.join(" "));
    }
    Ok(())
}
