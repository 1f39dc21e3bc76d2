//! Five-fold cross-validation on a delimited file (corral by default).
//!
//! Run with `cargo run --release --example classify_cv [path.csv] [seed]`.

use std::path::PathBuf;

use sbfc::cli::{cross_validate, ChainArgs};
use sbfc::dataio::{drop_missing, load_table, ClassColumn, Discretization, DEFAULT_MISSING_TOKENS};

fn main() -> sbfc::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/corral.csv"));
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(2016);

    let raw = drop_missing(&load_table(&path, b',', true, &ClassColumn::Last)?, &DEFAULT_MISSING_TOKENS)?;
    println!("{}: {} rows, {} features", path.display(), raw.n(), raw.d());
    let chain = ChainArgs { iters: None, thin: 50, burnin: 0.2, switch_k: 10, alpha: 5.0, seed, chains: 1 };
    let report = cross_validate(&raw, Discretization::Auto, &chain, 5)?;
    for f in &report.folds {
        println!("fold {}: train {:>4}  test {:>3}  accuracy {:.4}", f.fold, f.n_train, f.n_test, f.accuracy);
    }
    println!("mean accuracy {:.4}", report.mean_accuracy);
    Ok(())
}
