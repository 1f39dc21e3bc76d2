//! Built-in datasets: the corral benchmark, tiny oracle datasets and random generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Dataset;

/// The 128-row corral dataset.
///
/// Features are `A0, A1, B0, B1, Irrelevant, Correlated` (named `X1..X6`);
/// the class is `(A0 and A1) or (B0 and B1)`. Each of the 32 combinations of
/// the first five features appears four times, and `Correlated` agrees with
/// the class in three of the four copies.
pub fn corral() -> Dataset {
    let mut columns: Vec<Vec<u32>> = (0..6).map(|_| Vec::with_capacity(128)).collect();
    let mut class = Vec::with_capacity(128);
    for combo in 0u32..32 {
        let bits: Vec<u32> = (0..5).map(|b| (combo >> (4 - b)) & 1).collect();
        let y = (bits[0] & bits[1]) | (bits[2] & bits[3]);
        for copy in 0..4 {
            for (j, &b) in bits.iter().enumerate() {
                columns[j].push(b);
            }
            columns[5].push(if copy < 3 { y } else { 1 - y });
            class.push(y);
        }
    }
    Dataset::new(columns, vec![2; 6], class, 2).expect("corral is well formed")
}

const TINY_Y: [u32; 20] = [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1];
const TINY_X1: [u32; 20] = [0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0];
const TINY_X2: [u32; 20] = [0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 1, 1, 0, 1, 0, 0];
const TINY_X3: [u32; 20] = [1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1];

/// Bundled 2-feature, 20-row binary dataset for exact-posterior checks.
pub fn tiny_d2() -> Dataset {
    Dataset::new(vec![TINY_X1.to_vec(), TINY_X2.to_vec()], vec![2, 2], TINY_Y.to_vec(), 2)
        .expect("tiny dataset is well formed")
}

/// [`tiny_d2`] plus a third, mostly unrelated binary feature.
pub fn tiny_d3() -> Dataset {
    Dataset::new(vec![TINY_X1.to_vec(), TINY_X2.to_vec(), TINY_X3.to_vec()], vec![2; 3], TINY_Y.to_vec(), 2)
        .expect("tiny dataset is well formed")
}

/// Appends shuffled copies of randomly chosen existing features until the
/// dataset has `target_d` features. Shuffling the rows breaks any relation to
/// the class and to the other features while keeping the marginal.
pub fn augment_with_shuffled_noise(data: &Dataset, target_d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = data.clone();
    let base = data.d();
    for k in base..target_d {
        let src = rng.gen_range(0..base);
        let mut col = data.column(src).to_vec();
        col.shuffle(&mut rng);
        out.push_feature(format!("X{}", k + 1), col, data.arity(src));
    }
    out
}

/// Uniformly random features and classes.
pub fn random_dataset(n: usize, d: usize, arity: usize, class_arity: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class = (0..n).map(|_| rng.gen_range(0..class_arity as u32)).collect();
    let columns = (0..d).map(|_| (0..n).map(|_| rng.gen_range(0..arity as u32)).collect()).collect();
    Dataset::new(columns, vec![arity; d], class, class_arity).expect("generated data is well formed")
}

/// Binary class with a Markov chain of features: `X1` copies the class with
/// probability 0.8, each later feature copies its predecessor with probability
/// 0.6; otherwise values are uniform.
pub fn chained_dataset(n: usize, d: usize, arity: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = arity as u32;
    let class: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(d);
    for j in 0..d {
        let col = (0..n)
            .map(|i| {
                let (prev, p) = if j == 0 { (class[i] % a, 0.8) } else { (columns[j - 1][i], 0.6) };
                if rng.gen_bool(p) {
                    prev
                } else {
                    rng.gen_range(0..a)
                }
            })
            .collect();
        columns.push(col);
    }
    Dataset::new(columns, vec![arity; d], class, 2).expect("generated data is well formed")
}
