//! Supervised (MDLP) and unsupervised (binary) discretization of numeric columns.
//!
//! Both routines return sorted cut thresholds. A value `x` falls into bin
//! `#{c in cuts : c < x}`, so a value equal to a cut goes to the lower bin.

/// Recursive minimum-description-length partitioning (Fayyad & Irani).
///
/// At each level the boundary minimizing the weighted class entropy of the two
/// sides is chosen (lowest value wins ties); it is accepted when its
/// information gain exceeds
/// `(log2(N - 1) + log2(3^k - 2) - k Ent(S) + k1 Ent(S1) + k2 Ent(S2)) / N`,
/// where `k`, `k1`, `k2` count the classes present in each set. Accepted cuts
/// are refined recursively on both sides. Cuts sit at the midpoint between
/// adjacent distinct values.
pub fn discretize_mdlp(values: &[f64], class: &[u32]) -> Vec<f64> {
    assert_eq!(values.len(), class.len(), "values and classes differ in length");
    let mut pairs: Vec<(f64, u32)> = values.iter().copied().zip(class.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let n_classes = class.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut cuts = Vec::new();
    split_segment(&pairs, n_classes, &mut cuts);
    cuts.sort_by(f64::total_cmp);
    cuts
}

/// Entropy in bits of a class histogram with `total` members.
pub(crate) fn entropy(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

fn present(counts: &[usize]) -> usize {
    counts.iter().filter(|&&c| c > 0).count()
}

/// Acceptance threshold of the MDL criterion for a binary split.
pub(crate) fn mdl_threshold(total: &[usize], left: &[usize], right: &[usize]) -> f64 {
    let n: usize = total.iter().sum();
    let nl: usize = left.iter().sum();
    let nr = n - nl;
    let (k, k1, k2) = (present(total) as f64, present(left) as f64, present(right) as f64);
    let delta =
        (3f64.powf(k) - 2.0).log2() - (k * entropy(total, n) - k1 * entropy(left, nl) - k2 * entropy(right, nr));
    (((n - 1) as f64).log2() + delta) / n as f64
}

fn split_segment(seg: &[(f64, u32)], n_classes: usize, cuts: &mut Vec<f64>) {
    let n = seg.len();
    if n < 2 {
        return;
    }
    let mut total = vec![0usize; n_classes];
    for &(_, c) in seg {
        total[c as usize] += 1;
    }
    let ent_s = entropy(&total, n);
    if ent_s == 0.0 {
        // pure segment: every split has zero gain
        return;
    }

    let mut left = vec![0usize; n_classes];
    let mut right = total.clone();
    let mut best: Option<(usize, f64)> = None;
    for i in 0..n - 1 {
        let c = seg[i].1 as usize;
        left[c] += 1;
        right[c] -= 1;
        if seg[i].0 == seg[i + 1].0 {
            continue;
        }
        let nl = i + 1;
        let nr = n - nl;
        let weighted = (nl as f64 * entropy(&left, nl) + nr as f64 * entropy(&right, nr)) / n as f64;
        if best.is_none_or(|(_, e)| weighted < e) {
            best = Some((i, weighted));
        }
    }
    let Some((i, weighted)) = best else {
        return;
    };

    let mut left = vec![0usize; n_classes];
    for &(_, c) in &seg[..=i] {
        left[c as usize] += 1;
    }
    let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
    let gain = ent_s - weighted;
    if gain > mdl_threshold(&total, &left, &right) {
        cuts.push(0.5 * (seg[i].0 + seg[i + 1].0));
        split_segment(&seg[..=i], n_classes, cuts);
        split_segment(&seg[i + 1..], n_classes, cuts);
    }
}

/// Single cut at the median of the distinct values; no cut for a constant column.
pub fn discretize_binary(values: &[f64]) -> Vec<f64> {
    let mut distinct = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let m = distinct.len();
    if m < 2 {
        return Vec::new();
    }
    let median = if m % 2 == 1 { distinct[m / 2] } else { 0.5 * (distinct[m / 2 - 1] + distinct[m / 2]) };
    vec![median]
}

/// Bin index of `value` under sorted `cuts`.
pub fn bin_of(value: f64, cuts: &[f64]) -> usize {
    cuts.partition_point(|&c| c < value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_column_has_no_cuts() {
        assert!(discretize_mdlp(&[3.0; 6], &[0, 1, 0, 1, 0, 1]).is_empty());
        assert!(discretize_binary(&[3.0; 6]).is_empty());
    }

    #[test]
    fn separable_four_points() {
        let cuts = discretize_mdlp(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1]);
        assert_eq!(cuts, vec![2.5]);
        let total = [2, 2];
        let thr = mdl_threshold(&total, &[2, 0], &[0, 2]);
        let expected = (3f64.log2() + 7f64.log2() - 2.0) / 4.0;
        assert!((thr - expected).abs() < 1e-12);
        assert!((thr - 0.598).abs() < 1e-3);
    }

    #[test]
    fn alternating_labels_are_not_cut() {
        let v: Vec<f64> = (1..=8).map(f64::from).collect();
        let c = [0, 1, 0, 1, 0, 1, 0, 1];
        assert!(discretize_mdlp(&v, &c).is_empty());
    }

    #[test]
    fn unsorted_input_and_duplicates() {
        let v = [4.0, 1.0, 3.0, 1.0, 2.0, 4.0, 3.0, 2.0];
        let c = [1, 0, 1, 0, 0, 1, 1, 0];
        assert_eq!(discretize_mdlp(&v, &c), vec![2.5]);
    }

    #[test]
    fn binary_median_rules() {
        assert_eq!(discretize_binary(&[1.0, 2.0, 3.0, 4.0]), vec![2.5]);
        assert_eq!(discretize_binary(&[5.0, 5.0, 9.0]), vec![7.0]);
        assert_eq!(discretize_binary(&[1.0, 2.0, 3.0]), vec![2.0]);
    }

    #[test]
    fn bins_follow_thresholds() {
        assert_eq!(bin_of(10.0, &[2.5]), 1);
        assert_eq!(bin_of(-10.0, &[2.5]), 0);
        assert_eq!(bin_of(2.5, &[2.5]), 0);
        assert_eq!(bin_of(7.0, &[2.5, 5.0]), 2);
    }
}
