//! Deterministic parallel Monte Carlo plumbing.
//!
//! Trials are processed in fixed-size blocks. Block i draws from stream i
//! of a counter-mode generator seeded once for the whole run, and block
//! results merge in block order, so every statistic is a pure function of
//! (seed, n_trials) — bit-identical for any number of worker threads, or
//! none.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Trials per block. Fixed: changing it changes which stream serves which
/// trial, i.e. the sampled numbers themselves.
pub const BLOCK_TRIALS: u64 = 16_384;

/// Maps `per_block(rng, first_trial, count)` over all blocks in parallel
/// and returns the partial results in block order.
pub fn run_trial_blocks<T, F>(seed: u64, n_trials: u64, per_block: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64, u64) -> T + Sync,
{
    let n_blocks = n_trials.div_ceil(BLOCK_TRIALS);
    (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let first = b * BLOCK_TRIALS;
            let count = BLOCK_TRIALS.min(n_trials - first);
            per_block(&mut rng, first, count)
        })
        .collect()
}

/// Inverse-CDF draw from an explicit distribution.
///
/// Outcomes with probability exactly 0 can never be selected; rounding
/// overshoot (Σp marginally below the drawn uniform) falls back to the
/// last positive entry.
pub fn sample_index<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    debug_assert!(!probabilities.is_empty());
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            last_positive = k;
        }
        acc += p;
        if u < acc {
            return k;
        }
    }
    last_positive
}

/// √(p̂(1−p̂)/n), the binomial standard error of an empirical rate.
pub fn binomial_stderr(p_hat: f64, n_trials: u64) -> f64 {
    if n_trials == 0 {
        return f64::NAN;
    }
    (p_hat * (1.0 - p_hat) / n_trials as f64).sqrt()
}

/// Plug-in (maximum-likelihood) mutual information of a contingency
/// table, in bits. Empty rows/columns and zero cells contribute nothing.
pub fn mutual_information_bits(counts: &[Vec<u64>]) -> f64 {
    let total: u64 = counts.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let row_sums: Vec<f64> = counts
        .iter()
        .map(|row| row.iter().sum::<u64>() as f64)
        .collect();
    let n_cols = counts.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut col_sums = vec![0.0; n_cols];
    for row in counts {
        for (j, &c) in row.iter().enumerate() {
            col_sums[j] += c as f64;
        }
    }
    let mut info = 0.0;
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p_joint = c as f64 / n;
            let p_marg = (row_sums[i] / n) * (col_sums[j] / n);
            info += p_joint * (p_joint / p_marg).log2();
        }
    }
    info.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_heads(seed: u64, n: u64) -> u64 {
        run_trial_blocks(seed, n, |rng, _first, count| {
            let mut heads = 0u64;
            for _ in 0..count {
                if sample_index(&[0.5, 0.5], rng) == 0 {
                    heads += 1;
                }
            }
            heads
        })
        .into_iter()
        .sum()
    }

    #[test]
    fn block_runs_are_identical_across_worker_counts() {
        let n = 3 * BLOCK_TRIALS + 17;
        let mut results = Vec::new();
        for workers in [1usize, 2, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            results.push(pool.install(|| total_heads(99, n)));
        }
        assert_eq!(results[0], results[1]);
        assert_eq!(results[1], results[2]);
    }

    #[test]
    fn block_runs_are_seed_deterministic_and_seed_sensitive() {
        let n = BLOCK_TRIALS + 1;
        assert_eq!(total_heads(7, n), total_heads(7, n));
        assert_ne!(total_heads(7, 100 * n), total_heads(8, 100 * n));
    }

    #[test]
    fn sample_index_never_selects_zero_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dist = [0.0, 0.5, 0.0, 0.5, 0.0];
        for _ in 0..10_000 {
            let k = sample_index(&dist, &mut rng);
            assert!(k == 1 || k == 3);
        }
    }

    #[test]
    fn sample_index_tracks_the_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let dist = [0.2, 0.3, 0.5];
        let mut counts = [0u64; 3];
        let n = 100_000;
        for _ in 0..n {
            counts[sample_index(&dist, &mut rng)] += 1;
        }
        for (k, &p) in dist.iter().enumerate() {
            let rate = counts[k] as f64 / n as f64;
            assert!((rate - p).abs() < 4.0 * binomial_stderr(p, n));
        }
    }

    #[test]
    fn mutual_information_of_independent_table_is_near_zero() {
        // perfectly proportional rows: exactly independent
        let counts = vec![vec![400u64, 600], vec![200, 300]];
        assert!(mutual_information_bits(&counts) < 1e-12);
    }

    #[test]
    fn mutual_information_of_perfect_channel_is_one_bit() {
        let counts = vec![vec![5000u64, 0], vec![0, 5000]];
        assert!((mutual_information_bits(&counts) - 1.0).abs() < 1e-12);
    }
}
