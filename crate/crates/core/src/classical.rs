//! Classical partial search baselines.
//!
//! The randomized zero-error strategy skips one block chosen uniformly at
//! random and probes the other `K - 1` blocks in random order. If the
//! target never turns up, it must be in the skipped block.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalReport {
    pub n: u64,
    pub k: u64,
    /// `(N/2)(1 - 1/K²)`.
    pub expected_randomized: f64,
    /// `N(1 - 1/K)`: probe all but one block.
    pub deterministic: f64,
    pub sample_mean: Option<f64>,
    pub sample_std_err: Option<f64>,
    pub trials: u64,
    pub seed: Option<u64>,
    /// Trials whose reported block was wrong. Always zero for a correct
    /// simulator.
    pub wrong_answers: u64,
}

/// Where each simulated trial puts the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetPlacement {
    /// Uniform over all `N` addresses.
    #[default]
    Uniform,
    /// Always inside the block the strategy skips, forcing exhaustion.
    SkippedBlock,
}

fn check(n: u64, k: u64) -> Result<()> {
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidInstance(format!(
            "K = {k} must be positive and divide N = {n}"
        )));
    }
    Ok(())
}

/// Closed forms for the randomized and deterministic strategies.
pub fn classical_formulas(n: u64, k: u64) -> Result<ClassicalReport> {
    check(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    Ok(ClassicalReport {
        n,
        k,
        expected_randomized: nf / 2.0 * (1.0 - 1.0 / (kf * kf)),
        deterministic: nf * (1.0 - 1.0 / kf),
        sample_mean: None,
        sample_std_err: None,
        trials: 0,
        seed: None,
        wrong_answers: 0,
    })
}

/// The two-case average behind the randomized lower bound: with
/// probability `1 - 1/K` the target is among the first `N - N/K` probes
/// (mean `(N/2)(1 - 1/K)`), otherwise all `N - N/K` probes are spent.
pub fn two_case_average(n: u64, k: u64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let hit = 1.0 - 1.0 / kf;
    hit * (nf / 2.0) * (1.0 - 1.0 / kf) + (1.0 / kf) * nf * (1.0 - 1.0 / kf)
}

/// Exact expected probes of the randomized strategy. A uniformly placed
/// target among `M = N - N/K` shuffled cells is found after `(M + 1)/2`
/// probes on average, so this exceeds `(N/2)(1 - 1/K²)` by `(1 - 1/K)/2`.
pub fn exact_expected_probes(n: u64, k: u64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let m = nf - nf / kf;
    (1.0 - 1.0 / kf) * (m + 1.0) / 2.0 + (1.0 / kf) * m
}

/// Runs one trial and returns `(probes, reported_block, target_block)`.
fn run_trial(
    rng: &mut ChaCha8Rng,
    n: u64,
    k: u64,
    placement: TargetPlacement,
    order: &mut Vec<u64>,
) -> (u64, u64, u64) {
    let block = n / k;
    let skipped = rng.random_range(0..k);
    let target = match placement {
        TargetPlacement::Uniform => rng.random_range(0..n),
        TargetPlacement::SkippedBlock => skipped * block + rng.random_range(0..block),
    };
    let probed = n - block;
    order.clear();
    order.extend(0..probed);
    // Lazy Fisher-Yates: only shuffle as far as we probe.
    for step in 0..probed as usize {
        let pick = rng.random_range(step..probed as usize);
        order.swap(step, pick);
        let j = order[step];
        let address = if j < skipped * block { j } else { j + block };
        if address == target {
            return (step as u64 + 1, address / block, target / block);
        }
    }
    (probed, skipped, target / block)
}

/// Monte Carlo estimate of the randomized strategy's expected probes.
/// Trial `i` draws from its own ChaCha8 stream `i` under `seed`, so the
/// result does not depend on evaluation order.
pub fn simulate_randomized(n: u64, k: u64, trials: u64, seed: u64) -> Result<ClassicalReport> {
    simulate_with_placement(n, k, trials, seed, TargetPlacement::Uniform)
}

pub fn simulate_with_placement(
    n: u64,
    k: u64,
    trials: u64,
    seed: u64,
    placement: TargetPlacement,
) -> Result<ClassicalReport> {
    check(n, k)?;
    if trials == 0 {
        return Err(Error::InvalidInstance(
            "at least one trial is required".into(),
        ));
    }
    let mut report = classical_formulas(n, k)?;
    let mut order = Vec::with_capacity((n - n / k) as usize);
    // Welford running mean and variance.
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    let mut wrong = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let (probes, reported, actual) = run_trial(&mut rng, n, k, placement, &mut order);
        if reported != actual {
            wrong += 1;
        }
        let x = probes as f64;
        let delta = x - mean;
        mean += delta / (trial + 1) as f64;
        m2 += delta * (x - mean);
    }
    let variance = if trials > 1 {
        m2 / (trials - 1) as f64
    } else {
        0.0
    };
    report.sample_mean = Some(mean);
    report.sample_std_err = Some(libm::sqrt(variance / trials as f64));
    report.trials = trials;
    report.seed = Some(seed);
    report.wrong_answers = wrong;
    Ok(report)
}
