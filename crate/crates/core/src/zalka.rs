//! Numeric checks of the hybrid argument behind the full-search lower bound.
//!
//! For an algorithm making `T` queries, `φ_t` denotes the state just before
//! query `t + 1` when every oracle call is replaced by the identity, and
//! `φ_T^{y,i}` the final state when the first `T - i` calls use the
//! identity and the last `i` use the oracle marking `y`. Consecutive
//! hybrids differ by at most `2 arcsin √p_{T-i,y}`, where `p_{t,y}` is the
//! probability of address `y` in `φ_t`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use libm::{asin, log, pow, sqrt};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::BlockConfig;
use crate::error::{Error, Result};
use crate::partial_search::PipelineScript;
use crate::reduced::Operator;
use crate::statevector::DenseState;

const UNIT_TOLERANCE: f64 = 1e-6;

/// `arccos |<v|w>|`, the angle between two unit states up to global phase.
///
/// Evaluated as `2 arcsin(‖v - e^{iφ} w‖ / 2)` with the phase aligning the
/// two states, which stays accurate when the states nearly coincide.
pub fn angle_distance(v: &DenseState, w: &DenseState) -> Result<f64> {
    for s in [v, w] {
        if libm::fabs(s.norm_sqr() - 1.0) > UNIT_TOLERANCE {
            return Err(Error::InvalidInstance(alloc::format!(
                "angle distance needs unit states, got squared norm {}",
                s.norm_sqr()
            )));
        }
    }
    let overlap = v.inner(w)?;
    let magnitude = overlap.norm();
    if magnitude == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let phase = overlap.conj() / magnitude;
    let dist_sqr: f64 = v
        .amplitudes()
        .iter()
        .zip(w.amplitudes())
        .map(|(a, b)| (a - phase * b).norm_sqr())
        .sum();
    Ok(2.0 * asin((sqrt(dist_sqr) / 2.0).min(1.0)))
}

/// The lower bound on queries for a search that errs with probability at
/// most `err`, with the unspecified constant made explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErringSearchBound {
    pub queries: f64,
    /// Whether `N >= 100` and `err <= 0.1`, the regime the bound is
    /// stated for.
    pub in_regime: bool,
}

/// `(π/4)√N (1 - C(√err + N^{-1/4}))`, floored at zero.
pub fn zalka_error_bound(n: u64, err: f64, hidden_const: f64) -> ErringSearchBound {
    let nf = n as f64;
    let shrink = hidden_const * (sqrt(err) + pow(nf, -0.25));
    ErringSearchBound {
        queries: (FRAC_PI_4 * sqrt(nf) * (1.0 - shrink)).max(0.0),
        in_regime: n >= 100 && (0.0..=0.1).contains(&err),
    }
}

/// Runs `script` densely. Query number `q` (0-based) uses the oracle
/// marking `marked` when `q >= real_from`, the identity otherwise.
/// `before_query` sees the register just before every query.
fn run_hybrid(
    cfg: &BlockConfig,
    script: &PipelineScript,
    cap: u64,
    marked: u64,
    real_from: u64,
    mut before_query: impl FnMut(&DenseState),
) -> Result<DenseState> {
    let mut state = DenseState::uniform_capped(cfg.n_addresses(), false, cap)?;
    let mut query = 0u64;
    for &op in script.ops() {
        match op {
            Operator::Oracle => {
                before_query(&state);
                if query >= real_from {
                    state.invert_address(marked);
                }
                query += 1;
            }
            Operator::GlobalDiffusion => state.global_diffusion()?,
            Operator::BlockDiffusion => state.block_diffusion(cfg)?,
            Operator::Step3 => {
                if !state.has_ancilla() {
                    state.attach_ancilla()?;
                }
                before_query(&state);
                if query >= real_from {
                    state.move_out(marked)?;
                }
                state.controlled_diffusion()?;
                query += 1;
            }
        }
    }
    Ok(state)
}

/// Hybrid final states `φ_T^{y,0..=T}` for one marked address `y`, plus
/// the identity-run probabilities `p_{t,y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridTrajectory {
    /// Instance; its target is the marked address `y`.
    pub config: BlockConfig,
    pub script: PipelineScript,
    /// `states[i]` is `φ_T^{y,i}`.
    pub states: Vec<DenseState>,
    /// `probs[t]` is `p_{t,y}` for `t` in `0..T`.
    pub probs: Vec<f64>,
}

impl HybridTrajectory {
    pub fn build(cfg: &BlockConfig, script: &PipelineScript, cap: u64) -> Result<Self> {
        let y = cfg.target();
        let total = script.queries();
        let mut probs = Vec::with_capacity(total as usize);
        let identity = run_hybrid(cfg, script, cap, y, total, |s| {
            probs.push(s.address_probability(y))
        })?;
        let mut states = Vec::with_capacity(total as usize + 1);
        states.push(identity);
        for i in 1..=total {
            states.push(run_hybrid(cfg, script, cap, y, total - i, |_| {})?);
        }
        Ok(Self {
            config: *cfg,
            script: script.clone(),
            states,
            probs,
        })
    }

    /// Number of queries `T`.
    pub fn queries(&self) -> usize {
        self.probs.len()
    }

    /// `θ(φ_T, φ_T^y)`: identity run against the all-oracle run.
    pub fn end_to_end_angle(&self) -> Result<f64> {
        angle_distance(&self.states[0], &self.states[self.queries()])
    }

    /// `Σ_t 2 arcsin √p_{t,y}`.
    pub fn budget(&self) -> f64 {
        self.probs.iter().map(|&p| 2.0 * arcsin_sqrt(p)).sum()
    }
}

/// `margins[i - 1] = 2 arcsin √p_{T-i,y} - θ(φ_T^{y,i-1}, φ_T^{y,i})` for
/// `i = 1..=T`. Each margin is non-negative up to rounding.
pub fn check_lemma2(traj: &HybridTrajectory) -> Result<Vec<f64>> {
    let t = traj.queries();
    (1..=t)
        .map(|i| {
            let step = angle_distance(&traj.states[i - 1], &traj.states[i])?;
            Ok(2.0 * arcsin_sqrt(traj.probs[t - i]) - step)
        })
        .collect()
}

/// `Σ_y θ(φ_T, φ_T^y)` against `(π/2) N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSumDiagnostic {
    pub sum_of_angles: f64,
    pub reference: f64,
}

impl AngleSumDiagnostic {
    pub fn ratio(&self) -> f64 {
        self.sum_of_angles / self.reference
    }
}

/// Sums the end-to-end angle over every marked address. Reported, not
/// judged: the constant in the matching bound is unspecified.
pub fn check_lemma1(
    cfg: &BlockConfig,
    script: &PipelineScript,
    cap: u64,
) -> Result<AngleSumDiagnostic> {
    let n = cfg.n_addresses();
    let total = script.queries();
    let identity = run_hybrid(cfg, script, cap, 0, total, |_| {})?;
    let mut sum = 0.0;
    for y in 0..n {
        let marked = run_hybrid(cfg, script, cap, y, 0, |_| {})?;
        sum += angle_distance(&identity, &marked)?;
    }
    Ok(AngleSumDiagnostic {
        sum_of_angles: sum,
        reference: FRAC_PI_2 * n as f64,
    })
}

#[inline]
pub fn arcsin_sqrt(p: f64) -> f64 {
    asin(sqrt(p.clamp(0.0, 1.0)))
}

/// `Σ_y arcsin √p_y`.
pub fn arcsin_sqrt_sum(p: &[f64]) -> f64 {
    p.iter().map(|&x| arcsin_sqrt(x)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Report {
    pub n: u64,
    /// Largest `Σ arcsin √p_y` seen over all checked distributions.
    pub max_sum: f64,
    /// `N arcsin(1/√N)`, attained by the uniform distribution.
    pub bound: f64,
    pub distributions_checked: u64,
    pub seed: u64,
}

impl Lemma3Report {
    pub fn holds(&self, slack: f64) -> bool {
        self.max_sum <= self.bound + slack
    }
}

fn dirichlet_uniform(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    for x in out.iter_mut() {
        // 1 - U lies in (0, 1], so the log is finite.
        *x = -log(1.0 - rng.random::<f64>());
    }
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= total);
}

/// Checks `Σ_y arcsin √p_y <= N arcsin(1/√N)` on `samples` flat-Dirichlet
/// draws plus structured corners: point masses, two-point mixtures, one
/// heavy entry over a uniform rest, and small perturbations of uniform.
pub fn check_lemma3(n: u64, samples: u64, seed: u64) -> Result<Lemma3Report> {
    if n < 2 || samples == 0 {
        return Err(Error::InvalidInstance(alloc::format!(
            "need N >= 2 and at least one sample, got N = {n}, samples = {samples}"
        )));
    }
    let len = n as usize;
    let nf = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_sum = f64::NEG_INFINITY;
    let mut checked = 0u64;
    let mut consider = |p: &[f64]| {
        max_sum = max_sum.max(arcsin_sqrt_sum(p));
        checked += 1;
    };

    let mut p = vec![0.0; len];
    consider(&vec![1.0 / nf; len]);
    for y in 0..len {
        p.fill(0.0);
        p[y] = 1.0;
        consider(&p);
    }
    for step in 0..=20 {
        let w = step as f64 / 20.0;
        p.fill(0.0);
        p[0] = w;
        p[len - 1] = 1.0 - w;
        consider(&p);
        p.fill((1.0 - w) / (nf - 1.0));
        p[0] = w;
        consider(&p);
    }
    for scale in [1e-6, 1e-4, 1e-2, 0.1, 0.5] {
        for _ in 0..100 {
            let noise: Vec<f64> = (0..len).map(|_| rng.random::<f64>() - 0.5).collect();
            let mean = noise.iter().sum::<f64>() / nf;
            for (x, e) in p.iter_mut().zip(&noise) {
                *x = ((1.0 + scale * (e - mean)) / nf).max(0.0);
            }
            let total: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= total);
            consider(&p);
        }
    }
    for _ in 0..samples {
        dirichlet_uniform(&mut rng, &mut p);
        consider(&p);
    }
    Ok(Lemma3Report {
        n,
        max_sum,
        bound: nf * asin(1.0 / sqrt(nf)),
        distributions_checked: checked,
        seed,
    })
}

/// Random unit state of `n` complex amplitudes.
pub fn random_unit_state(rng: &mut impl Rng, n: u64) -> DenseState {
    let amps: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = sqrt(amps.iter().map(Complex64::norm_sqr).sum::<f64>());
    DenseState::from_amplitudes(amps.into_iter().map(|a| a / norm).collect(), false)
        .expect("normalized by construction")
}
