//! Query-cost calculus for partial search.
//!
//! Step 1 runs `(π/4)(1 - ε)√N` global amplification rounds and stops with
//! the state at angle `θ = (π/2)ε` from the target. Inside the target block
//! the state then sits at angle `θ1` from the target, and Step 2 must carry
//! it a further `θ2` past the target so that the overall mean amplitude is
//! half the non-target amplitude. All quantities below are per `√N`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use libm::{asin, sin, sqrt};

use crate::error::{Error, Result};
use crate::minimize::grid_then_golden;

/// Arcsin arguments in `(1, 1 + CLAMP]` are treated as exactly 1.
pub const ARCSIN_CLAMP: f64 = 1e-12;

/// Grid spacing of the coarse scan in [`optimize_epsilon`].
pub const GRID_STEP: f64 = 1e-4;

/// Default refinement tolerance for [`optimize_epsilon`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Every quantity of the cost analysis at one value of `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub epsilon: f64,
    pub k: u64,
    /// Angle between the state and the target after Step 1.
    pub theta: f64,
    /// Norm of the target block's projection after Step 1.
    pub alpha_t: f64,
    /// Angle of the target-block state from the target before Step 2.
    pub theta1: Option<f64>,
    /// Angle past the target that Step 2 must reach.
    pub theta2: Option<f64>,
    /// Total queries over `√N`, when `ε` is feasible.
    pub coefficient: Option<f64>,
}

impl CostBreakdown {
    pub fn feasible(&self) -> bool {
        self.coefficient.is_some()
    }

    /// `c_K` in `coefficient = (π/4)(1 - c_K)`.
    pub fn savings(&self) -> Option<f64> {
        self.coefficient.map(|c| 1.0 - c / FRAC_PI_4)
    }
}

/// Result of [`optimize_epsilon`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub epsilon: f64,
    pub coefficient: f64,
    pub breakdown: CostBreakdown,
}

/// One row of the upper/lower bound table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub k: u64,
    pub epsilon_star: f64,
    pub upper_coeff: f64,
    pub lower_coeff: f64,
    pub naive_coeff: f64,
}

fn clamped_asin(arg: f64, what: &str) -> Result<f64> {
    if arg > 1.0 + ARCSIN_CLAMP {
        Err(Error::Infeasible(format!(
            "{what}: arcsin argument {arg} exceeds 1"
        )))
    } else {
        Ok(asin(arg.min(1.0)))
    }
}

/// Norm of the target block after Step 1: `sqrt(1 - ((K-1)/K) sin²θ)`.
pub fn alpha_target(theta: f64, k: u64) -> f64 {
    let k = k as f64;
    let s = sin(theta);
    sqrt(1.0 - (k - 1.0) / k * s * s)
}

/// Initial angle inside the target block: `arcsin(sinθ / (α √K))`.
pub fn theta1(theta: f64, k: u64) -> Result<f64> {
    let arg = sin(theta) / (alpha_target(theta, k) * sqrt(k as f64));
    clamped_asin(arg, "theta1 requires sinθ <= α√K")
}

/// Overshoot angle: `arcsin((K-2) sinθ / (2 α √K))`. Feasible iff
/// `sinθ <= 2/√K`.
pub fn theta2(theta: f64, k: u64) -> Result<f64> {
    let kf = k as f64;
    let arg = (kf - 2.0) * sin(theta) / (2.0 * alpha_target(theta, k) * sqrt(kf));
    clamped_asin(arg, "theta2 requires sinθ <= 2/√K")
}

/// `θ = (π/2) ε`, the angle left after Step 1 in the large-`N` limit.
pub fn theta_of_epsilon(epsilon: f64) -> f64 {
    FRAC_PI_2 * epsilon
}

/// Largest feasible `ε` for `K` blocks: `sin((π/2)ε) = min(1, 2/√K)`.
pub fn max_feasible_epsilon(k: u64) -> f64 {
    let edge = (2.0 / sqrt(k as f64)).min(1.0);
    asin(edge) / FRAC_PI_2
}

fn check_k(k: u64) -> Result<()> {
    if k < 2 {
        Err(Error::InvalidInstance(format!(
            "partial search needs K >= 2, got {k}"
        )))
    } else {
        Ok(())
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..=1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::InvalidInstance(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )))
    }
}

/// Breakdown at an explicit post-Step-1 angle `theta`.
pub fn breakdown_at(epsilon: f64, theta: f64, k: u64) -> Result<CostBreakdown> {
    check_k(k)?;
    check_epsilon(epsilon)?;
    let t1 = theta1(theta, k).ok();
    let t2 = theta2(theta, k).ok();
    let coefficient = match (t1, t2) {
        (Some(t1), Some(t2)) => {
            Some(FRAC_PI_4 * (1.0 - epsilon) + (t1 + t2) / (2.0 * sqrt(k as f64)))
        }
        _ => None,
    };
    Ok(CostBreakdown {
        epsilon,
        k,
        theta,
        alpha_t: alpha_target(theta, k),
        theta1: t1,
        theta2: t2,
        coefficient,
    })
}

/// `f(ε, K) = (π/4)(1 - ε) + (θ1 + θ2) / (2√K)`, with `θ = (π/2)ε`.
/// Infeasible `ε` yields a breakdown without a coefficient.
pub fn cost_coefficient(epsilon: f64, k: u64) -> Result<CostBreakdown> {
    breakdown_at(epsilon, theta_of_epsilon(epsilon), k)
}

/// Minimizes the cost coefficient over the feasible `ε` interval.
pub fn optimize_epsilon(k: u64, tol: f64) -> Result<Optimum> {
    check_k(k)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInstance(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let hi = max_feasible_epsilon(k);
    let objective = |e: f64| cost_coefficient(e, k).ok().and_then(|b| b.coefficient);
    let best = grid_then_golden(objective, 0.0, hi, GRID_STEP.min(hi), tol)
        .ok_or_else(|| Error::Infeasible(format!("no feasible epsilon for K = {k}")))?;
    let breakdown = cost_coefficient(best.x, k)?;
    Ok(Optimum {
        epsilon: best.x,
        coefficient: best.value,
        breakdown,
    })
}

/// `(π/4)(1 - 1/√K)`: no partial search algorithm beats this.
pub fn lower_bound_coefficient(k: u64) -> f64 {
    FRAC_PI_4 * (1.0 - 1.0 / sqrt(k as f64))
}

/// `1 - (2/π) arcsin(π/4)`, roughly 0.425.
pub fn large_k_constant() -> f64 {
    1.0 - asin(FRAC_PI_4) / FRAC_PI_2
}

/// Closed-form upper bound obtained at `ε = 1/√K` for large `K`:
/// `(π/4)(1 - 0.425/√K)`.
pub fn large_k_guarantee(k: u64) -> f64 {
    FRAC_PI_4 * (1.0 - large_k_constant() / sqrt(k as f64))
}

/// Searching `K - 1` randomly chosen blocks with plain amplitude
/// amplification: `(π/4)√((K-1)/K)`.
pub fn naive_quantum_coefficient(k: u64) -> f64 {
    let k = k as f64;
    FRAC_PI_4 * sqrt((k - 1.0) / k)
}

/// Queries used by full search built from repeated partial searches that
/// each cost `alpha_coeff · √(size)`: `α√N · √K / (√K - 1)`.
pub fn reduction_total_queries(alpha_coeff: f64, k: u64, n: u64) -> f64 {
    let rk = sqrt(k as f64);
    alpha_coeff * sqrt(n as f64) * rk / (rk - 1.0)
}

pub fn build_table(ks: &[u64]) -> Result<Vec<BoundsRow>> {
    ks.iter()
        .map(|&k| {
            let opt = optimize_epsilon(k, DEFAULT_TOL)?;
            Ok(BoundsRow {
                k,
                epsilon_star: opt.epsilon,
                upper_coeff: opt.coefficient,
                lower_coeff: lower_bound_coefficient(k),
                naive_coeff: naive_quantum_coefficient(k),
            })
        })
        .collect()
}
