//! Symmetry-reduced backend.
//!
//! Every operator in the partial search pipeline commutes with permutations
//! that fix the target and keep blocks together. Starting from the uniform
//! state, the register is therefore always described by four reals:
//!
//! * `a`: the target amplitude (ancilla branch 0),
//! * `b`: each of the `N/K - 1` other addresses in the target block,
//! * `c`: each of the `N - N/K` addresses outside the target block,
//! * `d`: the target amplitude in ancilla branch 1, after it was moved out.
//!
//! Operators act on these in O(1), independent of `N`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::config::BlockConfig;
use crate::error::{Error, Result};
use crate::statevector::{check_cap, DenseState};

/// The operators a pipeline is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    /// Sign flip on the target (one query).
    Oracle,
    /// Inversion about the mean of the whole register.
    GlobalDiffusion,
    /// Inversion about the mean inside each block.
    BlockDiffusion,
    /// Move the target into an ancilla, then invert the remaining branch
    /// about its mean (one query).
    Step3,
}

impl Operator {
    /// Oracle calls this operator costs.
    pub fn queries(self) -> u64 {
        match self {
            Operator::Oracle | Operator::Step3 => 1,
            Operator::GlobalDiffusion | Operator::BlockDiffusion => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Operator::Oracle => "oracle",
            Operator::GlobalDiffusion => "global_diffusion",
            Operator::BlockDiffusion => "block_diffusion",
            Operator::Step3 => "step3",
        }
    }
}

impl core::str::FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Operator::Oracle),
            "global_diffusion" => Ok(Operator::GlobalDiffusion),
            "block_diffusion" => Ok(Operator::BlockDiffusion),
            "step3" => Ok(Operator::Step3),
            _ => Err(Error::Script("unknown operator name")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    cfg: BlockConfig,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    moved_out: bool,
}

impl ReducedState {
    /// The uniform superposition.
    pub fn new(cfg: BlockConfig) -> Self {
        let r = 1.0 / libm::sqrt(cfg.n_f64());
        Self {
            cfg,
            a: r,
            b: r,
            c: r,
            d: 0.0,
            moved_out: false,
        }
    }

    pub fn config(&self) -> &BlockConfig {
        &self.cfg
    }

    /// `(a, b, c, d)`.
    pub fn components(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Whether the transfer step has run (an ancilla is in play).
    pub fn moved_out(&self) -> bool {
        self.moved_out
    }

    fn mates(&self) -> f64 {
        self.cfg.block_size_f64() - 1.0
    }

    fn outsiders(&self) -> f64 {
        self.cfg.n_f64() - self.cfg.block_size_f64()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a
            + self.mates() * self.b * self.b
            + self.outsiders() * self.c * self.c
            + self.d * self.d
    }

    /// Applies `op` and returns the number of queries it cost.
    pub fn apply(&mut self, op: Operator) -> Result<u64> {
        match op {
            Operator::Oracle => {
                self.a = -self.a;
                self.d = -self.d;
            }
            Operator::GlobalDiffusion => {
                if self.moved_out {
                    return Err(Error::Contract(
                        "global diffusion acts on the bare address register",
                    ));
                }
                let m =
                    (self.a + self.mates() * self.b + self.outsiders() * self.c) / self.cfg.n_f64();
                self.a = 2.0 * m - self.a;
                self.b = 2.0 * m - self.b;
                self.c = 2.0 * m - self.c;
            }
            Operator::BlockDiffusion => {
                if self.moved_out {
                    return Err(Error::Contract(
                        "block diffusion acts on the bare address register",
                    ));
                }
                // Non-target blocks are uniform, hence fixed.
                let m = (self.a + self.mates() * self.b) / self.cfg.block_size_f64();
                self.a = 2.0 * m - self.a;
                self.b = 2.0 * m - self.b;
            }
            Operator::Step3 => {
                if self.moved_out || self.d != 0.0 {
                    return Err(Error::Contract(
                        "ancilla branch 1 must be empty before the transfer step",
                    ));
                }
                self.d = self.a;
                self.moved_out = true;
                let m = (self.mates() * self.b + self.outsiders() * self.c) / self.cfg.n_f64();
                self.a = 2.0 * m;
                self.b = 2.0 * m - self.b;
                self.c = 2.0 * m - self.c;
            }
        }
        Ok(op.queries())
    }

    /// Probability of measuring the exact target address.
    pub fn target_probability(&self) -> f64 {
        self.a * self.a + self.d * self.d
    }

    pub fn block_probabilities(&self) -> Vec<f64> {
        let k = self.cfg.n_blocks() as usize;
        let mut probs = vec![self.cfg.block_size_f64() * self.c * self.c; k];
        probs[self.cfg.target_block() as usize] =
            self.target_probability() + self.mates() * self.b * self.b;
        probs
    }

    /// Expands to the full statevector. Refuses registers above `cap`.
    pub fn lift_to_dense(&self, cap: u64) -> Result<DenseState> {
        let n = self.cfg.n_addresses();
        check_cap(n, cap)?;
        let t = self.cfg.target();
        let target_block = self.cfg.target_block();
        let value = |x: u64| -> f64 {
            if x == t {
                self.a
            } else if self.cfg.block_of(x) == target_block {
                self.b
            } else {
                self.c
            }
        };
        let re = |v: f64| Complex64::new(v, 0.0);
        let amplitudes: Vec<Complex64> = if self.moved_out {
            (0..n)
                .flat_map(|x| {
                    let d = if x == t { self.d } else { 0.0 };
                    [re(value(x)), re(d)]
                })
                .collect()
        } else {
            (0..n).map(|x| re(value(x))).collect()
        };
        DenseState::from_amplitudes(amplitudes, self.moved_out)
    }
}
