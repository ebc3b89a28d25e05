//! Dense statevector backend.
//!
//! Every amplitude is stored explicitly, so memory grows linearly in `N`.
//! This is the reference the reduced backend is checked against. An
//! optional ancilla qubit doubles the register; amplitudes are then laid
//! out address-major, i.e. index `2 * x + b` holds `|x>|b>`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::config::BlockConfig;
use crate::error::{Error, Result};
use crate::DEFAULT_DENSE_CAP;

const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    amplitudes: Vec<Complex64>,
    n_addresses: u64,
    has_ancilla: bool,
}

pub(crate) fn check_cap(n: u64, cap: u64) -> Result<()> {
    if n > cap {
        Err(Error::DenseCapExceeded { n, cap })
    } else {
        Ok(())
    }
}

impl DenseState {
    /// The uniform superposition over all `n` addresses. With an ancilla,
    /// the ancilla is in `|0>`.
    pub fn uniform(n: u64, with_ancilla: bool) -> Result<Self> {
        Self::uniform_capped(n, with_ancilla, DEFAULT_DENSE_CAP)
    }

    pub fn uniform_capped(n: u64, with_ancilla: bool, cap: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance(alloc::format!(
                "a register needs at least 2 addresses, got {n}"
            )));
        }
        check_cap(n, cap)?;
        let amp = Complex64::new(1.0 / libm::sqrt(n as f64), 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let amplitudes = if with_ancilla {
            (0..2 * n)
                .map(|i| if i % 2 == 0 { amp } else { zero })
                .collect()
        } else {
            vec![amp; n as usize]
        };
        Ok(Self {
            amplitudes,
            n_addresses: n,
            has_ancilla: with_ancilla,
        })
    }

    /// Wraps caller-provided amplitudes. The length must be `n` or `2n`
    /// (matching `has_ancilla`) and the state must be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, has_ancilla: bool) -> Result<Self> {
        let len = amplitudes.len() as u64;
        let n_addresses = if has_ancilla { len / 2 } else { len };
        if n_addresses < 2 || (has_ancilla && !len.is_multiple_of(2)) {
            return Err(Error::InvalidInstance(alloc::format!(
                "amplitude vector of length {len} does not describe a register"
            )));
        }
        let state = Self {
            amplitudes,
            n_addresses,
            has_ancilla,
        };
        if libm::fabs(state.norm_sqr() - 1.0) > NORM_TOLERANCE {
            return Err(Error::InvalidInstance(alloc::format!(
                "state is not normalized (squared norm {})",
                state.norm_sqr()
            )));
        }
        Ok(state)
    }

    /// Real amplitudes convenience constructor.
    pub fn from_real(amplitudes: &[f64], has_ancilla: bool) -> Result<Self> {
        Self::from_amplitudes(
            amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            has_ancilla,
        )
    }

    #[inline]
    pub fn n_addresses(&self) -> u64 {
        self.n_addresses
    }

    #[inline]
    pub fn has_ancilla(&self) -> bool {
        self.has_ancilla
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    fn index(&self, x: u64, branch: u64) -> usize {
        if self.has_ancilla {
            (2 * x + branch) as usize
        } else {
            x as usize
        }
    }

    /// Amplitude of `|x>` (ancilla branch 0 when present).
    pub fn amplitude(&self, x: u64) -> Complex64 {
        self.amplitudes[self.index(x, 0)]
    }

    /// Amplitude of `|x>|1>`; zero when there is no ancilla.
    pub fn ancilla_amplitude(&self, x: u64) -> Complex64 {
        if self.has_ancilla {
            self.amplitudes[self.index(x, 1)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::ShapeMismatch {
                state: self.amplitudes.len() as u64,
                config: other.amplitudes.len() as u64,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest `|a_i - b_i|` over all entries.
    pub fn max_abs_diff(&self, other: &DenseState) -> Result<f64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::ShapeMismatch {
                state: self.amplitudes.len() as u64,
                config: other.amplitudes.len() as u64,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_shape(&self, cfg: &BlockConfig) -> Result<()> {
        if self.n_addresses != cfg.n_addresses() {
            Err(Error::ShapeMismatch {
                state: self.n_addresses,
                config: cfg.n_addresses(),
            })
        } else {
            Ok(())
        }
    }

    /// The phase oracle `O_x`: negates `|x>` in every ancilla branch.
    pub fn invert_address(&mut self, x: u64) {
        let i = self.index(x, 0);
        self.amplitudes[i] = -self.amplitudes[i];
        if self.has_ancilla {
            self.amplitudes[i + 1] = -self.amplitudes[i + 1];
        }
    }

    /// One oracle query: negates the target amplitude.
    pub fn invert_target(&mut self, cfg: &BlockConfig) -> Result<()> {
        self.check_shape(cfg)?;
        self.invert_address(cfg.target());
        Ok(())
    }

    /// `x -> 2m - x` over the whole register.
    pub fn global_diffusion(&mut self) -> Result<()> {
        if self.has_ancilla {
            return Err(Error::Contract(
                "global diffusion acts on the bare address register",
            ));
        }
        reflect_about_mean(&mut self.amplitudes);
        Ok(())
    }

    /// Inversion about the mean inside every block independently.
    pub fn block_diffusion(&mut self, cfg: &BlockConfig) -> Result<()> {
        self.check_shape(cfg)?;
        if self.has_ancilla {
            return Err(Error::Contract(
                "block diffusion acts on the bare address register",
            ));
        }
        let size = cfg.block_size() as usize;
        for block in self.amplitudes.chunks_exact_mut(size) {
            reflect_about_mean(block);
        }
        Ok(())
    }

    /// Appends an ancilla qubit in `|0>`.
    pub fn attach_ancilla(&mut self) -> Result<()> {
        if self.has_ancilla {
            return Err(Error::Contract("ancilla already attached"));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut widened = Vec::with_capacity(2 * self.amplitudes.len());
        for &a in &self.amplitudes {
            widened.push(a);
            widened.push(zero);
        }
        self.amplitudes = widened;
        self.has_ancilla = true;
        Ok(())
    }

    /// The oracle `M` for marked address `x`: flips the ancilla on `|x>`.
    pub fn move_out(&mut self, x: u64) -> Result<()> {
        if !self.has_ancilla {
            return Err(Error::Contract("moving the target out needs an ancilla"));
        }
        let i = self.index(x, 0);
        self.amplitudes.swap(i, i + 1);
        Ok(())
    }

    /// Inversion about the mean of ancilla branch 0, leaving branch 1 alone.
    pub fn controlled_diffusion(&mut self) -> Result<()> {
        if !self.has_ancilla {
            return Err(Error::Contract("controlled diffusion needs an ancilla"));
        }
        let n = self.n_addresses as f64;
        let mean: Complex64 = self.amplitudes.iter().step_by(2).sum::<Complex64>() / n;
        for a in self.amplitudes.iter_mut().step_by(2) {
            *a = 2.0 * mean - *a;
        }
        Ok(())
    }

    /// The final query: moves the target to ancilla branch 1, then inverts
    /// branch 0 about its mean. Branch 1 must start empty.
    pub fn step3_transfer(&mut self, cfg: &BlockConfig) -> Result<()> {
        self.check_shape(cfg)?;
        if !self.has_ancilla {
            return Err(Error::Contract("the transfer step needs an ancilla"));
        }
        if self
            .amplitudes
            .iter()
            .skip(1)
            .step_by(2)
            .any(|a| a.norm_sqr() != 0.0)
        {
            return Err(Error::Contract(
                "ancilla branch 1 must be empty before the transfer step",
            ));
        }
        self.move_out(cfg.target())?;
        self.controlled_diffusion()
    }

    /// Probability of observing address `x`, summed over ancilla branches.
    pub fn address_probability(&self, x: u64) -> f64 {
        self.amplitude(x).norm_sqr() + self.ancilla_amplitude(x).norm_sqr()
    }

    /// Measurement distribution of the block index.
    pub fn block_probabilities(&self, cfg: &BlockConfig) -> Result<Vec<f64>> {
        self.check_shape(cfg)?;
        let per_block = cfg.block_size() as usize * if self.has_ancilla { 2 } else { 1 };
        Ok(self
            .amplitudes
            .chunks_exact(per_block)
            .map(|block| block.iter().map(Complex64::norm_sqr).sum())
            .collect())
    }

    /// Largest imaginary part magnitude; the implemented dynamics are real.
    pub fn max_imag(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| libm::fabs(a.im))
            .fold(0.0, f64::max)
    }
}

fn reflect_about_mean(values: &mut [Complex64]) {
    let mean = values.iter().sum::<Complex64>() / values.len() as f64;
    for v in values {
        *v = 2.0 * mean - *v;
    }
}
