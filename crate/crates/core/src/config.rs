use alloc::format;

use crate::error::{Error, Result};

/// A problem instance: `N` addresses split into `K` contiguous blocks of
/// `N / K` addresses, one of which holds the marked address `target`.
///
/// Block `y` covers addresses `y * N/K .. (y + 1) * N/K`, so for powers of
/// two the block index is the leading `log2 K` bits of the address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockConfig {
    n_addresses: u64,
    n_blocks: u64,
    target: u64,
}

/// `N` must stay exactly representable as an `f64`.
pub const MAX_ADDRESSES: u64 = 1 << 52;

impl BlockConfig {
    pub fn new(n_addresses: u64, n_blocks: u64, target: u64) -> Result<Self> {
        if n_addresses < 2 {
            return Err(Error::InvalidInstance(format!(
                "N must be at least 2, got {n_addresses}"
            )));
        }
        if n_addresses > MAX_ADDRESSES {
            return Err(Error::InvalidInstance(format!(
                "N = {n_addresses} exceeds 2^52"
            )));
        }
        if n_blocks == 0 || n_blocks > n_addresses {
            return Err(Error::InvalidInstance(format!(
                "K must satisfy 1 <= K <= N, got K = {n_blocks}, N = {n_addresses}"
            )));
        }
        if !n_addresses.is_multiple_of(n_blocks) {
            return Err(Error::InvalidInstance(format!(
                "K = {n_blocks} does not divide N = {n_addresses}"
            )));
        }
        if target >= n_addresses {
            return Err(Error::InvalidInstance(format!(
                "target {target} is outside [0, {n_addresses})"
            )));
        }
        Ok(Self {
            n_addresses,
            n_blocks,
            target,
        })
    }

    #[inline]
    pub fn n_addresses(&self) -> u64 {
        self.n_addresses
    }

    #[inline]
    pub fn n_blocks(&self) -> u64 {
        self.n_blocks
    }

    #[inline]
    pub fn target(&self) -> u64 {
        self.target
    }

    /// Addresses per block, `N / K`.
    #[inline]
    pub fn block_size(&self) -> u64 {
        self.n_addresses / self.n_blocks
    }

    #[inline]
    pub fn block_of(&self, x: u64) -> u64 {
        x / self.block_size()
    }

    #[inline]
    pub fn target_block(&self) -> u64 {
        self.block_of(self.target)
    }

    /// Position of the target inside its block.
    #[inline]
    pub fn target_offset(&self) -> u64 {
        self.target % self.block_size()
    }

    /// Same `N` and `K`, different marked address.
    pub fn with_target(&self, target: u64) -> Result<Self> {
        Self::new(self.n_addresses, self.n_blocks, target)
    }

    pub(crate) fn n_f64(&self) -> f64 {
        self.n_addresses as f64
    }

    pub(crate) fn block_size_f64(&self) -> f64 {
        self.block_size() as f64
    }
}
