use std::ops::Range;

use num_rational::Ratio;
use serde::Serialize;

use crate::combinatorics::{binom, MAX_USERS};
use crate::error::{Error, Result};

/// Instance parameters: `N` files of `F` symbols, `K` users, caching parameter `t`.
///
/// Everything else is derived: the `binom(K,t)` shares per file, the secrecy
/// threshold `z = binom(K-1,t-1)`, the `binom(K,t) - z` file blocks and the share
/// length `F_s = F / blocks`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemParams {
    n_files: usize,
    n_users: usize,
    t: usize,
    file_len: usize,
    n_shares: usize,
    threshold: usize,
    block_count: usize,
    share_len: usize,
    key_count: usize,
    requested_len: usize,
}

impl SystemParams {
    /// `file_len` must be a positive multiple of the block count.
    pub fn new(n_files: usize, n_users: usize, t: usize, file_len: usize) -> Result<Self> {
        let mut p = Self::shape(n_files, n_users, t)?;
        if file_len == 0 || !file_len.is_multiple_of(p.block_count) {
            return Err(Error::InvalidParams(format!(
                "file length {file_len} is not a positive multiple of the block count {}",
                p.block_count
            )));
        }
        p.file_len = file_len;
        p.share_len = file_len / p.block_count;
        p.requested_len = file_len;
        Ok(p)
    }

    /// Smallest valid instance: one symbol per share.
    pub fn minimal(n_files: usize, n_users: usize, t: usize) -> Result<Self> {
        let blocks = Self::shape(n_files, n_users, t)?.block_count;
        Self::new(n_files, n_users, t, blocks)
    }

    /// Rounds `min_len` up to the next multiple of the block count; the zero padding
    /// is recorded in [`SystemParams::padding`].
    pub fn padded(n_files: usize, n_users: usize, t: usize, min_len: usize) -> Result<Self> {
        let blocks = Self::shape(n_files, n_users, t)?.block_count;
        let len = min_len.max(1).div_ceil(blocks) * blocks;
        let mut p = Self::new(n_files, n_users, t, len)?;
        p.requested_len = min_len;
        Ok(p)
    }

    fn shape(n_files: usize, n_users: usize, t: usize) -> Result<Self> {
        if n_files == 0 {
            return Err(Error::InvalidParams("need at least one file".into()));
        }
        if n_users > MAX_USERS {
            return Err(Error::InvalidParams(format!(
                "at most {MAX_USERS} users are supported, got {n_users}"
            )));
        }
        if t < 1 || t + 2 > n_users {
            return Err(Error::InvalidParams(format!(
                "t must lie in 1..=K-2 (K = {n_users}), got t = {t}"
            )));
        }
        let (k, t64) = (n_users as u64, t as u64);
        let n_shares = binom(k, t64)?;
        let threshold = binom(k - 1, t64 - 1)?;
        let block_count = binom(k - 1, t64)?;
        let key_count = binom(k, t64 + 1)?;
        if threshold + block_count != n_shares {
            return Err(Error::InvalidParams("share count identity violated".into()));
        }
        if n_shares > 255 {
            return Err(Error::InvalidParams(format!(
                "binom(K,t) = {n_shares} shares exceed the 255 evaluation points of GF(2^8)"
            )));
        }
        Ok(SystemParams {
            n_files,
            n_users,
            t,
            file_len: 0,
            n_shares: n_shares as usize,
            threshold: threshold as usize,
            block_count: block_count as usize,
            share_len: 0,
            key_count: key_count as usize,
            requested_len: 0,
        })
    }

    /// `N`
    pub fn n_files(&self) -> usize {
        self.n_files
    }

    /// `K`
    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `F`, in field symbols.
    pub fn file_len(&self) -> usize {
        self.file_len
    }

    /// `binom(K,t)`
    pub fn n_shares(&self) -> usize {
        self.n_shares
    }

    /// `z = binom(K-1,t-1)`: any this many shares of a file reveal nothing about it.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// `binom(K,t) - z`, which equals `binom(K-1,t)`.
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// `F_s`
    pub fn share_len(&self) -> usize {
        self.share_len
    }

    /// `binom(K,t+1)`: number of keys, and of transmissions in the keyed scheme.
    pub fn key_count(&self) -> usize {
        self.key_count
    }

    /// Zero symbols appended to reach a multiple of the block count.
    pub fn padding(&self) -> usize {
        self.file_len - self.requested_len.min(self.file_len)
    }

    /// Cache size `M = Nt/(K-t) + 1`, in files.
    pub fn cache_size(&self) -> Ratio<u64> {
        Ratio::new((self.n_files * self.t) as u64, (self.n_users - self.t) as u64) + 1
    }

    /// `F_s / F`
    pub fn share_fraction(&self) -> Ratio<u64> {
        Ratio::new(1, self.block_count as u64)
    }

    pub fn layout(&self) -> VariableLayout {
        VariableLayout {
            n_files: self.n_files,
            file_len: self.file_len,
            threshold: self.threshold,
            share_len: self.share_len,
            key_count: self.key_count,
        }
    }
}

/// Column layout of the variables every observed symbol is a linear function of:
/// all file symbols, then all sharing randomness, then all key symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VariableLayout {
    n_files: usize,
    file_len: usize,
    threshold: usize,
    share_len: usize,
    key_count: usize,
}

impl VariableLayout {
    /// Symbol `symbol` (0-based) of file `file` (1-based).
    pub fn file_var(&self, file: usize, symbol: usize) -> usize {
        debug_assert!(file >= 1 && file <= self.n_files && symbol < self.file_len);
        (file - 1) * self.file_len + symbol
    }

    pub fn file_range(&self, file: usize) -> Range<usize> {
        let start = (file - 1) * self.file_len;
        start..start + self.file_len
    }

    pub fn randomness_start(&self) -> usize {
        self.n_files * self.file_len
    }

    /// Randomness coefficient `coeff` (< z) of file `file` at share position `pos`.
    pub fn rand_var(&self, file: usize, coeff: usize, pos: usize) -> usize {
        debug_assert!(coeff < self.threshold && pos < self.share_len);
        self.randomness_start() + ((file - 1) * self.threshold + coeff) * self.share_len + pos
    }

    pub fn randomness_dim(&self) -> usize {
        self.n_files * self.threshold * self.share_len
    }

    pub fn key_start(&self) -> usize {
        self.randomness_start() + self.randomness_dim()
    }

    /// Symbol `pos` of the key at colex index `key` among the (t+1)-subsets.
    pub fn key_var(&self, key: usize, pos: usize) -> usize {
        debug_assert!(key < self.key_count && pos < self.share_len);
        self.key_start() + key * self.share_len + pos
    }

    pub fn total(&self) -> usize {
        self.key_start() + self.key_count * self.share_len
    }
}
