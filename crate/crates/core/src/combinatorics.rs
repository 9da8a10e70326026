//! Binomial coefficients and canonical (colexicographic) labelling of user subsets.
//!
//! Users are numbered `1..=K`. A [`UserSubset`] is stored as a bitmask where bit
//! `u - 1` marks user `u`; for subsets of equal size, numeric order of the masks is
//! exactly colexicographic order, which makes sorting and ranking cheap.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest user count a [`UserSubset`] can hold.
pub const MAX_USERS: usize = 64;

/// `binom(n, m)`, zero when `m > n`. Overflow of `u64` is an error.
pub fn binom(n: u64, m: u64) -> Result<u64> {
    if m > n {
        return Ok(0);
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 0..m {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(Error::Overflow { n, m })?
            / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Overflow { n, m });
        }
    }
    Ok(acc as u64)
}

/// `binom` for the small arguments that appear in scheme bookkeeping.
///
/// Panics on overflow; every call site works with instances that have already
/// passed [`crate::SystemParams`] validation.
pub(crate) fn choose(n: usize, m: usize) -> usize {
    binom(n as u64, m as u64).expect("binomial coefficient overflow") as usize
}

/// A set of users drawn from `[K]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct UserSubset(u64);

impl UserSubset {
    pub const EMPTY: UserSubset = UserSubset(0);

    /// Builds a subset from 1-based user indices. Duplicates and zero are rejected.
    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut mask = 0u64;
        for u in members {
            if u == 0 || u > MAX_USERS {
                return Err(Error::InvalidSubset(format!("user index {u} out of range")));
            }
            let bit = 1u64 << (u - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidSubset(format!("user {u} listed twice")));
            }
            mask |= bit;
        }
        Ok(UserSubset(mask))
    }

    pub fn from_mask(mask: u64) -> Self {
        UserSubset(mask)
    }

    pub fn singleton(user: usize) -> Self {
        debug_assert!((1..=MAX_USERS).contains(&user));
        UserSubset(1u64 << (user - 1))
    }

    /// All of `[k]`.
    pub fn full(k: usize) -> Self {
        debug_assert!(k <= MAX_USERS);
        if k == MAX_USERS {
            UserSubset(u64::MAX)
        } else {
            UserSubset((1u64 << k) - 1)
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, user: usize) -> bool {
        (1..=MAX_USERS).contains(&user) && self.0 & (1u64 << (user - 1)) != 0
    }

    /// Members in ascending order, 1-based.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.members().collect()
    }

    pub fn insert(self, user: usize) -> Self {
        UserSubset(self.0 | UserSubset::singleton(user).0)
    }

    pub fn remove(self, user: usize) -> Self {
        UserSubset(self.0 & !UserSubset::singleton(user).0)
    }

    pub fn union(self, other: Self) -> Self {
        UserSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        UserSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        UserSubset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Position of this subset among all subsets of the same size in colex order.
    pub fn index_of(self) -> usize {
        self.members()
            .enumerate()
            .map(|(i, u)| choose(u - 1, i + 1))
            .sum()
    }

    /// Comma-free label used in share and transmission names (`23` for `{2,3}`).
    /// Falls back to braces when some member has more than one digit.
    pub fn compact(self) -> String {
        if self.members().all(|u| u < 10) {
            self.members().map(|u| u.to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

/// Iterator over the members of a [`UserSubset`].
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(bit + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl fmt::Display for UserSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, u) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for UserSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for UserSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The `size`-subset of `[k]` at colex position `index`.
pub fn subset_at(k: usize, size: usize, index: usize) -> Result<UserSubset> {
    let total = binom(k as u64, size as u64)? as usize;
    if index >= total {
        return Err(Error::InvalidSubset(format!(
            "index {index} out of range for {size}-subsets of [{k}] ({total} total)"
        )));
    }
    let mut rest = index;
    let mut mask = 0u64;
    let mut upper = k;
    for i in (1..=size).rev() {
        // largest c with binom(c, i) <= rest, c < upper
        let mut c = upper - 1;
        while choose(c, i) > rest {
            c -= 1;
        }
        rest -= choose(c, i);
        mask |= 1u64 << c;
        upper = c;
    }
    Ok(UserSubset(mask))
}

/// All `size`-subsets of `[k]` in colexicographic order; empty when `size > k`.
pub fn enumerate_subsets(k: usize, size: usize) -> Vec<UserSubset> {
    assert!(k <= MAX_USERS, "at most {MAX_USERS} users are supported");
    if size > k {
        return Vec::new();
    }
    if size == 0 {
        return vec![UserSubset::EMPTY];
    }
    if size == MAX_USERS {
        return vec![UserSubset::full(MAX_USERS)];
    }
    let mut out = Vec::with_capacity(choose(k, size));
    // Gosper's hack walks same-popcount masks in increasing numeric order.
    let mut mask: u64 = (1u64 << size) - 1;
    let limit = UserSubset::full(k).0;
    loop {
        out.push(UserSubset(mask));
        let c = mask & mask.wrapping_neg();
        let r = mask.wrapping_add(c);
        if r == 0 || r & !limit != 0 {
            break;
        }
        mask = (((r ^ mask) >> 2) / c) | r;
        if mask & !limit != 0 {
            break;
        }
    }
    out
}
