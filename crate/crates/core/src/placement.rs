//! Cache placement: shares `S_n^A` go to every user in `A`, keys `T_A` to every user
//! in the `(t+1)`-subset `A`.
//!
//! Caches hold labels only. Payloads live once in the [`ShareTable`] and
//! [`KeyRegistry`], so the same symbol is identified across caches and
//! transmissions; a [`CacheView`] resolves labels for one user and refuses
//! anything that user does not hold.

use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{choose, enumerate_subsets, UserSubset};
use crate::error::{Error, Result};
use crate::gf_linear::{Gf256, LinearForm};
use crate::secret_sharing::{FileLibrary, ShareLabel, ShareTable, SystemParams};

/// Names key `T_A`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct KeyLabel(pub UserSubset);

impl fmt::Display for KeyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T_{}", self.0.compact())
    }
}

/// One uniform key of `F_s` symbols per `(t+1)`-subset, indexed in colex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyRegistry {
    params: SystemParams,
    keys: Vec<Vec<Gf256>>,
}

impl KeyRegistry {
    pub fn generate<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Self {
        let keys = (0..params.key_count())
            .map(|_| (0..params.share_len()).map(|_| Gf256(rng.gen())).collect())
            .collect();
        KeyRegistry {
            params: *params,
            keys,
        }
    }

    fn position(&self, subset: UserSubset) -> Option<usize> {
        (subset.len() == self.params.t() + 1
            && subset.is_subset_of(UserSubset::full(self.params.n_users())))
        .then(|| subset.index_of())
    }

    pub fn get(&self, subset: UserSubset) -> Option<&[Gf256]> {
        self.position(subset).map(|i| self.keys[i].as_slice())
    }

    /// Key symbol `pos` of `T_subset` is its own variable.
    pub fn provenance(&self, subset: UserSubset, pos: usize) -> Option<LinearForm> {
        self.position(subset)
            .map(|i| LinearForm::unit(self.params.layout().key_var(i, pos)))
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[Vec<Gf256>] {
        &self.keys
    }
}

/// `Z_k`: the labels of everything user `k` caches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheContents {
    pub user: usize,
    pub cached_shares: Vec<ShareLabel>,
    pub cached_keys: Vec<UserSubset>,
}

impl CacheContents {
    /// Applies the membership rule for user `k`.
    pub fn for_user(params: &SystemParams, k: usize) -> Self {
        let cached_shares = (1..=params.n_files())
            .flat_map(|n| {
                enumerate_subsets(params.n_users(), params.t())
                    .into_iter()
                    .filter(move |a| a.contains(k))
                    .map(move |a| ShareLabel::new(n, a))
            })
            .collect();
        let cached_keys = enumerate_subsets(params.n_users(), params.t() + 1)
            .into_iter()
            .filter(|a| a.contains(k))
            .collect();
        CacheContents {
            user: k,
            cached_shares,
            cached_keys,
        }
    }

    pub fn holds_share(&self, label: ShareLabel) -> bool {
        self.cached_shares.binary_search(&label).is_ok()
    }

    pub fn holds_key(&self, subset: UserSubset) -> bool {
        self.cached_keys.binary_search(&subset).is_ok()
    }
}

/// A complete placement: shares, keys and all `K` caches.
#[derive(Clone, Debug)]
pub struct Placement {
    params: SystemParams,
    shares: ShareTable,
    keys: KeyRegistry,
    caches: Vec<CacheContents>,
    seed: u64,
}

/// Encodes every file, draws every key and fills every cache. Deterministic in `seed`.
pub fn build_placement(library: &FileLibrary, params: &SystemParams, seed: u64) -> Result<Placement> {
    if library.files().len() != params.n_files()
        || library.files().iter().any(|f| f.len() != params.file_len())
    {
        return Err(Error::InvalidParams(
            "library does not match the system parameters".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shares = ShareTable::build(library, params, &mut rng)?;
    let keys = KeyRegistry::generate(params, &mut rng);
    let caches = (1..=params.n_users())
        .map(|k| CacheContents::for_user(params, k))
        .collect();
    Ok(Placement {
        params: *params,
        shares,
        keys,
        caches,
        seed,
    })
}

impl Placement {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn shares(&self) -> &ShareTable {
        &self.shares
    }

    pub fn keys(&self) -> &KeyRegistry {
        &self.keys
    }

    pub fn caches(&self) -> &[CacheContents] {
        &self.caches
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Cache of user `k`, 1-based.
    pub fn cache(&self, k: usize) -> &CacheContents {
        &self.caches[k - 1]
    }

    pub fn view(&self, k: usize) -> CacheView<'_> {
        CacheView {
            contents: self.cache(k),
            shares: &self.shares,
            keys: &self.keys,
        }
    }

    /// Same shares and caches with a fresh key registry for delivery epoch `epoch`.
    pub fn rekeyed(&self, epoch: u64) -> Placement {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(epoch.wrapping_add(1));
        Placement {
            keys: KeyRegistry::generate(&self.params, &mut rng),
            ..self.clone()
        }
    }

    /// Value of every variable of [`SystemParams::layout`] in this instance.
    pub fn assignment(&self, library: &FileLibrary) -> Vec<Gf256> {
        let layout = self.params.layout();
        let mut x = vec![Gf256::ZERO; layout.total()];
        let fs = self.params.share_len();
        for n in 1..=self.params.n_files() {
            x[layout.file_range(n)].copy_from_slice(library.file(n));
            for (i, &r) in self.shares.randomness(n).iter().enumerate() {
                x[layout.rand_var(n, i / fs, i % fs)] = r;
            }
        }
        for (key, payload) in self.keys.keys().iter().enumerate() {
            for (pos, &v) in payload.iter().enumerate() {
                x[layout.key_var(key, pos)] = v;
            }
        }
        x
    }

    /// Test fixture hook: drops one share label from user `k`'s cache.
    pub fn remove_cached_share(&mut self, k: usize, label: ShareLabel) -> bool {
        let cache = &mut self.caches[k - 1];
        let before = cache.cached_shares.len();
        cache.cached_shares.retain(|l| *l != label);
        before != cache.cached_shares.len()
    }
}

/// Read access to exactly what one user caches.
#[derive(Clone, Copy)]
pub struct CacheView<'a> {
    contents: &'a CacheContents,
    shares: &'a ShareTable,
    keys: &'a KeyRegistry,
}

impl<'a> CacheView<'a> {
    pub fn user(&self) -> usize {
        self.contents.user
    }

    pub fn contents(&self) -> &'a CacheContents {
        self.contents
    }

    pub fn share(&self, label: ShareLabel) -> Result<&'a [Gf256]> {
        if !self.contents.holds_share(label) {
            return Err(Error::NotCached {
                user: self.user(),
                item: label.to_string(),
            });
        }
        Ok(&self.shares.get(label).expect("cached label exists").payload)
    }

    pub fn key(&self, subset: UserSubset) -> Result<&'a [Gf256]> {
        if !self.contents.holds_key(subset) {
            return Err(Error::NotCached {
                user: self.user(),
                item: KeyLabel(subset).to_string(),
            });
        }
        Ok(self.keys.get(subset).expect("cached key exists"))
    }

    /// Ground truth for debug-build cross-checks; never used to produce output.
    #[cfg(debug_assertions)]
    pub(crate) fn ground_truth(&self, label: ShareLabel) -> Option<&'a [Gf256]> {
        self.shares.get(label).map(|s| s.payload.as_slice())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct UserMemory {
    pub user: usize,
    pub shares: usize,
    pub keys: usize,
    pub share_symbols: usize,
    pub key_symbols: usize,
    pub total_symbols: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MemoryReport {
    /// `M` as a reduced fraction, e.g. `7/2`.
    pub cache_size: String,
    pub expected_symbols: String,
    pub users: Vec<UserMemory>,
}

impl MemoryReport {
    pub fn all_ok(&self) -> bool {
        self.users.iter().all(|u| u.ok)
    }

    pub fn flagged(&self) -> Vec<usize> {
        self.users.iter().filter(|u| !u.ok).map(|u| u.user).collect()
    }
}

/// Per-user symbol counts, checked against `M * F`.
pub fn memory_report(caches: &[CacheContents], params: &SystemParams) -> MemoryReport {
    let m = params.cache_size();
    let expected = m * Ratio::from_integer(params.file_len() as u64);
    let fs = params.share_len();
    let users = caches
        .iter()
        .map(|c| {
            let share_symbols = c.cached_shares.len() * fs;
            let key_symbols = c.cached_keys.len() * fs;
            let total = share_symbols + key_symbols;
            UserMemory {
                user: c.user,
                shares: c.cached_shares.len(),
                keys: c.cached_keys.len(),
                share_symbols,
                key_symbols,
                total_symbols: total,
                ok: Ratio::from_integer(total as u64) == expected,
            }
        })
        .collect();
    MemoryReport {
        cache_size: m.to_string(),
        expected_symbols: expected.to_string(),
        users,
    }
}

/// Expected cached share and key counts per user.
pub fn expected_counts(params: &SystemParams) -> (usize, usize) {
    let (k, t) = (params.n_users(), params.t());
    (params.n_files() * choose(k - 1, t - 1), choose(k - 1, t))
}
