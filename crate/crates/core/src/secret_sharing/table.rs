use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use super::params::SystemParams;
use super::ramp::{encode_file, share_form};
use crate::combinatorics::{enumerate_subsets, UserSubset};
use crate::error::{Error, Result};
use crate::gf_linear::{Gf256, LinearForm};

/// The `N` server files `W_1..W_N`, each exactly `F` symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileLibrary {
    files: Vec<Vec<Gf256>>,
}

impl FileLibrary {
    pub fn new(params: &SystemParams, files: Vec<Vec<Gf256>>) -> Result<Self> {
        if files.len() != params.n_files() {
            return Err(Error::InvalidParams(format!(
                "library has {} files, expected {}",
                files.len(),
                params.n_files()
            )));
        }
        if let Some(f) = files.iter().find(|f| f.len() != params.file_len()) {
            return Err(Error::DimensionMismatch {
                expected: params.file_len(),
                got: f.len(),
            });
        }
        Ok(FileLibrary { files })
    }

    /// Byte contents zero-padded up to `F`.
    pub fn from_bytes(params: &SystemParams, files: &[Vec<u8>]) -> Result<Self> {
        let padded = files
            .iter()
            .map(|f| {
                if f.len() > params.file_len() {
                    return Err(Error::DimensionMismatch {
                        expected: params.file_len(),
                        got: f.len(),
                    });
                }
                let mut v: Vec<Gf256> = f.iter().copied().map(Gf256).collect();
                v.resize(params.file_len(), Gf256::ZERO);
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, padded)
    }

    pub fn random<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Self {
        let files = (0..params.n_files())
            .map(|_| (0..params.file_len()).map(|_| Gf256(rng.gen())).collect())
            .collect();
        FileLibrary { files }
    }

    /// File `n`, 1-based.
    pub fn file(&self, n: usize) -> &[Gf256] {
        &self.files[n - 1]
    }

    pub fn files(&self) -> &[Vec<Gf256>] {
        &self.files
    }
}

/// Names share `S_file^subset`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ShareLabel {
    pub file: usize,
    pub subset: UserSubset,
}

impl ShareLabel {
    pub fn new(file: usize, subset: UserSubset) -> Self {
        ShareLabel { file, subset }
    }
}

impl fmt::Display for ShareLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}^{}", self.file, self.subset.compact())
    }
}

impl Serialize for ShareLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One share with its payload and the linear provenance of each payload symbol.
#[derive(Clone, Debug)]
pub struct Share {
    pub label: ShareLabel,
    pub payload: Vec<Gf256>,
    pub provenance: Vec<LinearForm>,
}

/// Every share `S_n^A` of every file, plus the sharing randomness that produced them.
#[derive(Clone, Debug)]
pub struct ShareTable {
    params: SystemParams,
    shares: Vec<Share>,
    randomness: Vec<Vec<Gf256>>,
}

impl ShareTable {
    /// Encodes every file, drawing fresh randomness for each from `rng` in file order.
    pub fn build<R: Rng + ?Sized>(
        library: &FileLibrary,
        params: &SystemParams,
        rng: &mut R,
    ) -> Result<Self> {
        let subsets = enumerate_subsets(params.n_users(), params.t());
        let mut shares = Vec::with_capacity(params.n_files() * params.n_shares());
        let mut randomness = Vec::with_capacity(params.n_files());
        for n in 1..=params.n_files() {
            let r: Vec<Gf256> = (0..params.threshold() * params.share_len())
                .map(|_| Gf256(rng.gen()))
                .collect();
            let payloads = encode_file(library.file(n), params, &r)?;
            for (j, (payload, &subset)) in payloads.into_iter().zip(&subsets).enumerate() {
                let provenance = (0..params.share_len())
                    .map(|pos| share_form(params, n, j, pos))
                    .collect();
                shares.push(Share {
                    label: ShareLabel::new(n, subset),
                    payload,
                    provenance,
                });
            }
            randomness.push(r);
        }
        Ok(ShareTable {
            params: *params,
            shares,
            randomness,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    fn position(&self, label: ShareLabel) -> Option<usize> {
        let p = &self.params;
        if label.file == 0
            || label.file > p.n_files()
            || label.subset.len() != p.t()
            || !label.subset.is_subset_of(UserSubset::full(p.n_users()))
        {
            return None;
        }
        Some((label.file - 1) * p.n_shares() + label.subset.index_of())
    }

    pub fn get(&self, label: ShareLabel) -> Option<&Share> {
        self.position(label).map(|i| &self.shares[i])
    }

    pub fn shares(&self) -> &[Share] {
        &self.shares
    }

    /// Sharing randomness of file `n` (1-based), coefficient-major.
    pub fn randomness(&self, n: usize) -> &[Gf256] {
        &self.randomness[n - 1]
    }

    /// Total number of randomness symbols, `N * z * F_s`.
    pub fn randomness_dim(&self) -> usize {
        self.randomness.iter().map(Vec::len).sum()
    }
}
