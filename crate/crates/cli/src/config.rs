use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use scc_core::delivery::{DemandVector, Scheme};
use scc_core::placement::{build_placement, Placement};
use scc_core::rate_analysis::AverageMode;
use scc_core::secret_sharing::FileLibrary;
use scc_core::SystemParams;

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    #[default]
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum RateMode {
    /// Exact enumeration within `exact_budget`, monte-carlo beyond it.
    #[default]
    Auto,
    Exact,
    Collapsed,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FileLen {
    Auto(AutoTag),
    Symbols(usize),
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Default for FileLen {
    fn default() -> Self {
        FileLen::Auto(AutoTag::Auto)
    }
}

/// Cartesian grid of instances; `N` defaults to `K` when absent.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(rename = "N")]
    pub n: Option<Vec<usize>>,
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    pub t: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub t: Option<usize>,
    #[serde(rename = "F", default)]
    pub file_len: FileLen,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "all_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default)]
    pub sweep: Sweep,
    /// Demand vectors for a sampled sweep, or draws for monte-carlo rates.
    #[serde(default = "default_samples")]
    pub samples: u64,
    pub demand: Option<Vec<usize>>,
    pub grid: Option<Grid>,
    #[serde(default = "yes")]
    pub fresh_keys: bool,
    #[serde(default)]
    pub mode: RateMode,
    #[serde(default = "default_budget")]
    pub exact_budget: u128,
}

fn all_schemes() -> Vec<Scheme> {
    Scheme::ALL.to_vec()
}

fn default_samples() -> u64 {
    10_000
}

fn yes() -> bool {
    true
}

fn default_budget() -> u128 {
    1 << 20
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).context("parsing config")?;
        if cfg.schemes.is_empty() {
            bail!("schemes must not be empty");
        }
        if cfg.sweep == Sweep::Sampled && cfg.samples == 0 {
            bail!("a sampled sweep needs samples > 0");
        }
        Ok(cfg)
    }

    /// The single instance named by `N`, `K`, `t` and `F`.
    pub fn params(&self) -> Result<SystemParams> {
        let (Some(n), Some(k), Some(t)) = (self.n, self.k, self.t) else {
            bail!("config needs N, K and t");
        };
        let p = match self.file_len {
            FileLen::Auto(_) => SystemParams::minimal(n, k, t),
            FileLen::Symbols(f) => SystemParams::padded(n, k, t, f),
        };
        Ok(p?)
    }

    /// Every valid grid point, or the single instance when no grid is given.
    pub fn instances(&self) -> Result<Vec<SystemParams>> {
        let Some(grid) = &self.grid else {
            return Ok(vec![self.params()?]);
        };
        let mut out = Vec::new();
        for &k in &grid.k {
            let ns = grid.n.clone().unwrap_or_else(|| vec![k]);
            for n in ns {
                for &t in &grid.t {
                    if t >= 1 && t + 2 <= k {
                        out.push(SystemParams::minimal(n, k, t)?);
                    }
                }
            }
        }
        if out.is_empty() {
            bail!("grid contains no valid (N, K, t) point");
        }
        Ok(out)
    }

    pub fn demand(&self, params: &SystemParams) -> Result<Option<DemandVector>> {
        match &self.demand {
            Some(v) => Ok(Some(DemandVector::new(v.clone(), params)?)),
            None => Ok(None),
        }
    }

    pub fn average_mode(&self, params: &SystemParams) -> AverageMode {
        let mc = AverageMode::MonteCarlo {
            samples: self.samples,
            seed: self.seed,
        };
        let vectors = (params.n_files() as u128).checked_pow(params.n_users() as u32);
        match self.mode {
            RateMode::Exact => AverageMode::Exact {
                budget: self.exact_budget,
            },
            RateMode::Collapsed => AverageMode::Collapsed,
            RateMode::MonteCarlo => mc,
            RateMode::Auto => match vectors {
                Some(v) if v <= self.exact_budget => AverageMode::Exact {
                    budget: self.exact_budget,
                },
                _ => mc,
            },
        }
    }
}

/// Library and placement for one instance; both follow from `seed` alone.
pub fn instance(params: &SystemParams, seed: u64) -> Result<(FileLibrary, Placement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_F11E_5EED_F11E);
    let library = FileLibrary::random(params, &mut rng);
    let placement = build_placement(&library, params, seed)?;
    Ok((library, placement))
}
