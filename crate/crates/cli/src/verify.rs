use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use scc_core::decoder::decode;
use scc_core::delivery::{analyze_demands, transmissions, DemandVector, Scheme};
use scc_core::leakage_oracle::leak_report;
use scc_core::placement::Placement;
use scc_core::rate_analysis::demand_at;
use scc_core::secret_sharing::{FileLibrary, ShareLabel};
use scc_core::SystemParams;

use crate::config::{instance, Config, Sweep};

/// One (scheme, d, user) that did not decode or was not secure.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub scheme: Scheme,
    pub demand: DemandVector,
    pub user: usize,
    pub decoded: bool,
    pub secure: bool,
    pub leaked_shares: Vec<ShareLabel>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SchemeVerdict {
    pub scheme: Scheme,
    pub vectors: usize,
    pub decode_failures: usize,
    pub insecure_users: usize,
    pub insecure_vectors: usize,
    /// (d, user) pairs with at least one whole foreign share decodable.
    pub share_leak_users: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerifyReport {
    #[serde(rename = "N")]
    pub n_files: usize,
    #[serde(rename = "K")]
    pub n_users: usize,
    pub t: usize,
    #[serde(rename = "F")]
    pub file_len: usize,
    pub seed: u64,
    pub sweep: &'static str,
    pub fresh_keys: bool,
    pub schemes: Vec<SchemeVerdict>,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

/// The demand vectors a sweep visits, in a fixed order.
pub fn sweep_demands(cfg: &Config, params: &SystemParams) -> Result<Vec<DemandVector>> {
    if let Some(d) = cfg.demand(params)? {
        return Ok(vec![d]);
    }
    let (n, k) = (params.n_files(), params.n_users());
    match cfg.sweep {
        Sweep::Exhaustive => {
            let total = (n as u128)
                .checked_pow(k as u32)
                .filter(|&v| v <= cfg.exact_budget)
                .ok_or_else(|| anyhow::anyhow!("N^K exceeds exact_budget; use \"sweep\": \"sampled\""))?;
            (0..total)
                .map(|i| Ok(DemandVector::new(demand_at(i, n, k), params)?))
                .collect()
        }
        Sweep::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.samples)
                .map(|_| Ok(DemandVector::new((0..k).map(|_| rng.gen_range(1..=n)).collect(), params)?))
                .collect()
        }
    }
}

fn check_demand(
    scheme: Scheme,
    d: &DemandVector,
    placement: &Placement,
    library: &FileLibrary,
) -> Result<Vec<Failure>> {
    let params = placement.params();
    let analysis = analyze_demands(d);
    let tx = transmissions(scheme, d, placement)?;
    let mut out = Vec::new();
    for k in 1..=params.n_users() {
        let decoded = decode(placement.view(k), &tx, &analysis, params)
            .map(|w| w == library.file(d.of(k)))
            .unwrap_or(false);
        let report = leak_report(k, &tx, placement, &analysis);
        if !decoded || !report.secure || !report.leaked_shares.is_empty() {
            out.push(Failure {
                scheme,
                demand: d.clone(),
                user: k,
                decoded,
                secure: report.secure,
                leaked_shares: report.leaked_shares.into_iter().collect(),
            });
        }
    }
    Ok(out)
}

pub fn run(cfg: &Config) -> Result<VerifyReport> {
    let params = cfg.params()?;
    let (library, base) = instance(&params, cfg.seed)?;
    let demands = sweep_demands(cfg, &params)?;
    let mut schemes = Vec::new();
    let mut failures = Vec::new();
    for &scheme in &cfg.schemes {
        let per_vector: Vec<Vec<Failure>> = demands
            .par_iter()
            .enumerate()
            .map(|(epoch, d)| {
                if cfg.fresh_keys {
                    check_demand(scheme, d, &base.rekeyed(epoch as u64), &library)
                } else {
                    check_demand(scheme, d, &base, &library)
                }
            })
            .collect::<Result<_>>()?;
        let found: Vec<Failure> = per_vector.into_iter().flatten().collect();
        let insecure: Vec<&Failure> = found.iter().filter(|f| !f.secure).collect();
        let mut insecure_vectors: Vec<&DemandVector> = insecure.iter().map(|f| &f.demand).collect();
        insecure_vectors.dedup();
        let verdict = SchemeVerdict {
            scheme,
            vectors: demands.len(),
            decode_failures: found.iter().filter(|f| !f.decoded).count(),
            insecure_users: insecure.len(),
            insecure_vectors: insecure_vectors.len(),
            share_leak_users: found.iter().filter(|f| !f.leaked_shares.is_empty()).count(),
            pass: found.iter().all(|f| f.decoded && f.secure),
        };
        schemes.push(verdict);
        failures.extend(found);
    }
    let pass = schemes.iter().all(|s| s.pass);
    Ok(VerifyReport {
        n_files: params.n_files(),
        n_users: params.n_users(),
        t: params.t(),
        file_len: params.file_len(),
        seed: cfg.seed,
        sweep: match (cfg.demand.is_some(), cfg.sweep) {
            (true, _) => "single",
            (false, Sweep::Exhaustive) => "exhaustive",
            (false, Sweep::Sampled) => "sampled",
        },
        fresh_keys: cfg.fresh_keys,
        schemes,
        failures,
        pass,
    })
}

/// Flat CSV row for one failure.
#[derive(Serialize)]
pub struct FailureRow {
    pub scheme: Scheme,
    pub demand: String,
    pub user: usize,
    pub decoded: bool,
    pub secure: bool,
    pub leaked_shares: String,
}

impl From<&Failure> for FailureRow {
    fn from(f: &Failure) -> Self {
        FailureRow {
            scheme: f.scheme,
            demand: f.demand.to_string(),
            user: f.user,
            decoded: f.decoded,
            secure: f.secure,
            leaked_shares: f
                .leaked_shares
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}
