//! Transmission counts and rates, per demand vector and averaged over uniform demands.
//!
//! Rates are in units of `F`: a scheme that sends `c` payloads of `F_s` symbols
//! has rate `c * F_s / F = c / block_count`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::combinatorics::choose;
use crate::delivery::{analyze_demands, DemandAnalysis, DemandVector, Scheme};
use crate::error::{Error, Result};
use crate::secret_sharing::SystemParams;

/// Number of `(t+1)`-subsets with demand profile `(t,1)` drawn from users split
/// into demand classes of the given sizes, `total` users overall.
fn t_one_subsets(classes: &[usize], total: usize, t: usize) -> u64 {
    if t >= 2 {
        classes
            .iter()
            .map(|&c| (choose(c, t) * (total - c)) as u64)
            .sum()
    } else {
        let mut sum = 0u64;
        for (i, &a) in classes.iter().enumerate() {
            for &b in &classes[i + 1..] {
                sum += (a * b) as u64;
            }
        }
        sum
    }
}

/// `Δ_t`: non-leader `(t+1)`-subsets whose profile is `(t,1)`.
pub fn delta_t(analysis: &DemandAnalysis, t: usize, k: usize) -> u64 {
    let sizes: Vec<usize> = analysis.nonleader_classes().iter().map(|c| c.len()).collect();
    t_one_subsets(&sizes, k - analysis.n_unique(), t)
}

/// Transmission counts of one scheme on one demand vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemandRate {
    pub scheme: Scheme,
    pub demand: DemandVector,
    pub keyed: u64,
    pub keyless: u64,
    pub saved: u64,
    pub delta_t: u64,
    #[serde(serialize_with = "ratio_string")]
    pub rate: Ratio<u64>,
}

impl DemandRate {
    pub fn transmissions(&self) -> u64 {
        self.keyed + self.keyless
    }
}

/// Counts from class sizes alone: `(keyed, keyless, saved, Δ_t)`.
fn counts(scheme: Scheme, class_sizes: &[usize], k: usize, t: usize) -> (u64, u64, u64, u64) {
    let all = choose(k, t + 1) as u64;
    let n_e = class_sizes.len();
    let nonleader: Vec<usize> = class_sizes.iter().map(|c| c - 1).filter(|&c| c > 0).collect();
    let delta = t_one_subsets(&nonleader, k - n_e, t);
    match scheme {
        Scheme::Keys => (all, 0, 0, delta),
        Scheme::Keyless => (0, all, 0, delta),
        Scheme::Common => {
            let saved = choose(k - n_e, t + 1) as u64 - delta;
            let keyed = t_one_subsets(class_sizes, k, t);
            (keyed, all - saved - keyed, saved, delta)
        }
    }
}

fn class_sizes(analysis: &DemandAnalysis) -> Vec<usize> {
    analysis
        .leaders()
        .members()
        .map(|u| analysis.same_demand(u).len())
        .collect()
}

/// `R_d` of `scheme` for demand vector `d`.
pub fn rate_for_demand(scheme: Scheme, d: &DemandVector, params: &SystemParams) -> DemandRate {
    let analysis = analyze_demands(d);
    let (keyed, keyless, saved, delta_t) =
        counts(scheme, &class_sizes(&analysis), params.n_users(), params.t());
    DemandRate {
        scheme,
        demand: d.clone(),
        keyed,
        keyless,
        saved,
        delta_t,
        rate: Ratio::new(keyed + keyless, params.block_count() as u64),
    }
}

/// `binom(K,t+1) * F_s / F`, the constant rate of the keyed baseline.
pub fn rate_keys(params: &SystemParams) -> Ratio<u64> {
    Ratio::new(params.key_count() as u64, params.block_count() as u64)
}

/// `K(N+M-1) / (N+(K+1)(M-1))` with `M = Nt/(K-t) + 1`, evaluated exactly.
pub fn rate_keys_closed_form(n: usize, k: usize, t: usize) -> Result<Ratio<u64>> {
    if t < 1 || t + 2 > k {
        return Err(Error::InvalidParams(format!("t = {t} outside 1..={}", k.saturating_sub(2))));
    }
    let (n, k, t) = (n as u64, k as u64, t as u64);
    let one = Ratio::from_integer(1);
    let m = Ratio::new(n * t, k - t) + one;
    let num = Ratio::from_integer(k) * (Ratio::from_integer(n) + m - one);
    let den = Ratio::from_integer(n) + Ratio::from_integer(k + 1) * (m - one);
    Ok(num / den)
}

/// How [`average_rate`] takes the expectation over `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AverageMode {
    /// All `N^K` demand vectors, refused above `budget`.
    Exact { budget: u128 },
    /// One representative per multiset of demand multiplicities, weighted by its count.
    Collapsed,
    MonteCarlo { samples: u64, seed: u64 },
}

impl AverageMode {
    pub fn name(&self) -> &'static str {
        match self {
            AverageMode::Exact { .. } => "exact",
            AverageMode::Collapsed => "exact-collapsed",
            AverageMode::MonteCarlo { .. } => "monte-carlo",
        }
    }
}

/// Average rate of one scheme at one `(N, K, t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub scheme: Scheme,
    #[serde(rename = "N")]
    pub n_files: usize,
    #[serde(rename = "K")]
    pub n_users: usize,
    pub t: usize,
    #[serde(rename = "M", serialize_with = "ratio_string")]
    pub cache_size: Ratio<u64>,
    #[serde(rename = "R_avg")]
    pub r_avg: f64,
    pub mode: &'static str,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// Expected number of payloads, `R_avg * block_count`.
    pub transmissions: f64,
    pub ratio_to_keys: f64,
    #[serde(rename = "R_avg_exact", serialize_with = "opt_ratio_string")]
    pub r_avg_exact: Option<Ratio<u128>>,
    pub std_error: Option<f64>,
}

fn ratio_string<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn opt_ratio_string<S: Serializer>(r: &Option<Ratio<u128>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

fn to_f64(r: Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Demand vector number `index` in base-`N` order, first user least significant.
pub fn demand_at(index: u128, n: usize, k: usize) -> Vec<usize> {
    let mut i = index;
    (0..k)
        .map(|_| {
            let f = (i % n as u128) as usize + 1;
            i /= n as u128;
            f
        })
        .collect()
}

fn total_vectors(n: usize, k: usize) -> Option<u128> {
    (n as u128).checked_pow(k as u32)
}

/// Partitions of `k` into at most `max_parts` parts, largest first.
fn partitions(k: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cap: usize, parts_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Demand vectors over `N` files whose multiplicities are `parts`:
/// `K! / prod(parts!)` orderings times `N! / ((N-l)! prod(mult!))` file choices.
fn profile_weight(parts: &[usize], n: usize) -> Option<u128> {
    let k: usize = parts.iter().sum();
    let mut w: u128 = 1;
    // multinomial, built as a product of binomials to stay small
    let mut left = k;
    for &p in parts {
        w = w.checked_mul(crate::combinatorics::binom(left as u64, p as u64).ok()? as u128)?;
        left -= p;
    }
    for i in 0..parts.len() {
        w = w.checked_mul((n - i) as u128)?;
    }
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
        w /= (1..=j as u128).product::<u128>();
        i += j;
    }
    Some(w)
}

/// Sum over all `N^K` demand vectors of the payload count, split across rayon
/// workers; integer addition keeps the result independent of scheduling.
fn exhaustive_total(scheme: Scheme, params: &SystemParams, vectors: u128) -> u128 {
    let (n, k, t) = (params.n_files(), params.n_users(), params.t());
    const CHUNK: u128 = 4096;
    let chunks = vectors.div_ceil(CHUNK);
    (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let lo = c as u128 * CHUNK;
            let hi = (lo + CHUNK).min(vectors);
            (lo..hi)
                .map(|i| {
                    let d = DemandVector::new(demand_at(i, n, k), params).expect("in range");
                    let (keyed, keyless, ..) = counts(scheme, &class_sizes(&analyze_demands(&d)), k, t);
                    (keyed + keyless) as u128
                })
                .sum::<u128>()
        })
        .sum()
}

/// `E_d(R_d)` under uniform demands.
pub fn average_rate(scheme: Scheme, params: &SystemParams, mode: AverageMode) -> Result<RateReport> {
    let (n, k, t) = (params.n_files(), params.n_users(), params.t());
    let blocks = params.block_count() as u128;
    let (exact, samples, seed, std_error, mean) = match mode {
        AverageMode::Exact { budget } => {
            let vectors = match total_vectors(n, k) {
                Some(v) if v <= budget => v,
                other => {
                    return Err(Error::BudgetExceeded {
                        needed: other.unwrap_or(u128::MAX),
                        budget,
                    })
                }
            };
            let r = Ratio::new(exhaustive_total(scheme, params, vectors), vectors * blocks);
            (Some(r), None, None, None, to_f64(r))
        }
        AverageMode::Collapsed => {
            let vectors = total_vectors(n, k).ok_or(Error::Overflow { n: n as u64, m: k as u64 })?;
            let mut total: u128 = 0;
            for parts in partitions(k, n.min(k)) {
                let w = profile_weight(&parts, n).ok_or(Error::Overflow { n: n as u64, m: k as u64 })?;
                let (keyed, keyless, ..) = counts(scheme, &parts, k, t);
                total = total
                    .checked_add(w * (keyed + keyless) as u128)
                    .ok_or(Error::Overflow { n: n as u64, m: k as u64 })?;
            }
            let r = Ratio::new(total, vectors * blocks);
            (Some(r), None, None, None, to_f64(r))
        }
        AverageMode::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidParams("monte-carlo needs at least 2 samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws: Vec<Vec<usize>> = (0..samples)
                .map(|_| (0..k).map(|_| rng.gen_range(1..=n)).collect())
                .collect();
            let values: Vec<f64> = draws
                .into_par_iter()
                .map(|v| {
                    let d = DemandVector::new(v, params).expect("in range");
                    let (keyed, keyless, ..) = counts(scheme, &class_sizes(&analyze_demands(&d)), k, t);
                    (keyed + keyless) as f64 / blocks as f64
                })
                .collect();
            let m = values.iter().sum::<f64>() / samples as f64;
            let var = values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (samples - 1) as f64;
            (None, Some(samples), Some(seed), Some((var / samples as f64).sqrt()), m)
        }
    };
    let keys = rate_keys(params);
    Ok(RateReport {
        scheme,
        n_files: n,
        n_users: k,
        t,
        cache_size: params.cache_size(),
        r_avg: mean,
        mode: mode.name(),
        samples,
        seed,
        transmissions: mean * blocks as f64,
        ratio_to_keys: mean / (*keys.numer() as f64 / *keys.denom() as f64),
        r_avg_exact: exact,
        std_error,
    })
}
