//! Exact secrecy analysis for one user.
//!
//! Every symbol a user observes, cached or broadcast, is a linear form over the
//! file symbols, the sharing randomness and the keys, all independent and uniform.
//! The user learns nothing about the files it did not request iff deleting those
//! files' columns leaves the rank of its observation matrix unchanged.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::combinatorics::{binom, enumerate_subsets, UserSubset};
use crate::delivery::{demand_profile, DemandAnalysis, DemandVector, Scheme, TransmissionSet};
use crate::gf_linear::{Gf256, LinearForm, RowEchelon};
use crate::placement::{CacheContents, Placement};
use crate::secret_sharing::{ShareLabel, SystemParams, VariableLayout};

/// Where an observation row came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOrigin {
    CachedShare { label: ShareLabel, pos: usize },
    CachedKey { subset: UserSubset, pos: usize },
    Transmission { subset: UserSubset, pos: usize },
}

/// Everything user `k` observes, as linear forms over the instance variables.
#[derive(Clone, Debug)]
pub struct ObservationSystem {
    user: usize,
    scheme: Scheme,
    params: SystemParams,
    layout: VariableLayout,
    rows: Vec<LinearForm>,
    origins: Vec<RowOrigin>,
}

impl ObservationSystem {
    pub fn user(&self) -> usize {
        self.user
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn layout(&self) -> VariableLayout {
        self.layout
    }

    pub fn rows(&self) -> &[LinearForm] {
        &self.rows
    }

    pub fn origins(&self) -> &[RowOrigin] {
        &self.origins
    }

    pub fn cols(&self) -> usize {
        self.layout.total()
    }

    /// Row-reduced span of all observations.
    pub fn echelon(&self) -> RowEchelon {
        self.echelon_masked(|_| false)
    }

    /// Span after zeroing every column for which `drop` holds.
    fn echelon_masked(&self, drop: impl Fn(usize) -> bool) -> RowEchelon {
        let mut ech = RowEchelon::new(self.cols());
        let mut dense = vec![Gf256::ZERO; self.cols()];
        for row in &self.rows {
            dense.iter_mut().for_each(|x| *x = Gf256::ZERO);
            for &(var, c) in row.terms() {
                if !drop(var) {
                    dense[var] = c;
                }
            }
            ech.insert(&dense);
        }
        ech
    }

    /// The values the user actually sees, in row order.
    pub fn observed_values(&self, placement: &Placement, tx: &TransmissionSet) -> Vec<Gf256> {
        self.origins
            .iter()
            .map(|o| match *o {
                RowOrigin::CachedShare { label, pos } => {
                    placement.shares().get(label).expect("share").payload[pos]
                }
                RowOrigin::CachedKey { subset, pos } => placement.keys().get(subset).expect("key")[pos],
                RowOrigin::Transmission { subset, pos } => tx.get(subset).expect("sent").payload[pos],
            })
            .collect()
    }
}

/// Stacks the provenance of every cached share symbol, cached key symbol and
/// broadcast symbol visible to the owner of `cache`.
pub fn build_observation(cache: &CacheContents, tx: &TransmissionSet, placement: &Placement) -> ObservationSystem {
    let params = *placement.params();
    let layout = params.layout();
    let fs = params.share_len();
    let mut rows = Vec::new();
    let mut origins = Vec::new();
    for &label in &cache.cached_shares {
        let share = placement.shares().get(label).expect("cached share exists");
        for (pos, form) in share.provenance.iter().enumerate() {
            rows.push(form.clone());
            origins.push(RowOrigin::CachedShare { label, pos });
        }
    }
    for &subset in &cache.cached_keys {
        for pos in 0..fs {
            rows.push(LinearForm::unit(layout.key_var(subset.index_of(), pos)));
            origins.push(RowOrigin::CachedKey { subset, pos });
        }
    }
    for y in tx.transmissions() {
        for (pos, form) in y.provenance(&params).into_iter().enumerate() {
            rows.push(form);
            origins.push(RowOrigin::Transmission { subset: y.subset, pos });
        }
    }
    ObservationSystem {
        user: cache.user,
        scheme: tx.scheme(),
        params,
        layout,
        rows,
        origins,
    }
}

fn foreign_columns(sys: &ObservationSystem, d: &DemandVector) -> impl Fn(usize) -> bool {
    let layout = sys.layout;
    let own = layout.file_range(d.of(sys.user));
    let end = layout.randomness_start();
    move |var| var < end && !own.contains(&var)
}

/// Zero leakage: `rank([A|B]) = rank(B)` with `A` the columns of every file
/// other than `d_k`.
pub fn is_secure(sys: &ObservationSystem, d: &DemandVector) -> bool {
    sys.echelon().rank() == sys.echelon_masked(foreign_columns(sys, d)).rank()
}

/// A nonzero combination of the user's observations that depends on the
/// symbols of files other than `d_k` and on nothing else, when one exists.
///
/// Columns are eliminated with every other variable ahead of the foreign file
/// symbols, so any basis row pivoting on a foreign column is zero elsewhere.
pub fn leak_witness(sys: &ObservationSystem, d: &DemandVector) -> Option<LinearForm> {
    let foreign = foreign_columns(sys, d);
    let cols = sys.cols();
    let mut order: Vec<usize> = (0..cols).filter(|&v| !foreign(v)).collect();
    let split = order.len();
    order.extend((0..cols).filter(|&v| foreign(v)));
    let mut ech = RowEchelon::new(cols);
    let mut dense = vec![Gf256::ZERO; cols];
    let mut at = vec![0; cols];
    for (i, &v) in order.iter().enumerate() {
        at[v] = i;
    }
    for row in &sys.rows {
        dense.iter_mut().for_each(|x| *x = Gf256::ZERO);
        for &(var, c) in row.terms() {
            dense[at[var]] = c;
        }
        ech.insert(&dense);
    }
    let i = ech.pivots().iter().position(|&p| p >= split)?;
    Some(LinearForm::from_terms(
        ech.basis()[i]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, &c)| (order[j], c)),
    ))
}

/// Leaked shares and shares recoverable at only some positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShareExposure {
    pub leaked: BTreeSet<ShareLabel>,
    pub partial: BTreeSet<ShareLabel>,
}

fn exposure_with(sys: &ObservationSystem, ech: &RowEchelon, d: &DemandVector, placement: &Placement) -> ShareExposure {
    let k = sys.user;
    let mut out = ShareExposure::default();
    for share in placement.shares().shares() {
        let label = share.label;
        if label.file == d.of(k) || label.subset.contains(k) {
            continue;
        }
        let hits = share
            .provenance
            .iter()
            .filter(|form| ech.contains(&form.to_dense(sys.cols())))
            .count();
        if hits == share.provenance.len() {
            out.leaked.insert(label);
        } else if hits > 0 {
            out.partial.insert(label);
        }
    }
    out
}

/// Shares `S_n^{X'}` with `n != d_k` and `k` not in `X'` whose every symbol lies
/// in the span of the user's observations.
pub fn leaked_shares(sys: &ObservationSystem, d: &DemandVector, placement: &Placement) -> BTreeSet<ShareLabel> {
    share_exposure(sys, d, placement).leaked
}

pub fn share_exposure(sys: &ObservationSystem, d: &DemandVector, placement: &Placement) -> ShareExposure {
    exposure_with(sys, &sys.echelon(), d, placement)
}

/// The combinatorial leak conditions for the keyless scheme, checked directly.
pub fn leak_predicate(share: ShareLabel, k: usize, t: usize, analysis: &DemandAnalysis) -> bool {
    let d = analysis.demands();
    let x_prime = share.subset;
    if x_prime.len() != t {
        return false;
    }
    let c2 = demand_profile(x_prime, d).0 == [t];
    let c4 = match x_prime.members().next() {
        Some(x2) => x_prime.insert(k).is_subset_of(analysis.same_demand(x2)),
        None => false,
    };
    let c1_c3 = (1..=d.len()).any(|x1| {
        let c1 = !x_prime.contains(k) && share.file == d.of(x1) && d.of(x1) != d.of(k);
        c1 && demand_profile(x_prime.insert(x1), d).is_t_one(t)
    });
    c1_c3 && c2 && c4
}

/// `binom(|E_k| - 1, t) * (N_e(d) - 1)`
pub fn leak_count(k: usize, t: usize, analysis: &DemandAnalysis) -> u128 {
    let e = analysis.same_demand(k).len() as u64;
    let b = binom(e - 1, t as u64).expect("fits for K <= 64");
    b as u128 * (analysis.n_unique() as u128 - 1)
}

/// Every share label satisfying the keyless leak conditions for user `k`.
pub fn predicted_leaks(k: usize, params: &SystemParams, analysis: &DemandAnalysis) -> BTreeSet<ShareLabel> {
    let subsets = enumerate_subsets(params.n_users(), params.t());
    (1..=params.n_files())
        .flat_map(|n| subsets.iter().map(move |&a| ShareLabel::new(n, a)))
        .filter(|&l| leak_predicate(l, k, params.t(), analysis))
        .collect()
}

/// Per-user secrecy verdict.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LeakReport {
    pub user: usize,
    pub secure: bool,
    pub leaked_shares: BTreeSet<ShareLabel>,
    /// Leak count the keyless conditions predict; zero for the keyed schemes.
    pub predicted_count: u128,
    #[serde(skip_serializing_if = "BTreeSet::is_empty")]
    pub partial_shares: BTreeSet<ShareLabel>,
}

/// Builds user `k`'s observation system and runs every check on it.
pub fn leak_report(k: usize, tx: &TransmissionSet, placement: &Placement, analysis: &DemandAnalysis) -> LeakReport {
    let sys = build_observation(placement.cache(k), tx, placement);
    let d = analysis.demands();
    let ech = sys.echelon();
    let secure = ech.rank() == sys.echelon_masked(foreign_columns(&sys, d)).rank();
    let exposure = exposure_with(&sys, &ech, d, placement);
    let predicted_count = match tx.scheme() {
        Scheme::Keyless => leak_count(k, placement.params().t(), analysis),
        Scheme::Keys | Scheme::Common => 0,
    };
    LeakReport {
        user: k,
        secure,
        leaked_shares: exposure.leaked,
        predicted_count,
        partial_shares: exposure.partial,
    }
}
