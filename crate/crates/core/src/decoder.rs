//! Per-user decoding from the user's own cache and the broadcast.

use crate::combinatorics::{choose, enumerate_subsets};
use crate::delivery::{recover_saved, DemandAnalysis, Scheme, TransmissionSet};
use crate::error::{Error, Result};
use crate::gf_linear::Gf256;
use crate::placement::CacheView;
use crate::secret_sharing::{reconstruct_file, ShareLabel, SystemParams};

/// Recovers every share of `W_{d_k}` that user `k` does not cache, one per
/// `(t+1)`-subset containing `k`, in colex order of those subsets.
pub fn recover_missing_shares(
    cache: CacheView<'_>,
    tx: &TransmissionSet,
    analysis: &DemandAnalysis,
    params: &SystemParams,
) -> Result<Vec<(ShareLabel, Vec<Gf256>)>> {
    let k = cache.user();
    let d = analysis.demands();
    let wanted = d.of(k);
    // materialize every Y_A with k in A first
    let mut payloads = Vec::new();
    for a in enumerate_subsets(params.n_users(), params.t() + 1)
        .into_iter()
        .filter(|a| a.contains(k))
    {
        let (payload, keyed) = match tx.get(a) {
            Some(y) => (y.payload.clone(), y.keyed),
            None if tx.scheme() == Scheme::Common && tx.saved().contains(&a) => {
                (recover_saved(a, tx, analysis)?, false)
            }
            None => return Err(Error::MissingTransmission(a)),
        };
        payloads.push((a, payload, keyed));
    }

    let mut out = Vec::with_capacity(payloads.len());
    for (a, mut payload, keyed) in payloads {
        if keyed {
            sub_assign(&mut payload, cache.key(a)?);
        }
        for x in a.members().filter(|&x| x != k) {
            sub_assign(&mut payload, cache.share(ShareLabel::new(d.of(x), a.remove(x)))?);
        }
        let label = ShareLabel::new(wanted, a.remove(k));
        #[cfg(debug_assertions)]
        debug_assert_eq!(
            Some(payload.as_slice()),
            cache.ground_truth(label),
            "user {k} recovered a wrong {label}"
        );
        out.push((label, payload));
    }
    Ok(out)
}

/// Decodes `W_{d_k}` for the user owning `cache`.
pub fn decode(
    cache: CacheView<'_>,
    tx: &TransmissionSet,
    analysis: &DemandAnalysis,
    params: &SystemParams,
) -> Result<Vec<Gf256>> {
    let (k, t) = (params.n_users(), params.t());
    assert_eq!(
        choose(k - 1, t) + choose(k - 1, t - 1),
        choose(k, t),
        "share count identity"
    );
    let wanted = analysis.demands().of(cache.user());
    let mut shares: Vec<(ShareLabel, Vec<Gf256>)> = cache
        .contents()
        .cached_shares
        .iter()
        .filter(|l| l.file == wanted)
        .map(|&l| cache.share(l).map(|p| (l, p.to_vec())))
        .collect::<Result<_>>()?;
    shares.extend(recover_missing_shares(cache, tx, analysis, params)?);
    // colex order of the t-subsets is the evaluation order
    shares.sort_by_key(|(l, _)| l.subset);
    debug_assert!(shares.windows(2).all(|w| w[0].0 != w[1].0));
    let payloads: Vec<Vec<Gf256>> = shares.into_iter().map(|(_, p)| p).collect();
    reconstruct_file(&payloads, params)
}

fn sub_assign(acc: &mut [Gf256], v: &[Gf256]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a -= *b;
    }
}
