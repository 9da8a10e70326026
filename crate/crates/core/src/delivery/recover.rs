use super::demand::DemandAnalysis;
use super::transmission::TransmissionSet;
use crate::combinatorics::{enumerate_subsets, UserSubset};
use crate::error::{Error, Result};
use crate::gf_linear::Gf256;

/// The transmissions whose sum regenerates `Y_A` for a non-leader subset `A`:
/// every `(t+1)`-subset `B` meeting the leaders with `d(B) = d(A)` as multisets
/// and `B \ A` inside the leader set.
pub fn recovery_subsets(subset: UserSubset, analysis: &DemandAnalysis) -> Result<Vec<UserSubset>> {
    let leaders = analysis.leaders();
    if !subset.intersection(leaders).is_empty() {
        return Err(Error::NotSaved(subset));
    }
    let d = analysis.demands();
    let target = d.sorted_demands_of(subset);
    Ok(enumerate_subsets(d.len(), subset.len())
        .into_iter()
        .filter(|b| {
            !b.intersection(leaders).is_empty()
                && b.difference(subset).is_subset_of(leaders)
                && d.sorted_demands_of(*b) == target
        })
        .collect())
}

/// Regenerates the keyless payload `Y_A` of a saved non-leader subset from the
/// keyless transmissions that were sent.
pub fn recover_saved(
    subset: UserSubset,
    tx: &TransmissionSet,
    analysis: &DemandAnalysis,
) -> Result<Vec<Gf256>> {
    if subset.len() != tx.params().t() + 1 {
        return Err(Error::InvalidSubset(format!(
            "{subset} is not a {}-subset",
            tx.params().t() + 1
        )));
    }
    let mut acc = vec![Gf256::ZERO; tx.params().share_len()];
    for b in recovery_subsets(subset, analysis)? {
        let y = tx.get(b).ok_or(Error::MissingTransmission(b))?;
        if y.keyed {
            return Err(Error::KeyedTransmission(b));
        }
        for (a, v) in acc.iter_mut().zip(&y.payload) {
            *a += *v;
        }
    }
    Ok(acc)
}
