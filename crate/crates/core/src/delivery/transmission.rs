use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::demand::{analyze_demands, demand_profile, DemandAnalysis, DemandVector};
use crate::combinatorics::{enumerate_subsets, UserSubset};
use crate::error::{Error, Result};
use crate::gf_linear::{Gf256, LinearForm};
use crate::placement::{KeyLabel, Placement};
use crate::secret_sharing::{share_form, ShareLabel, SystemParams};

/// The three delivery schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Every `(t+1)`-subset, every transmission padded with its key.
    Keys,
    /// Every `(t+1)`-subset, no keys.
    Keyless,
    /// Keys only on profile-`(t,1)` subsets; non-leader subsets otherwise saved.
    Common,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Keys, Scheme::Keyless, Scheme::Common];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Keys => "keys",
            Scheme::Keyless => "keyless",
            Scheme::Common => "common",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keys" => Ok(Scheme::Keys),
            "keyless" => Ok(Scheme::Keyless),
            "common" => Ok(Scheme::Common),
            other => Err(Error::InvalidParams(format!("unknown scheme '{other}'"))),
        }
    }
}

/// One broadcast payload `Y_A` (or `Y_A^keys`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transmission {
    pub subset: UserSubset,
    pub keyed: bool,
    pub payload: Vec<Gf256>,
    /// `S_{d_x}^{A \ x}` for `x` in `A`, ascending in `x`.
    pub summands: Vec<ShareLabel>,
}

impl Transmission {
    pub fn key_label(&self) -> Option<KeyLabel> {
        self.keyed.then_some(KeyLabel(self.subset))
    }

    /// Each payload symbol as a linear form over the instance variables.
    pub fn provenance(&self, params: &SystemParams) -> Vec<LinearForm> {
        let layout = params.layout();
        (0..params.share_len())
            .map(|pos| {
                let mut form = LinearForm::new();
                for s in &self.summands {
                    form += &share_form(params, s.file, s.subset.index_of(), pos);
                }
                if self.keyed {
                    form += &LinearForm::unit(layout.key_var(self.subset.index_of(), pos));
                }
                form
            })
            .collect()
    }

    /// `Y_123 = T_123 + S_1^23 + S_1^13 + S_2^12`
    pub fn expression(&self) -> String {
        let mut terms: Vec<String> = Vec::with_capacity(self.summands.len() + 1);
        if let Some(k) = self.key_label() {
            terms.push(k.to_string());
        }
        terms.extend(self.summands.iter().map(|s| s.to_string()));
        format!("Y_{} = {}", self.subset.compact(), terms.join(" + "))
    }

    pub fn summand_labels(&self) -> Vec<String> {
        self.summands
            .iter()
            .map(|s| s.to_string())
            .chain(self.key_label().map(|k| k.to_string()))
            .collect()
    }
}

/// Serialized form of one transmission.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TransmissionRecord {
    pub subset: String,
    pub keyed: bool,
    pub payload_hex: String,
    pub summand_labels: Vec<String>,
}

/// `X_d`: everything broadcast for one demand vector, in colex order of subsets.
#[derive(Clone, Debug)]
pub struct TransmissionSet {
    scheme: Scheme,
    params: SystemParams,
    transmissions: Vec<Transmission>,
    by_subset: Vec<Option<usize>>,
    saved: Vec<UserSubset>,
}

impl TransmissionSet {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    pub fn len(&self) -> usize {
        self.transmissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transmissions.is_empty()
    }

    pub fn keyed_count(&self) -> usize {
        self.transmissions.iter().filter(|t| t.keyed).count()
    }

    pub fn keyless_count(&self) -> usize {
        self.len() - self.keyed_count()
    }

    /// Subsets whose transmission was not sent.
    pub fn saved(&self) -> &[UserSubset] {
        &self.saved
    }

    pub fn get(&self, subset: UserSubset) -> Option<&Transmission> {
        if subset.len() != self.params.t() + 1 {
            return None;
        }
        self.by_subset
            .get(subset.index_of())
            .copied()
            .flatten()
            .map(|i| &self.transmissions[i])
    }

    pub fn records(&self) -> Vec<TransmissionRecord> {
        self.transmissions
            .iter()
            .map(|t| TransmissionRecord {
                subset: t.subset.to_string(),
                keyed: t.keyed,
                payload_hex: hex::encode(t.payload.iter().map(|g| g.0).collect::<Vec<u8>>()),
                summand_labels: t.summand_labels(),
            })
            .collect()
    }

    /// Copy without the transmissions for `drop`; used to probe monotonicity.
    pub fn without(&self, drop: &[UserSubset]) -> TransmissionSet {
        let kept: Vec<Transmission> = self
            .transmissions
            .iter()
            .filter(|t| !drop.contains(&t.subset))
            .cloned()
            .collect();
        let mut by_subset = vec![None; self.by_subset.len()];
        for (i, t) in kept.iter().enumerate() {
            by_subset[t.subset.index_of()] = Some(i);
        }
        TransmissionSet {
            scheme: self.scheme,
            params: self.params,
            transmissions: kept,
            by_subset,
            saved: self.saved.clone(),
        }
    }
}

/// Summand labels of `Y_A`: `S_{d_x}^{A \ x}` for `x` ascending.
pub fn summands_for(subset: UserSubset, d: &DemandVector) -> Vec<ShareLabel> {
    subset
        .members()
        .map(|x| ShareLabel::new(d.of(x), subset.remove(x)))
        .collect()
}

enum Decision {
    Keyed,
    Keyless,
    Saved,
}

fn decide(scheme: Scheme, subset: UserSubset, analysis: &DemandAnalysis, t: usize) -> Decision {
    match scheme {
        Scheme::Keys => Decision::Keyed,
        Scheme::Keyless => Decision::Keyless,
        Scheme::Common => {
            if demand_profile(subset, analysis.demands()).is_t_one(t) {
                Decision::Keyed
            } else if !subset.intersection(analysis.leaders()).is_empty() {
                Decision::Keyless
            } else {
                Decision::Saved
            }
        }
    }
}

/// Transmissions of `scheme` for demand vector `d` on `placement`.
pub fn transmissions(scheme: Scheme, d: &DemandVector, placement: &Placement) -> Result<TransmissionSet> {
    let params = *placement.params();
    if d.len() != params.n_users() || d.as_slice().iter().any(|&f| f == 0 || f > params.n_files()) {
        return Err(Error::InvalidDemand(format!("{d} does not fit the placement")));
    }
    let analysis = analyze_demands(d);
    let subsets = enumerate_subsets(params.n_users(), params.t() + 1);
    let mut out = Vec::with_capacity(subsets.len());
    let mut by_subset = vec![None; subsets.len()];
    let mut saved = Vec::new();
    for a in subsets {
        let keyed = match decide(scheme, a, &analysis, params.t()) {
            Decision::Keyed => true,
            Decision::Keyless => false,
            Decision::Saved => {
                saved.push(a);
                continue;
            }
        };
        let summands = summands_for(a, d);
        let mut payload = vec![Gf256::ZERO; params.share_len()];
        for s in &summands {
            let share = &placement.shares().get(*s).expect("share exists").payload;
            for (p, v) in payload.iter_mut().zip(share) {
                *p += *v;
            }
        }
        if keyed {
            let key = placement.keys().get(a).expect("key exists");
            for (p, v) in payload.iter_mut().zip(key) {
                *p += *v;
            }
        }
        by_subset[a.index_of()] = Some(out.len());
        out.push(Transmission {
            subset: a,
            keyed,
            payload,
            summands,
        });
    }
    Ok(TransmissionSet {
        scheme,
        params,
        transmissions: out,
        by_subset,
        saved,
    })
}

/// `Y_A^keys` for every `(t+1)`-subset.
pub fn transmissions_keys(d: &DemandVector, placement: &Placement) -> Result<TransmissionSet> {
    transmissions(Scheme::Keys, d, placement)
}

/// `Y_A` for every `(t+1)`-subset.
pub fn transmissions_keyless(d: &DemandVector, placement: &Placement) -> Result<TransmissionSet> {
    transmissions(Scheme::Keyless, d, placement)
}

/// Keyed on profile `(t,1)`, keyless when the subset meets the leaders, saved otherwise.
pub fn transmissions_common(d: &DemandVector, placement: &Placement) -> Result<TransmissionSet> {
    transmissions(Scheme::Common, d, placement)
}
