use std::fmt;

use serde::{Serialize, Serializer};

use crate::combinatorics::UserSubset;
use crate::error::{Error, Result};
use crate::secret_sharing::SystemParams;

/// `d`: the file requested by each of the `K` users (both 1-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DemandVector(Vec<usize>);

impl DemandVector {
    pub fn new(demands: Vec<usize>, params: &SystemParams) -> Result<Self> {
        if demands.len() != params.n_users() {
            return Err(Error::InvalidDemand(format!(
                "{} entries for {} users",
                demands.len(),
                params.n_users()
            )));
        }
        if let Some(&bad) = demands.iter().find(|&&f| f == 0 || f > params.n_files()) {
            return Err(Error::InvalidDemand(format!(
                "file {bad} outside 1..={}",
                params.n_files()
            )));
        }
        Ok(DemandVector(demands))
    }

    /// Demand of user `k`, 1-based.
    pub fn of(&self, k: usize) -> usize {
        self.0[k - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Users in `subset` with their demands sorted: `d(A)` up to permutation.
    pub fn sorted_demands_of(&self, subset: UserSubset) -> Vec<usize> {
        let mut v: Vec<usize> = subset.members().map(|u| self.of(u)).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for DemandVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for DemandVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for DemandVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Demand multiplicities within a subset, largest first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct DemandProfile(pub Vec<usize>);

impl DemandProfile {
    /// Whether the multiset of counts is exactly `{t, 1}`.
    pub fn is_t_one(&self, t: usize) -> bool {
        let mut want = vec![t, 1];
        want.sort_unstable_by(|a, b| b.cmp(a));
        self.0 == want
    }

    /// Whether every member demands the same file.
    pub fn is_uniform(&self) -> bool {
        self.0.len() == 1
    }
}

impl fmt::Display for DemandProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `d_p(A)`.
pub fn demand_profile(subset: UserSubset, d: &DemandVector) -> DemandProfile {
    let demands = d.sorted_demands_of(subset);
    let mut counts: Vec<usize> = Vec::new();
    let mut prev = None;
    for f in demands {
        if Some(f) == prev {
            *counts.last_mut().unwrap() += 1;
        } else {
            counts.push(1);
            prev = Some(f);
        }
    }
    counts.sort_unstable_by(|a, b| b.cmp(a));
    DemandProfile(counts)
}

/// Leaders, same-demand classes and the non-leader partition for one demand vector.
#[derive(Clone, Debug)]
pub struct DemandAnalysis {
    demands: DemandVector,
    leaders: UserSubset,
    same_demand: Vec<UserSubset>,
    nonleader_classes: Vec<UserSubset>,
}

/// Leaders are the lowest-indexed user of each distinct demand.
pub fn analyze_demands(d: &DemandVector) -> DemandAnalysis {
    let k = d.len();
    let mut leaders = UserSubset::EMPTY;
    // distinct demands in order of first appearance, with their user sets
    let mut classes: Vec<(usize, UserSubset)> = Vec::new();
    for u in 1..=k {
        match classes.iter_mut().find(|(f, _)| *f == d.of(u)) {
            Some((_, set)) => *set = set.insert(u),
            None => {
                leaders = leaders.insert(u);
                classes.push((d.of(u), UserSubset::singleton(u)));
            }
        }
    }
    let same_demand = (1..=k)
        .map(|u| classes.iter().find(|(f, _)| *f == d.of(u)).unwrap().1)
        .collect();
    let nonleader_classes = classes
        .iter()
        .map(|(_, set)| set.difference(leaders))
        .filter(|s| !s.is_empty())
        .collect();
    DemandAnalysis {
        demands: d.clone(),
        leaders,
        same_demand,
        nonleader_classes,
    }
}

impl DemandAnalysis {
    pub fn demands(&self) -> &DemandVector {
        &self.demands
    }

    /// `N_e(d)`
    pub fn n_unique(&self) -> usize {
        self.leaders.len()
    }

    /// `U`
    pub fn leaders(&self) -> UserSubset {
        self.leaders
    }

    /// `E_k`: all users sharing user `k`'s demand.
    pub fn same_demand(&self, k: usize) -> UserSubset {
        self.same_demand[k - 1]
    }

    /// The nonempty classes `E'_i` partitioning `[K] \ U` by demand.
    pub fn nonleader_classes(&self) -> &[UserSubset] {
        &self.nonleader_classes
    }

    pub fn non_leaders(&self) -> UserSubset {
        UserSubset::full(self.demands.len()).difference(self.leaders)
    }
}
