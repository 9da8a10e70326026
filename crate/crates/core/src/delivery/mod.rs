//! Delivery phase: demand analysis and the transmission sets of the three schemes.

mod demand;
mod recover;
mod transmission;

pub use demand::{analyze_demands, demand_profile, DemandAnalysis, DemandProfile, DemandVector};
pub use recover::{recover_saved, recovery_subsets};
pub use transmission::{
    summands_for, transmissions, transmissions_common, transmissions_keyless, transmissions_keys,
    Scheme, Transmission, TransmissionRecord, TransmissionSet,
};
