//! Secretive coded caching on a broadcast network.
//!
//! Files are split by a ramp secret-sharing outer code, shares and keys are placed
//! in user caches, and one of three delivery schemes broadcasts coded payloads.
//! The crate decodes every user's demand and decides exactly, by rank arguments
//! over GF(2^8), whether any user learns anything about files it did not request.

pub mod combinatorics;
pub mod decoder;
pub mod delivery;
mod error;
pub mod gf_linear;
pub mod leakage_oracle;
pub mod placement;
pub mod rate_analysis;
pub mod secret_sharing;

pub use combinatorics::{binom, enumerate_subsets, subset_at, UserSubset};
pub use error::{Error, Result};
pub use gf_linear::Gf256;
pub use secret_sharing::SystemParams;
