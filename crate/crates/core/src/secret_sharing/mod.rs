//! The `(binom(K-1,t-1), binom(K,t))` ramp secret-sharing outer code: every file is
//! split into `binom(K,t)` shares, all of which reconstruct it and any
//! `binom(K-1,t-1)` of which reveal nothing.

mod params;
mod ramp;
mod table;

pub use params::{SystemParams, VariableLayout};
pub use ramp::{
    encode_file, evaluation_matrix, evaluation_point, reconstruct_file, secrecy_certificate,
    share_form,
};
pub use table::{FileLibrary, Share, ShareLabel, ShareTable};
