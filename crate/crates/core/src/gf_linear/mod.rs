//! GF(2^8) arithmetic and the dense linear algebra used by the outer code and the
//! leakage analysis.

mod field;
mod form;
mod matrix;

pub use field::{axpy, mul, Gf256};
pub use form::LinearForm;
pub use matrix::{in_row_space, rank, solve, Matrix, RowEchelon};
