//! Ramp Shamir sharing over GF(2^8).
//!
//! For each of the `F_s` symbol positions a polynomial of degree `binom(K,t) - 1`
//! is formed: coefficients `0..z` are sharing randomness, coefficients
//! `z..binom(K,t)` are that position's symbol from each file block. Share `j`
//! (0-based colex index of its t-subset) is the evaluation at `alpha_j = j + 1`.
//!
//! All shares together determine every coefficient (square Vandermonde), while any
//! `z` shares see the randomness through a `z x z` Vandermonde block and so carry
//! no information about the file.

use std::collections::BTreeSet;

use super::params::SystemParams;
use crate::gf_linear::{rank, solve, Gf256, LinearForm, Matrix};
use crate::error::{Error, Result};

/// Evaluation point of the share with colex index `share`.
pub fn evaluation_point(share: usize) -> Gf256 {
    debug_assert!(share < 255);
    Gf256(share as u8 + 1)
}

/// `n_shares x n_shares` matrix with entry `(j, i) = alpha_j^i`.
pub fn evaluation_matrix(params: &SystemParams) -> Matrix {
    let n = params.n_shares();
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let a = evaluation_point(j);
        let mut p = Gf256::ONE;
        for i in 0..n {
            m[(j, i)] = p;
            p *= a;
        }
    }
    m
}

/// Polynomial coefficient `coeff` at share position `pos` of a file, as an index
/// into the file (for block coefficients) or into its randomness vector.
enum Coefficient {
    Randomness(usize),
    FileSymbol(usize),
}

fn coefficient(params: &SystemParams, coeff: usize, pos: usize) -> Coefficient {
    let fs = params.share_len();
    if coeff < params.threshold() {
        Coefficient::Randomness(coeff * fs + pos)
    } else {
        Coefficient::FileSymbol((coeff - params.threshold()) * fs + pos)
    }
}

/// Encodes one file into `binom(K,t)` share payloads of `F_s` symbols each.
///
/// `randomness` holds `z * F_s` symbols, laid out coefficient-major.
pub fn encode_file(
    file: &[Gf256],
    params: &SystemParams,
    randomness: &[Gf256],
) -> Result<Vec<Vec<Gf256>>> {
    if file.len() != params.file_len() {
        return Err(Error::DimensionMismatch {
            expected: params.file_len(),
            got: file.len(),
        });
    }
    let expected = params.threshold() * params.share_len();
    if randomness.len() != expected {
        return Err(Error::RandomnessLength {
            expected,
            got: randomness.len(),
        });
    }
    let n = params.n_shares();
    let fs = params.share_len();
    let mut shares = vec![vec![Gf256::ZERO; fs]; n];
    for pos in 0..fs {
        let coeffs: Vec<Gf256> = (0..n)
            .map(|c| match coefficient(params, c, pos) {
                Coefficient::Randomness(i) => randomness[i],
                Coefficient::FileSymbol(i) => file[i],
            })
            .collect();
        for (j, share) in shares.iter_mut().enumerate() {
            // Horner
            let a = evaluation_point(j);
            share[pos] = coeffs.iter().rev().fold(Gf256::ZERO, |acc, &c| acc * a + c);
        }
    }
    Ok(shares)
}

/// Recovers the file from all `binom(K,t)` share payloads.
pub fn reconstruct_file(payloads: &[Vec<Gf256>], params: &SystemParams) -> Result<Vec<Gf256>> {
    if payloads.len() != params.n_shares() {
        return Err(Error::MissingShares {
            expected: params.n_shares(),
            got: payloads.len(),
        });
    }
    let fs = params.share_len();
    if let Some(bad) = payloads.iter().find(|p| p.len() != fs) {
        return Err(Error::DimensionMismatch {
            expected: fs,
            got: bad.len(),
        });
    }
    let vm = evaluation_matrix(params);
    let mut file = vec![Gf256::ZERO; params.file_len()];
    for pos in 0..fs {
        let rhs: Vec<Gf256> = payloads.iter().map(|p| p[pos]).collect();
        let coeffs = solve(&vm, &rhs)?;
        for (c, value) in coeffs.into_iter().enumerate() {
            if let Coefficient::FileSymbol(i) = coefficient(params, c, pos) {
                file[i] = value;
            }
        }
    }
    Ok(file)
}

/// True iff the chosen `z` shares are independent of the file, i.e. the block of
/// the evaluation map on those rows and the randomness columns has full rank `z`.
pub fn secrecy_certificate(params: &SystemParams, share_indices: &[usize]) -> Result<bool> {
    let z = params.threshold();
    let distinct: BTreeSet<usize> = share_indices.iter().copied().collect();
    if share_indices.len() != z || distinct.len() != z {
        return Err(Error::CertificateSubset {
            expected: z,
            reason: format!("got {:?}", share_indices),
        });
    }
    if let Some(&bad) = distinct.iter().find(|&&j| j >= params.n_shares()) {
        return Err(Error::CertificateSubset {
            expected: z,
            reason: format!("share index {bad} out of range"),
        });
    }
    let vm = evaluation_matrix(params);
    let cols: Vec<usize> = (0..z).collect();
    Ok(rank(&vm.select(share_indices, &cols)) == z)
}

/// Symbol `pos` of share `share` of file `file`, as a linear form over the
/// instance's variable layout.
pub fn share_form(params: &SystemParams, file: usize, share: usize, pos: usize) -> LinearForm {
    let layout = params.layout();
    let a = evaluation_point(share);
    let mut power = Gf256::ONE;
    let mut terms = Vec::with_capacity(params.n_shares());
    for c in 0..params.n_shares() {
        let var = match coefficient(params, c, pos) {
            Coefficient::Randomness(_) => layout.rand_var(file, c, pos),
            Coefficient::FileSymbol(i) => layout.file_var(file, i),
        };
        terms.push((var, power));
        power *= a;
    }
    LinearForm::from_terms(terms)
}
