use std::ops::AddAssign;

use super::field::Gf256;

/// Sparse linear functional: sorted `(variable, coefficient)` pairs with nonzero
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm {
    terms: Vec<(usize, Gf256)>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(var: usize) -> Self {
        LinearForm {
            terms: vec![(var, Gf256::ONE)],
        }
    }

    /// Builds a form from arbitrary terms, merging repeats and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (usize, Gf256)>>(terms: I) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(usize, Gf256)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => out.push((v, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        LinearForm { terms: out }
    }

    pub fn terms(&self) -> &[(usize, Gf256)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, assignment: &[Gf256]) -> Gf256 {
        self.terms.iter().map(|&(v, c)| c * assignment[v]).sum()
    }

    pub fn to_dense(&self, cols: usize) -> Vec<Gf256> {
        let mut row = vec![Gf256::ZERO; cols];
        for &(v, c) in &self.terms {
            row[v] = c;
        }
        row
    }
}

impl AddAssign<&LinearForm> for LinearForm {
    fn add_assign(&mut self, rhs: &LinearForm) {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), rhs.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ca)), Some(&&(vb, cb))) => {
                    if va < vb {
                        out.push((va, ca));
                        a.next();
                    } else if vb < va {
                        out.push((vb, cb));
                        b.next();
                    } else {
                        let c = ca + cb;
                        if !c.is_zero() {
                            out.push((va, c));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&t), None) => {
                    out.push(t);
                    a.next();
                }
                (None, Some(&&t)) => {
                    out.push(t);
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.terms = out;
    }
}
