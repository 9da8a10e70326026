use std::fmt;

use super::field::{axpy, Gf256};
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(2^8).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf256>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Gf256::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Gf256::ONE;
        }
        m
    }

    pub fn from_rows<R: AsRef<[Gf256]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor from raw bytes, mainly for tests.
    pub fn from_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Self {
        assert_eq!(bytes.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: bytes.iter().copied().map(Gf256).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Gf256] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Gf256] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[Gf256]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)];
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Gf256]) -> Result<Vec<Gf256>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| *a * *b).sum())
            .collect())
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut basis = RowEchelon::new(self.cols);
        for i in 0..self.rows {
            basis.insert(self.row(i));
        }
        basis.rank()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Gf256;
    fn index(&self, (r, c): (usize, usize)) -> &Gf256 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Gf256 {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for v in self.row(i) {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

/// True iff `v` is a linear combination of the rows of `m`.
pub fn in_row_space(v: &[Gf256], m: &Matrix) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            got: v.len(),
        });
    }
    let mut basis = RowEchelon::new(m.cols());
    for i in 0..m.rows() {
        basis.insert(m.row(i));
    }
    Ok(basis.contains(v))
}

/// Some `x` with `m x = rhs`, or [`Error::NoSolution`]. Free variables are set to zero.
pub fn solve(m: &Matrix, rhs: &[Gf256]) -> Result<Vec<Gf256>> {
    if rhs.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    let cols = m.cols();
    // augmented [m | rhs]
    let mut aug = Matrix::zeros(m.rows(), cols + 1);
    for i in 0..m.rows() {
        aug.row_mut(i)[..cols].copy_from_slice(m.row(i));
        aug[(i, cols)] = rhs[i];
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..aug.rows()).find(|&i| !aug[(i, c)].is_zero()) else {
            continue;
        };
        swap_rows(&mut aug, r, p);
        let inv = aug[(r, c)].inv().expect("nonzero pivot");
        for v in aug.row_mut(r) {
            *v *= inv;
        }
        let pivot_row = aug.row(r).to_vec();
        for i in 0..aug.rows() {
            if i != r {
                let f = aug[(i, c)];
                axpy(aug.row_mut(i), f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == aug.rows() {
            break;
        }
    }
    if (r..aug.rows()).any(|i| !aug[(i, cols)].is_zero()) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![Gf256::ZERO; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[(i, cols)];
    }
    Ok(x)
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    let (lo, hi) = (a.min(b), a.max(b));
    let (head, tail) = m.data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

/// Incrementally maintained row-echelon basis of a row space.
///
/// Each stored row has a 1 in its pivot column and zeros in every other pivot
/// column, so a candidate vector reduces in a single pass.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    cols: usize,
    rows: Vec<Vec<Gf256>>,
    pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn new(cols: usize) -> Self {
        RowEchelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduced basis rows, ordered by pivot column.
    pub fn basis(&self) -> &[Vec<Gf256>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, v: &mut [Gf256]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p];
            if !f.is_zero() {
                axpy(v, f, row);
            }
        }
    }

    /// Adds `v` to the spanning set. Returns true when the rank grew.
    pub fn insert(&mut self, v: &[Gf256]) -> bool {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x *= inv;
        }
        // Keep the basis fully reduced: pivot columns are zero in every other row.
        for row in self.rows.iter_mut() {
            let f = row[p];
            if !f.is_zero() {
                axpy(row, f, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &[Gf256]) -> bool {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
        let bytes: Vec<u8> = (0..rows * cols).map(|_| rng.gen()).collect();
        Matrix::from_bytes(rows, cols, &bytes)
    }

    /// Rank-deficient matrix: every row is a combination of `rank` random rows.
    fn low_rank_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Matrix {
        let gens = random_matrix(rng, rank, cols);
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for g in 0..rank {
                let c = Gf256(rng.gen());
                axpy(m.row_mut(i), c, gens.row(g));
            }
        }
        m
    }

    // Elimination-free oracle: determinant by permutation expansion.
    fn det(m: &Matrix) -> Gf256 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        // characteristic 2: signs vanish
        perms(m.rows())
            .into_iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .fold(Gf256::ONE, |acc, (i, &j)| acc * m[(i, j)])
            })
            .sum()
    }

    fn combos(n: usize, r: usize) -> Vec<Vec<usize>> {
        crate::combinatorics::enumerate_subsets(n, r)
            .into_iter()
            .map(|s| s.members().map(|u| u - 1).collect())
            .collect()
    }

    /// Brute-force rank: largest r with some nonzero r x r minor.
    fn brute_rank(m: &Matrix) -> usize {
        let max = m.rows().min(m.cols());
        (1..=max)
            .rev()
            .find(|&r| {
                combos(m.rows(), r).iter().any(|rs| {
                    combos(m.cols(), r)
                        .iter()
                        .any(|cs| !det(&m.select(rs, cs)).is_zero())
                })
            })
            .unwrap_or(0)
    }

    #[test]
    fn identity_and_zero_rank() {
        assert_eq!(rank(&Matrix::identity(3)), 3);
        assert_eq!(rank(&Matrix::zeros(4, 5)), 0);
        assert_eq!(rank(&Matrix::zeros(0, 0)), 0);
    }

    #[test]
    fn rank_matches_minor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let rows = 1 + trial % 6;
            let cols = 1 + (trial * 5) % 8;
            let m = if trial % 3 == 0 {
                low_rank_matrix(&mut rng, rows, cols, 1 + trial % 3)
            } else {
                random_matrix(&mut rng, rows, cols)
            };
            assert_eq!(m.rank(), brute_rank(&m), "{m:?}");
        }
    }

    #[test]
    fn duplicated_row_keeps_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 4, 6);
            let r = m.rank();
            let mut m2 = m.clone();
            m2.push_row(m.row(rng.gen_range(0..4))).unwrap();
            assert_eq!(m2.rank(), r);
            assert_eq!(brute_rank(&m2), r);
        }
    }

    #[test]
    fn rank_invariant_under_row_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = low_rank_matrix(&mut rng, 6, 8, 4);
        let order = [5, 2, 0, 4, 1, 3];
        let p = m.select(&order, &(0..8).collect::<Vec<_>>());
        assert_eq!(m.rank(), p.rank());
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn row_space_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 3, 5);
        for i in 0..3 {
            assert!(in_row_space(m.row(i), &m).unwrap());
        }
        assert!(in_row_space(&[Gf256::ZERO; 5], &m).unwrap());
        assert!(matches!(
            in_row_space(&[Gf256::ZERO; 4], &m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn vector_outside_span_found_by_enumeration() {
        // 2-row matrix over GF(2^8): its span has at most 65536 elements, small
        // enough to enumerate outright.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3 {
            let m = low_rank_matrix(&mut rng, 3, 4, 2);
            let base: Vec<&[Gf256]> = {
                let mut b = RowEchelon::new(4);
                let mut picked = Vec::new();
                for i in 0..3 {
                    if b.insert(m.row(i)) {
                        picked.push(m.row(i));
                    }
                }
                picked
            };
            let mut span = std::collections::HashSet::new();
            for a in 0..=255u8 {
                for b in 0..=255u8 {
                    let v: Vec<u8> = (0..4)
                        .map(|j| (Gf256(a) * base[0][j] + Gf256(b) * base[1][j]).0)
                        .collect();
                    span.insert(v);
                }
            }
            let outside: Vec<Gf256> = (0..u32::MAX)
                .map(|_| (0..4).map(|_| rng.gen::<u8>()).collect::<Vec<u8>>())
                .find(|v| !span.contains(v))
                .unwrap()
                .into_iter()
                .map(Gf256)
                .collect();
            assert!(!in_row_space(&outside, &m).unwrap());
            let mut ext = m.clone();
            ext.push_row(&outside).unwrap();
            assert_eq!(ext.rank(), m.rank() + 1);
            let inside: Vec<Gf256> = span.iter().nth(17).unwrap().iter().copied().map(Gf256).collect();
            assert!(in_row_space(&inside, &m).unwrap());
        }
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let rhs: Vec<Gf256> = [1u8, 2, 3].into_iter().map(Gf256).collect();
        assert_eq!(solve(&Matrix::identity(3), &rhs).unwrap(), rhs);
        assert!(matches!(
            solve(&Matrix::zeros(3, 3), &rhs),
            Err(Error::NoSolution)
        ));
        assert!(solve(&Matrix::zeros(3, 3), &[Gf256::ZERO; 3]).is_ok());
    }

    #[test]
    fn solve_recovers_known_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut done = 0;
        while done < 30 {
            let n = 1 + done % 7;
            let m = random_matrix(&mut rng, n, n);
            if m.rank() != n {
                continue;
            }
            let x0: Vec<Gf256> = (0..n).map(|_| Gf256(rng.gen())).collect();
            let rhs = m.mul_vec(&x0).unwrap();
            assert_eq!(solve(&m, &rhs).unwrap(), x0);
            done += 1;
        }
    }

    #[test]
    fn solve_underdetermined_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = low_rank_matrix(&mut rng, 5, 7, 3);
        let x0: Vec<Gf256> = (0..7).map(|_| Gf256(rng.gen())).collect();
        let rhs = m.mul_vec(&x0).unwrap();
        let x = solve(&m, &rhs).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), rhs);
    }

    #[test]
    fn echelon_contains_agrees_with_rank_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let r = 2 + rng.gen_range(0..3);
            let m = low_rank_matrix(&mut rng, 4, 5, r);
            let v: Vec<Gf256> = if rng.gen_bool(0.5) {
                let mut v = vec![Gf256::ZERO; 5];
                axpy(&mut v, Gf256(rng.gen()), m.row(0));
                axpy(&mut v, Gf256(rng.gen()), m.row(3));
                v
            } else {
                (0..5).map(|_| Gf256(rng.gen())).collect()
            };
            let mut ext = m.clone();
            ext.push_row(&v).unwrap();
            assert_eq!(in_row_space(&v, &m).unwrap(), ext.rank() == m.rank());
        }
    }
}
