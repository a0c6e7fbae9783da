//! Exact linear algebra over ℚ.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// A dense matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<Vec<Rational>>,
    pub cols: usize,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows: vec![vec![Rational::zero(); cols]; rows], cols }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Reduced row echelon form and pivot columns. Pivots are the first
    /// nonzero entry scanning columns left to right.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = Rational::one() / &m[r][c];
            for x in m[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..self.cols {
                        let d = &f * &m[r][j];
                        m[i][j] = &m[i][j] - d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        m.truncate(r);
        (Matrix { rows: m, cols: self.cols }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in r.rows.iter().zip(&pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).fold(Rational::zero(), |s, (a, b)| s + a * b))
            .collect()
    }
}

/// Rank of a list of vectors of common length `n`.
pub fn rank_of(vectors: &[Vec<Rational>], n: usize) -> usize {
    Matrix::from_rows(vectors.to_vec(), n).rank()
}
