use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AffinePoint, Polynomial};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

pub const DEFAULT_DET_LIMIT: usize = 12;

/// Dense matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Polynomial::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Polynomial::one()
            } else {
                Polynomial::zero()
            }
        })
    }

    /// Entries from a 0-based index function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.entries.iter()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(self.cols, other.rows));
        }
        Ok(PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self.get(i, k).is_zero() && !other.get(k, j).is_zero())
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        }))
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::SizeMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &BigInt) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn evaluate(&self, pt: &AffinePoint) -> Result<RatMatrix> {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row: Result<Vec<BigRational>> =
                (0..self.cols).map(|j| self.get(i, j).evaluate(pt)).collect();
            rows.push(row?);
        }
        Ok(RatMatrix::from_rows(rows))
    }

    pub fn determinant(&self) -> Result<Polynomial> {
        self.determinant_with_limit(DEFAULT_DET_LIMIT)
    }

    /// Laplace expansion along rows, memoized on the set of columns still in play.
    pub fn determinant_with_limit(&self, limit: usize) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n > limit || n > 31 {
            return Err(Error::MatrixTooLarge { size: n, limit });
        }
        if n == 0 {
            return Ok(Polynomial::one());
        }
        // minors[S] = det of the bottom |S| rows restricted to columns S
        let mut minors: HashMap<u32, Polynomial> = HashMap::new();
        minors.insert(0, Polynomial::one());
        for row in (0..n).rev() {
            let mut next: HashMap<u32, Polynomial> = HashMap::new();
            for (&set, minor) in &minors {
                for c in 0..n {
                    let bit = 1u32 << c;
                    if set & bit != 0 {
                        continue;
                    }
                    let a = self.get(row, c);
                    if a.is_zero() {
                        continue;
                    }
                    let below = (set & (bit - 1)).count_ones();
                    let mut t = a * minor;
                    if below % 2 == 1 {
                        t = -t;
                    }
                    let slot = next.entry(set | bit).or_default();
                    *slot += t;
                }
            }
            next.retain(|_, p| !p.is_zero());
            minors = next;
        }
        Ok(minors.remove(&((1u32 << n) - 1)).unwrap_or_default())
    }
}
