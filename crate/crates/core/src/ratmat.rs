//! Dense exact linear algebra over the rationals.
//!
//! Ranks are computed by fraction-free (Bareiss) elimination on an integer
//! rescaling of the matrix, which is deterministic and avoids coefficient
//! blow-up surprises. Kernels and solves go through rational reduced row
//! echelon form so the returned bases are canonical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    /// Exact rank by Bareiss elimination over the integers.
    pub fn rank(&self) -> usize {
        // clear denominators row by row; this does not change the rank
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let mut lcm = BigInt::one();
                for c in 0..self.cols {
                    let d = self.get(r, c).denom();
                    lcm = crate::ratmat::lcm(&lcm, d);
                }
                (0..self.cols)
                    .map(|c| {
                        let v = self.get(r, c);
                        v.numer() * (&lcm / v.denom())
                    })
                    .collect()
            })
            .collect();

        let mut rank = 0usize;
        let mut prev = BigInt::one();
        let mut row = 0usize;
        for col in 0..self.cols {
            // first nonzero entry at or below `row` (deterministic pivoting)
            let pivot = (row..self.rows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            for r in row + 1..self.rows {
                for c in col + 1..self.cols {
                    let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                    debug_assert!((&num % &prev).is_zero());
                    m[r][c] = num / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            row += 1;
            rank += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            let pivot = (row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            for c in 0..m.cols {
                let tmp = m.get(row, c).clone();
                m.set(row, c, m.get(p, c).clone());
                m.set(p, c, tmp);
            }
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for c in col..m.cols {
                        let v = m.get(r, c) - m.get(row, c) * &factor;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Canonical basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = rhs` when the solution exists and is unique.
    pub fn solve(&self, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
        if rhs.len() != self.rows {
            return Err(Error::InvalidArgument(format!(
                "rhs length {} != row count {}",
                rhs.len(),
                self.rows
            )));
        }
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::InvalidArgument("inconsistent linear system".into()));
        }
        if pivots.len() != self.cols {
            return Err(Error::InvalidArgument(
                "linear system is underdetermined".into(),
            ));
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(i, self.cols).clone();
        }
        Ok(x)
    }
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let g = gcd(a.clone(), b.clone());
    (a / &g * b).abs()
}

fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    a = a.abs();
    b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}
