//! Type `A_{N-1}` Cartan data.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{q, Q};

/// Cartan data for `sl_N`: the Cartan matrix `a`, its symmetrized half `B = a/2`,
/// the exact inverse `B^{-1}`, and the dual Coxeter number `g = N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraData {
    pub n: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<Q>>,
    pub binv: Vec<Vec<Q>>,
    pub g: i64,
}

impl AlgebraData {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        let r = n - 1;
        let mut a = vec![vec![0i64; r]; r];
        for i in 0..r {
            a[i][i] = 2;
            if i + 1 < r {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        let b = a
            .iter()
            .map(|row| row.iter().map(|&x| q(x, 2)).collect())
            .collect();
        // closed form: (B^{-1})_{ij} = 2 min(i,j) (N - max(i,j)) / N, 1-based.
        let binv = (1..=r)
            .map(|i| {
                (1..=r)
                    .map(|j| q(2 * i.min(j) as i64 * (n - i.max(j)) as i64, n as i64))
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            a,
            b,
            binv,
            g: n as i64,
        })
    }

    /// Rank `N - 1`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// `B_ij` with 1-based indices.
    pub fn b_entry(&self, i: usize, j: usize) -> &Q {
        &self.b[i - 1][j - 1]
    }

    /// `(B^{-1})^{ij}` with 1-based indices.
    pub fn binv_entry(&self, i: usize, j: usize) -> &Q {
        &self.binv[i - 1][j - 1]
    }

    pub fn a_entry(&self, i: usize, j: usize) -> i64 {
        self.a[i - 1][j - 1]
    }

    pub fn check_a_index(&self, i: usize) -> Result<()> {
        if (1..self.n).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("a-index {i} not in 1..={}", self.n - 1)))
        }
    }

    pub fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if 1 <= i && i < j && j <= self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("pair ({i},{j}) violates 1 <= i < j <= {}", self.n)))
        }
    }
}

/// Exact inverse by Gauss-Jordan elimination; `None` if singular.
pub fn invert_exact(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(x: &[Vec<Q>], y: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = x.len();
    let m = y[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..y.len()).fold(Q::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}
