//! Linear algebra over GF(p): rank by Gaussian elimination, and the Jordan
//! type of a nilpotent operator read off from the ranks of its powers.
//!
//! For a nilpotent `N` on a space of dimension `n`, the number of Jordan
//! blocks of size at least `t` is `rank(N^(t-1)) - rank(N^t)`. Only ranks are
//! ever needed, so no eigenvector chains are built.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{Prime, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfpError {
    #[error("operator is not nilpotent: rank of its powers stalls at {stalled_rank}")]
    NotNilpotent { stalled_rank: usize },
    #[error("rank profile is not a valid nilpotent profile: {0}")]
    BadRankProfile(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Dense matrix over GF(p), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    modulus: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(modulus: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            modulus,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Prime, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % modulus.get();
        }
        m
    }

    pub fn from_rows(modulus: Prime, rows: &[Vec<u64>]) -> Result<Self, GfpError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GfpError::Dimension("ragged rows".into()));
        }
        let p = modulus.get();
        Ok(FpMatrix {
            modulus,
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| x % p).collect(),
        })
    }

    /// Build from column vectors of equal length `rows`.
    pub fn from_columns(modulus: Prime, rows: usize, columns: &[Vec<u64>]) -> Result<Self, GfpError> {
        let mut m = Self::zeros(modulus, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(GfpError::Dimension(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, &x) in col.iter().enumerate() {
                m.entries[i * m.cols + j] = x % modulus.get();
            }
        }
        Ok(m)
    }

    /// Nilpotent part of a single `n x n` Jordan block: ones on the superdiagonal.
    pub fn nilpotent_jordan_block(modulus: Prime, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 1..n {
            m.set(i - 1, i, Residue::one(modulus));
        }
        m
    }

    pub fn block_diagonal(modulus: Prime, blocks: &[FpMatrix]) -> Result<Self, GfpError> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(modulus, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            if b.modulus != modulus {
                return Err(GfpError::Dimension("blocks over different fields".into()));
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.entries[(r0 + i) * cols + c0 + j] = b.entries[i * b.cols + j];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(m)
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Residue {
        Residue::new(self.entries[i * self.cols + j], self.modulus)
    }

    pub fn set(&mut self, i: usize, j: usize, value: Residue) {
        assert_eq!(value.modulus(), self.modulus);
        self.entries[i * self.cols + j] = value.value();
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let p = self.modulus.get() as u128;
        (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let s = row
                    .iter()
                    .zip(v)
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % p);
                s as u64
            })
            .collect()
    }

    pub fn mul(&self, rhs: &FpMatrix) -> Result<FpMatrix, GfpError> {
        if self.cols != rhs.rows || self.modulus != rhs.modulus {
            return Err(GfpError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.modulus.get() as u128;
        let mut out = FpMatrix::zeros(self.modulus, self.rows, rhs.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.entries[i * self.cols + t] as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.entries[idx] =
                        ((out.entries[idx] as u128 + a * rhs.entries[t * rhs.cols + j] as u128) % p) as u64;
                }
            }
        }
        Ok(out)
    }

    /// Rank over GF(p).
    pub fn rank(&self) -> usize {
        rank_in_place(self.modulus, self.rows, self.cols, &mut self.entries.clone())
    }

    /// Jordan type of this matrix viewed as a nilpotent operator.
    pub fn jordan_type(&self) -> Result<JordanType, GfpError> {
        if self.rows != self.cols {
            return Err(GfpError::Dimension("jordan type needs a square matrix".into()));
        }
        jordan_type(|v| self.apply(v), self.rows, self.modulus)
    }
}

fn rank_in_place(modulus: Prime, rows: usize, cols: usize, a: &mut [u64]) -> usize {
    let pp = modulus.get() as u128;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in col..cols {
                a.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = Residue::new(a[rank * cols + col], modulus)
            .inverse()
            .expect("nonzero pivot")
            .value() as u128;
        for j in col..cols {
            a[rank * cols + j] = ((a[rank * cols + j] as u128 * inv) % pp) as u64;
        }
        for r in rank + 1..rows {
            let factor = a[r * cols + col] as u128;
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let sub = (factor * a[rank * cols + j] as u128) % pp;
                a[r * cols + j] = ((a[r * cols + j] as u128 + pp - sub) % pp) as u64;
            }
        }
        rank += 1;
    }
    rank
}

/// Multiset of Jordan block sizes, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanType {
    blocks: Vec<usize>,
    ambient_dim: usize,
}

impl JordanType {
    pub fn from_blocks(mut blocks: Vec<usize>) -> Self {
        blocks.retain(|&b| b > 0);
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        let ambient_dim = blocks.iter().sum();
        JordanType { blocks, ambient_dim }
    }

    /// Recover the block multiset from `ranks[t] = rank(N^t)`, `ranks[0] = dim`,
    /// ending at the first zero.
    pub fn from_rank_profile(ranks: &[usize]) -> Result<Self, GfpError> {
        let Some(&dim) = ranks.first() else {
            return Err(GfpError::BadRankProfile("empty profile".into()));
        };
        if *ranks.last().unwrap() != 0 {
            return Err(GfpError::BadRankProfile("profile does not reach zero".into()));
        }
        // at_least[t] = number of blocks of size >= t, t >= 1
        let at_least: Vec<usize> = ranks
            .windows(2)
            .map(|w| {
                w[0].checked_sub(w[1])
                    .ok_or_else(|| GfpError::BadRankProfile(format!("rank increases: {ranks:?}")))
            })
            .collect::<Result<_, _>>()?;
        let mut blocks = Vec::new();
        for (i, &n) in at_least.iter().enumerate() {
            let next = at_least.get(i + 1).copied().unwrap_or(0);
            let exactly = n
                .checked_sub(next)
                .ok_or_else(|| GfpError::BadRankProfile(format!("not convex: {ranks:?}")))?;
            blocks.extend(std::iter::repeat_n(i + 1, exactly));
        }
        let jt = JordanType::from_blocks(blocks);
        debug_assert_eq!(jt.ambient_dim, dim);
        Ok(jt)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Block size -> multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &b in &self.blocks {
            *m.entry(b).or_insert(0) += 1;
        }
        m
    }

    pub fn union(&self, other: &JordanType) -> JordanType {
        JordanType::from_blocks(self.blocks.iter().chain(&other.blocks).copied().collect())
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Build the rank profile `rank(N^0), rank(N^1), ...` from a rank oracle,
/// stopping at zero. A stall above zero means `N` is not nilpotent.
pub fn rank_profile(dim: usize, mut rank_of_power: impl FnMut(usize) -> usize) -> Result<Vec<usize>, GfpError> {
    let mut ranks = vec![dim];
    let mut t = 1;
    while *ranks.last().unwrap() > 0 {
        let r = rank_of_power(t);
        let prev = *ranks.last().unwrap();
        if r >= prev {
            return Err(GfpError::NotNilpotent { stalled_rank: prev });
        }
        ranks.push(r);
        t += 1;
    }
    Ok(ranks)
}

/// Jordan type of the operator `apply` on GF(p)^dim.
///
/// Powers are formed by applying the operator again to the images of the
/// standard basis; no power matrix is multiplied out.
pub fn jordan_type(
    apply: impl Fn(&[u64]) -> Vec<u64>,
    dim: usize,
    modulus: Prime,
) -> Result<JordanType, GfpError> {
    let mut images: Vec<Vec<u64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1 % modulus.get();
            e
        })
        .collect();
    let ranks = rank_profile(dim, |_| {
        for v in images.iter_mut() {
            *v = apply(v);
        }
        FpMatrix::from_columns(modulus, dim, &images)
            .expect("images have ambient length")
            .rank()
    })?;
    JordanType::from_rank_profile(&ranks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(FpMatrix::identity(p(5), 4).rank(), 4);
        assert_eq!(FpMatrix::zeros(p(5), 3, 4).rank(), 0);
        assert_eq!(FpMatrix::nilpotent_jordan_block(p(3), 6).rank(), 5);
        // rows 1,2 and 3 = 1 + 2 (mod 7)
        let m = FpMatrix::from_rows(p(7), &[vec![1, 2, 3], vec![4, 5, 6], vec![5, 0, 2]]).unwrap();
        assert_eq!(m.rank(), 2);
        // singular only mod 2
        let m = FpMatrix::from_rows(p(2), &[vec![1, 1], vec![1, 3]]).unwrap();
        assert_eq!(m.rank(), 1);
        let m = FpMatrix::from_rows(p(5), &[vec![1, 1], vec![1, 3]]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn matrix_product() {
        let n = FpMatrix::nilpotent_jordan_block(p(5), 3);
        let n2 = n.mul(&n).unwrap();
        assert_eq!(n2.rank(), 1);
        assert_eq!(n2.mul(&n).unwrap(), FpMatrix::zeros(p(5), 3, 3));
        assert!(n.mul(&FpMatrix::zeros(p(5), 2, 2)).is_err());
    }

    #[test]
    fn single_block() {
        for n in 1..8 {
            let jt = FpMatrix::nilpotent_jordan_block(p(5), n).jordan_type().unwrap();
            assert_eq!(jt.blocks(), &[n]);
        }
    }

    #[test]
    fn zero_operator() {
        let jt = FpMatrix::zeros(p(7), 4, 4).jordan_type().unwrap();
        assert_eq!(jt.blocks(), &[1, 1, 1, 1]);
        assert_eq!(jt.ambient_dim(), 4);
    }

    #[test]
    fn direct_sum_is_union() {
        let q = p(3);
        let parts = [4usize, 1, 3, 3, 2];
        let blocks: Vec<FpMatrix> = parts.iter().map(|&n| FpMatrix::nilpotent_jordan_block(q, n)).collect();
        let m = FpMatrix::block_diagonal(q, &blocks).unwrap();
        let jt = m.jordan_type().unwrap();
        assert_eq!(jt.blocks(), &[4, 3, 3, 2, 1]);
        let a = blocks[0].jordan_type().unwrap();
        let b = FpMatrix::block_diagonal(q, &blocks[1..]).unwrap().jordan_type().unwrap();
        assert_eq!(a.union(&b), jt);
    }

    #[test]
    fn not_nilpotent() {
        let err = FpMatrix::identity(p(5), 3).jordan_type().unwrap_err();
        assert_eq!(err, GfpError::NotNilpotent { stalled_rank: 3 });
    }

    #[test]
    fn profile_validation() {
        assert_eq!(
            JordanType::from_rank_profile(&[4, 2, 0]).unwrap().blocks(),
            &[2, 2]
        );
        assert!(JordanType::from_rank_profile(&[4, 2]).is_err());
        assert!(JordanType::from_rank_profile(&[]).is_err());
        // 3 - 2 = 1 block of size >= 1 but 2 - 0 = 2 of size >= 2
        assert!(JordanType::from_rank_profile(&[3, 2, 0]).is_err());
    }

    #[test]
    fn multiplicities_and_display() {
        let jt = JordanType::from_blocks(vec![5, 5, 1, 5]);
        assert_eq!(jt.multiplicities(), BTreeMap::from([(1, 1), (5, 3)]));
        assert_eq!(jt.to_string(), "{5, 5, 5, 1}");
    }
}
