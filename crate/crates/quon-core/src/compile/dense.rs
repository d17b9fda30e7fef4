//! Dense tensors with `2^rank` complex entries; leg 0 is the most
//! significant bit of the flat index.

use crate::error::{QuonError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseTensor {
    pub rank: usize,
    pub entries: Vec<Complex64>,
}

impl DenseTensor {
    pub fn new(rank: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != 1 << rank {
            return Err(QuonError::InvalidDiagram(format!("rank {rank} needs {} entries, got {}", 1usize << rank, entries.len())));
        }
        Ok(Self { rank, entries })
    }

    pub fn scalar(v: Complex64) -> Self {
        Self { rank: 0, entries: vec![v] }
    }

    pub fn zeros(rank: usize) -> Self {
        Self { rank, entries: vec![Complex64::new(0.0, 0.0); 1 << rank] }
    }

    /// Row-major `2^n × 2^n` matrix `M[out][in]` as a rank-`2n` tensor
    /// with the output legs first.
    pub fn from_matrix(n: usize, m: &[Vec<Complex64>]) -> Self {
        Self { rank: 2 * n, entries: m.iter().flatten().copied().collect() }
    }

    /// Inverse of [`DenseTensor::from_matrix`] for even rank.
    pub fn to_matrix(&self) -> Vec<Vec<Complex64>> {
        let dim = 1usize << (self.rank / 2);
        self.entries.chunks(dim).map(<[Complex64]>::to_vec).collect()
    }

    pub fn bit(&self, index: usize, leg: usize) -> usize {
        index >> (self.rank - 1 - leg) & 1
    }

    /// Tensor whose leg `i` is leg `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.rank, "permutation length");
        let mut out = Self::zeros(self.rank);
        for (new_idx, slot) in out.entries.iter_mut().enumerate() {
            let mut old_idx = 0;
            for (i, &leg) in order.iter().enumerate() {
                let b = new_idx >> (self.rank - 1 - i) & 1;
                old_idx |= b << (self.rank - 1 - leg);
            }
            *slot = self.entries[old_idx];
        }
        out
    }

    /// Outer product; legs of `self` come first.
    pub fn outer(&self, other: &Self) -> Self {
        let entries = self.entries.iter().flat_map(|a| other.entries.iter().map(move |b| a * b)).collect();
        Self { rank: self.rank + other.rank, entries }
    }

    /// Sums over equal values of each leg pair; remaining legs keep their order.
    pub fn trace(&self, pairs: &[(usize, usize)]) -> Self {
        let traced: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let kept: Vec<usize> = (0..self.rank).filter(|l| !traced.contains(l)).collect();
        let mut out = Self::zeros(kept.len());
        for (idx, &v) in self.entries.iter().enumerate() {
            let bit = |l: usize| idx >> (self.rank - 1 - l) & 1;
            if pairs.iter().any(|&(a, b)| bit(a) != bit(b)) {
                continue;
            }
            let new = kept.iter().fold(0, |acc, &l| acc << 1 | bit(l));
            out.entries[new] += v;
        }
        out
    }

    /// Contracts leg `a` of `self` with leg `b` of `other` for each pair.
    pub fn contract(&self, other: &Self, pairs: &[(usize, usize)]) -> Self {
        let shifted: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a, b + self.rank)).collect();
        self.outer(other).trace(&shifted)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { rank: self.rank, entries: self.entries.iter().map(|e| e * s).collect() }
    }
}
