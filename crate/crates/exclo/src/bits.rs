//! Word-packed bit rows: the storage behind adjacency matrices and the
//! candidate sets of the clique solver.

/// Number of 64-bit words needed for `n` bits.
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

pub fn set_bit(row: &mut [u64], i: usize) {
    row[i / 64] |= 1 << (i % 64);
}

pub fn clear_bit(row: &mut [u64], i: usize) {
    row[i / 64] &= !(1 << (i % 64));
}

pub fn test_bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 != 0
}

pub fn count_ones(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

pub fn is_zero(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

/// `dst = a & b`; the slices must share a length.
pub fn and_into(dst: &mut [u64], a: &[u64], b: &[u64]) {
    for ((d, &x), &y) in dst.iter_mut().zip(a).zip(b) {
        *d = x & y;
    }
}

pub fn and_assign(dst: &mut [u64], other: &[u64]) {
    for (d, &x) in dst.iter_mut().zip(other) {
        *d &= x;
    }
}

pub fn or_assign(dst: &mut [u64], other: &[u64]) {
    for (d, &x) in dst.iter_mut().zip(other) {
        *d |= x;
    }
}

pub fn and_not_assign(dst: &mut [u64], other: &[u64]) {
    for (d, &x) in dst.iter_mut().zip(other) {
        *d &= !x;
    }
}

pub fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(&x, &y)| x & y != 0)
}

/// Index of the lowest set bit, if any.
pub fn lowest_one(row: &[u64]) -> Option<usize> {
    for (wi, &w) in row.iter().enumerate() {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// Index of the highest set bit, if any.
pub fn highest_one(row: &[u64]) -> Option<usize> {
    for (wi, &w) in row.iter().enumerate().rev() {
        if w != 0 {
            return Some(wi * 64 + 63 - w.leading_zeros() as usize);
        }
    }
    None
}

/// Clears every bit below index `k`.
pub fn clear_below(row: &mut [u64], k: usize) {
    let full = (k / 64).min(row.len());
    row[..full].fill(0);
    if full < row.len() && k % 64 != 0 {
        row[full] &= !((1u64 << (k % 64)) - 1);
    }
}

/// Ascending indices of the set bits.
pub fn iter_ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

/// Symmetric 0/1 matrix stored as packed rows; the workhorse behind every
/// adjacency structure in the crate.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn row_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn get(&self, u: usize, v: usize) -> bool {
        test_bit(self.row(u), v)
    }

    /// Sets both `(u,v)` and `(v,u)`.
    pub fn set_sym(&mut self, u: usize, v: usize) {
        set_bit(self.row_mut(u), v);
        set_bit(self.row_mut(v), u);
    }

    pub fn clear_sym(&mut self, u: usize, v: usize) {
        clear_bit(self.row_mut(u), v);
        clear_bit(self.row_mut(v), u);
    }

    pub fn count_row(&self, v: usize) -> usize {
        count_ones(self.row(v))
    }

    /// Total set bits on the upper triangle, i.e. the edge count when the
    /// matrix is a symmetric adjacency with empty diagonal.
    pub fn count_upper(&self) -> usize {
        let total: usize = (0..self.n).map(|v| self.count_row(v)).sum();
        total / 2
    }

    /// Splits into mutable row slices for row-parallel construction.
    pub fn par_rows_mut(&mut self) -> rayon::slice::ChunksMut<'_, u64> {
        use rayon::prelude::*;
        self.bits.par_chunks_mut(self.words)
    }
}
