//! Square bit matrices over GF(2), rows packed into `u64` words.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        let mask = 1u64 << (j % 64);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// `row[target] ^= row[source]`, the action of CNOT(source → target).
    pub fn add_row(&mut self, source: usize, target: usize) {
        assert_ne!(source, target, "row addition onto itself");
        let w = self.words;
        let (s, t) = (source * w, target * w);
        for k in 0..w {
            let v = self.bits[s + k];
            self.bits[t + k] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        for k in 0..w {
            self.bits.swap(a * w + k, b * w + k);
        }
    }

    /// Column indices of the set bits in row `i`, ascending.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &word) in self.row(i).iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(k * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn column_weight(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| self.get(i, j)).count()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// The top-left `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in self.row_support(i) {
                m.set(j, i, true);
            }
        }
        m
    }

    /// Matrix–vector product, vectors given as bit lists.
    pub fn apply(&self, x: &[bool]) -> Vec<bool> {
        (0..self.n)
            .map(|i| {
                self.row_support(i)
                    .into_iter()
                    .fold(false, |acc, j| acc ^ x[j])
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(p) = (rank..self.n).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in 0..self.n {
                if r != rank && m.get(r, col) {
                    m.add_row(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// If the matrix is a permutation matrix, returns `images` with
    /// `M[images[j]][j] = 1`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let mut images = vec![usize::MAX; self.n];
        for i in 0..self.n {
            let s = self.row_support(i);
            if s.len() != 1 || images[s[0]] != usize::MAX {
                return None;
            }
            images[s[0]] = i;
        }
        Some(images)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let s: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Product `a·b` over GF(2).
pub fn gf2_mul(a: &Gf2Matrix, b: &Gf2Matrix) -> Result<Gf2Matrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    let n = a.n;
    let mut out = Gf2Matrix::zeros(n);
    let w = out.words;
    for i in 0..n {
        for k in a.row_support(i) {
            for t in 0..w {
                out.bits[i * w + t] ^= b.bits[k * w + t];
            }
        }
    }
    Ok(out)
}

/// Inverse over GF(2) by Gauss–Jordan elimination on `[M | I]`.
pub fn gf2_invert(m: &Gf2Matrix) -> Result<Gf2Matrix> {
    let n = m.n;
    let mut a = m.clone();
    let mut inv = Gf2Matrix::identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| a.get(r, col)).ok_or(Error::Singular)?;
        a.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        for r in 0..n {
            if r != col && a.get(r, col) {
                a.add_row(col, r);
                inv.add_row(col, r);
            }
        }
    }
    Ok(inv)
}
