//! Compressed sparse row storage for complex matrices.
//!
//! Entries that come out of arithmetic as exactly `0 + 0i` are dropped; no
//! magnitude threshold is ever applied.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

fn is_exact_zero(z: C64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![C64::new(1.0, 0.0); n],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut row_counts = vec![0usize; nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                row_counts[r] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            indptr[r + 1] = indptr[r] + row_counts[r];
        }
        let mut m = Self { nrows, ncols, indptr, indices, values };
        m.prune_exact_zeros();
        m
    }

    pub fn from_dense(d: &DMatrix<C64>) -> Self {
        let mut t = Vec::new();
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let v = d[(i, j)];
                if !is_exact_zero(v) {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(d.nrows(), d.ncols(), t)
    }

    fn prune_exact_zeros(&mut self) {
        if !self.values.iter().any(|&v| is_exact_zero(v)) {
            return;
        }
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if !is_exact_zero(self.values[k]) {
                    indices.push(self.indices[k]);
                    values.push(self.values[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.values = values;
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let row = &self.indices[self.indptr[r]..self.indptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.values[self.indptr[r] + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Iterates `(row, col, value)` over stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k]))
        })
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            d[(r, c)] = v;
        }
        d
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = self.clone();
        for v in &mut m.values {
            *v *= s;
        }
        m.prune_exact_zeros();
        m
    }

    pub fn map_values(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut m = self.clone();
        for v in &mut m.values {
            *v = f(*v);
        }
        m.prune_exact_zeros();
        m
    }

    /// `alpha * self + beta * other`, merged row by row.
    pub fn axpby(&self, alpha: C64, other: &Self, beta: C64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch");
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            let (mut a, ae) = (self.indptr[r], self.indptr[r + 1]);
            let (mut b, be) = (other.indptr[r], other.indptr[r + 1]);
            while a < ae || b < be {
                let ca = if a < ae { self.indices[a] } else { usize::MAX };
                let cb = if b < be { other.indices[b] } else { usize::MAX };
                let (c, v) = if ca == cb {
                    let v = alpha * self.values[a] + beta * other.values[b];
                    a += 1;
                    b += 1;
                    (ca, v)
                } else if ca < cb {
                    a += 1;
                    (ca, alpha * self.values[a - 1])
                } else {
                    b += 1;
                    (cb, beta * other.values[b - 1])
                };
                if !is_exact_zero(v) {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr[r + 1] = indices.len();
        }
        Self { nrows: self.nrows, ncols: self.ncols, indptr, indices, values }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpby(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpby(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    /// Sparse product (Gustavson's row-by-row accumulation).
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimension mismatch");
        let n = other.ncols;
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut marker = vec![usize::MAX; n];
        let mut cols: Vec<usize> = Vec::new();
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for r in 0..self.nrows {
            cols.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if marker[c] != r {
                        marker[c] = r;
                        acc[c] = C64::new(0.0, 0.0);
                        cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols.sort_unstable();
            for &c in &cols {
                if !is_exact_zero(acc[c]) {
                    indices.push(c);
                    values.push(acc[c]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        Self { nrows: self.nrows, ncols: n, indptr, indices, values }
    }

    pub fn transpose(&self) -> Self {
        let t = self.iter().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, t)
    }

    pub fn adjoint(&self) -> Self {
        let t = self.iter().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.ncols, self.nrows, t)
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the slow (outer) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.nrows, other.ncols);
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.iter() {
            for (r2, c2, v2) in other.iter() {
                t.push((r1 * p + r2, c1 * q + c2, v1 * v2));
            }
        }
        Self::from_triplets(self.nrows * p, self.ncols * q, t)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                s += self.values[k] * x[self.indices[k]];
            }
            *yr = s;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc + v.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// Keeps only the entries whose row and column both satisfy `keep`.
    pub fn compress(&self, keep: impl Fn(usize) -> bool) -> Self {
        let t = self.iter().filter(|&(r, c, _)| keep(r) && keep(c)).collect();
        Self::from_triplets(self.nrows, self.ncols, t)
    }
}
