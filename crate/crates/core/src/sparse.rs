//! Compressed-row complex matrices.
//!
//! Every operator on the truncated Fock space and every wave function is
//! stored in this format. Ladder and coordinate operators have at most two
//! entries per row, and angular-momentum eigenfunctions are a handful of
//! shifted diagonals per block, so products stay close to linear in the
//! number of stored entries.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Square complex matrix in CSR layout. Column indices inside a row are
/// strictly increasing and stored values are never exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![C64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut b = RowBuilder::new(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            b.push(i, v);
            b.finish_row();
        }
        b.build()
    }

    /// Builds from unordered `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows_of = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r},{c}) outside dimension {dim}");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                rows_of.push(r);
                last = Some((r, c));
            }
        }
        // drop exact zeros produced by cancellation
        let mut k = 0;
        for idx in 0..vals.len() {
            if vals[idx] != C64::new(0.0, 0.0) {
                cols[k] = cols[idx];
                vals[k] = vals[idx];
                rows_of[k] = rows_of[idx];
                k += 1;
            }
        }
        cols.truncate(k);
        vals.truncate(k);
        rows_of.truncate(k);
        for &r in &rows_of {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(pos) => self.vals[span.start + pos],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        if alpha == C64::new(0.0, 0.0) {
            return Self::zeros(self.dim);
        }
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= alpha;
        }
        out
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: C64, other: &Self, beta: C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut b = RowBuilder::new(self.dim);
        for r in 0..self.dim {
            let mut a = self.row(r).peekable();
            let mut o = other.row(r).peekable();
            loop {
                match (a.peek().copied(), o.peek().copied()) {
                    (None, None) => break,
                    (Some((ca, va)), None) => {
                        b.push(ca, alpha * va);
                        a.next();
                    }
                    (None, Some((co, vo))) => {
                        b.push(co, beta * vo);
                        o.next();
                    }
                    (Some((ca, va)), Some((co, vo))) => {
                        if ca < co {
                            b.push(ca, alpha * va);
                            a.next();
                        } else if co < ca {
                            b.push(co, beta * vo);
                            o.next();
                        } else {
                            b.push(ca, alpha * va + beta * vo);
                            a.next();
                            o.next();
                        }
                    }
                }
            }
            b.finish_row();
        }
        b.build()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    /// Matrix product `self * other` with a dense sparse-accumulator row.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let dim = self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut flag = vec![false; dim];
        let mut b = RowBuilder::new(dim);
        for r in 0..dim {
            for (k, v) in self.row(r) {
                for (c, w) in other.row(k) {
                    if !flag[c] {
                        flag[c] = true;
                        touched.push(c);
                    }
                    acc[c] += v * w;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                b.push(c, acc[c]);
                acc[c] = C64::new(0.0, 0.0);
                flag[c] = false;
            }
            touched.clear();
            b.finish_row();
        }
        b.build()
    }

    pub fn adjoint(&self) -> Self {
        let trip = self.iter().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.dim, trip)
    }

    /// Applies `f(row, col, value)` to every stored entry.
    pub fn map_entries(&self, f: impl Fn(usize, usize, C64) -> C64) -> Self {
        let mut b = RowBuilder::new(self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                b.push(c, f(r, c, v));
            }
            b.finish_row();
        }
        b.build()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.sub(&self.adjoint()).max_abs() <= tol
    }

    /// Dense row-major copy; meant for small matrices and tests.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut out = vec![vec![C64::new(0.0, 0.0); self.dim]; self.dim];
        for (r, c, v) in self.iter() {
            out[r][c] = v;
        }
        out
    }

    /// CSV dump of `(row, col, re, im)` triplets, row-major, 0-based, header row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,col,re,im\n");
        for (r, c, v) in self.iter() {
            s.push_str(&format!("{r},{c},{:e},{:e}\n", v.re, v.im));
        }
        s
    }
}

/// Appends entries row by row; columns within a row must arrive ascending.
struct RowBuilder {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl RowBuilder {
    fn new(dim: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        Self {
            dim,
            row_ptr,
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    fn push(&mut self, c: usize, v: C64) {
        if v != C64::new(0.0, 0.0) {
            self.cols.push(c);
            self.vals.push(v);
        }
    }

    fn finish_row(&mut self) {
        self.row_ptr.push(self.cols.len());
    }

    fn build(self) -> SparseMatrix {
        debug_assert_eq!(self.row_ptr.len(), self.dim + 1);
        SparseMatrix {
            dim: self.dim,
            row_ptr: self.row_ptr,
            cols: self.cols,
            vals: self.vals,
        }
    }
}
