//! Compressed sparse row matrices with caller-controlled entry order.
//!
//! Rows keep their entries in the order the assembler pushed them (the
//! stencil order: diagonal, then neighbors in a fixed semantic order), and
//! `mul` accumulates in that order. Assemblers that emit entries in
//! stencil-relative order therefore produce matrix-vector products that
//! commute bit-for-bit with grid rotations; sorting by column index would
//! break that at the periodic wrap.

/// Square sparse matrix in CSR layout.
#[derive(Clone, Debug)]
pub struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Incremental row-by-row builder.
pub struct CsrBuilder {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrBuilder {
    pub fn new(n: usize) -> Self {
        CsrBuilder {
            n,
            row_ptr: vec![0],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Append one entry to the current row. Rows are closed by `finish_row`.
    pub fn push(&mut self, col: usize, value: f64) {
        debug_assert!(col < self.n);
        self.col_idx.push(col);
        self.values.push(value);
    }

    pub fn finish_row(&mut self) {
        self.row_ptr.push(self.col_idx.len());
    }

    pub fn build(self) -> Csr {
        assert_eq!(self.row_ptr.len(), self.n + 1, "not all rows were closed");
        Csr {
            n: self.n,
            row_ptr: self.row_ptr,
            col_idx: self.col_idx,
            values: self.values,
        }
    }
}

impl Csr {
    pub fn n(&self) -> usize {
        self.n
    }

    /// y = A x, accumulated in stored entry order.
    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        }
    }

    /// Residual b - A x into `r`.
    pub fn residual(&self, x: &[f64], b: &[f64], r: &mut [f64]) {
        self.mul(x, r);
        for i in 0..self.n {
            r[i] = b[i] - r[i];
        }
    }

    /// Diagonal entries (zero where a row has no explicit diagonal).
    pub fn diagonal(&self) -> Vec<f64> {
        let mut diag = vec![0.0; self.n];
        for (i, d) in diag.iter_mut().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.col_idx[k] == i {
                    *d = self.values[k];
                }
            }
        }
        diag
    }

    /// Scale row i by `s[i]` in place (Jacobi row equilibration).
    pub fn scale_rows(&mut self, s: &[f64]) {
        debug_assert_eq!(s.len(), self.n);
        for (i, &scale) in s.iter().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                self.values[k] *= scale;
            }
        }
    }

    /// Entries of one row in stored order.
    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    /// Entries as (row, col, value) triplets, for structural comparisons.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.values.len());
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.push((i, self.col_idx[k], self.values[k]));
            }
        }
        out
    }

    /// Row sums (applied to the constant-one vector).
    pub fn row_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, sum) in out.iter_mut().enumerate() {
            let mut acc = crate::numerics::exact::ExactSum::new();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc.add(self.values[k]);
            }
            *sum = acc.value();
        }
        out
    }
}
