//! Symmetric sparse storage: a CSR matrix holding both triangles and a
//! variable-band (skyline) Cholesky factor.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Compressed sparse rows with a fixed pattern. Both triangles are stored so
/// products need no special casing.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Pattern covering every pair of DOFs sharing a list.
    pub fn from_dof_lists<'a>(n: usize, lists: impl IntoIterator<Item = &'a [usize]>) -> Self {
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
        for list in lists {
            for &i in list {
                rows[i].extend(list.iter().map(|&j| j as u32));
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        for (i, r) in rows.iter_mut().enumerate() {
            r.push(i as u32);
            r.sort_unstable();
            r.dedup();
            cols.extend_from_slice(r);
            row_ptr.push(cols.len());
        }
        let vals = vec![0.0; cols.len()];
        Self { n, row_ptr, cols, vals }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let all: Vec<usize> = (0..n).collect();
        let mut out = Self::from_dof_lists(n, [all.as_slice()]);
        out.add_dense(&all, m);
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.cols[a..b].binary_search(&(j as u32)).ok().map(|k| a + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |k| self.vals[k])
    }

    /// Scatter-adds an element matrix. Panics if the pattern lacks an entry,
    /// which means the pattern was built from different DOF lists.
    pub fn add_dense(&mut self, dofs: &[usize], m: &DMatrix<f64>) {
        for (a, &i) in dofs.iter().enumerate() {
            let (start, end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let row = &self.cols[start..end];
            for (b, &j) in dofs.iter().enumerate() {
                let k = row.binary_search(&(j as u32)).expect("entry outside sparsity pattern");
                self.vals[start + k] += m[(a, b)];
            }
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            y[i] = self.cols[a..b]
                .iter()
                .zip(&self.vals[a..b])
                .map(|(&j, v)| v * x[j as usize])
                .sum();
        }
    }

    pub fn mul(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        self.mul_vec(x.as_slice(), y.as_mut_slice());
        y
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&self.mul(y))
    }

    pub fn scale(&mut self, c: f64) {
        self.vals.iter_mut().for_each(|v| *v *= c);
    }

    /// Frobenius norm of the stored entries.
    pub fn norm(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `||A - A^T||_F / ||A||_F`.
    pub fn asymmetry(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k] as usize;
                let d = self.vals[k] - self.get(j, i);
                acc += d * d;
            }
        }
        let norm = self.norm();
        if norm == 0.0 {
            0.0
        } else {
            acc.sqrt() / norm
        }
    }

    /// Submatrix on `keep` (row and column), renumbered in order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut map = vec![u32::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new as u32;
        }
        let mut row_ptr = Vec::with_capacity(keep.len() + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for &old in keep {
            for k in self.row_ptr[old]..self.row_ptr[old + 1] {
                let j = map[self.cols[k] as usize];
                if j != u32::MAX {
                    cols.push(j);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            n: keep.len(),
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[k] as usize)] = self.vals[k];
            }
        }
        m
    }

    /// Smallest column index in each row, for the skyline profile.
    fn row_first(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| self.cols[self.row_ptr[i]] as usize)
            .map(|j| j.min(self.n))
            .enumerate()
            .map(|(i, j)| j.min(i))
            .collect()
    }
}

/// Lower Cholesky factor in variable-band row storage.
#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    first: Vec<usize>,
    offset: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.n;
        let first = a.row_first();
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(0);
        for i in 0..n {
            offset.push(offset[i] + (i - first[i] + 1));
        }
        let mut data = vec![0.0; offset[n]];
        for i in 0..n {
            for k in a.row_ptr[i]..a.row_ptr[i + 1] {
                let j = a.cols[k] as usize;
                if j <= i {
                    data[offset[i] + j - first[i]] = a.vals[k];
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let oi = offset[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let oj = offset[j];
                let dot: f64 = data[oi + lo - fi..oi + j - fi]
                    .iter()
                    .zip(&data[oj + lo - fj..oj + j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                let ljj = data[oj + j - fj];
                data[oi + j - fi] = (data[oi + j - fi] - dot) / ljj;
            }
            let diag = data[oi + i - fi];
            let sq: f64 = data[oi..oi + i - fi].iter().map(|x| x * x).sum();
            let piv = diag - sq;
            if !(piv > 1e-14 * diag.abs()) || !piv.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: i, value: piv });
            }
            data[oi + i - fi] = piv.sqrt();
        }
        Ok(Self { first, offset, data })
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored entries of the factor.
    pub fn profile_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let (fi, oi) = (self.first[i], self.offset[i]);
            let dot: f64 = self.data[oi..oi + i - fi].iter().zip(&b[fi..i]).map(|(l, y)| l * y).sum();
            b[i] = (b[i] - dot) / self.data[oi + i - fi];
        }
        for i in (0..n).rev() {
            let (fi, oi) = (self.first[i], self.offset[i]);
            b[i] /= self.data[oi + i - fi];
            let xi = b[i];
            for (l, y) in self.data[oi..oi + i - fi].iter().zip(&mut b[fi..i]) {
                *y -= l * xi;
            }
        }
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut x = b.clone();
        self.solve_in_place(x.as_mut_slice());
        x
    }
}
