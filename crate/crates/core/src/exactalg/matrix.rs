use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::ring::{CoeffRing, Elem};

/// Dense row-major matrix over a coefficient ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn scalar(ring: CoeffRing, n: usize, c: Elem) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_fn(ring: CoeffRing, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring, rows, cols, data }
    }

    pub fn from_ints(ring: CoeffRing, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(ring, r, c, |i, j| ring.from_int(rows[i][j] as i128))
    }

    pub fn from_rows(ring: CoeffRing, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { ring, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn column(ring: CoeffRing, v: &[Elem]) -> Self {
        Matrix { ring, rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn from_columns(ring: CoeffRing, rows: usize, cols: &[Vec<Elem>]) -> Self {
        Self::from_fn(ring, rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Elem) {
        let idx = i * self.cols + j;
        self.data[idx] = self.ring.add(&self.data[idx], v);
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ring.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        self.ring.is_one(e)
                    } else {
                        self.ring.is_zero(e)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| *self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = self.ring;
        let mut out = Matrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, b) in orow.iter().enumerate() {
                    if !r.is_zero(b) {
                        out.data[base + j] = r.add(&out.data[base + j], &r.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product that panics on shape mismatch; for internal use where shapes are known.
    pub fn dot(&self, other: &Matrix) -> Matrix {
        self.mul(other).expect("matrix shapes agree")
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        let r = self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !r.is_zero(a) && !r.is_zero(b) {
                        acc = r.add(&acc, &r.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let r = self.ring;
        Ok(Matrix {
            ring: r,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| r.add(a, b)).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&self.ring.neg(&self.ring.one())))
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        let r = self.ring;
        Matrix { ring: r, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| r.mul(a, c)).collect() }
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let r = self.ring;
        let (p, q) = other.shape();
        Matrix::from_fn(r, self.rows * p, self.cols * q, |i, j| {
            r.mul(self.get(i / p, j / q), other.get(i % p, j % q))
        })
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                *self.get(i, j)
            } else {
                *other.get(i, j - self.cols)
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        Matrix::from_fn(self.ring, rows.len(), cols.len(), |i, j| *self.get(rows.start + i, cols.start + j))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, cols.len(), |i, j| *self.get(i, cols[j]))
    }

    /// Entrywise image under the canonical ring map into `target`.
    pub fn change_ring(&self, target: CoeffRing) -> Result<Matrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(target.coerce_from(&self.ring, e).ok_or_else(|| {
                Error::UnsupportedRing(format!("no canonical map {} -> {}", self.ring, target))
            })?);
        }
        Ok(Matrix { ring: target, rows: self.rows, cols: self.cols, data })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Elem) {
        let r = self.ring;
        if r.is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if !r.is_zero(&s) {
                let idx = dst * self.cols + j;
                self.data[idx] = r.add(&self.data[idx], &r.mul(c, &s));
            }
        }
    }

    /// `col[dst] += c * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Elem) {
        let r = self.ring;
        if r.is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if !r.is_zero(&s) {
                let idx = i * self.cols + dst;
                self.data[idx] = r.add(&self.data[idx], &r.mul(c, &s));
            }
        }
    }

    /// Left-multiplies rows `(i, k)` by `[[m0, m1], [m2, m3]]`.
    pub fn combine_rows(&mut self, i: usize, k: usize, m: &[Elem; 4]) {
        let r = self.ring;
        for j in 0..self.cols {
            let (x, y) = (self.data[i * self.cols + j], self.data[k * self.cols + j]);
            if r.is_zero(&x) && r.is_zero(&y) {
                continue;
            }
            self.data[i * self.cols + j] = r.add(&r.mul(&m[0], &x), &r.mul(&m[1], &y));
            self.data[k * self.cols + j] = r.add(&r.mul(&m[2], &x), &r.mul(&m[3], &y));
        }
    }

    /// Right-multiplies columns `(i, k)` by `[[m0, m1], [m2, m3]]`.
    pub fn combine_cols(&mut self, i: usize, k: usize, m: &[Elem; 4]) {
        let r = self.ring;
        for row in 0..self.rows {
            let (x, y) = (self.data[row * self.cols + i], self.data[row * self.cols + k]);
            if r.is_zero(&x) && r.is_zero(&y) {
                continue;
            }
            self.data[row * self.cols + i] = r.add(&r.mul(&m[0], &x), &r.mul(&m[2], &y));
            self.data[row * self.cols + k] = r.add(&r.mul(&m[1], &x), &r.mul(&m[3], &y));
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Elem) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = self.ring.mul(&self.data[idx], c);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &Elem) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = self.ring.mul(&self.data[idx], c);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(|e| self.ring.elem_to_json(e)).collect()))
                .collect(),
        )
    }

    pub fn from_json(ring: CoeffRing, v: &serde_json::Value) -> Result<Matrix> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            out.push(row.iter().map(|e| ring.elem_from_json(e)).collect::<Result<Vec<_>>>()?);
        }
        Matrix::from_rows(ring, out)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| self.ring.format(e)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
