//! Matrices over the group ring R[G] describing maps between free modules.
//!
//! A free module of rank `r` is stored as `R^{r·|G|}` with coordinate
//! `i * |G| + g` for the basis vector `g·e_i`. Maps act on the right: row `j`
//! of a matrix is the image of `e_j`, so composing `X` then `Y` is `X·Y`.

use crate::exactalg::{CoeffRing, Elem, Matrix};
use crate::groups::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrMatrix {
    rows: usize,
    cols: usize,
    n: usize,
    data: Vec<Elem>,
}

impl GrMatrix {
    pub fn zeros(ring: CoeffRing, rows: usize, cols: usize, n: usize) -> Self {
        GrMatrix { rows, cols, n, data: vec![ring.zero(); rows * cols * n] }
    }

    pub fn identity(ring: CoeffRing, r: usize, n: usize) -> Self {
        let mut m = Self::zeros(ring, r, r, n);
        for i in 0..r {
            m.entry_mut(i, i)[0] = ring.one();
        }
        m
    }

    /// Rows given as vectors in the unrolled target module.
    pub fn from_rows(cols: usize, n: usize, rows: &[Vec<Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols * n);
        for r in rows {
            assert_eq!(r.len(), cols * n, "row length");
            data.extend_from_slice(r);
        }
        GrMatrix { rows: rows.len(), cols, n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn group_order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Elem] {
        let s = (i * self.cols + j) * self.n;
        &self.data[s..s + self.n]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [Elem] {
        let s = (i * self.cols + j) * self.n;
        &mut self.data[s..s + self.n]
    }

    /// Image of `e_i` as an unrolled vector of the target.
    pub fn row(&self, i: usize) -> &[Elem] {
        let w = self.cols * self.n;
        &self.data[i * w..(i + 1) * w]
    }

    pub fn is_zero(&self, ring: CoeffRing) -> bool {
        self.data.iter().all(|e| ring.is_zero(e))
    }

    pub fn mul(&self, other: &GrMatrix, group: &FiniteGroup, ring: CoeffRing) -> GrMatrix {
        assert_eq!(self.cols, other.rows, "group ring matrix shapes");
        let n = self.n;
        let mut out = GrMatrix::zeros(ring, self.rows, other.cols, n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entry(i, j);
                if a.iter().all(|x| ring.is_zero(x)) {
                    continue;
                }
                for k in 0..other.cols {
                    let b = other.entry(j, k);
                    let base = (i * other.cols + k) * n;
                    for (g, x) in a.iter().enumerate() {
                        if ring.is_zero(x) {
                            continue;
                        }
                        for (h, y) in b.iter().enumerate() {
                            if !ring.is_zero(y) {
                                let idx = base + group.mul(g, h);
                                out.data[idx] = ring.add(&out.data[idx], &ring.mul(x, y));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Image of an unrolled source vector.
    pub fn apply(&self, v: &[Elem], group: &FiniteGroup, ring: CoeffRing) -> Vec<Elem> {
        let n = self.n;
        assert_eq!(v.len(), self.rows * n, "vector length");
        let mut out = vec![ring.zero(); self.cols * n];
        for i in 0..self.rows {
            for g in 0..n {
                let c = &v[i * n + g];
                if ring.is_zero(c) {
                    continue;
                }
                for j in 0..self.cols {
                    for (h, x) in self.entry(i, j).iter().enumerate() {
                        if !ring.is_zero(x) {
                            let idx = j * n + group.mul(g, h);
                            out[idx] = ring.add(&out[idx], &ring.mul(c, x));
                        }
                    }
                }
            }
        }
        out
    }

    /// The R-matrix acting on unrolled column vectors, `(cols·n) × (rows·n)`.
    pub fn unroll(&self, group: &FiniteGroup, ring: CoeffRing) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(ring, self.cols * n, self.rows * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (h, x) in self.entry(i, j).iter().enumerate() {
                    if ring.is_zero(x) {
                        continue;
                    }
                    for g in 0..n {
                        m.add_at(j * n + group.mul(g, h), i * n + g, x);
                    }
                }
            }
        }
        m
    }

    /// Nonzero entries of [`unroll`](Self::unroll) as `(row, col, value)`.
    pub fn unroll_entries(&self, group: &FiniteGroup, ring: CoeffRing) -> Vec<(usize, usize, Elem)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (h, x) in self.entry(i, j).iter().enumerate() {
                    if !ring.is_zero(x) {
                        out.extend((0..n).map(|g| (j * n + group.mul(g, h), i * n + g, *x)));
                    }
                }
            }
        }
        out
    }

    /// Matrix of the dual map between dual free modules: transpose with the
    /// antipode `g ↦ g⁻¹` applied entrywise.
    pub fn dual(&self, group: &FiniteGroup, ring: CoeffRing) -> GrMatrix {
        let mut out = GrMatrix::zeros(ring, self.cols, self.rows, self.n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let src = self.entry(i, j).to_vec();
                let dst = out.entry_mut(j, i);
                for (h, x) in src.into_iter().enumerate() {
                    dst[group.inv(h)] = x;
                }
            }
        }
        out
    }

    /// Entrywise augmentation `Σ_h x(h)`.
    pub fn augmented(&self, ring: CoeffRing) -> Matrix {
        Matrix::from_fn(ring, self.rows, self.cols, |i, j| {
            self.entry(i, j).iter().fold(ring.zero(), |acc, x| ring.add(&acc, x))
        })
    }

    pub fn change_ring(&self, from: CoeffRing, to: CoeffRing) -> Option<GrMatrix> {
        let data = self.data.iter().map(|e| to.coerce_from(&from, e)).collect::<Option<Vec<_>>>()?;
        Some(GrMatrix { rows: self.rows, cols: self.cols, n: self.n, data })
    }
}

/// `g·v` for an unrolled vector of a free module.
pub fn left_mult(v: &[Elem], g: usize, group: &FiniteGroup, ring: CoeffRing) -> Vec<Elem> {
    let n = group.order();
    let mut out = vec![ring.zero(); v.len()];
    for (idx, x) in v.iter().enumerate() {
        if !ring.is_zero(x) {
            let (i, h) = (idx / n, idx % n);
            out[i * n + group.mul(g, h)] = *x;
        }
    }
    out
}

/// Value of an equivariant functional `e_i ↦ a_i` (trivial coefficients) on an
/// unrolled vector.
pub fn evaluate_trivial(v: &[Elem], a: &[Elem], n: usize, ring: CoeffRing) -> Elem {
    let mut acc = ring.zero();
    for (idx, x) in v.iter().enumerate() {
        if !ring.is_zero(x) {
            acc = ring.add(&acc, &ring.mul(x, &a[idx / n]));
        }
    }
    acc
}
