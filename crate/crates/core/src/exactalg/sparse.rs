//! Sparse Smith decomposition over a PID.
//!
//! Unit pivots are eliminated first with a Markowitz-style choice, recording
//! the row and column operations instead of forming `U` and `V`; whatever is
//! left (usually a tiny block) goes through the dense algorithm. Matrices from
//! resolutions are very sparse with mostly unit entries, so the dense part is
//! small or empty.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::ring::{CoeffRing, Elem};
use crate::exactalg::snf::{smith_normal_form, SmithDecomposition};

type SparseRow = Vec<(usize, Elem)>;

#[derive(Clone, Debug)]
pub struct SparseSmith {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    /// `row dst += c * row src`, in order of application.
    row_ops: Vec<(usize, usize, Elem)>,
    /// `col dst += c * col src`, in order of application.
    col_ops: Vec<(usize, usize, Elem)>,
    /// `(row, col, unit)` of each eliminated pivot.
    pivots: Vec<(usize, usize, Elem)>,
    rem_rows: Vec<usize>,
    rem_cols: Vec<usize>,
    rem: SmithDecomposition,
}

impl SparseSmith {
    pub fn new(a: &Matrix) -> Result<Self> {
        let ring = a.ring();
        let mut entries = Vec::new();
        for i in 0..a.rows() {
            for (j, x) in a.row(i).iter().enumerate() {
                if !ring.is_zero(x) {
                    entries.push((i, j, *x));
                }
            }
        }
        Self::from_entries(ring, a.rows(), a.cols(), entries)
    }

    /// Builds from `(row, col, value)` triples; repeated positions are summed.
    pub fn from_entries(ring: CoeffRing, m: usize, n: usize, entries: Vec<(usize, usize, Elem)>) -> Result<Self> {
        ring.require_pid()?;
        let mut rows: Vec<SparseRow> = vec![Vec::new(); m];
        for (i, j, x) in entries {
            rows[i].push((j, x));
        }
        for r in rows.iter_mut() {
            r.sort_by_key(|e| e.0);
            let mut merged: SparseRow = Vec::with_capacity(r.len());
            for (j, x) in r.drain(..) {
                match merged.last_mut() {
                    Some((k, y)) if *k == j => *y = ring.add(y, &x),
                    _ => merged.push((j, x)),
                }
            }
            merged.retain(|(_, x)| !ring.is_zero(x));
            *r = merged;
        }
        let mut col_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, r) in rows.iter().enumerate() {
            for (j, _) in r {
                col_sets[*j].insert(i);
            }
        }
        let mut row_active = vec![true; m];
        let mut col_active = vec![true; n];
        let mut row_ops = Vec::new();
        let mut col_ops = Vec::new();
        let mut pivots = Vec::new();

        loop {
            // Unit entry of least Markowitz cost.
            let mut best: Option<(usize, usize, usize)> = None;
            'scan: for (i, r) in rows.iter().enumerate() {
                if !row_active[i] || r.is_empty() {
                    continue;
                }
                let rw = r.len() - 1;
                for (j, x) in r {
                    if !ring.is_unit(x) {
                        continue;
                    }
                    let cost = rw * (col_sets[*j].len() - 1);
                    if best.map_or(true, |(c, _, _)| cost < c) {
                        best = Some((cost, i, *j));
                        if cost == 0 {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            let prow = std::mem::take(&mut rows[pi]);
            let u = prow.iter().find(|e| e.0 == pj).expect("pivot entry").1;
            let u_inv = ring.inv(&u).expect("unit pivot");
            for (j, _) in &prow {
                col_sets[*j].remove(&pi);
            }
            let targets: Vec<usize> = col_sets[pj].iter().copied().collect();
            for r in targets {
                let a = rows[r].iter().find(|e| e.0 == pj).expect("column index").1;
                let c = ring.neg(&ring.mul(&a, &u_inv));
                let old = std::mem::take(&mut rows[r]);
                let new = axpy_sparse(ring, &old, &prow, &c);
                // Refresh the column index for this row.
                let (mut oi, mut ni) = (0, 0);
                while oi < old.len() || ni < new.len() {
                    let oc = old.get(oi).map(|e| e.0);
                    let nc = new.get(ni).map(|e| e.0);
                    match (oc, nc) {
                        (Some(x), Some(y)) if x == y => {
                            oi += 1;
                            ni += 1;
                        }
                        (Some(x), Some(y)) if x < y => {
                            col_sets[x].remove(&r);
                            oi += 1;
                        }
                        (Some(x), None) => {
                            col_sets[x].remove(&r);
                            oi += 1;
                        }
                        (_, Some(y)) => {
                            col_sets[y].insert(r);
                            ni += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                rows[r] = new;
                row_ops.push((r, pi, c));
            }
            for (k, x) in &prow {
                if *k != pj {
                    col_ops.push((*k, pj, ring.neg(&ring.mul(x, &u_inv))));
                }
            }
            row_active[pi] = false;
            col_active[pj] = false;
            pivots.push((pi, pj, u));
        }

        let rem_rows: Vec<usize> = (0..m).filter(|&i| row_active[i]).collect();
        let rem_cols: Vec<usize> = (0..n).filter(|&j| col_active[j]).collect();
        let mut col_pos = vec![usize::MAX; n];
        for (t, &j) in rem_cols.iter().enumerate() {
            col_pos[j] = t;
        }
        let mut dense = Matrix::zeros(ring, rem_rows.len(), rem_cols.len());
        for (s, &i) in rem_rows.iter().enumerate() {
            for (j, x) in &rows[i] {
                dense.set(s, col_pos[*j], *x);
            }
        }
        let rem = smith_normal_form(&dense)?;
        Ok(SparseSmith { ring, rows: m, cols: n, row_ops, col_ops, pivots, rem_rows, rem_cols, rem })
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len() + self.rem.rank
    }

    /// Nonzero invariant factors, in divisibility order.
    pub fn elementary_divisors(&self) -> Vec<Elem> {
        let mut d = vec![self.ring.one(); self.pivots.len()];
        d.extend_from_slice(self.rem.nonzero_divisors());
        d
    }

    /// Divisor on the `k`-th diagonal position (zero past the rank).
    pub fn divisor(&self, k: usize) -> Elem {
        let p = self.pivots.len();
        if k < p {
            self.ring.one()
        } else if k < self.rank() {
            self.rem.elementary_divisors[k - p]
        } else {
            self.ring.zero()
        }
    }

    /// `U b`.
    pub fn u_apply(&self, b: &[Elem]) -> Vec<Elem> {
        let ring = self.ring;
        let mut x = b.to_vec();
        for (dst, src, c) in &self.row_ops {
            if !ring.is_zero(&x[*src]) {
                x[*dst] = ring.add(&x[*dst], &ring.mul(c, &x[*src]));
            }
        }
        let mut out: Vec<Elem> = self
            .pivots
            .iter()
            .map(|(i, _, u)| ring.mul(&x[*i], &ring.inv(u).expect("unit")))
            .collect();
        let sub: Vec<Elem> = self.rem_rows.iter().map(|&i| x[i]).collect();
        out.extend(self.rem.u.apply(&sub));
        out
    }

    /// `U⁻¹ c`.
    pub fn u_inv_apply(&self, c: &[Elem]) -> Vec<Elem> {
        let ring = self.ring;
        let p = self.pivots.len();
        let mut x = vec![ring.zero(); self.rows];
        for (k, (i, _, u)) in self.pivots.iter().enumerate() {
            x[*i] = ring.mul(&c[k], u);
        }
        for (t, y) in self.rem.u_inv.apply(&c[p..]).into_iter().enumerate() {
            x[self.rem_rows[t]] = y;
        }
        for (dst, src, cc) in self.row_ops.iter().rev() {
            if !ring.is_zero(&x[*src]) {
                x[*dst] = ring.sub(&x[*dst], &ring.mul(cc, &x[*src]));
            }
        }
        x
    }

    /// `V y`.
    pub fn v_apply(&self, y: &[Elem]) -> Vec<Elem> {
        let ring = self.ring;
        let p = self.pivots.len();
        let mut x = vec![ring.zero(); self.cols];
        for (k, (_, j, _)) in self.pivots.iter().enumerate() {
            x[*j] = y[k];
        }
        for (t, z) in self.rem.v.apply(&y[p..]).into_iter().enumerate() {
            x[self.rem_cols[t]] = z;
        }
        for (dst, src, c) in self.col_ops.iter().rev() {
            if !ring.is_zero(&x[*dst]) {
                x[*src] = ring.add(&x[*src], &ring.mul(c, &x[*dst]));
            }
        }
        x
    }

    /// `V⁻¹ x`.
    pub fn v_inv_apply(&self, x: &[Elem]) -> Vec<Elem> {
        let ring = self.ring;
        let mut w = x.to_vec();
        for (dst, src, c) in &self.col_ops {
            if !ring.is_zero(&w[*dst]) {
                w[*src] = ring.sub(&w[*src], &ring.mul(c, &w[*dst]));
            }
        }
        let mut out: Vec<Elem> = self.pivots.iter().map(|(_, j, _)| w[*j]).collect();
        let sub: Vec<Elem> = self.rem_cols.iter().map(|&j| w[j]).collect();
        out.extend(self.rem.v_inv.apply(&sub));
        out
    }

    /// Solution of `A x = b`, if one exists over the ring.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        let ring = self.ring;
        let c = self.u_apply(b);
        let r = self.rank();
        if c[r..].iter().any(|x| !ring.is_zero(x)) {
            return None;
        }
        let mut y = vec![ring.zero(); self.cols];
        for k in 0..r {
            y[k] = ring.exact_div(&c[k], &self.divisor(k))?;
        }
        Some(self.v_apply(&y))
    }

    /// Saturated kernel basis as columns.
    pub fn kernel_basis(&self) -> Matrix {
        let ring = self.ring;
        let r = self.rank();
        let cols: Vec<Vec<Elem>> = (r..self.cols)
            .map(|k| {
                let mut e = vec![ring.zero(); self.cols];
                e[k] = ring.one();
                self.v_apply(&e)
            })
            .collect();
        Matrix::from_columns(ring, self.cols, &cols)
    }
}

/// `a + c·b` for sorted sparse rows.
fn axpy_sparse(ring: CoeffRing, a: &SparseRow, b: &SparseRow, c: &Elem) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|e| e.0);
        let kb = b.get(j).map(|e| e.0);
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                let v = ring.add(&a[i].1, &ring.mul(c, &b[j].1));
                if !ring.is_zero(&v) {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i]);
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i]);
                i += 1;
            }
            (_, Some(y)) => {
                let v = ring.mul(c, &b[j].1);
                if !ring.is_zero(&v) {
                    out.push((y, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_against_dense(a: &Matrix) {
        let ring = a.ring();
        let s = SparseSmith::new(a).unwrap();
        let d = smith_normal_form(a).unwrap();
        assert_eq!(s.rank(), d.rank);
        assert_eq!(s.elementary_divisors(), d.nonzero_divisors().to_vec());
        let (m, n) = a.shape();
        // U A V is diagonal with the divisors.
        for k in 0..n {
            let mut e = vec![ring.zero(); n];
            e[k] = ring.one();
            let col = s.u_apply(&a.apply(&s.v_apply(&e)));
            for (i, x) in col.iter().enumerate() {
                let want = if i == k { s.divisor(k) } else { ring.zero() };
                assert_eq!(*x, want, "entry ({i}, {k})");
            }
            assert_eq!(s.v_inv_apply(&s.v_apply(&e)), e);
        }
        for k in 0..m {
            let mut e = vec![ring.zero(); m];
            e[k] = ring.one();
            assert_eq!(s.u_apply(&s.u_inv_apply(&e)), e);
        }
        assert!(a.dot(&s.kernel_basis()).is_zero());
    }

    proptest! {
        #[test]
        fn agrees_with_dense_snf(
            m in 1usize..6, n in 1usize..6,
            vals in proptest::collection::vec(-3i64..4, 36),
            density in 0usize..3,
        ) {
            let z = CoeffRing::Integers;
            let a = Matrix::from_fn(z, m, n, |i, j| {
                let v = vals[i * 6 + j];
                if (i + j) % 3 < density { z.zero() } else { z.from_int(v as i128) }
            });
            check_against_dense(&a);
        }
    }

    #[test]
    fn non_unit_block() {
        let z = CoeffRing::Integers;
        let a = Matrix::from_ints(z, &[vec![2, 0, 1], vec![0, 4, 0], vec![6, 0, 3]]);
        check_against_dense(&a);
        let s = SparseSmith::new(&a).unwrap();
        assert_eq!(s.elementary_divisors(), vec![z.one(), z.from_int(4)]);
        assert!(s.solve(&[z.zero(), z.from_int(2), z.zero()]).is_none());
        let x = s.solve(&[z.from_int(1), z.from_int(8), z.from_int(3)]).unwrap();
        assert_eq!(a.apply(&x), vec![z.from_int(1), z.from_int(8), z.from_int(3)]);
    }

    #[test]
    fn empty_shapes() {
        let z = CoeffRing::Integers;
        let s = SparseSmith::from_entries(z, 0, 3, vec![]).unwrap();
        assert_eq!(s.rank(), 0);
        assert_eq!(s.kernel_basis().cols(), 3);
        let s = SparseSmith::from_entries(z, 2, 0, vec![]).unwrap();
        assert!(s.solve(&[z.zero(), z.zero()]).is_some());
    }
}
