//! Gaussian elimination over prime fields on plain `u64` residues.
//!
//! The generic Smith normal form works over every supported ring but carries
//! four transformation matrices of ring elements; field cohomology only needs
//! ranks, kernels and solutions, and this path is several times cheaper.

use crate::exactalg::matrix::Matrix;
use crate::exactalg::ring::{CoeffRing, Elem};

#[inline]
fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small.
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// `dst += c * src` over the slice overlap.
#[inline]
fn axpy(dst: &mut [u64], src: &[u64], c: u64, p: u64) {
    if c == 0 {
        return;
    }
    if p == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if *s != 0 {
            *d = (*d + c * s) % p;
        }
    }
}

pub fn prime_of(ring: CoeffRing) -> Option<u64> {
    match ring {
        CoeffRing::PrimeField(p) => Some(p),
        _ => None,
    }
}

fn to_u64(e: &Elem) -> u64 {
    e.numerator() as u64
}

/// Fully reduced row echelon form of a span of row vectors.
#[derive(Clone, Debug)]
pub struct FpRref {
    p: u64,
    dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FpRref {
    pub fn new(p: u64, dim: usize) -> Self {
        FpRref { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &mut [u64]) {
        let p = self.p;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let x = v[c];
            if x != 0 {
                axpy(v, row, p - x, p);
            }
        }
    }

    /// Inserts a vector; returns whether the span grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else { return false };
        let s = inv_mod(v[c], p);
        for x in v.iter_mut() {
            *x = *x * s % p;
        }
        for row in self.rows.iter_mut() {
            let x = row[c];
            if x != 0 {
                axpy(row, &v, p - x, p);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(pos, c);
        self.rows.insert(pos, v);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coordinates not in pivot positions, increasing.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.dim];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.dim).filter(|&j| !is_pivot[j]).collect()
    }
}

/// `T * A = R` with `R` in reduced row echelon form and `T` invertible.
#[derive(Clone, Debug)]
pub struct FpElim {
    p: u64,
    rows: usize,
    cols: usize,
    /// Pivot column of each of the first `rank` rows of `R`.
    pivots: Vec<usize>,
    r: Vec<Vec<u64>>,
    t: Vec<Vec<u64>>,
}

impl FpElim {
    pub fn new(a: &Matrix) -> Self {
        let p = prime_of(a.ring()).expect("FpElim needs a prime field");
        let (m, n) = a.shape();
        let mut aug: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                let mut row: Vec<u64> = a.row(i).iter().map(to_u64).collect();
                row.resize(n + m, 0);
                row[n + i] = 1;
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r0 = 0;
        for c in 0..n {
            if r0 == m {
                break;
            }
            let Some(pr) = (r0..m).find(|&i| aug[i][c] != 0) else { continue };
            aug.swap(r0, pr);
            let s = inv_mod(aug[r0][c], p);
            for x in aug[r0].iter_mut() {
                *x = *x * s % p;
            }
            let pivot_row = std::mem::take(&mut aug[r0]);
            for (i, row) in aug.iter_mut().enumerate() {
                if i != r0 {
                    let x = row[c];
                    if x != 0 {
                        axpy(&mut row[c..], &pivot_row[c..], p - x, p);
                    }
                }
            }
            aug[r0] = pivot_row;
            pivots.push(c);
            r0 += 1;
        }
        let (r, t) = aug.into_iter().map(|mut row| {
            let t = row.split_off(n);
            (row, t)
        }).unzip();
        FpElim { p, rows: m, cols: n, pivots, r, t }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve_u64(&self, b: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let c: Vec<u64> = self
            .t
            .iter()
            .map(|row| row.iter().zip(b).fold(0u64, |acc, (x, y)| (acc + x * y) % p))
            .collect();
        if c[self.rank()..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = c[i];
        }
        Some(x)
    }

    pub fn solve(&self, ring: CoeffRing, b: &[Elem]) -> Option<Vec<Elem>> {
        debug_assert_eq!(b.len(), self.rows);
        let b: Vec<u64> = b.iter().map(to_u64).collect();
        self.solve_u64(&b).map(|x| x.into_iter().map(|v| ring.from_int(v as i128)).collect())
    }

    /// Kernel basis vectors, one per free column, in increasing column order.
    pub fn kernel_u64(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (i, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = (p - self.r[i][f]) % p;
                }
                v
            })
            .collect()
    }

    /// Kernel basis as the columns of a matrix over `ring`.
    pub fn kernel(&self, ring: CoeffRing) -> Matrix {
        let k = self.kernel_u64();
        Matrix::from_fn(ring, self.cols, k.len(), |i, j| ring.from_int(k[j][i] as i128))
    }
}

pub fn elems_to_u64(v: &[Elem]) -> Vec<u64> {
    v.iter().map(to_u64).collect()
}

pub fn u64_to_elems(ring: CoeffRing, v: &[u64]) -> Vec<Elem> {
    v.iter().map(|&x| ring.from_int(x as i128)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn elimination_solves_and_kernels(
            p in prop::sample::select(vec![2u64, 3, 5]),
            m in 1usize..6, n in 1usize..6,
            seed in proptest::collection::vec(0u64..5, 36),
            xs in proptest::collection::vec(0u64..5, 6),
        ) {
            let f = CoeffRing::PrimeField(p);
            let a = Matrix::from_fn(f, m, n, |i, j| f.from_int(seed[i * 6 + j] as i128));
            let e = FpElim::new(&a);
            let x: Vec<Elem> = (0..n).map(|j| f.from_int(xs[j] as i128)).collect();
            let b = a.apply(&x);
            let sol = e.solve(f, &b).expect("consistent system");
            prop_assert_eq!(a.apply(&sol), b);
            let k = e.kernel(f);
            prop_assert_eq!(k.cols(), n - e.rank());
            prop_assert!(a.dot(&k).is_zero());
            let snf = crate::exactalg::snf::smith_normal_form(&a).unwrap();
            prop_assert_eq!(snf.rank, e.rank());
        }
    }

    #[test]
    fn rref_spans() {
        let mut s = FpRref::new(3, 3);
        assert!(s.insert(vec![1, 1, 0]));
        assert!(s.insert(vec![0, 2, 1]));
        assert!(!s.insert(vec![1, 0, 1]));
        assert_eq!(s.rank(), 2);
        assert_eq!(s.free_columns(), vec![2]);
    }
}
