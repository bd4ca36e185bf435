//! Smith form over Z with arbitrary precision intermediates.
//!
//! Same alternating Hermite scheme as the generic dense code, but entries are
//! `BigInt`, so transient growth cannot overflow. When the transforms come out
//! large, the kernel parts of `U` and `V` are LLL-reduced and the pivot lines
//! are size-reduced against them before converting back to `i128`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::matrix::Matrix;
use crate::exactalg::ring::CoeffRing;

/// Entries above this many bits trigger lattice reduction of the transforms.
const REDUCE_BITS: u64 = 48;

#[derive(Clone, Debug)]
struct BigMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl BigMat {
    fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        BigMat { rows: n, cols: n, data }
    }

    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            self.data.swap(i * self.cols + j, k * self.cols + j);
        }
    }

    fn swap_cols(&mut self, i: usize, k: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + k);
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let t = s * c;
                self.data[dst * self.cols + j] += t;
            }
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let t = s * c;
                self.data[r * self.cols + dst] += t;
            }
        }
    }

    fn neg_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    fn neg_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let x = &mut self.data[r * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// `(row_i, row_k) <- m (row_i, row_k)`
    fn combine_rows(&mut self, i: usize, k: usize, m: &[BigInt; 4]) {
        for j in 0..self.cols {
            let (a, b) = (self.at(i, j).clone(), self.at(k, j).clone());
            if a.is_zero() && b.is_zero() {
                continue;
            }
            self.data[i * self.cols + j] = &m[0] * &a + &m[1] * &b;
            self.data[k * self.cols + j] = &m[2] * &a + &m[3] * &b;
        }
    }

    /// `(col_i, col_k) <- (col_i, col_k) m`
    fn combine_cols(&mut self, i: usize, k: usize, m: &[BigInt; 4]) {
        for r in 0..self.rows {
            let (a, b) = (self.at(r, i).clone(), self.at(r, k).clone());
            if a.is_zero() && b.is_zero() {
                continue;
            }
            self.data[r * self.cols + i] = &m[0] * &a + &m[2] * &b;
            self.data[r * self.cols + k] = &m[1] * &a + &m[3] * &b;
        }
    }

    fn max_bits(&self) -> u64 {
        self.data.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    fn to_matrix(&self, what: &str) -> Result<Matrix> {
        let z = CoeffRing::Integers;
        let mut vals = Vec::with_capacity(self.data.len());
        for x in &self.data {
            let v = x.to_i128().ok_or_else(|| Error::TooLarge(format!("{what} entry of {} bits", x.bits())))?;
            vals.push(z.from_int(v));
        }
        let mut it = vals.into_iter();
        Ok(Matrix::from_fn(z, self.rows, self.cols, |_, _| it.next().expect("sized")))
    }
}

/// Rounded quotient `q` with `|y - q x| <= |x| / 2`.
fn round_div(y: &BigInt, x: &BigInt) -> BigInt {
    let ax = x.abs();
    let mut r = y.mod_floor(&ax);
    if &r * 2 > ax {
        r -= &ax;
    }
    (y - r) / x
}

fn inverse2(m: &[BigInt; 4]) -> [BigInt; 4] {
    [m[3].clone(), -&m[1], -&m[2], m[0].clone()]
}

struct Work {
    d: BigMat,
    u: BigMat,
    u_inv: BigMat,
    v: BigMat,
    v_inv: BigMat,
}

impl Work {
    fn is_monomial(&self) -> bool {
        let mut col_used = vec![false; self.d.cols];
        for i in 0..self.d.rows {
            let mut seen = false;
            for j in 0..self.d.cols {
                if !self.d.at(i, j).is_zero() {
                    if seen || col_used[j] {
                        return false;
                    }
                    seen = true;
                    col_used[j] = true;
                }
            }
        }
        true
    }

    fn entry(&self, rows: bool, line: usize, pos: usize) -> &BigInt {
        if rows {
            self.d.at(line, pos)
        } else {
            self.d.at(pos, line)
        }
    }

    fn swap_lines(&mut self, rows: bool, i: usize, k: usize) {
        if i == k {
            return;
        }
        if rows {
            self.d.swap_rows(i, k);
            self.u.swap_rows(i, k);
            self.u_inv.swap_cols(i, k);
        } else {
            self.d.swap_cols(i, k);
            self.v.swap_cols(i, k);
            self.v_inv.swap_rows(i, k);
        }
    }

    /// `line[dst] += c * line[src]`
    fn add_line(&mut self, rows: bool, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let nc = -c;
        if rows {
            self.d.add_row_multiple(dst, src, c);
            self.u.add_row_multiple(dst, src, c);
            self.u_inv.add_col_multiple(src, dst, &nc);
        } else {
            self.d.add_col_multiple(dst, src, c);
            self.v.add_col_multiple(dst, src, c);
            self.v_inv.add_row_multiple(src, dst, &nc);
        }
    }

    fn negate_line(&mut self, rows: bool, i: usize) {
        if rows {
            self.d.neg_row(i);
            self.u.neg_row(i);
            self.u_inv.neg_col(i);
        } else {
            self.d.neg_col(i);
            self.v.neg_col(i);
            self.v_inv.neg_row(i);
        }
    }

    /// `(line_i, line_k) <- m (line_i, line_k)` with `det m = 1`.
    fn lines2(&mut self, rows: bool, i: usize, k: usize, m: [BigInt; 4]) {
        let inv = inverse2(&m);
        if rows {
            self.d.combine_rows(i, k, &m);
            self.u.combine_rows(i, k, &m);
            self.u_inv.combine_cols(i, k, &inv);
        } else {
            let t = [m[0].clone(), m[2].clone(), m[1].clone(), m[3].clone()];
            let ti = inverse2(&t);
            self.d.combine_cols(i, k, &t);
            self.v.combine_cols(i, k, &t);
            self.v_inv.combine_rows(i, k, &ti);
        }
    }

    fn hermite_pass(&mut self, rows: bool) {
        let (lines, width) = if rows { (self.d.rows, self.d.cols) } else { (self.d.cols, self.d.rows) };
        let mut pivots: Vec<usize> = Vec::new();
        for i in 0..lines {
            let h = pivots.len();
            self.swap_lines(rows, h, i);
            while let Some(c) = (0..width).find(|&c| !self.entry(rows, h, c).is_zero()) {
                match pivots.binary_search(&c) {
                    Ok(k) => {
                        let (x, y) = (self.entry(rows, k, c).clone(), self.entry(rows, h, c).clone());
                        if y.is_multiple_of(&x) {
                            self.add_line(rows, h, k, &-(&y / &x));
                        } else {
                            let e = x.extended_gcd(&y);
                            let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
                            self.lines2(rows, k, h, [e.x, e.y, -yg, xg]);
                        }
                    }
                    Err(p) => {
                        for s in (p..h).rev() {
                            self.swap_lines(rows, s, s + 1);
                        }
                        pivots.insert(p, c);
                        break;
                    }
                }
            }
            self.reduce_echelon(rows, &pivots);
        }
    }

    fn reduce_echelon(&mut self, rows: bool, pivots: &[usize]) {
        for (k, &c) in pivots.iter().enumerate() {
            if self.entry(rows, k, c).is_negative() {
                self.negate_line(rows, k);
            }
            let x = self.entry(rows, k, c).clone();
            for j in 0..k {
                let y = self.entry(rows, j, c);
                if y.is_zero() {
                    continue;
                }
                let q = round_div(y, &x);
                self.add_line(rows, j, k, &-q);
            }
        }
    }

    /// The transform lines for `rows`: rows of `U`, or columns of `V`.
    fn dot(&self, rows: bool, a: usize, b: usize) -> BigInt {
        let mut s = BigInt::zero();
        if rows {
            for j in 0..self.u.cols {
                let (x, y) = (self.u.at(a, j), self.u.at(b, j));
                if !x.is_zero() && !y.is_zero() {
                    s += x * y;
                }
            }
        } else {
            for r in 0..self.v.rows {
                let (x, y) = (self.v.at(r, a), self.v.at(r, b));
                if !x.is_zero() && !y.is_zero() {
                    s += x * y;
                }
            }
        }
        s
    }

    /// LLL-reduces transform lines `start..end` (a kernel basis, so the
    /// operations leave `D` alone), then size-reduces lines `0..start`
    /// against them. Integral version of the algorithm, δ = 3/4.
    fn reduce_kernel(&mut self, rows: bool, start: usize, end: usize) {
        let n = end - start;
        if n == 0 {
            return;
        }
        // 1-based as in the usual presentation: b_i is line start + i - 1.
        let line = |i: usize| start + i - 1;
        let mut d = vec![BigInt::zero(); n + 1];
        d[0] = BigInt::one();
        let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
        let mut kmax = 1;
        d[1] = self.dot(rows, line(1), line(1));
        let mut k = 2;
        while k <= n {
            if k > kmax {
                kmax = k;
                for j in 1..=k {
                    let mut u = self.dot(rows, line(k), line(j));
                    for i in 1..j {
                        u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                    }
                    if j < k {
                        lam[k][j] = u;
                    } else {
                        d[k] = u;
                    }
                }
            }
            self.redi(rows, &line, &mut lam, &d, k, k - 1);
            let lhs = BigInt::from(4) * &d[k] * &d[k - 2];
            let rhs = BigInt::from(3) * &d[k - 1] * &d[k - 1] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                self.swap_lines(rows, line(k), line(k - 1));
                for j in 1..k - 1 {
                    let t = std::mem::take(&mut lam[k][j]);
                    lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
                }
                let l = lam[k][k - 1].clone();
                let b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = b;
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    self.redi(rows, &line, &mut lam, &d, k, l);
                }
                k += 1;
            }
        }
        // Nearest-plane reduction of the pivot lines.
        for t in 0..start {
            let mut mu = vec![BigInt::zero(); n + 1];
            for j in 1..=n {
                let mut u = self.dot(rows, t, line(j));
                for i in 1..j {
                    u = (&d[i] * &u - &mu[i] * &lam[j][i]) / &d[i - 1];
                }
                mu[j] = u;
            }
            for l in (1..=n).rev() {
                if BigInt::from(2) * mu[l].abs() > d[l] {
                    let q = round_div(&mu[l], &d[l]);
                    self.add_line(rows, t, line(l), &-&q);
                    mu[l] -= &q * &d[l];
                    for i in 1..l {
                        let s = &q * &lam[l][i];
                        mu[i] -= s;
                    }
                }
            }
        }
    }

    fn redi(&mut self, rows: bool, line: &impl Fn(usize) -> usize, lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
        if BigInt::from(2) * lam[k][l].abs() <= d[l] {
            return;
        }
        let q = round_div(&lam[k][l], &d[l]);
        self.add_line(rows, line(k), line(l), &-&q);
        let ql = &q * &d[l];
        lam[k][l] -= ql;
        for i in 1..l {
            let s = &q * &lam[l][i];
            lam[k][i] -= s;
        }
    }
}

/// `(u, u_inv, d, v, v_inv, rank)` for an integer matrix.
pub(crate) fn integer_smith(a: &Matrix) -> Result<(Matrix, Matrix, Matrix, Matrix, Matrix, usize)> {
    let (m, n) = a.shape();
    let data = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| BigInt::from(a.get(i, j).numerator())).collect();
    let mut w = Work {
        d: BigMat { rows: m, cols: n, data },
        u: BigMat::identity(m),
        u_inv: BigMat::identity(m),
        v: BigMat::identity(n),
        v_inv: BigMat::identity(n),
    };
    let mut cols = false;
    while !w.is_monomial() {
        w.hermite_pass(cols);
        cols = !cols;
    }
    let mut rank = 0;
    for i in 0..m {
        if let Some(j) = (0..n).find(|&j| !w.d.at(i, j).is_zero()) {
            w.swap_lines(true, i, rank);
            w.swap_lines(false, j, rank);
            rank += 1;
        }
    }
    for i in 0..rank {
        for j in i + 1..rank {
            let (x, y) = (w.d.at(i, i).clone(), w.d.at(j, j).clone());
            if y.is_multiple_of(&x) {
                continue;
            }
            let e = x.extended_gcd(&y);
            let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
            let (s, t) = (e.x, e.y);
            let cm = [BigInt::one(), -(&t * &yg), BigInt::one(), &s * &xg];
            w.lines2(true, i, j, [s, t, -yg, xg]);
            // cols2 takes the matrix acting on the right directly.
            let ci = inverse2(&cm);
            w.d.combine_cols(i, j, &cm);
            w.v.combine_cols(i, j, &cm);
            w.v_inv.combine_rows(i, j, &ci);
        }
        if w.d.at(i, i).is_negative() {
            w.negate_line(true, i);
        }
    }
    if w.u.max_bits().max(w.u_inv.max_bits()) > REDUCE_BITS {
        w.reduce_kernel(true, rank, m);
    }
    if w.v.max_bits().max(w.v_inv.max_bits()) > REDUCE_BITS {
        w.reduce_kernel(false, rank, n);
    }
    Ok((
        w.u.to_matrix("row transform")?,
        w.u_inv.to_matrix("inverse row transform")?,
        w.d.to_matrix("diagonal")?,
        w.v.to_matrix("column transform")?,
        w.v_inv.to_matrix("inverse column transform")?,
        rank,
    ))
}
