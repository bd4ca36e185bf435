//! Smith normal form over the supported PIDs and the linear algebra built on
//! it: solving, kernels, echelon spans and finitely generated quotients.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::bigsnf::integer_smith;
use crate::exactalg::fp::{elems_to_u64, prime_of, u64_to_elems, FpElim, FpRref};
use crate::exactalg::matrix::Matrix;
use crate::exactalg::ring::{CoeffRing, Elem};
use crate::exactalg::sparse::SparseSmith;

/// `U * A * V = D` with `U`, `V` invertible and `D` diagonal whose leading
/// entries form a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub rank: usize,
    /// Nonzero diagonal entries followed by zeros up to `min(rows, cols)`.
    pub elementary_divisors: Vec<Elem>,
}

/// Dense Smith form by alternating row and column Hermite passes. Rows are
/// inserted one at a time into a fully reduced echelon basis, which keeps
/// entries (and the transforms) small where naive pivoting blows up.
pub fn smith_normal_form(a: &Matrix) -> Result<SmithDecomposition> {
    let ring = a.ring();
    ring.require_pid()?;
    if matches!(ring, CoeffRing::LocalizedIntegers(_) | CoeffRing::Rationals) {
        return via_integers(a);
    }
    let (m, n) = a.shape();
    if ring == CoeffRing::Integers {
        let (u, u_inv, d, v, v_inv, rank) = integer_smith(a)?;
        let mut divisors: Vec<Elem> = (0..rank).map(|i| *d.get(i, i)).collect();
        divisors.resize(m.min(n), ring.zero());
        return Ok(SmithDecomposition { u, u_inv, d, v, v_inv, rank, elementary_divisors: divisors });
    }
    let mut w = Work {
        ring,
        d: a.clone(),
        u: Matrix::identity(ring, m),
        u_inv: Matrix::identity(ring, m),
        v: Matrix::identity(ring, n),
        v_inv: Matrix::identity(ring, n),
    };
    let mut cols = false;
    while !w.is_monomial() {
        w.hermite_pass(cols);
        cols = !cols;
    }
    // Move the surviving entries onto the diagonal.
    let mut rank = 0;
    for i in 0..m {
        if let Some(j) = (0..n).find(|&j| !ring.is_zero(w.d.get(i, j))) {
            w.swap_lines(true, i, rank);
            w.swap_lines(false, j, rank);
            rank += 1;
        }
    }
    for i in 0..rank {
        for j in i + 1..rank {
            let (x, y) = (*w.d.get(i, i), *w.d.get(j, j));
            if ring.divides(&x, &y) {
                continue;
            }
            // diag(x, y) -> diag(g, xy/g)
            let (g, s, t) = ring.xgcd(&x, &y);
            let (xg, yg) = (ring.exact_div(&x, &g).unwrap(), ring.exact_div(&y, &g).unwrap());
            w.rows2(i, j, [s, t, ring.neg(&yg), xg]);
            w.cols2(i, j, [ring.one(), ring.neg(&ring.mul(&t, &yg)), ring.one(), ring.mul(&s, &xg)]);
        }
        let (_, unit) = ring.associate(w.d.get(i, i));
        w.scale_line(true, i, &ring.inv(&unit).expect("associate returns a unit"));
    }
    let Work { d, u, u_inv, v, v_inv, .. } = w;
    let mut divisors: Vec<Elem> = (0..rank).map(|i| *d.get(i, i)).collect();
    divisors.resize(m.min(n), ring.zero());
    Ok(SmithDecomposition { u, u_inv, d, v, v_inv, rank, elementary_divisors: divisors })
}

/// Z_(p) and Q are localizations of Z: clear denominators row by row (a
/// unit scaling), work over Z, then normalize the diagonal.
fn via_integers(a: &Matrix) -> Result<SmithDecomposition> {
    let ring = a.ring();
    let z = CoeffRing::Integers;
    let (m, n) = a.shape();
    let scale: Vec<i128> = (0..m)
        .map(|i| a.row(i).iter().fold(1i128, |l, x| l / gcd_i128(l, x.denominator()) * x.denominator()))
        .collect();
    let az = Matrix::from_fn(z, m, n, |i, j| {
        let x = a.get(i, j);
        let k = scale[i] / x.denominator();
        z.from_int(x.numerator().checked_mul(k).expect("exact arithmetic overflowed i128"))
    });
    let s = smith_normal_form(&az)?;
    let mut d = s.d.change_ring(ring)?;
    let mut u = s.u.change_ring(ring)?;
    let mut u_inv = s.u_inv.change_ring(ring)?;
    for (i, &k) in scale.iter().enumerate() {
        u.scale_col(i, &ring.from_int(k));
        u_inv.scale_row(i, &ring.inv(&ring.from_int(k)).expect("denominators are units"));
    }
    for i in 0..s.rank {
        let (_, unit) = ring.associate(d.get(i, i));
        let w = ring.inv(&unit).expect("associate returns a unit");
        d.scale_row(i, &w);
        u.scale_row(i, &w);
        u_inv.scale_col(i, &unit);
    }
    let mut divisors: Vec<Elem> = (0..s.rank).map(|i| *d.get(i, i)).collect();
    divisors.resize(m.min(n), ring.zero());
    Ok(SmithDecomposition {
        u,
        u_inv,
        d,
        v: s.v.change_ring(ring)?,
        v_inv: s.v_inv.change_ring(ring)?,
        rank: s.rank,
        elementary_divisors: divisors,
    })
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `D` with its accumulated transforms; `u * A * v = d` throughout.
struct Work {
    ring: CoeffRing,
    d: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

fn inverse2(ring: CoeffRing, m: &[Elem; 4]) -> [Elem; 4] {
    [m[3], ring.neg(&m[1]), ring.neg(&m[2]), m[0]]
}

impl Work {
    /// At most one nonzero entry in each row and each column.
    fn is_monomial(&self) -> bool {
        let (m, n) = self.d.shape();
        let mut col_used = vec![false; n];
        for i in 0..m {
            let mut seen = false;
            for j in 0..n {
                if !self.ring.is_zero(self.d.get(i, j)) {
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

    // The 2x2 matrices below all have determinant one.
    fn rows2(&mut self, i: usize, k: usize, m: [Elem; 4]) {
        self.d.combine_rows(i, k, &m);
        self.u.combine_rows(i, k, &m);
        self.u_inv.combine_cols(i, k, &inverse2(self.ring, &m));
    }

    fn cols2(&mut self, i: usize, k: usize, m: [Elem; 4]) {
        self.d.combine_cols(i, k, &m);
        self.v.combine_cols(i, k, &m);
        self.v_inv.combine_rows(i, k, &inverse2(self.ring, &m));
    }

    // Line operations: a line is a row when `rows`, a column otherwise.

    fn entry(&self, rows: bool, line: usize, pos: usize) -> &Elem {
        if rows {
            self.d.get(line, pos)
        } else {
            self.d.get(pos, line)
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
    fn add_line(&mut self, rows: bool, dst: usize, src: usize, c: &Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        let nc = self.ring.neg(c);
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

    fn scale_line(&mut self, rows: bool, i: usize, unit: &Elem) {
        if self.ring.is_one(unit) {
            return;
        }
        let inv = self.ring.inv(unit).expect("scaling by a unit");
        if rows {
            self.d.scale_row(i, unit);
            self.u.scale_row(i, unit);
            self.u_inv.scale_col(i, &inv);
        } else {
            self.d.scale_col(i, unit);
            self.v.scale_col(i, unit);
            self.v_inv.scale_row(i, &inv);
        }
    }

    /// `(line_i, line_k) <- m (line_i, line_k)`.
    fn lines2(&mut self, rows: bool, i: usize, k: usize, m: [Elem; 4]) {
        if rows {
            self.rows2(i, k, m);
        } else {
            self.cols2(i, k, [m[0], m[2], m[1], m[3]]);
        }
    }

    fn hermite_pass(&mut self, rows: bool) {
        let ring = self.ring;
        let (lines, width) = if rows { self.d.shape() } else { (self.d.cols(), self.d.rows()) };
        // pivots[k] is the leading position of echelon line k.
        let mut pivots: Vec<usize> = Vec::new();
        for i in 0..lines {
            let h = pivots.len();
            self.swap_lines(rows, h, i);
            while let Some(c) = (0..width).find(|&c| !ring.is_zero(self.entry(rows, h, c))) {
                match pivots.binary_search(&c) {
                    Ok(k) => {
                        let (x, y) = (*self.entry(rows, k, c), *self.entry(rows, h, c));
                        if let Some(q) = ring.exact_div(&y, &x) {
                            self.add_line(rows, h, k, &ring.neg(&q));
                        } else {
                            let (g, s, t) = ring.xgcd(&x, &y);
                            let (xg, yg) = (ring.exact_div(&x, &g).unwrap(), ring.exact_div(&y, &g).unwrap());
                            self.lines2(rows, k, h, [s, t, ring.neg(&yg), xg]);
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

    /// Normalizes pivots and reduces the entries above them.
    fn reduce_echelon(&mut self, rows: bool, pivots: &[usize]) {
        let ring = self.ring;
        for (k, &c) in pivots.iter().enumerate() {
            let (_, unit) = ring.associate(self.entry(rows, k, c));
            self.scale_line(rows, k, &ring.inv(&unit).expect("associate returns a unit"));
            let x = *self.entry(rows, k, c);
            for j in 0..k {
                let y = *self.entry(rows, j, c);
                if ring.is_zero(&y) {
                    continue;
                }
                let (q, _) = ring.div_rem(&y, &x);
                self.add_line(rows, j, k, &ring.neg(&q));
            }
        }
    }
}

impl SmithDecomposition {
    pub fn nonzero_divisors(&self) -> &[Elem] {
        &self.elementary_divisors[..self.rank]
    }

    /// Columns spanning the kernel of `A` (a saturated basis).
    pub fn kernel_basis(&self) -> Matrix {
        let n = self.v.cols();
        self.v.submatrix(0..self.v.rows(), self.rank..n)
    }

    /// Maps a kernel vector to its coordinates with respect to [`kernel_basis`].
    pub fn kernel_coordinates(&self) -> Matrix {
        let n = self.v_inv.rows();
        self.v_inv.submatrix(self.rank..n, 0..self.v_inv.cols())
    }
}

/// Reusable solver for `A x = b`.
#[derive(Clone, Debug)]
pub struct Solver {
    ring: CoeffRing,
    rows: usize,
    backend: Backend,
}

#[derive(Clone, Debug)]
enum Backend {
    Smith(SparseSmith),
    Prime(FpElim),
}

impl Solver {
    pub fn new(a: &Matrix) -> Result<Self> {
        let backend = if prime_of(a.ring()).is_some() {
            Backend::Prime(FpElim::new(a))
        } else {
            Backend::Smith(SparseSmith::new(a)?)
        };
        Ok(Solver { ring: a.ring(), rows: a.rows(), backend })
    }

    /// Builds from `(row, col, value)` triples without forming a dense matrix
    /// (except over prime fields).
    pub fn from_entries(ring: CoeffRing, rows: usize, cols: usize, entries: Vec<(usize, usize, Elem)>) -> Result<Self> {
        if prime_of(ring).is_some() {
            let mut a = Matrix::zeros(ring, rows, cols);
            for (i, j, x) in entries {
                a.add_at(i, j, &x);
            }
            return Self::new(&a);
        }
        Ok(Solver { ring, rows, backend: Backend::Smith(SparseSmith::from_entries(ring, rows, cols, entries)?) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        match &self.backend {
            Backend::Smith(s) => s.rank(),
            Backend::Prime(e) => e.rank(),
        }
    }

    /// Nonzero invariant factors of the matrix.
    pub fn elementary_divisors(&self) -> Vec<Elem> {
        match &self.backend {
            Backend::Smith(s) => s.elementary_divisors(),
            Backend::Prime(e) => vec![self.ring.one(); e.rank()],
        }
    }

    pub fn solve(&self, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        Ok(match &self.backend {
            Backend::Prime(e) => e.solve(self.ring, b),
            Backend::Smith(s) => s.solve(b),
        })
    }

    /// Saturated kernel basis as matrix columns.
    pub fn kernel(&self) -> Matrix {
        match &self.backend {
            Backend::Smith(s) => s.kernel_basis(),
            Backend::Prime(e) => e.kernel(self.ring),
        }
    }
}

/// Saturated basis of the kernel of `a`, as columns.
pub fn kernel_basis(a: &Matrix) -> Result<Matrix> {
    Ok(Solver::new(a)?.kernel())
}

pub fn rank(a: &Matrix) -> Result<usize> {
    Ok(Solver::new(a)?.rank())
}

/// Solves `A x = b` over the ring of `A`; `Ok(None)` when no solution exists.
pub fn solve_linear(a: &Matrix, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
    Solver::new(a)?.solve(b)
}

/// Solves `A x = b (mod m)` for an integer matrix by solving `[A | m I] (x, y) = b` over Z.
pub fn solve_mod(a: &Matrix, b: &[Elem], m: u64) -> Result<Option<Vec<Elem>>> {
    if a.ring() != CoeffRing::Integers {
        return Err(Error::UnsupportedRing("solve_mod expects an integer matrix".into()));
    }
    let ring = a.ring();
    let aug = a.hstack(&Matrix::scalar(ring, a.rows(), ring.from_int(m as i128)));
    Ok(solve_linear(&aug, b)?.map(|mut x| {
        x.truncate(a.cols());
        x.iter().map(|e| ring.from_int(e.numerator().rem_euclid(m as i128))).collect()
    }))
}

/// Finitely generated module over a PID: `R^free_rank ⊕ ⊕ R/(torsion_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub ring: CoeffRing,
    pub free_rank: usize,
    /// Canonical non-unit nonzero invariant factors, each dividing the next.
    pub torsion: Vec<Elem>,
}

#[derive(Serialize)]
struct AbelianGroupJson {
    free_rank: usize,
    torsion: Vec<serde_json::Value>,
}

impl AbelianGroup {
    pub fn zero(ring: CoeffRing) -> Self {
        AbelianGroup { ring, free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of cyclic summands.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Vector-space dimension over a field.
    pub fn dimension(&self) -> usize {
        self.free_rank
    }

    /// `x` kills the whole group.
    pub fn annihilated_by(&self, x: &Elem) -> bool {
        if self.free_rank > 0 && !self.ring.is_zero(x) {
            return false;
        }
        self.torsion.iter().all(|d| self.ring.divides(d, x))
    }

    /// Order of a finite group over Z or Z_(p) (as an integer); `None` when infinite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank > 0 {
            return None;
        }
        let mut acc: u128 = 1;
        for t in &self.torsion {
            acc = acc.checked_mul(t.numerator().unsigned_abs())?;
        }
        Some(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(AbelianGroupJson {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().map(|t| self.ring.elem_to_json(t)).collect(),
        })
        .expect("serializable")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            let base = self.ring.to_string();
            parts.push(if self.free_rank == 1 { base } else { format!("{base}^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("{}/{}", self.ring, self.ring.format(t)));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Quotient `Z / B` of a free module by a submodule given in coordinates,
/// with the coordinate map onto the invariant-factor decomposition.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    pub group: AbelianGroup,
    ambient: usize,
    kind: QuotientKind,
}

#[derive(Clone, Debug)]
enum QuotientKind {
    Smith {
        snf: Box<SparseSmith>,
        /// Diagonal positions that survive in the quotient.
        rows: Vec<usize>,
        /// Modulus of each component (zero for free components).
        moduli: Vec<Elem>,
    },
    /// Over a prime field: coordinates are the non-pivot entries after reduction.
    Field { span: FpRref, free: Vec<usize>, moduli: Vec<Elem> },
}

impl QuotientModule {
    /// `ambient_dim`-dimensional free module modulo the column span of `relations`.
    pub fn new(ring: CoeffRing, ambient_dim: usize, relations: &Matrix) -> Result<Self> {
        if relations.cols() > 0 && relations.rows() != ambient_dim {
            return Err(Error::DimensionMismatch("quotient relations".into()));
        }
        if let Some(p) = prime_of(ring) {
            let mut span = FpRref::new(p, ambient_dim);
            for j in 0..relations.cols() {
                span.insert(elems_to_u64(&relations.col(j)));
            }
            let free = span.free_columns();
            let group = AbelianGroup { ring, free_rank: free.len(), torsion: Vec::new() };
            let moduli = vec![ring.zero(); free.len()];
            return Ok(QuotientModule { group, ambient: ambient_dim, kind: QuotientKind::Field { span, free, moduli } });
        }
        let rel = if relations.cols() == 0 || relations.rows() == 0 {
            Matrix::zeros(ring, ambient_dim, 1)
        } else {
            relations.clone()
        };
        let snf = SparseSmith::new(&rel)?;
        let mut rows = Vec::new();
        let mut moduli = Vec::new();
        let mut torsion = Vec::new();
        let mut free_rank = 0;
        for i in 0..ambient_dim {
            if i < snf.rank() {
                let d = snf.divisor(i);
                if ring.is_unit(&d) {
                    continue;
                }
                torsion.push(d);
                moduli.push(d);
            } else {
                free_rank += 1;
                moduli.push(ring.zero());
            }
            rows.push(i);
        }
        Ok(QuotientModule {
            group: AbelianGroup { ring, free_rank, torsion },
            ambient: ambient_dim,
            kind: QuotientKind::Smith { snf: Box::new(snf), rows, moduli },
        })
    }

    pub fn ring(&self) -> CoeffRing {
        self.group.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn num_components(&self) -> usize {
        self.moduli().len()
    }

    pub fn moduli(&self) -> &[Elem] {
        match &self.kind {
            QuotientKind::Smith { moduli, .. } | QuotientKind::Field { moduli, .. } => moduli,
        }
    }

    /// Canonical coordinates of the class of `v`.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let ring = self.ring();
        match &self.kind {
            QuotientKind::Smith { snf, rows, moduli } => {
                let c = snf.u_apply(v);
                rows.iter().zip(moduli).map(|(&k, m)| ring.residue(&c[k], m)).collect()
            }
            QuotientKind::Field { span, free, .. } => {
                let mut w = elems_to_u64(v);
                span.reduce(&mut w);
                free.iter().map(|&j| ring.from_int(w[j] as i128)).collect()
            }
        }
    }

    /// Representative of the `k`-th generator.
    pub fn generator(&self, k: usize) -> Vec<Elem> {
        let ring = self.ring();
        match &self.kind {
            QuotientKind::Smith { snf, rows, .. } => {
                let mut e = vec![ring.zero(); self.ambient];
                e[rows[k]] = ring.one();
                snf.u_inv_apply(&e)
            }
            QuotientKind::Field { free, .. } => {
                let mut v = vec![0u64; self.ambient];
                v[free[k]] = 1;
                u64_to_elems(ring, &v)
            }
        }
    }

    /// Representative of the class with the given coordinates.
    pub fn lift(&self, c: &[Elem]) -> Vec<Elem> {
        let ring = self.ring();
        match &self.kind {
            QuotientKind::Smith { snf, rows, .. } => {
                let mut e = vec![ring.zero(); self.ambient];
                for (&k, x) in rows.iter().zip(c) {
                    e[k] = *x;
                }
                snf.u_inv_apply(&e)
            }
            QuotientKind::Field { free, .. } => {
                let mut v = vec![ring.zero(); self.ambient];
                for (&j, x) in free.iter().zip(c) {
                    v[j] = *x;
                }
                v
            }
        }
    }
}

/// Echelon basis of an R-span of row vectors (Hermite normal form over Z).
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    ring: CoeffRing,
    dim: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl EchelonSpan {
    pub fn new(ring: CoeffRing, dim: usize) -> Self {
        EchelonSpan { ring, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors(ring: CoeffRing, dim: usize, vectors: impl IntoIterator<Item = Vec<Elem>>) -> Self {
        let mut s = Self::new(ring, dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let ring = self.ring;
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if ring.is_zero(&v[c]) {
                continue;
            }
            let target = ring.residue(&v[c], &row[c]);
            let q = ring.exact_div(&ring.sub(&v[c], &target), &row[c]).expect("residue differs by a multiple");
            if !ring.is_zero(&q) {
                let nq = ring.neg(&q);
                for (x, y) in v.iter_mut().zip(row) {
                    if !ring.is_zero(y) {
                        *x = ring.add(x, &ring.mul(&nq, y));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|e| self.ring.is_zero(e))
    }

    /// Adds `v` to the span; returns whether the span grew.
    pub fn insert(&mut self, v: Vec<Elem>) -> bool {
        assert_eq!(v.len(), self.dim);
        let ring = self.ring;
        let before: Vec<Vec<Elem>> = self.rows.clone();
        let mut all = std::mem::take(&mut self.rows);
        all.push(v);
        self.pivots.clear();
        let mut col = 0;
        let mut r0 = 0;
        while r0 < all.len() && col < self.dim {
            // Euclid down column `col` among rows r0..
            loop {
                let mut best: Option<(u128, usize)> = None;
                for (i, row) in all.iter().enumerate().skip(r0) {
                    if let Some(sz) = ring.euclid_norm(&row[col]) {
                        if best.map_or(true, |(b, _)| sz < b) {
                            best = Some((sz, i));
                        }
                    }
                }
                let Some((_, bi)) = best else { break };
                all.swap(r0, bi);
                let mut again = false;
                for i in r0 + 1..all.len() {
                    if ring.is_zero(&all[i][col]) {
                        continue;
                    }
                    let (q, r) = ring.div_rem(&all[i][col], &all[r0][col]);
                    let nq = ring.neg(&q);
                    let pivot_row = all[r0].clone();
                    for (x, y) in all[i].iter_mut().zip(&pivot_row) {
                        *x = ring.add(x, &ring.mul(&nq, y));
                    }
                    if !ring.is_zero(&r) {
                        again = true;
                    }
                }
                if !again {
                    break;
                }
            }
            if ring.is_zero(&all[r0][col]) {
                col += 1;
                continue;
            }
            let (_, unit) = ring.associate(&all[r0][col]);
            let ui = ring.inv(&unit).unwrap();
            for x in all[r0].iter_mut() {
                *x = ring.mul(x, &ui);
            }
            self.pivots.push(col);
            r0 += 1;
            col += 1;
        }
        all.truncate(r0);
        all.retain(|row| row.iter().any(|e| !ring.is_zero(e)));
        // Reduce above pivots to canonical residues.
        for k in 0..all.len() {
            let c = self.pivots[k];
            for i in 0..k {
                let target = ring.residue(&all[i][c], &all[k][c]);
                let q = ring.exact_div(&ring.sub(&all[i][c], &target), &all[k][c]).unwrap();
                if !ring.is_zero(&q) {
                    let nq = ring.neg(&q);
                    let pr = all[k].clone();
                    for (x, y) in all[i].iter_mut().zip(&pr) {
                        *x = ring.add(x, &ring.mul(&nq, y));
                    }
                }
            }
        }
        self.rows = all;
        self.rows != before
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &Matrix) -> SmithDecomposition {
        let s = smith_normal_form(a).unwrap();
        assert_eq!(s.u.dot(a).dot(&s.v), s.d);
        assert!(s.u.dot(&s.u_inv).is_identity());
        assert!(s.v.dot(&s.v_inv).is_identity());
        let ring = a.ring();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(ring.is_zero(s.d.get(i, j)));
                }
            }
        }
        for w in s.nonzero_divisors().windows(2) {
            assert!(ring.divides(&w[0], &w[1]));
        }
        s
    }

    #[test]
    fn identity_over_z() {
        let z = CoeffRing::Integers;
        let s = check(&Matrix::identity(z, 3));
        assert_eq!(s.elementary_divisors, vec![z.one(); 3]);
    }

    #[test]
    fn diag_2_3() {
        let z = CoeffRing::Integers;
        let s = check(&Matrix::from_ints(z, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.elementary_divisors, vec![z.from_int(1), z.from_int(6)]);
    }

    #[test]
    fn zero_matrix() {
        let z = CoeffRing::Integers;
        let s = check(&Matrix::zeros(z, 2, 2));
        assert_eq!(s.elementary_divisors, vec![z.zero(), z.zero()]);
    }

    #[test]
    fn field_divisors_are_zero_or_one() {
        let f = CoeffRing::PrimeField(3);
        let s = check(&Matrix::from_ints(f, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 2]]));
        assert!(s.elementary_divisors.iter().all(|d| f.is_zero(d) || f.is_one(d)));
    }

    #[test]
    fn localized_divisors() {
        let r = CoeffRing::LocalizedIntegers(2);
        let s = check(&Matrix::from_ints(r, &[vec![6, 0], vec![0, 10]]));
        assert_eq!(s.elementary_divisors, vec![r.from_int(2), r.from_int(2)]);
    }

    #[test]
    fn composite_modulus_rejected() {
        let r = CoeffRing::IntegersMod(4);
        assert!(matches!(smith_normal_form(&Matrix::identity(r, 2)), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn solve_examples() {
        let z = CoeffRing::Integers;
        let a = Matrix::from_ints(z, &[vec![2]]);
        assert_eq!(solve_linear(&a, &[z.from_int(4)]).unwrap(), Some(vec![z.from_int(2)]));
        assert_eq!(solve_linear(&a, &[z.from_int(1)]).unwrap(), None);
        let q = CoeffRing::Rationals;
        let a = Matrix::from_ints(q, &[vec![2]]);
        assert_eq!(solve_linear(&a, &[q.one()]).unwrap(), Some(vec![q.from_frac(1, 2).unwrap()]));
        assert!(matches!(solve_linear(&a, &[q.one(), q.one()]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn solve_modulo() {
        let z = CoeffRing::Integers;
        let a = Matrix::from_ints(z, &[vec![2]]);
        assert_eq!(solve_mod(&a, &[z.from_int(2)], 4).unwrap().unwrap().len(), 1);
        assert_eq!(solve_mod(&a, &[z.from_int(1)], 4).unwrap(), None);
    }

    #[test]
    fn quotient_of_z_by_2z() {
        let z = CoeffRing::Integers;
        let q = QuotientModule::new(z, 1, &Matrix::from_ints(z, &[vec![2]])).unwrap();
        assert_eq!(q.group.torsion, vec![z.from_int(2)]);
        assert_eq!(q.reduce(&[z.from_int(3)]), vec![z.one()]);
        assert_eq!(q.reduce(&[z.from_int(4)]), vec![z.zero()]);
    }

    #[test]
    fn echelon_membership() {
        let z = CoeffRing::Integers;
        let v = |a: i128, b: i128| vec![z.from_int(a), z.from_int(b)];
        let s = EchelonSpan::from_vectors(z, 2, [v(2, 4), v(0, 6)]);
        assert!(s.contains(&v(2, -2)));
        assert!(!s.contains(&v(1, 0)));
        assert!(!s.contains(&v(0, 3)));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn snf_recomposes(entries in proptest::collection::vec(-9i64..10, 12)) {
            let z = CoeffRing::Integers;
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            check(&Matrix::from_ints(z, &rows));
        }

        #[test]
        fn low_rank_products_stay_in_range(
            left in proptest::collection::vec(-4i64..5, 48),
            right in proptest::collection::vec(-4i64..5, 48),
        ) {
            // Rank-deficient 16x16 matrices are where unreduced pivoting overflowed.
            let z = CoeffRing::Integers;
            let l = Matrix::from_ints(z, &left.chunks(3).map(|c| c.to_vec()).collect::<Vec<_>>());
            let r = Matrix::from_ints(z, &right.chunks(16).map(|c| c.to_vec()).collect::<Vec<_>>());
            let s = check(&l.dot(&r));
            prop_assert!(s.rank <= 3);
        }

        #[test]
        fn wide_entries_low_rank(
            left in proptest::collection::vec(-999i64..1000, 48),
            right in proptest::collection::vec(-999i64..1000, 48),
            x in proptest::collection::vec(-50i64..51, 12),
        ) {
            let z = CoeffRing::Integers;
            let l = Matrix::from_ints(z, &left.chunks(4).map(|c| c.to_vec()).collect::<Vec<_>>());
            let r = Matrix::from_ints(z, &right.chunks(12).map(|c| c.to_vec()).collect::<Vec<_>>());
            let a = l.dot(&r);
            let s = check(&a);
            prop_assert!(s.rank <= 4);
            let xs: Vec<Elem> = x.iter().map(|&e| z.from_int(e as i128)).collect();
            let b = a.apply(&xs);
            let sol = solve_linear(&a, &b).unwrap().expect("consistent system");
            prop_assert_eq!(a.apply(&sol), b);
        }

        #[test]
        fn solutions_substitute_back(entries in proptest::collection::vec(-5i64..6, 9), x in proptest::collection::vec(-5i64..6, 3)) {
            let z = CoeffRing::Integers;
            let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let a = Matrix::from_ints(z, &rows);
            let xs: Vec<Elem> = x.iter().map(|&e| z.from_int(e as i128)).collect();
            let b = a.apply(&xs);
            let sol = solve_linear(&a, &b).unwrap().expect("consistent system");
            prop_assert_eq!(a.apply(&sol), b);
        }
    }
}
