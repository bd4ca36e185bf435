//! Free resolutions of the trivial module.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{kernel_basis, CoeffRing, EchelonSpan, Elem, Matrix, Solver};
use crate::groups::FiniteGroup;
use crate::homalg::grmatrix::{left_mult, GrMatrix};
use crate::lattices::Lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Auto,
    Bar,
    Periodic,
    TensorProduct,
    Minimal,
    /// Kernel covers by greedily chosen generators; works over every ring.
    Greedy,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Strategy::Auto,
            "bar" => Strategy::Bar,
            "periodic" => Strategy::Periodic,
            "tensor_product" | "tensor-product" | "tensor" => Strategy::TensorProduct,
            "minimal" => Strategy::Minimal,
            "greedy" => Strategy::Greedy,
            other => return Err(Error::Parse(format!("unknown resolution strategy {other}"))),
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Auto => "auto",
            Strategy::Bar => "bar",
            Strategy::Periodic => "periodic",
            Strategy::TensorProduct => "tensor_product",
            Strategy::Minimal => "minimal",
            Strategy::Greedy => "greedy",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
enum Builder {
    /// Cyclic group with generator `g` of order `m`.
    Periodic { g: usize, m: usize },
    /// Product of cyclic factors `(generator, order)`.
    Tensor { factors: Vec<(usize, usize)> },
    Bar,
    Minimal,
    Greedy,
}

/// Free resolution `… → P_1 → P_0 → R` of the trivial module, with `P_0 = R[G]`
/// and augmentation `g ↦ 1`.
#[derive(Clone, Debug)]
pub struct Resolution {
    group: Arc<FiniteGroup>,
    ring: CoeffRing,
    flavor: Strategy,
    builder: Builder,
    ranks: Vec<usize>,
    /// `diffs[k - 1]` is `d_k: P_k → P_{k-1}`.
    diffs: Vec<GrMatrix>,
    solvers: Vec<OnceLock<Solver>>,
}

impl Resolution {
    pub fn build(group: &Arc<FiniteGroup>, ring: CoeffRing, cap: usize, strategy: Strategy) -> Result<Self> {
        let res = Self::build_unchecked(group, ring, cap, strategy)?;
        res.validate()?;
        Ok(res)
    }

    /// Builds without the exactness certificate (d² = 0 is still checked).
    pub fn build_unchecked(group: &Arc<FiniteGroup>, ring: CoeffRing, cap: usize, strategy: Strategy) -> Result<Self> {
        if cap < 1 {
            return Err(Error::CapTooSmall("resolution cap must be at least 1".into()));
        }
        let strategy = if strategy == Strategy::Auto { Self::auto_strategy(group, ring) } else { strategy };
        let builder = match strategy {
            Strategy::Periodic => {
                let g = group
                    .cyclic_generator()
                    .ok_or_else(|| Error::StrategyUnavailable("periodic needs a cyclic group".into()))?;
                Builder::Periodic { g, m: group.order() }
            }
            Strategy::TensorProduct => {
                let factors = group
                    .cyclic_decomposition()
                    .ok_or_else(|| Error::StrategyUnavailable("tensor_product needs a product of cyclic groups".into()))?;
                Builder::Tensor { factors }
            }
            Strategy::Minimal => {
                let p = ring.characteristic();
                if !ring.is_field() || p == 0 {
                    return Err(Error::StrategyUnavailable("minimal needs a finite field".into()));
                }
                if !group.is_p_group(p as usize) {
                    return Err(Error::StrategyUnavailable(format!(
                        "minimal resolutions are implemented for {p}-groups only"
                    )));
                }
                Builder::Minimal
            }
            Strategy::Greedy => {
                ring.require_pid()?;
                Builder::Greedy
            }
            Strategy::Bar => Builder::Bar,
            Strategy::Auto => unreachable!(),
        };
        if !matches!(builder, Builder::Greedy | Builder::Minimal) {
            // Explicit constructions still need exact arithmetic to solve lifts.
            ring.require_pid()?;
        }
        let mut res = Resolution {
            group: group.clone(),
            ring,
            flavor: strategy,
            builder,
            ranks: vec![1],
            diffs: Vec::new(),
            solvers: Vec::new(),
        };
        res.extend_to(cap)?;
        Ok(res)
    }

    pub fn auto_strategy(group: &FiniteGroup, ring: CoeffRing) -> Strategy {
        let p = ring.characteristic() as usize;
        if group.is_cyclic() {
            Strategy::Periodic
        } else if group.cyclic_decomposition().is_some() {
            Strategy::TensorProduct
        } else if ring.is_field() && p > 0 && group.is_p_group(p) {
            Strategy::Minimal
        } else {
            Strategy::Greedy
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn flavor(&self) -> Strategy {
        self.flavor
    }

    pub fn cap(&self) -> usize {
        self.diffs.len()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks[k]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `d_k: P_k → P_{k-1}` for `1 ≤ k ≤ cap`.
    pub fn differential(&self, k: usize) -> &GrMatrix {
        &self.diffs[k - 1]
    }

    pub fn unrolled(&self, k: usize) -> Matrix {
        self.diffs[k - 1].unroll(&self.group, self.ring)
    }

    /// Cached solver for `d_k(y) = b` on unrolled vectors.
    pub fn solver(&self, k: usize) -> Result<&Solver> {
        if k == 0 || k > self.cap() {
            return Err(Error::CapExceeded { requested: k as i64, cap: self.cap() });
        }
        if let Some(s) = self.solvers[k - 1].get() {
            return Ok(s);
        }
        let d = &self.diffs[k - 1];
        let n = self.group.order();
        let entries = d.unroll_entries(&self.group, self.ring);
        let s = Solver::from_entries(self.ring, d.cols() * n, d.rows() * n, entries)?;
        Ok(self.solvers[k - 1].get_or_init(|| s))
    }

    /// `P_k` as a lattice (a direct sum of regular lattices).
    pub fn term_lattice(&self, k: usize) -> Lattice {
        let reg = Lattice::regular(&self.group, self.ring);
        let mut acc = reg.clone();
        for _ in 1..self.ranks[k] {
            acc = acc.direct_sum(&reg).expect("same group and ring");
        }
        acc
    }

    /// Saturated basis (columns) of `ker(d_k)`, with `d_0` the augmentation.
    pub fn kernel(&self, k: usize) -> Result<Matrix> {
        if k == 0 {
            return kernel_basis(&self.augmentation_matrix());
        }
        Ok(self.solver(k)?.kernel())
    }

    fn augmentation_matrix(&self) -> Matrix {
        let n = self.group.order();
        Matrix::from_fn(self.ring, 1, n, |_, _| self.ring.one())
    }

    /// Extends the resolution up to degree `cap`.
    pub fn extend_to(&mut self, cap: usize) -> Result<()> {
        while self.cap() < cap {
            let k = self.cap() + 1;
            let d = self.next_differential(k)?;
            if k >= 2 {
                let dd = d.mul(&self.diffs[k - 2], &self.group, self.ring);
                if !dd.is_zero(self.ring) {
                    return Err(Error::InvalidLattice(format!("d∘d ≠ 0 in degree {k}")));
                }
            } else if !d.augmented(self.ring).is_zero() {
                return Err(Error::InvalidLattice("augmentation∘d₁ ≠ 0".into()));
            }
            self.ranks.push(d.rows());
            self.diffs.push(d);
            self.solvers.push(OnceLock::new());
        }
        Ok(())
    }

    fn next_differential(&self, k: usize) -> Result<GrMatrix> {
        let ring = self.ring;
        let n = self.group.order();
        match &self.builder {
            Builder::Periodic { g, m } => {
                let mut x = GrMatrix::zeros(ring, 1, 1, n);
                let e = x.entry_mut(0, 0);
                if k % 2 == 1 {
                    e[*g] = ring.one();
                    e[0] = ring.sub(&e[0], &ring.one());
                } else {
                    let mut h = 0;
                    for _ in 0..*m {
                        e[h] = ring.add(&e[h], &ring.one());
                        h = self.group.mul(h, *g);
                    }
                }
                Ok(x)
            }
            Builder::Tensor { factors } => Ok(self.tensor_differential(factors, k)),
            Builder::Bar => Ok(self.bar_differential(k)),
            Builder::Minimal => self.cover_differential(k, true),
            Builder::Greedy => self.cover_differential(k, false),
        }
    }

    fn tensor_differential(&self, factors: &[(usize, usize)], k: usize) -> GrMatrix {
        let ring = self.ring;
        let g = &self.group;
        let n = g.order();
        let src = multi_indices(factors.len(), k);
        let tgt = multi_indices(factors.len(), k - 1);
        let mut x = GrMatrix::zeros(ring, src.len(), tgt.len(), n);
        for (row, idx) in src.iter().enumerate() {
            let mut sign_parity = 0usize;
            for (f, &(gen, ord)) in factors.iter().enumerate() {
                let kf = idx[f];
                if kf > 0 {
                    let mut t = idx.clone();
                    t[f] -= 1;
                    let col = tgt.iter().position(|u| *u == t).expect("target multi-index");
                    let sign = if sign_parity % 2 == 0 { ring.one() } else { ring.neg(&ring.one()) };
                    let e = x.entry_mut(row, col);
                    if kf % 2 == 1 {
                        e[gen] = ring.add(&e[gen], &sign);
                        e[0] = ring.sub(&e[0], &sign);
                    } else {
                        let mut h = 0;
                        for _ in 0..ord {
                            e[h] = ring.add(&e[h], &sign);
                            h = g.mul(h, gen);
                        }
                    }
                }
                sign_parity += kf;
            }
        }
        x
    }

    fn bar_differential(&self, k: usize) -> GrMatrix {
        let ring = self.ring;
        let g = &self.group;
        let n = g.order();
        let src = bar_cells(n, k);
        let tgt = bar_cells(n, k - 1);
        let pos = |cell: &[usize]| -> Option<usize> {
            if cell.contains(&0) {
                return None;
            }
            Some(cell.iter().fold(0usize, |acc, &x| acc * (n - 1) + (x - 1)))
        };
        debug_assert_eq!(tgt.len(), (n - 1).pow((k - 1) as u32));
        let mut x = GrMatrix::zeros(ring, src.len(), tgt.len(), n);
        for (row, cell) in src.iter().enumerate() {
            // g1 [g2 | … | gk]
            if let Some(col) = pos(&cell[1..]) {
                let e = x.entry_mut(row, col);
                e[cell[0]] = ring.add(&e[cell[0]], &ring.one());
            }
            for i in 0..k - 1 {
                let mut c: Vec<usize> = cell[..i].to_vec();
                c.push(g.mul(cell[i], cell[i + 1]));
                c.extend_from_slice(&cell[i + 2..]);
                if let Some(col) = pos(&c) {
                    let s = if (i + 1) % 2 == 0 { ring.one() } else { ring.neg(&ring.one()) };
                    let e = x.entry_mut(row, col);
                    e[0] = ring.add(&e[0], &s);
                }
            }
            if let Some(col) = pos(&cell[..k - 1]) {
                let s = if k % 2 == 0 { ring.one() } else { ring.neg(&ring.one()) };
                let e = x.entry_mut(row, col);
                e[0] = ring.add(&e[0], &s);
            }
        }
        x
    }

    /// Covers `ker(d_{k-1})` by free generators. With `minimal`, generators
    /// are chosen modulo `I·K` (I the augmentation ideal), which gives a
    /// minimal resolution for p-groups in characteristic p.
    fn cover_differential(&self, k: usize, minimal: bool) -> Result<GrMatrix> {
        let ring = self.ring;
        let g = &self.group;
        let n = g.order();
        let kernel = self.kernel(k - 1)?;
        let dim = kernel.rows();
        let basis: Vec<Vec<Elem>> = (0..kernel.cols()).map(|j| kernel.col(j)).collect();
        let mut span = EchelonSpan::new(ring, dim);
        if minimal {
            let gens = g.generating_set();
            for v in &basis {
                for &s in &gens {
                    let sv = left_mult(v, s, g, ring);
                    let diff: Vec<Elem> = sv.iter().zip(v).map(|(a, b)| ring.sub(a, b)).collect();
                    span.insert(diff);
                }
            }
        }
        let mut chosen = Vec::new();
        for v in basis {
            if span.contains(&v) {
                continue;
            }
            if minimal {
                span.insert(v.clone());
            } else {
                for h in 0..n {
                    span.insert(left_mult(&v, h, g, ring));
                }
            }
            chosen.push(v);
        }
        let cols = self.ranks[k - 1];
        Ok(GrMatrix::from_rows(cols, n, &chosen))
    }

    /// Certifies exactness in degrees `0..cap` by rank bookkeeping, and that
    /// every image is saturated (unit elementary divisors) over a PID.
    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        for k in 1..=self.cap() {
            let solver = self.solver(k)?;
            let expected = if k == 1 {
                n - 1
            } else {
                self.ranks[k - 1] * n - self.solver(k - 1)?.rank()
            };
            if solver.rank() != expected {
                return Err(Error::InvalidLattice(format!(
                    "resolution not exact at degree {}: rank {} but kernel rank {expected}",
                    k - 1,
                    solver.rank()
                )));
            }
            if solver.elementary_divisors().iter().any(|d| !self.ring.is_unit(d)) {
                return Err(Error::InvalidLattice(format!("image of d_{k} is not saturated")));
            }
        }
        Ok(())
    }

    /// Same differentials with coefficients mapped into `target` (for
    /// example reduction mod p of an integral resolution).
    pub fn change_ring(&self, target: CoeffRing) -> Result<Self> {
        let diffs = self
            .diffs
            .iter()
            .map(|d| d.change_ring(self.ring, target))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::UnsupportedRing(format!("no map {} -> {}", self.ring, target)))?;
        Ok(Resolution {
            group: self.group.clone(),
            ring: target,
            flavor: self.flavor,
            builder: self.builder.clone(),
            ranks: self.ranks.clone(),
            solvers: (0..diffs.len()).map(|_| OnceLock::new()).collect(),
            diffs,
        })
    }
}

/// Multi-indices of length `r` summing to `k`, in decreasing lexicographic order.
fn multi_indices(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(r - 1, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, k, &mut Vec::new(), &mut out);
    out
}

/// Normalized bar cells `[g1|…|gk]` with `gi ≠ 1`, lexicographic.
fn bar_cells(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * (n - 1));
        for c in &out {
            for x in 1..n {
                let mut d = c.clone();
                d.push(x);
                next.push(d);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::builtin(name).unwrap())
    }

    #[test]
    fn periodic_c2() {
        let z = CoeffRing::Integers;
        let r = Resolution::build(&g("C2"), z, 6, Strategy::Periodic).unwrap();
        assert_eq!(r.ranks(), &[1; 7]);
        let one = z.one();
        let m1 = z.neg(&one);
        assert_eq!(r.differential(1).entry(0, 0), &[m1, one]);
        assert_eq!(r.differential(2).entry(0, 0), &[one, one]);
    }

    #[test]
    fn minimal_v4_ranks() {
        let r = Resolution::build(&g("V4"), CoeffRing::PrimeField(2), 6, Strategy::Minimal).unwrap();
        assert_eq!(r.ranks(), &[1, 2, 3, 4, 5, 6, 7]);
        let t = Resolution::build(&g("V4"), CoeffRing::PrimeField(2), 6, Strategy::TensorProduct).unwrap();
        assert_eq!(t.ranks(), r.ranks());
    }

    #[test]
    fn bar_s3_ranks() {
        let r = Resolution::build(&g("S3"), CoeffRing::Integers, 3, Strategy::Bar).unwrap();
        assert_eq!(r.ranks(), &[1, 5, 25, 125]);
    }

    #[test]
    fn strategy_errors() {
        let z = CoeffRing::Integers;
        assert!(matches!(Resolution::build(&g("V4"), z, 3, Strategy::Periodic), Err(Error::StrategyUnavailable(_))));
        assert!(matches!(Resolution::build(&g("C2"), z, 3, Strategy::Minimal), Err(Error::StrategyUnavailable(_))));
        assert!(matches!(Resolution::build(&g("S3"), z, 3, Strategy::TensorProduct), Err(Error::StrategyUnavailable(_))));
    }

    #[test]
    fn greedy_and_minimal_are_exact() {
        for (name, ring) in [
            ("S3", CoeffRing::Integers),
            ("S3", CoeffRing::PrimeField(2)),
            ("S3", CoeffRing::PrimeField(3)),
            ("Q8", CoeffRing::PrimeField(2)),
            ("D4", CoeffRing::PrimeField(2)),
            ("D4", CoeffRing::Integers),
        ] {
            let r = Resolution::build(&g(name), ring, 5, Strategy::Auto).unwrap();
            assert_eq!(r.cap(), 5, "{name} over {ring}");
        }
        let d4 = Resolution::build(&g("D4"), CoeffRing::PrimeField(2), 6, Strategy::Minimal).unwrap();
        assert_eq!(d4.ranks(), &[1, 2, 3, 4, 5, 6, 7]);
    }
}
