//! Cohomology and Tate cohomology groups from (complete) resolutions.

use crate::error::{Error, Result};
use crate::exactalg::{AbelianGroup, CoeffRing, Elem, Matrix, QuotientModule, Solver};
use crate::homalg::grmatrix::GrMatrix;
use crate::homalg::resolution::Resolution;
use crate::lattices::Lattice;

/// Matrix of `Hom(X, M): M^{cols} → M^{rows}` for a map `X: F_rows → F_cols`
/// of free modules, on `Hom_{R[G]}(F, M) ≅ M^{rank F}`.
pub fn coboundary_matrix(x: &GrMatrix, m: &Lattice) -> Matrix {
    let ring = m.ring();
    let rm = m.rank();
    let mut out = Matrix::zeros(ring, x.rows() * rm, x.cols() * rm);
    for j in 0..x.rows() {
        for i in 0..x.cols() {
            for (h, c) in x.entry(j, i).iter().enumerate() {
                if ring.is_zero(c) {
                    continue;
                }
                let a = m.action(h);
                for r in 0..rm {
                    for s in 0..rm {
                        let v = a.get(r, s);
                        if !ring.is_zero(v) {
                            out.add_at(j * rm + r, i * rm + s, &ring.mul(c, v));
                        }
                    }
                }
            }
        }
    }
    out
}

fn check_coefficients(res: &Resolution, m: &Lattice) -> Result<()> {
    if m.ring() != res.ring() {
        return Err(Error::RingMismatch);
    }
    if m.group() != res.group() {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// One cohomology group, with enough data to name classes by coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: i64,
    ring: CoeffRing,
    cochain_dim: usize,
    outgoing: Matrix,
    /// Columns form a basis of the cocycles.
    cocycles: Matrix,
    cocycle_solver: Option<Solver>,
    quotient: QuotientModule,
}

impl CohomologyGroup {
    /// `ker(outgoing) / im(incoming)` on cochains of dimension `dim`.
    pub fn from_coboundaries(
        degree: i64,
        ring: CoeffRing,
        dim: usize,
        incoming: Option<&Matrix>,
        outgoing: &Matrix,
    ) -> Result<Self> {
        if outgoing.cols() != dim || incoming.is_some_and(|a| a.rows() != dim) {
            return Err(Error::DimensionMismatch("cochain complex".into()));
        }
        let cocycles = if outgoing.rows() == 0 || dim == 0 {
            Matrix::identity(ring, dim)
        } else {
            Solver::new(outgoing)?.kernel()
        };
        let zdim = cocycles.cols();
        let cocycle_solver = if zdim == 0 { None } else { Some(Solver::new(&cocycles)?) };
        let relations = match (incoming, &cocycle_solver) {
            (Some(a), Some(s)) if a.cols() > 0 => {
                let mut cols = Vec::with_capacity(a.cols());
                for j in 0..a.cols() {
                    let c = s
                        .solve(&a.col(j))?
                        .ok_or_else(|| Error::InvalidLattice("coboundary is not a cocycle".into()))?;
                    cols.push(c);
                }
                Matrix::from_columns(ring, zdim, &cols)
            }
            _ => Matrix::zeros(ring, zdim, 0),
        };
        let quotient = QuotientModule::new(ring, zdim, &relations)?;
        Ok(CohomologyGroup { degree, ring, cochain_dim: dim, outgoing: outgoing.clone(), cocycles, cocycle_solver, quotient })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.quotient.group
    }

    pub fn cochain_dim(&self) -> usize {
        self.cochain_dim
    }

    pub fn num_generators(&self) -> usize {
        self.quotient.num_components()
    }

    /// Order of each generator (zero for free ones).
    pub fn moduli(&self) -> &[Elem] {
        self.quotient.moduli()
    }

    pub fn is_cocycle(&self, v: &[Elem]) -> bool {
        v.len() == self.cochain_dim && (self.outgoing.rows() == 0 || self.outgoing.apply(v).iter().all(|x| self.ring.is_zero(x)))
    }

    /// Coordinates of the class of a cocycle.
    pub fn coords(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cochain_dim {
            return Err(Error::DimensionMismatch(format!("cochain of length {}, expected {}", v.len(), self.cochain_dim)));
        }
        let Some(s) = &self.cocycle_solver else {
            return if v.iter().all(|x| self.ring.is_zero(x)) { Ok(Vec::new()) } else { Err(Error::NotACocycle(self.degree)) };
        };
        let z = s.solve(v)?.ok_or(Error::NotACocycle(self.degree))?;
        Ok(self.quotient.reduce(&z))
    }

    pub fn is_coboundary(&self, v: &[Elem]) -> Result<bool> {
        Ok(self.coords(v)?.iter().all(|x| self.ring.is_zero(x)))
    }

    /// Cocycle representing the class with the given coordinates.
    pub fn cocycle(&self, coords: &[Elem]) -> Vec<Elem> {
        if self.cocycles.cols() == 0 {
            return vec![self.ring.zero(); self.cochain_dim];
        }
        self.cocycles.apply(&self.quotient.lift(coords))
    }

    /// Cocycle representing the `k`-th generator.
    pub fn generator(&self, k: usize) -> Vec<Elem> {
        self.cocycles.apply(&self.quotient.generator(k))
    }
}

/// `H^n(G; M)` computed from `Hom_{R[G]}(P_•, M)`.
pub fn cohomology(res: &Resolution, m: &Lattice, n: usize) -> Result<CohomologyGroup> {
    check_coefficients(res, m)?;
    if n + 1 > res.cap() {
        return Err(Error::CapExceeded { requested: n as i64, cap: res.cap() });
    }
    let out = coboundary_matrix(res.differential(n + 1), m);
    let inc = (n >= 1).then(|| coboundary_matrix(res.differential(n), m));
    CohomologyGroup::from_coboundaries(n as i64, m.ring(), res.rank(n) * m.rank(), inc.as_ref(), &out)
}

/// Complete resolution obtained by splicing a resolution with its dual
/// along the norm map: `C_n = P_n` for `n ≥ 0` and `C_{-k} = P_{k-1}^*`.
#[derive(Clone, Debug)]
pub struct CompleteResolution {
    res: Resolution,
    negative: usize,
}

impl CompleteResolution {
    pub const DEFAULT_NEGATIVE: usize = 4;

    /// Tate degrees `-negative ..= cap - 1` become available.
    pub fn new(res: &Resolution, negative: usize) -> Result<Self> {
        let mut res = res.clone();
        if res.cap() < negative {
            res.extend_to(negative)?;
            res.validate()?;
        }
        let cr = CompleteResolution { res, negative: negative.max(1) };
        cr.validate()?;
        Ok(cr)
    }

    pub fn resolution(&self) -> &Resolution {
        &self.res
    }

    /// Inclusive range of Tate degrees that can be computed.
    pub fn range(&self) -> (i64, i64) {
        (-(self.negative as i64), self.res.cap() as i64 - 1)
    }

    pub fn rank(&self, n: i64) -> usize {
        if n >= 0 {
            self.res.rank(n as usize)
        } else {
            self.res.rank((-n - 1) as usize)
        }
    }

    /// `∂_n: C_n → C_{n-1}` for `-negative ≤ n ≤ cap`.
    pub fn differential(&self, n: i64) -> Result<GrMatrix> {
        let (lo, _) = self.range();
        let g = self.res.group();
        let ring = self.res.ring();
        if n < lo || n > self.res.cap() as i64 {
            return Err(Error::RangeExceeded(n));
        }
        Ok(match n {
            n if n >= 1 => self.res.differential(n as usize).clone(),
            0 => {
                let mut x = GrMatrix::zeros(ring, 1, 1, g.order());
                x.entry_mut(0, 0).iter_mut().for_each(|e| *e = ring.one());
                x
            }
            n => self.res.differential((-n) as usize).dual(g, ring),
        })
    }

    fn validate(&self) -> Result<()> {
        let (lo, _) = self.range();
        let g = self.res.group();
        let ring = self.res.ring();
        for n in lo + 1..=self.res.cap() as i64 {
            let dd = self.differential(n)?.mul(&self.differential(n - 1)?, g, ring);
            if !dd.is_zero(ring) {
                return Err(Error::InvalidLattice(format!("complete resolution: ∂∘∂ ≠ 0 at degree {n}")));
            }
        }
        Ok(())
    }

    /// Whether the splice map `C_0 → C_{-1}` is multiplication by `Σ_g g`.
    pub fn splice_is_norm(&self) -> bool {
        let g = self.res.group();
        let ring = self.res.ring();
        let norm = Lattice::regular(g, ring).norm_matrix();
        self.differential(0).map(|d| d.unroll(g, ring) == norm).unwrap_or(false)
    }
}

/// `Ĥ^n(G; M)` from a complete resolution.
pub fn tate_cohomology(cr: &CompleteResolution, m: &Lattice, n: i64) -> Result<CohomologyGroup> {
    check_coefficients(&cr.res, m)?;
    let (lo, hi) = cr.range();
    if n < lo || n > hi {
        return Err(Error::RangeExceeded(n));
    }
    let out = coboundary_matrix(&cr.differential(n + 1)?, m);
    let inc = coboundary_matrix(&cr.differential(n)?, m);
    CohomologyGroup::from_coboundaries(n, m.ring(), cr.rank(n) * m.rank(), Some(&inc), &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::homalg::Strategy;
    use std::sync::Arc;

    fn g(name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::builtin(name).unwrap())
    }

    fn invariants(h: &CohomologyGroup) -> (usize, Vec<i128>) {
        (h.group().free_rank, h.group().torsion.iter().map(|e| e.numerator()).collect())
    }

    #[test]
    fn c2_integral() {
        let z = CoeffRing::Integers;
        let c2 = g("C2");
        let res = Resolution::build(&c2, z, 6, Strategy::Periodic).unwrap();
        let triv = Lattice::trivial(&c2, z);
        assert_eq!(invariants(&cohomology(&res, &triv, 0).unwrap()), (1, vec![]));
        assert_eq!(invariants(&cohomology(&res, &triv, 1).unwrap()), (0, vec![]));
        assert_eq!(invariants(&cohomology(&res, &triv, 2).unwrap()), (0, vec![2]));
        assert!(matches!(cohomology(&res, &triv, 6), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn tate_small_cases() {
        let z = CoeffRing::Integers;
        let c2 = g("C2");
        let res = Resolution::build(&c2, z, 4, Strategy::Auto).unwrap();
        let cr = CompleteResolution::new(&res, 4).unwrap();
        assert!(cr.splice_is_norm());
        let triv = Lattice::trivial(&c2, z);
        for n in -4..=3 {
            let h = tate_cohomology(&cr, &triv, n).unwrap();
            let expected = if n % 2 == 0 { vec![2] } else { vec![] };
            assert_eq!(invariants(&h), (0, expected), "degree {n}");
        }
        assert!(matches!(tate_cohomology(&cr, &triv, 4), Err(Error::RangeExceeded(4))));
        assert!(matches!(tate_cohomology(&cr, &triv, -5), Err(Error::RangeExceeded(-5))));

        let c3 = g("C3");
        let res = Resolution::build(&c3, z, 3, Strategy::Auto).unwrap();
        let cr = CompleteResolution::new(&res, 4).unwrap();
        let triv = Lattice::trivial(&c3, z);
        assert!(tate_cohomology(&cr, &triv, -1).unwrap().group().is_zero());
        assert_eq!(invariants(&tate_cohomology(&cr, &triv, -2).unwrap()), (0, vec![3]));
    }

    #[test]
    fn strategies_agree() {
        for (name, ring) in [
            ("C2", CoeffRing::Integers),
            ("C3", CoeffRing::Integers),
            ("C4", CoeffRing::Integers),
            ("V4", CoeffRing::Integers),
            ("V4", CoeffRing::PrimeField(2)),
        ] {
            let grp = g(name);
            let triv = Lattice::trivial(&grp, ring);
            let mut strategies = vec![Strategy::Bar, Strategy::Greedy, Strategy::TensorProduct];
            if grp.is_cyclic() {
                strategies.push(Strategy::Periodic);
            }
            if ring.is_field() {
                strategies.push(Strategy::Minimal);
            }
            let cap = 6;
            let reference: Vec<_> = {
                let res = Resolution::build(&grp, ring, cap, Strategy::TensorProduct).unwrap();
                (0..cap).map(|n| cohomology(&res, &triv, n).unwrap().group().clone()).collect()
            };
            for s in strategies {
                let res = Resolution::build(&grp, ring, cap, s).unwrap();
                for n in 0..cap {
                    assert_eq!(cohomology(&res, &triv, n).unwrap().group(), &reference[n], "{name} {s} degree {n}");
                }
            }
        }
    }

    #[test]
    fn module_coefficients() {
        // H^1(C2; Z_sign) = Z/2 and H^0(C2; Z_sign) = 0.
        let z = CoeffRing::Integers;
        let c2 = g("C2");
        let res = Resolution::build(&c2, z, 4, Strategy::Auto).unwrap();
        let sign = Lattice::sign(&c2.subgroup(vec![0]).unwrap(), z).unwrap();
        assert!(cohomology(&res, &sign, 0).unwrap().group().is_zero());
        assert_eq!(invariants(&cohomology(&res, &sign, 1).unwrap()), (0, vec![2]));
        // Free modules are acyclic in positive degrees.
        let reg = Lattice::regular(&c2, z);
        for n in 1..4 {
            assert!(cohomology(&res, &reg, n).unwrap().group().is_zero());
        }
    }
}
