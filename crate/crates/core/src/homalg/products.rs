//! Cohomology classes with chain-level lifts, composition products and
//! comparison maps between resolutions of different groups.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::exactalg::{CoeffRing, Elem};
use crate::groups::Subgroup;
use crate::homalg::cohomology::{coboundary_matrix, cohomology};
use crate::homalg::grmatrix::{evaluate_trivial, left_mult, GrMatrix};
use crate::homalg::resolution::Resolution;
use crate::lattices::Lattice;

/// Class in `H^n(G; R)` represented by a cocycle `P_n → R` (value on each
/// free generator), with lazily computed lifts `F_k: P_{n+k} → P_k`.
pub struct CohomologyClass {
    res: Arc<Resolution>,
    degree: usize,
    cocycle: Vec<Elem>,
    lifts: Mutex<Vec<Arc<GrMatrix>>>,
}

impl Clone for CohomologyClass {
    fn clone(&self) -> Self {
        CohomologyClass {
            res: self.res.clone(),
            degree: self.degree,
            cocycle: self.cocycle.clone(),
            lifts: Mutex::new(self.lifts.lock().expect("lift cache").clone()),
        }
    }
}

impl fmt::Debug for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.res.ring();
        let c: Vec<String> = self.cocycle.iter().map(|x| ring.format(x)).collect();
        write!(f, "CohomologyClass(deg {}, [{}])", self.degree, c.join(", "))
    }
}

impl CohomologyClass {
    pub fn new(res: &Arc<Resolution>, degree: usize, cocycle: Vec<Elem>) -> Result<Self> {
        if degree > res.cap() {
            return Err(Error::CapExceeded { requested: degree as i64, cap: res.cap() });
        }
        if cocycle.len() != res.rank(degree) {
            return Err(Error::DimensionMismatch(format!(
                "cocycle of length {}, expected {}",
                cocycle.len(),
                res.rank(degree)
            )));
        }
        if degree < res.cap() {
            let d = res.differential(degree + 1).augmented(res.ring());
            if d.apply(&cocycle).iter().any(|x| !res.ring().is_zero(x)) {
                return Err(Error::NotACocycle(degree as i64));
            }
        }
        Ok(CohomologyClass { res: res.clone(), degree, cocycle, lifts: Mutex::new(Vec::new()) })
    }

    pub fn one(res: &Arc<Resolution>) -> Self {
        Self::new(res, 0, vec![res.ring().one()]).expect("unit class")
    }

    pub fn zero(res: &Arc<Resolution>, degree: usize) -> Result<Self> {
        Self::new(res, degree, vec![res.ring().zero(); res.rank(degree)])
    }

    pub fn resolution(&self) -> &Arc<Resolution> {
        &self.res
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cocycle(&self) -> &[Elem] {
        &self.cocycle
    }

    pub fn ring(&self) -> CoeffRing {
        self.res.ring()
    }

    pub fn is_zero_cochain(&self) -> bool {
        self.cocycle.iter().all(|x| self.ring().is_zero(x))
    }

    /// Whether the class vanishes in cohomology.
    pub fn is_coboundary(&self) -> Result<bool> {
        let h = cohomology(&self.res, &Lattice::trivial(self.res.group(), self.ring()), self.degree)?;
        h.is_coboundary(&self.cocycle)
    }

    /// Number of lift components that can exist with the resolution's cap.
    pub fn max_lift_depth(&self) -> usize {
        self.res.cap() - self.degree
    }

    /// `F_k: P_{n+k} → P_k`, computing lower components as needed.
    pub fn lift(&self, k: usize) -> Result<Arc<GrMatrix>> {
        if k > self.max_lift_depth() {
            return Err(Error::LiftFailed(k));
        }
        let mut lifts = self.lifts.lock().expect("lift cache");
        while lifts.len() <= k {
            let next = self.next_lift(&lifts)?;
            lifts.push(Arc::new(next));
        }
        Ok(lifts[k].clone())
    }

    /// Populates the lift up to the given depth (the whole cap if `None`).
    pub fn lift_to_chain_map(&self, depth: Option<usize>) -> Result<()> {
        let d = depth.unwrap_or(self.max_lift_depth());
        self.lift(d).map(|_| ())
    }

    fn next_lift(&self, done: &[Arc<GrMatrix>]) -> Result<GrMatrix> {
        let res = &self.res;
        let ring = res.ring();
        let g = res.group();
        let n = g.order();
        let k = done.len();
        let src = self.degree + k;
        if k == 0 {
            let mut f = GrMatrix::zeros(ring, res.rank(src), 1, n);
            for (j, c) in self.cocycle.iter().enumerate() {
                f.entry_mut(j, 0)[0] = *c;
            }
            return Ok(f);
        }
        let target = res.differential(src).mul(&done[k - 1], g, ring);
        let solver = res.solver(k)?;
        let rows: Vec<Vec<Elem>> = (0..res.rank(src))
            .map(|j| solver.solve(target.row(j))?.ok_or(Error::LiftFailed(k)))
            .collect::<Result<_>>()?;
        Ok(GrMatrix::from_rows(res.rank(k), n, &rows))
    }

    pub fn add(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        self.same_home(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch("adding classes of different degrees".into()));
        }
        let ring = self.ring();
        let c = self.cocycle.iter().zip(&other.cocycle).map(|(a, b)| ring.add(a, b)).collect();
        CohomologyClass::new(&self.res, self.degree, c)
    }

    pub fn scale(&self, s: &Elem) -> CohomologyClass {
        let ring = self.ring();
        let c = self.cocycle.iter().map(|a| ring.mul(a, s)).collect();
        CohomologyClass::new(&self.res, self.degree, c).expect("multiple of a cocycle")
    }

    fn same_home(&self, other: &CohomologyClass) -> Result<()> {
        if Arc::ptr_eq(&self.res, &other.res) {
            Ok(())
        } else {
            Err(Error::ResolutionMismatch)
        }
    }
}

/// Composition product `a·b = a ∘ F^b_{|a|}`, of degree `|a| + |b|`.
pub fn cup_product(a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass> {
    a.same_home(b)?;
    let res = &a.res;
    let deg = a.degree + b.degree;
    if deg > res.cap() {
        return Err(Error::CapExceeded { requested: deg as i64, cap: res.cap() });
    }
    let f = b.lift(a.degree)?;
    let n = res.group().order();
    let ring = res.ring();
    let c = (0..f.rows()).map(|j| evaluate_trivial(f.row(j), &a.cocycle, n, ring)).collect();
    CohomologyClass::new(res, deg, c)
}

/// Composes a cocycle with values in `M` (in `Hom(P_d, M) ≅ M^{r_d}`) with the
/// lift of `x`, giving a cocycle in degree `d + |x|` representing `x·ψ`.
pub fn act_on_module_cocycle(x: &CohomologyClass, psi: &[Elem], d: usize, m: &Lattice) -> Result<Vec<Elem>> {
    let f = x.lift(d)?;
    if psi.len() != f.cols() * m.rank() {
        return Err(Error::DimensionMismatch("module cocycle length".into()));
    }
    Ok(coboundary_matrix(&f, m).apply(psi))
}

/// Chain map `P^H_• → P^G_•` over a homomorphism `φ: H → G`, lifting the
/// identity of `R`.
#[derive(Clone, Debug)]
pub struct ComparisonMap {
    source: Arc<Resolution>,
    target: Arc<Resolution>,
    phi: Vec<usize>,
    /// `maps[k]` sends `e_j ∈ P^H_k` to an unrolled vector of `P^G_k`.
    maps: Vec<Vec<Vec<Elem>>>,
}

impl ComparisonMap {
    pub fn new(source: &Arc<Resolution>, target: &Arc<Resolution>, phi: Vec<usize>, depth: usize) -> Result<Self> {
        let (h, g) = (source.group(), target.group());
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch);
        }
        if phi.len() != h.order() || phi.iter().any(|&x| x >= g.order()) {
            return Err(Error::InvalidSubgroup("homomorphism has the wrong shape".into()));
        }
        for a in 0..h.order() {
            for b in 0..h.order() {
                if phi[h.mul(a, b)] != g.mul(phi[a], phi[b]) {
                    return Err(Error::InvalidSubgroup("map is not a homomorphism".into()));
                }
            }
        }
        if depth > source.cap().min(target.cap()) {
            return Err(Error::CapExceeded { requested: depth as i64, cap: source.cap().min(target.cap()) });
        }
        let ring = source.ring();
        let ng = g.order();
        let mut e0 = vec![ring.zero(); ng];
        e0[0] = ring.one();
        let mut maps = vec![vec![e0]];
        for k in 1..=depth {
            let dh = source.differential(k);
            let solver = target.solver(k)?;
            let prev = &maps[k - 1];
            let mut cur = Vec::with_capacity(dh.rows());
            for j in 0..dh.rows() {
                let mut b = vec![ring.zero(); target.rank(k - 1) * ng];
                for (i, pv) in prev.iter().enumerate() {
                    for (hh, c) in dh.entry(j, i).iter().enumerate() {
                        if ring.is_zero(c) {
                            continue;
                        }
                        let moved = left_mult(pv, phi[hh], g, ring);
                        for (bt, mt) in b.iter_mut().zip(&moved) {
                            if !ring.is_zero(mt) {
                                *bt = ring.add(bt, &ring.mul(c, mt));
                            }
                        }
                    }
                }
                cur.push(solver.solve(&b)?.ok_or(Error::LiftFailed(k))?);
            }
            maps.push(cur);
        }
        Ok(ComparisonMap { source: source.clone(), target: target.clone(), phi, maps })
    }

    /// Comparison map for the inclusion of a subgroup.
    pub fn for_subgroup(sub: &Subgroup, source: &Arc<Resolution>, target: &Arc<Resolution>, depth: usize) -> Result<Self> {
        if source.group().as_ref() != sub.group().as_ref() || target.group().as_ref() != sub.parent().as_ref() {
            return Err(Error::NotASubgroup("resolutions do not match the subgroup".into()));
        }
        let phi = (0..sub.order()).map(|x| sub.inclusion(x)).collect();
        Self::new(source, target, phi, depth)
    }

    pub fn depth(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn homomorphism(&self) -> &[usize] {
        &self.phi
    }

    /// Pullback of a degree-`n` cocycle on `P^G_n` to one on `P^H_n`.
    pub fn pull_back_cocycle(&self, n: usize, a: &[Elem]) -> Result<Vec<Elem>> {
        if n > self.depth() {
            return Err(Error::CapExceeded { requested: n as i64, cap: self.depth() });
        }
        let ring = self.target.ring();
        let ng = self.target.group().order();
        Ok(self.maps[n].iter().map(|v| evaluate_trivial(v, a, ng, ring)).collect())
    }

    /// Image of a class under the induced map `H*(G) → H*(H)`.
    pub fn pull_back(&self, class: &CohomologyClass) -> Result<CohomologyClass> {
        if !Arc::ptr_eq(class.resolution(), &self.target) {
            return Err(Error::ResolutionMismatch);
        }
        let c = self.pull_back_cocycle(class.degree(), class.cocycle())?;
        CohomologyClass::new(&self.source, class.degree(), c)
    }
}

/// Restriction of a class along a subgroup inclusion.
pub fn restriction_map(
    sub: &Subgroup,
    sub_res: &Arc<Resolution>,
    class: &CohomologyClass,
) -> Result<CohomologyClass> {
    let cmp = ComparisonMap::for_subgroup(sub, sub_res, class.resolution(), class.degree())?;
    cmp.pull_back(class)
}

/// Value of a degree-one class on a group element (a homomorphism `G → R`).
pub fn degree_one_value(class: &CohomologyClass, g: usize) -> Result<Elem> {
    if class.degree() != 1 {
        return Err(Error::DimensionMismatch("expected a degree-one class".into()));
    }
    let res = class.resolution();
    let ring = res.ring();
    let n = res.group().order();
    let mut b = vec![ring.zero(); n];
    b[g] = ring.add(&b[g], &ring.one());
    b[0] = ring.sub(&b[0], &ring.one());
    let y = res.solver(1)?.solve(&b)?.ok_or(Error::LiftFailed(1))?;
    Ok(evaluate_trivial(&y, class.cocycle(), n, ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::homalg::Strategy;

    fn build(name: &str, ring: CoeffRing, cap: usize, s: Strategy) -> Arc<Resolution> {
        let g = Arc::new(FiniteGroup::builtin(name).unwrap());
        Arc::new(Resolution::build(&g, ring, cap, s).unwrap())
    }

    fn generator(res: &Arc<Resolution>, n: usize, k: usize) -> CohomologyClass {
        let h = cohomology(res, &Lattice::trivial(res.group(), res.ring()), n).unwrap();
        CohomologyClass::new(res, n, h.generator(k)).unwrap()
    }

    fn coords(c: &CohomologyClass) -> Vec<Elem> {
        let res = c.resolution();
        cohomology(res, &Lattice::trivial(res.group(), res.ring()), c.degree()).unwrap().coords(c.cocycle()).unwrap()
    }

    #[test]
    fn c2_shift_and_square() {
        let z = CoeffRing::Integers;
        let res = build("C2", z, 8, Strategy::Periodic);
        let u = generator(&res, 2, 0);
        for k in 0..=4 {
            let f = u.lift(k).unwrap();
            let id = GrMatrix::identity(z, 1, 2);
            // Up to the sign of the chosen generator.
            let neg = GrMatrix::from_rows(1, 2, &[vec![z.neg(&z.one()), z.zero()]]);
            assert!(*f == id || *f == neg, "lift component {k}");
        }
        let u2 = cup_product(&u, &u).unwrap();
        assert_eq!(u2.degree(), 4);
        assert!(!u2.is_coboundary().unwrap());
        assert_eq!(cohomology(&res, &Lattice::trivial(res.group(), z), 4).unwrap().group().torsion, vec![z.from_int(2)]);
        let one = CohomologyClass::one(&res);
        assert_eq!(cup_product(&one, &u).unwrap().cocycle(), u.cocycle());
        assert_eq!(cup_product(&u, &one).unwrap().cocycle(), u.cocycle());
        let zero = CohomologyClass::zero(&res, 2).unwrap();
        assert!(zero.lift(3).unwrap().is_zero(z));
    }

    #[test]
    fn graded_commutativity() {
        for (name, p) in [("V4", 2u64), ("E9", 3)] {
            let f = CoeffRing::PrimeField(p);
            let res = build(name, f, 5, Strategy::Auto);
            let h1 = cohomology(&res, &Lattice::trivial(res.group(), f), 1).unwrap();
            let h2 = cohomology(&res, &Lattice::trivial(res.group(), f), 2).unwrap();
            let gens: Vec<_> = (0..h1.num_generators())
                .map(|k| (1, CohomologyClass::new(&res, 1, h1.generator(k)).unwrap()))
                .chain((0..h2.num_generators()).map(|k| (2, CohomologyClass::new(&res, 2, h2.generator(k)).unwrap())))
                .collect();
            for (da, a) in &gens {
                for (db, b) in &gens {
                    let ab = cup_product(a, b).unwrap();
                    let ba = cup_product(b, a).unwrap();
                    let sign = if (da * db) % 2 == 1 { f.neg(&f.one()) } else { f.one() };
                    let diff = ab.add(&ba.scale(&f.neg(&sign))).unwrap();
                    assert!(diff.is_coboundary().unwrap(), "{name}: degrees {da}, {db}");
                }
            }
            // Associativity on triples of degree-one generators.
            let ones: Vec<_> = gens.iter().filter(|(d, _)| *d == 1).map(|(_, c)| c).collect();
            for a in &ones {
                for b in &ones {
                    for c in &ones {
                        let l = cup_product(&cup_product(a, b).unwrap(), c).unwrap();
                        let r = cup_product(a, &cup_product(b, c).unwrap()).unwrap();
                        let diff = l.add(&r.scale(&f.neg(&f.one()))).unwrap();
                        assert!(diff.is_coboundary().unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn products_independent_of_strategy() {
        // Over F_2 the squares of degree-one classes of V4 are nonzero,
        // whichever resolution computes them.
        let f = CoeffRing::PrimeField(2);
        for s in [Strategy::Minimal, Strategy::TensorProduct, Strategy::Bar] {
            let res = build("V4", f, 3, s);
            let h1 = cohomology(&res, &Lattice::trivial(res.group(), f), 1).unwrap();
            assert_eq!(h1.num_generators(), 2);
            for k in 0..2 {
                let x = CohomologyClass::new(&res, 1, h1.generator(k)).unwrap();
                assert!(!cup_product(&x, &x).unwrap().is_coboundary().unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn restriction_s3_to_c3() {
        let z = CoeffRing::Integers;
        let s3 = Arc::new(FiniteGroup::builtin("S3").unwrap());
        let res = Arc::new(Resolution::build(&s3, z, 5, Strategy::Auto).unwrap());
        let h4 = cohomology(&res, &Lattice::trivial(&s3, z), 4).unwrap();
        assert_eq!(h4.group().torsion, vec![z.from_int(6)]);
        let r3 = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let c3 = s3.subgroup(s3.generated(&[r3])).unwrap();
        let sub_res = Arc::new(Resolution::build(c3.group(), z, 5, Strategy::Auto).unwrap());
        let x = CohomologyClass::new(&res, 4, h4.generator(0)).unwrap();
        let r = restriction_map(&c3, &sub_res, &x).unwrap();
        assert!(!r.is_coboundary().unwrap());
        // The restriction of 2x is still nonzero: |G:H| = 2 is prime to 3.
        let r2 = restriction_map(&c3, &sub_res, &x.scale(&z.from_int(2))).unwrap();
        assert!(!r2.is_coboundary().unwrap());
        let one = restriction_map(&c3, &sub_res, &CohomologyClass::one(&res)).unwrap();
        assert_eq!(one.cocycle(), &[z.one()]);
    }

    #[test]
    fn restriction_to_whole_group_is_identity() {
        let f = CoeffRing::PrimeField(2);
        let res = build("D4", f, 4, Strategy::Minimal);
        let whole = res.group().whole();
        for n in 1..4 {
            let x = generator(&res, n, 0);
            let r = restriction_map(&whole, &res, &x).unwrap();
            assert_eq!(coords(&r), coords(&x));
        }
    }

    #[test]
    fn degree_one_values_are_homomorphisms() {
        let f = CoeffRing::PrimeField(2);
        let res = build("V4", f, 3, Strategy::Minimal);
        let g = res.group().clone();
        let x = generator(&res, 1, 0);
        for a in 0..4 {
            for b in 0..4 {
                let lhs = degree_one_value(&x, g.mul(a, b)).unwrap();
                let rhs = f.add(&degree_one_value(&x, a).unwrap(), &degree_one_value(&x, b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}
