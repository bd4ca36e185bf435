//! Cohomological supports of lattices and the rank-variety oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::json;

use crate::cohomring::identity_vector;
use crate::error::{Error, Result};
use crate::exactalg::{groebner, kernel_basis, rank, CoeffRing, Elem, GroebnerBasis, Matrix, Monomial, Poly, PolyRing};
use crate::groups::FiniteGroup;
use crate::homalg::{cohomology, degree_one_value};
use crate::lattices::Lattice;
use crate::spectrum::{Inclusion, ProjFiber, SpecHModel, SpecializationClosedSubset};

/// Most minors the rank-variety computation is willing to expand.
const MINOR_BUDGET: u128 = 200_000;

/// `csupp(M)` as a subset of a spectrum model.
#[derive(Clone, Debug)]
pub struct SupportResult {
    pub subset: SpecializationClosedSubset,
    /// Annihilator generators found per fiber, before adding the fiber ideal.
    pub annihilators: BTreeMap<u64, Vec<Poly>>,
    pub certified_cap: usize,
    model_json: serde_json::Value,
}

impl SupportResult {
    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "model": self.model_json,
            "support": self.subset.to_json(),
            "certified_cap": self.certified_cap,
        })
    }
}

/// Generators of `ker(H*(G;F_p) → H*(G; End M))` in kept variables, degrees
/// `1..=cap`. This kernel is the annihilator of `H*(G; End M)`, which is a
/// ring with unit `id_M`.
pub fn annihilator(m: &Lattice, fiber: &ProjFiber, cap: usize) -> Result<Vec<Poly>> {
    let pres = fiber.presentation();
    let fp = CoeffRing::PrimeField(fiber.prime());
    if m.ring() != fp {
        return Err(Error::RingMismatch);
    }
    if m.group().as_ref() != pres.group().as_ref() {
        return Err(Error::GroupMismatch);
    }
    if cap > pres.cap() {
        return Err(Error::CapExceeded { requested: cap as i64, cap: pres.cap() });
    }
    let ring = fiber.coordinate_ring();
    if is_projective_mod_p(m, fiber.prime())? {
        // End M is projective too, so every positive-degree class acts as zero.
        return Ok((0..ring.nvars()).map(|i| ring.var(i)).filter(|x| !fiber.ideal().contains(x)).collect());
    }
    let end = m.end();
    let id = identity_vector(m);
    let res = pres.resolution();
    let mut out = Vec::new();
    for n in 1..=cap {
        let monos: Vec<Monomial> = ring.monomials_of_degree(n as u32);
        if monos.is_empty() {
            continue;
        }
        let h = cohomology(res, &end, n)?;
        let mut cols = Vec::with_capacity(monos.len());
        for mono in &monos {
            let class = pres.evaluate_monomial(&fiber.embed_monomial(mono))?;
            // ζ·id_M has the cochain c_j · id in each generator slot.
            let psi: Vec<Elem> = class.cocycle().iter().flat_map(|c| id.iter().map(move |x| fp.mul(c, x))).collect();
            cols.push(h.coords(&psi)?);
        }
        let dim = h.num_generators();
        if dim == 0 {
            out.extend(monos.iter().map(|mono| ring.term(mono.clone(), fp.one())));
            continue;
        }
        let k = kernel_basis(&Matrix::from_columns(fp, dim, &cols))?;
        for j in 0..k.cols() {
            let f = ring.from_terms(monos.iter().cloned().zip(k.col(j)));
            if !f.is_zero() && !fiber.ideal().contains(&f) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Projectivity of an `F_p G`-lattice. Restricted to a Sylow subgroup `P`,
/// the norm `N_P` kills every non-free indecomposable and has rank one on
/// `F_p P`, so `M` is projective iff `rank N_P · |P| = dim M`.
pub fn is_projective_mod_p(m: &Lattice, p: u64) -> Result<bool> {
    let fp = CoeffRing::PrimeField(p);
    if m.ring() != fp {
        return Err(Error::RingMismatch);
    }
    let sylow = m.group().sylow(p);
    let mut norm = Matrix::zeros(fp, m.rank(), m.rank());
    for &h in sylow.elements() {
        norm = norm.add(m.action(h))?;
    }
    Ok(rank(&norm)? * sylow.order() == m.rank())
}

/// `V(Ann H*(G; End M))` in each relevant fiber of the model.
///
/// Lattices over a prime field live in the fiber of their characteristic;
/// lattices over `Z` or `Z_(p)` are handled fiberwise through `M/pM`.
pub fn cohomological_support(m: &Lattice, model: &SpecHModel, cap: usize) -> Result<SupportResult> {
    if m.group().as_ref() != model.group().as_ref() {
        return Err(Error::GroupMismatch);
    }
    match m.ring() {
        CoeffRing::Integers | CoeffRing::LocalizedIntegers(_) => support_for_integral_lattice(m, model, cap),
        CoeffRing::Rationals => finish(model, BTreeMap::new(), cap),
        CoeffRing::PrimeField(p) => {
            let mut anns = BTreeMap::new();
            if let Some(f) = model.fiber(p) {
                anns.insert(p, annihilator(m, f, cap)?);
            }
            finish(model, anns, cap)
        }
        other => Err(Error::UnsupportedRing(format!("supports over {other}"))),
    }
}

/// Fiberwise support of a lattice over `Z` or `Z_(p)`: the `p`-fiber is
/// the support of `M/pM`.
pub fn support_for_integral_lattice(m: &Lattice, model: &SpecHModel, cap: usize) -> Result<SupportResult> {
    match m.ring() {
        CoeffRing::Integers | CoeffRing::LocalizedIntegers(_) => {}
        other => return Err(Error::UnsupportedRing(format!("expected an integral lattice, got {other}"))),
    }
    let mut anns = BTreeMap::new();
    for (&p, f) in model.fibers() {
        if let CoeffRing::LocalizedIntegers(q) = m.ring() {
            if q != p {
                // |G|-torsion away from q is invisible here.
                anns.insert(p, vec![f.coordinate_ring().one()]);
                continue;
            }
        }
        let reduced = m.change_ring(CoeffRing::PrimeField(p))?;
        anns.insert(p, annihilator(&reduced, f, cap)?);
    }
    finish(model, anns, cap)
}

fn finish(model: &SpecHModel, anns: BTreeMap<u64, Vec<Poly>>, cap: usize) -> Result<SupportResult> {
    let mut subset = model.empty_subset();
    for (&p, gens) in &anns {
        subset = subset.union(&model.subset(p, std::slice::from_ref(gens))?)?;
    }
    Ok(SupportResult { subset, annihilators: anns, certified_cap: cap, model_json: model.to_json() })
}

/// Carlson's rank variety of an `F_p E`-lattice, as a homogeneous ideal in
/// `F_p[Y_1..Y_r]` (coordinates along the chosen elementary basis).
#[derive(Clone, Debug)]
pub struct RankVariety {
    pub ring: PolyRing,
    pub ideal: GroebnerBasis,
    /// Elements `g_1..g_r` behind the coordinates.
    pub basis: Vec<usize>,
    /// Whether pointwise freeness tests over `F_p` and `F_{p²}` agree with the ideal.
    pub certified: bool,
}

impl RankVariety {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "ring": self.ring.to_string(),
            "ideal": self.ideal.basis.iter().map(|g| self.ring.format(g)).collect::<Vec<_>>(),
            "basis": self.basis,
            "certified": self.certified,
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant of a square polynomial matrix by cofactor expansion with memo
/// on the remaining columns.
fn poly_det(ring: &PolyRing, m: &[Vec<Poly>]) -> Poly {
    let s = m.len();
    let mut memo: BTreeMap<u64, Poly> = BTreeMap::new();
    fn go(ring: &PolyRing, m: &[Vec<Poly>], row: usize, cols: u64, memo: &mut BTreeMap<u64, Poly>) -> Poly {
        if row == m.len() {
            return ring.one();
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero();
        let mut sign_pos = true;
        for c in 0..m.len() {
            if cols >> c & 1 == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = go(ring, m, row + 1, cols & !(1 << c), memo);
                let term = ring.mul(&m[row][c], &minor);
                acc = if sign_pos { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(ring, m, 0, (1u64 << s) - 1, &mut memo)
}

/// Rank variety of `M` over an elementary abelian `p`-group `E`.
pub fn rank_variety(group: &Arc<FiniteGroup>, p: u64, m: &Lattice) -> Result<RankVariety> {
    let whole = group.whole();
    match whole.elementary_abelian_type() {
        Some((q, _)) if q == p => {}
        _ => return Err(Error::NotElementaryAbelian),
    }
    let fp = CoeffRing::PrimeField(p);
    if m.ring() != fp {
        return Err(Error::RingMismatch);
    }
    if m.group().as_ref() != group.as_ref() {
        return Err(Error::GroupMismatch);
    }
    let basis = whole.elementary_basis()?;
    let r = basis.len();
    let ring = PolyRing::new(fp, vec![1; r], (1..=r).map(|i| format!("Y{i}")).collect());
    let n = m.rank();
    let id = Matrix::identity(fp, n);
    let shifted: Vec<Matrix> = basis.iter().map(|&g| m.action(g).sub(&id).expect("square")).collect();
    // U(Y) = Σ Y_i (g_i − 1), entries linear forms.
    let u: Vec<Vec<Poly>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    ring.from_terms((0..r).map(|i| {
                        let mut e = vec![0; r];
                        e[i] = 1;
                        (e, *shifted[i].get(a, b))
                    }))
                })
                .collect()
        })
        .collect();
    // Free over F_p[u]/(u^p) exactly when rank u = n(p−1)/p.
    let gens: Vec<Poly> = if n == 0 {
        (0..r).map(|i| ring.var(i)).collect()
    } else if n as u64 % p != 0 {
        Vec::new()
    } else {
        let s = n * (p as usize - 1) / p as usize;
        let count = binomial(n, s).pow(2);
        if count > MINOR_BUDGET || s > 40 {
            return Err(Error::TooLarge(format!("{count} minors of size {s}")));
        }
        let subsets = combinations(n, s);
        let mut out = Vec::new();
        for rows in &subsets {
            for cols in &subsets {
                let sub: Vec<Vec<Poly>> = rows.iter().map(|&a| cols.iter().map(|&b| u[a][b].clone()).collect()).collect();
                let d = poly_det(&ring, &sub);
                if !d.is_zero() {
                    out.push(d);
                }
            }
        }
        out
    };
    let ideal = groebner(&ring, &gens)?;
    let certified = certify_rank_variety(&ring, &ideal, &shifted, n, p)?;
    Ok(RankVariety { ring, ideal, basis, certified })
}

fn certify_rank_variety(ring: &PolyRing, ideal: &GroebnerBasis, shifted: &[Matrix], n: usize, p: u64) -> Result<bool> {
    let r = shifted.len();
    let free_rank = if n as u64 % p == 0 { Some(n * (p as usize - 1) / p as usize) } else { None };
    for e in 1..=2 {
        let field = CoeffRing::finite_field(p, e)?;
        let elems = field.elements();
        let q = elems.len();
        let total = q.pow(r as u32);
        for code in 1..total {
            let mut c = code;
            let alpha: Vec<Elem> = (0..r)
                .map(|_| {
                    let x = elems[c % q];
                    c /= q;
                    x
                })
                .collect();
            let mut u = Matrix::zeros(field, n, n);
            for (a, s) in alpha.iter().zip(shifted) {
                let s = s.change_ring(field)?;
                u = u.add(&s.scale(a))?;
            }
            let free = match free_rank {
                Some(k) => n == 0 || rank(&u)? == k,
                None => false,
            };
            let on_variety = ideal.basis.iter().all(|g| field.is_zero(&ring.eval(g, &field, &alpha)));
            if free == on_variety {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Compares a cohomological support with the rank variety of the same
/// module for an elementary abelian 2-group, identifying a shifted subgroup
/// `α` with the point `x_i = Σ_j x_i(g_j) α_j` of the fiber.
pub fn compare_with_rank_variety(m: &Lattice, model: &SpecHModel, cap: usize) -> Result<(Inclusion, RankVariety)> {
    let group = model.group();
    let fiber = model.fiber(2).ok_or(Error::NotElementaryAbelian)?;
    let rv = rank_variety(group, 2, m)?;
    let pres = fiber.presentation();
    let r = rv.basis.len();
    let gens: Vec<_> = fiber.kept().iter().map(|&i| &pres.generators()[i]).collect();
    if gens.len() != r || gens.iter().any(|g| g.degree != 1) {
        return Err(Error::UnsupportedRing("coordinate identification needs degree-one generators".into()));
    }
    let f2 = CoeffRing::PrimeField(2);
    let a = Matrix::from_rows(
        f2,
        gens.iter()
            .map(|g| rv.basis.iter().map(|&h| degree_one_value(&g.class, h)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )?;
    let a_inv = crate::lattices::invert(&a).ok_or_else(|| Error::DimensionMismatch("degree-one classes are dependent".into()))?;
    // α = A⁻¹ x, so f(α) becomes f(A⁻¹ x).
    let x_ring = fiber.coordinate_ring();
    let images: Vec<Poly> = (0..r)
        .map(|j| x_ring.from_terms((0..r).map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            (e, *a_inv.get(j, i))
        })))
        .collect();
    let transformed: Vec<Poly> = rv.ideal.basis.iter().map(|g| rv.ring.substitute(g, x_ring, &images)).collect();
    let oracle = model.subset(2, &[transformed])?;
    let supp = cohomological_support(m, model, cap)?;
    Ok((supp.subset.same_as(&oracle)?, rv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{carlson_module, syzygy_of_trivial, CohomologyClass, Resolution, Strategy};
    use crate::spectrum::stmod_spectrum;
    use std::sync::OnceLock;

    fn grp(name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::builtin(name).unwrap())
    }

    fn v4() -> &'static (Arc<FiniteGroup>, SpecHModel) {
        static M: OnceLock<(Arc<FiniteGroup>, SpecHModel)> = OnceLock::new();
        M.get_or_init(|| {
            let g = grp("V4");
            let m = stmod_spectrum(&g, CoeffRing::PrimeField(2), 6).unwrap();
            (g, m)
        })
    }

    fn v4_modules() -> Vec<(String, Lattice)> {
        let (g, model) = v4();
        let f2 = CoeffRing::PrimeField(2);
        let pres = model.fiber(2).unwrap().presentation();
        let res = Arc::new(Resolution::build(g, f2, 3, Strategy::Minimal).unwrap());
        let mut out = vec![
            ("trivial".to_string(), Lattice::trivial(g, f2)),
            ("regular".to_string(), Lattice::regular(g, f2)),
        ];
        let x = |k: usize| pres.generators()[k].class.cocycle().to_vec();
        let zs = [x(0), x(1), x(0).iter().zip(x(1)).map(|(a, b)| f2.add(a, &b)).collect()];
        for (name, z) in ["L(x1)", "L(x2)", "L(x1+x2)"].iter().zip(zs) {
            // The presentation's resolution is also minimal, so cocycles transfer.
            let c = CohomologyClass::new(&res, 1, z).unwrap();
            out.push((name.to_string(), carlson_module(&c).unwrap()));
        }
        out.push(("omega".to_string(), syzygy_of_trivial(&res, 1).unwrap()));
        out
    }

    #[test]
    fn rank_variety_examples() {
        let (g, _) = v4();
        let f2 = CoeffRing::PrimeField(2);
        let rv = rank_variety(g, 2, &Lattice::regular(g, f2)).unwrap();
        assert!(rv.certified);
        assert_eq!(rv.ideal.hilbert_function(3), 0);
        let rv = rank_variety(g, 2, &Lattice::trivial(g, f2)).unwrap();
        assert!(rv.ideal.basis.is_empty());
        assert!(matches!(rank_variety(&grp("C6"), 2, &Lattice::trivial(&grp("C6"), f2)), Err(Error::NotElementaryAbelian)));
    }

    #[test]
    fn avrunin_scott_on_v4() {
        let (_, model) = v4();
        for (name, m) in v4_modules() {
            let (agree, rv) = compare_with_rank_variety(&m, model, 4).unwrap();
            assert!(rv.certified, "{name}");
            assert_eq!(agree, Inclusion::Yes, "{name}");
        }
    }

    #[test]
    fn expected_shapes() {
        let (g, model) = v4();
        let f2 = CoeffRing::PrimeField(2);
        assert!(cohomological_support(&Lattice::regular(g, f2), model, 4).unwrap().is_empty());
        let full = model.full_subset().unwrap();
        let triv = cohomological_support(&Lattice::trivial(g, f2), model, 4).unwrap();
        assert_eq!(triv.subset.same_as(&full).unwrap(), Inclusion::Yes);
        let mods = v4_modules();
        // L(x1+x2) is a single closed point.
        let l = cohomological_support(&mods[4].1, model, 4).unwrap();
        assert_eq!(l.subset.points(1).unwrap()[&2].len(), 1);
        assert_eq!(l.subset.points(2).unwrap()[&2].len(), 1);
    }

    #[test]
    fn sum_rule_and_syzygy_invariance() {
        let (g, model) = v4();
        let mods = v4_modules();
        let f2 = CoeffRing::PrimeField(2);
        let res = Resolution::build(g, f2, 3, Strategy::Minimal).unwrap();
        let _ = res;
        for i in 2..5 {
            for j in 2..5 {
                let sum = mods[i].1.direct_sum(&mods[j].1).unwrap();
                let s = cohomological_support(&sum, model, 4).unwrap().subset;
                let a = cohomological_support(&mods[i].1, model, 4).unwrap().subset;
                let b = cohomological_support(&mods[j].1, model, 4).unwrap().subset;
                assert_eq!(s.same_as(&a.union(&b).unwrap()).unwrap(), Inclusion::Yes);
            }
        }
        let omega = &mods[5].1;
        let s0 = cohomological_support(&Lattice::trivial(g, f2), model, 4).unwrap().subset;
        let s1 = cohomological_support(omega, model, 4).unwrap().subset;
        assert_eq!(s0.same_as(&s1).unwrap(), Inclusion::Yes);
    }

    #[test]
    fn integral_lattices_over_c6() {
        let g = grp("C6");
        let z = CoeffRing::Integers;
        let model = stmod_spectrum(&g, z, 4).unwrap();
        let triv = support_for_integral_lattice(&Lattice::trivial(&g, z), &model, 4).unwrap();
        assert!(!triv.subset.fiber(2).unwrap().is_empty());
        assert!(!triv.subset.fiber(3).unwrap().is_empty());
        assert!(support_for_integral_lattice(&Lattice::regular(&g, z), &model, 4).unwrap().is_empty());
        // Cosets of the order-two subgroup: C3 permutes them freely, C2 fixes them.
        let c2 = g.subgroup(vec![0, 3]).unwrap();
        let perm = support_for_integral_lattice(&Lattice::permutation(&c2, z), &model, 4).unwrap();
        assert!(!perm.subset.fiber(2).unwrap().is_empty());
        assert!(perm.subset.fiber(3).unwrap().is_empty());
    }

    #[test]
    fn projectivity_agrees_with_higman() {
        let (g, _) = v4();
        let f2 = CoeffRing::PrimeField(2);
        for (name, m) in v4_modules() {
            let higman = crate::stmod::is_weakly_projective(&m).unwrap().weakly_projective;
            assert_eq!(is_projective_mod_p(&m, 2).unwrap(), higman, "{name}");
        }
        let m = v4_modules().remove(2).1;
        assert!(is_projective_mod_p(&m.tensor(&Lattice::regular(g, f2)).unwrap(), 2).unwrap());
        let s3 = grp("S3");
        let c2 = s3.all_subgroups().into_iter().find(|s| s.order() == 2).unwrap();
        let f3 = CoeffRing::PrimeField(3);
        assert!(is_projective_mod_p(&Lattice::permutation(&c2, f3), 3).unwrap());
        assert!(!is_projective_mod_p(&Lattice::permutation(&c2, f2), 2).unwrap());
    }
}
