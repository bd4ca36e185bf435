//! Homogeneous spectra of cohomology rings, modelled prime by prime.
//!
//! Every homogeneous prime of `H*(G; R)` not containing `H^{>0}` lies over a
//! unique prime `p` dividing `|G|`, so the stable part of the spectrum is a
//! finite family of projective varieties over prime fields.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::cohomring::{restriction_ring_map, ring_map_along, GradedRingPresentation};
use crate::error::{Error, Result};
use crate::exactalg::{groebner, kernel_basis, CoeffRing, Elem, GroebnerBasis, Matrix, Monomial, Poly, PolyRing};
use crate::groups::FiniteGroup;
use crate::homalg::{CohomologyClass, Resolution, Strategy};

/// Largest number of candidate tuples enumerated when listing points.
const POINT_BUDGET: u64 = 2_000_000;
/// Frobenius exponent bound for radical membership.
const RADICAL_EXPONENT: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberModel {
    /// Image of `H*(G; F_p)` modulo nilpotents.
    Reduced,
    /// `H*(G; Z)/(p)` modulo nilpotents.
    IntegralModP,
}

impl fmt::Display for FiberModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberModel::Reduced => write!(f, "reduced"),
            FiberModel::IntegralModP => write!(f, "integral-mod-p"),
        }
    }
}

/// `Proj` of a reduced graded algebra over `F_p`, presented by the kept
/// generators of a cohomology ring (all of them for `p = 2`, the even-degree
/// ones otherwise) modulo the relations and nilpotents found through the cap.
#[derive(Clone, Debug)]
pub struct ProjFiber {
    p: u64,
    model: FiberModel,
    pres: Arc<GradedRingPresentation>,
    kept: Vec<usize>,
    ring: PolyRing,
    ideal: GroebnerBasis,
}

impl ProjFiber {
    /// Fiber from a presentation of `H*(G; F_p)`.
    pub fn reduced(pres: Arc<GradedRingPresentation>) -> Result<Self> {
        let p = match pres.ring() {
            CoeffRing::PrimeField(p) => p,
            other => return Err(Error::UnsupportedRing(format!("reduced fibers need a prime field, got {other}"))),
        };
        Self::build(pres, p, FiberModel::Reduced)
    }

    /// Fiber from a presentation of `H*(G; Z)` (or over `Z_(p)`), reduced mod `p`.
    pub fn integral(pres: Arc<GradedRingPresentation>, p: u64) -> Result<Self> {
        match pres.ring() {
            CoeffRing::Integers => {}
            CoeffRing::LocalizedIntegers(q) if q == p => {}
            other => return Err(Error::UnsupportedRing(format!("integral fibers need Z or Z_({p}), got {other}"))),
        }
        Self::build(pres, p, FiberModel::IntegralModP)
    }

    fn build(pres: Arc<GradedRingPresentation>, p: u64, model: FiberModel) -> Result<Self> {
        let gens = pres.generators();
        let kept: Vec<usize> = (0..gens.len()).filter(|&i| p == 2 || gens[i].degree % 2 == 0).collect();
        let fp = CoeffRing::PrimeField(p);
        let ring = PolyRing::new(
            fp,
            kept.iter().map(|&i| gens[i].degree as u32).collect(),
            kept.iter().map(|&i| gens[i].name.clone()).collect(),
        );
        let mut fiber = ProjFiber { p, model, pres, kept, ring: ring.clone(), ideal: groebner(&ring, &[])? };
        let cap = fiber.pres.cap();
        let mut gens_j: Vec<Poly> = Vec::new();
        for n in 1..=cap {
            let monos = ring.monomials_of_degree(n as u32);
            if monos.is_empty() {
                continue;
            }
            // Linear relations among kept monomials.
            let cols: Vec<Vec<Elem>> = monos.iter().map(|m| fiber.monomial_coords(m, 1)).collect::<Result<_>>()?;
            gens_j.extend(fiber.kernel_polys(&monos, &cols)?);
            // Elements whose p^s-th power vanishes.
            let mut q = p as usize;
            while q * n <= cap {
                let cols: Vec<Vec<Elem>> =
                    monos.iter().map(|m| fiber.monomial_coords(m, q as u32)).collect::<Result<_>>()?;
                gens_j.extend(fiber.kernel_polys(&monos, &cols)?);
                q *= p as usize;
            }
        }
        fiber.ideal = groebner(&ring, &gens_j)?;
        Ok(fiber)
    }

    /// Coordinates in `H^{e·deg}` (reduced mod `p`) of `m^e` for a monomial in kept variables.
    fn monomial_coords(&self, m: &[u32], e: u32) -> Result<Vec<Elem>> {
        let fp = CoeffRing::PrimeField(self.p);
        let full = self.embed_monomial(&m.iter().map(|x| x * e).collect::<Vec<_>>());
        let n = self.pres.poly_ring().monomial_degree(&full) as usize;
        let h = self.pres.cohomology_group(n)?;
        let c = h.coords(self.pres.evaluate_monomial(&full)?.cocycle())?;
        Ok(match self.model {
            FiberModel::Reduced => c,
            FiberModel::IntegralModP => {
                let ring = self.pres.ring();
                let pe = ring.from_int(self.p as i128);
                c.iter()
                    .zip(h.moduli())
                    .filter(|(_, m)| ring.divides(&pe, m))
                    .map(|(x, _)| fp.coerce_from(&ring, x).expect("reduction mod p"))
                    .collect()
            }
        })
    }

    fn kernel_polys(&self, monos: &[Monomial], cols: &[Vec<Elem>]) -> Result<Vec<Poly>> {
        let fp = self.ring.coeffs;
        let dim = cols.first().map_or(0, |c| c.len());
        if dim == 0 {
            return Ok(monos.iter().map(|m| self.ring.term(m.clone(), fp.one())).collect());
        }
        let k = kernel_basis(&Matrix::from_columns(fp, dim, cols))?;
        Ok((0..k.cols())
            .map(|j| self.ring.from_terms(monos.iter().cloned().zip(k.col(j))))
            .filter(|f| !f.is_zero())
            .collect())
    }

    /// Monomial in the presentation's variables for one in the kept ones.
    pub fn embed_monomial(&self, m: &[u32]) -> Monomial {
        let mut full = vec![0; self.pres.generators().len()];
        for (&i, &e) in self.kept.iter().zip(m) {
            full[i] = e;
        }
        full
    }

    /// Image of a polynomial in the presentation's variables, dropping
    /// monomials that involve discarded (nilpotent) generators.
    pub fn project(&self, source: &PolyRing, f: &Poly) -> Poly {
        let terms = f.terms().iter().filter_map(|t| {
            let discarded = t.exps.iter().enumerate().any(|(i, &e)| e > 0 && !self.kept.contains(&i));
            if discarded {
                return None;
            }
            let c = self.ring.coeffs.coerce_from(&source.coeffs, &t.coeff)?;
            let m: Monomial = self.kept.iter().map(|&i| t.exps.get(i).copied().unwrap_or(0)).collect();
            Some((m, c))
        });
        self.ring.from_terms(terms)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn model(&self) -> FiberModel {
        self.model
    }

    pub fn presentation(&self) -> &Arc<GradedRingPresentation> {
        &self.pres
    }

    /// Indices (in the presentation) of the generators used as coordinates.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn coordinate_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn ideal(&self) -> &GroebnerBasis {
        &self.ideal
    }

    pub fn cap(&self) -> usize {
        self.pres.cap()
    }

    /// Dimension of the degree-`d` part of the coordinate ring.
    pub fn hilbert(&self, d: u32) -> usize {
        self.ideal.hilbert_function(d)
    }

    pub fn describe(&self) -> String {
        let base = format!("{}", self.ring);
        if self.ideal.basis.is_empty() {
            base
        } else {
            let rels: Vec<String> = self.ideal.basis.iter().map(|g| self.ring.format(g)).collect();
            format!("{base}/({})", rels.join(", "))
        }
    }

    /// `F_{p^e}`-points of the fiber.
    pub fn points(&self, e: u32) -> Result<PointSet> {
        PointSet::enumerate(&self.ring, &self.ideal.basis, e)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "prime": self.p,
            "model": self.model.to_string(),
            "ring": self.describe(),
            "variables": self.ring.names.iter().zip(&self.ring.weights)
                .map(|(n, d)| json!({"name": n, "degree": d})).collect::<Vec<_>>(),
            "ideal": self.ideal.basis.iter().map(|g| self.ring.format(g)).collect::<Vec<_>>(),
            "hilbert": (0..=self.cap() as u32).map(|d| self.hilbert(d)).collect::<Vec<_>>(),
            "certified_cap": self.cap(),
        })
    }
}

/// Points of a weighted projective variety over a finite field, one
/// representative per geometric scaling class.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub field: CoeffRing,
    pub weights: Vec<u32>,
    pub points: Vec<Vec<Elem>>,
}

impl PointSet {
    /// Nonzero `F_{p^e}`-tuples on which every polynomial vanishes.
    pub fn enumerate(ring: &PolyRing, polys: &[Poly], e: u32) -> Result<Self> {
        let p = ring.coeffs.characteristic();
        let field = CoeffRing::finite_field(p, e)?;
        let elems = field.elements();
        let q = elems.len() as u64;
        let k = ring.nvars();
        let total = q.checked_pow(k as u32).filter(|t| *t <= POINT_BUDGET).ok_or_else(|| {
            Error::TooLarge(format!("{k} coordinates over a field with {q} elements"))
        })?;
        let mut set = PointSet { field, weights: ring.weights.clone(), points: Vec::new() };
        for code in 1..total {
            let mut c = code;
            let pt: Vec<Elem> = (0..k)
                .map(|_| {
                    let x = elems[(c % q) as usize];
                    c /= q;
                    x
                })
                .collect();
            if polys.iter().all(|f| field.is_zero(&ring.eval(f, &field, &pt))) && set.find(&pt).is_none() {
                set.points.push(pt);
            }
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the representative equivalent to `pt`.
    pub fn find(&self, pt: &[Elem]) -> Option<usize> {
        self.points.iter().position(|a| weighted_equivalent(self.field, &self.weights, a, pt))
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

fn signed_pow(field: CoeffRing, x: &Elem, e: i64) -> Elem {
    if e >= 0 {
        field.pow(x, e as u64)
    } else {
        field.pow(&field.inv(x).expect("nonzero"), (-e) as u64)
    }
}

/// Whether `b = λ·a` for some `λ` in the algebraic closure, where `λ` acts
/// on a coordinate of degree `d` by `λ^d`.
pub fn weighted_equivalent(field: CoeffRing, weights: &[u32], a: &[Elem], b: &[Elem]) -> bool {
    if a.len() != b.len() || (0..a.len()).any(|i| field.is_zero(&a[i]) != field.is_zero(&b[i])) {
        return false;
    }
    let support: Vec<usize> = (0..a.len()).filter(|&i| !field.is_zero(&a[i])).collect();
    if support.is_empty() {
        return true;
    }
    let ratios: Vec<Elem> =
        support.iter().map(|&i| field.mul(&b[i], &field.inv(&a[i]).expect("nonzero"))).collect();
    let degs: Vec<i64> = support.iter().map(|&i| weights[i] as i64).collect();
    let g = degs.iter().fold(0, |acc, &d| gcd_i64(acc, d));
    let e: Vec<i64> = degs.iter().map(|d| d / g).collect();
    // Bezout coefficients with Σ u_i e_i = 1 pin down μ = λ^g inside the field.
    let mut u = vec![1i64];
    let mut acc = e[0];
    for &ei in &e[1..] {
        let (g2, s, t) = ext_gcd(acc, ei);
        for x in u.iter_mut() {
            *x *= s;
        }
        u.push(t);
        acc = g2;
    }
    let mut mu = field.one();
    for (r, &ui) in ratios.iter().zip(&u) {
        mu = field.mul(&mu, &signed_pow(field, r, ui));
    }
    ratios.iter().zip(&e).all(|(r, &ei)| *r == field.pow(&mu, ei as u64))
}

/// Evaluates polynomials (in the variables of `ring`) at a point.
pub fn map_point(ring: &PolyRing, images: &[Poly], field: CoeffRing, pt: &[Elem]) -> Vec<Elem> {
    images.iter().map(|f| ring.eval(f, &field, pt)).collect()
}

/// `Spec^h(H*(G; R))` with the `Spec(R)` locus removed: one projective fiber
/// per relevant prime.
#[derive(Clone, Debug)]
pub struct SpecHModel {
    group: Arc<FiniteGroup>,
    base: CoeffRing,
    cap: usize,
    fibers: BTreeMap<u64, ProjFiber>,
}

/// Primes carrying a fiber for the given coefficient ring.
pub fn fiber_primes(group: &FiniteGroup, base: CoeffRing) -> Result<Vec<u64>> {
    let divisors = group.prime_divisors();
    Ok(match base {
        CoeffRing::Integers => divisors,
        CoeffRing::Rationals => Vec::new(),
        CoeffRing::LocalizedIntegers(p) | CoeffRing::PrimeField(p) | CoeffRing::FiniteField(p, _) => {
            divisors.into_iter().filter(|&q| q == p).collect()
        }
        CoeffRing::IntegersMod(m) => {
            if !crate::exactalg::ring::is_prime(m) {
                return Err(Error::UnsupportedRing(format!("{base} has no spectrum model")));
            }
            divisors.into_iter().filter(|&q| q == m).collect()
        }
    })
}

impl SpecHModel {
    /// Model assembled from given presentations of `H*(G; F_p)`.
    pub fn from_presentations(
        group: &Arc<FiniteGroup>,
        base: CoeffRing,
        presentations: &BTreeMap<u64, Arc<GradedRingPresentation>>,
    ) -> Result<Self> {
        let mut fibers = BTreeMap::new();
        let mut cap = usize::MAX;
        for p in fiber_primes(group, base)? {
            let pres = presentations
                .get(&p)
                .ok_or_else(|| Error::PresentationMissing(format!("H*({}; F_{p})", group.name())))?;
            if pres.group().as_ref() != group.as_ref() {
                return Err(Error::GroupMismatch);
            }
            cap = cap.min(pres.cap());
            fibers.insert(p, ProjFiber::reduced(pres.clone())?);
        }
        Ok(SpecHModel { group: group.clone(), base, cap: if fibers.is_empty() { 0 } else { cap }, fibers })
    }

    /// Model whose fibers come from `H*(G; Z)/(p)` instead.
    pub fn integral_mod_p(group: &Arc<FiniteGroup>, cap: usize) -> Result<Self> {
        let res = Arc::new(Resolution::build(group, CoeffRing::Integers, cap + 1, Strategy::Auto)?);
        let pres = Arc::new(GradedRingPresentation::from_resolution(res, cap)?);
        let mut fibers = BTreeMap::new();
        for p in group.prime_divisors() {
            fibers.insert(p, ProjFiber::integral(pres.clone(), p)?);
        }
        Ok(SpecHModel { group: group.clone(), base: CoeffRing::Integers, cap, fibers })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn base(&self) -> CoeffRing {
        self.base
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn fibers(&self) -> &BTreeMap<u64, ProjFiber> {
        &self.fibers
    }

    pub fn fiber(&self, p: u64) -> Option<&ProjFiber> {
        self.fibers.get(&p)
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Fingerprint shared by subsets of this model.
    pub fn key(&self) -> String {
        let fibers: Vec<String> = self.fibers.values().map(|f| format!("{}:{}:{}", f.p, f.model, f.describe())).collect();
        format!("{}|{}|{}", self.group.name(), self.base.descriptor(), fibers.join(";"))
    }

    pub fn empty_subset(&self) -> SpecializationClosedSubset {
        SpecializationClosedSubset {
            key: self.key(),
            fibers: self.fibers.iter().map(|(&p, f)| (p, FiberSubset::new(f))).collect(),
        }
    }

    pub fn full_subset(&self) -> Result<SpecializationClosedSubset> {
        let mut s = self.empty_subset();
        for f in s.fibers.values_mut() {
            f.add_component(&[])?;
        }
        Ok(s)
    }

    /// `V(I_1) ∪ … ∪ V(I_k)` in the fiber at `p`.
    pub fn subset(&self, p: u64, ideals: &[Vec<Poly>]) -> Result<SpecializationClosedSubset> {
        let mut s = self.empty_subset();
        let fs = s.fibers.get_mut(&p).ok_or_else(|| Error::PresentationMissing(format!("no fiber at {p}")))?;
        for gens in ideals {
            fs.add_component(gens)?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fibers: serde_json::Map<String, serde_json::Value> =
            self.fibers.iter().map(|(p, f)| (p.to_string(), f.to_json())).collect();
        json!({
            "group": self.group.name(),
            "base_ring": self.base.descriptor(),
            "fibers": fibers,
            "specR_removed": true,
        })
    }
}

/// `Spec^h(H*(G;R)) \ Spec(R)` at degree cap `cap`, with fibers from the
/// reduced image of `H*(G; F_p)`.
pub fn stmod_spectrum(group: &Arc<FiniteGroup>, base: CoeffRing, cap: usize) -> Result<SpecHModel> {
    let mut pres = BTreeMap::new();
    for p in fiber_primes(group, base)? {
        let pr = GradedRingPresentation::build(group, CoeffRing::PrimeField(p), cap)?;
        pres.insert(p, Arc::new(pr));
    }
    SpecHModel::from_presentations(group, base, &pres)
}

/// Three-valued answer of up-to-radical comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Inclusion {
    Yes,
    No,
    Indeterminate,
}

impl Inclusion {
    fn and(self, other: Inclusion) -> Inclusion {
        match (self, other) {
            (Inclusion::No, _) | (_, Inclusion::No) => Inclusion::No,
            (Inclusion::Yes, Inclusion::Yes) => Inclusion::Yes,
            _ => Inclusion::Indeterminate,
        }
    }
}

/// Closed subsets of one fiber, as a union of `V(I_j)`; each `I_j` contains
/// the fiber's own ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSubset {
    ring: PolyRing,
    ambient: Vec<Poly>,
    components: Vec<GroebnerBasis>,
}

impl FiberSubset {
    fn new(fiber: &ProjFiber) -> Self {
        FiberSubset { ring: fiber.ring.clone(), ambient: fiber.ideal.basis.clone(), components: Vec::new() }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn components(&self) -> &[GroebnerBasis] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn add_component(&mut self, gens: &[Poly]) -> Result<()> {
        let mut all = self.ambient.clone();
        all.extend(gens.iter().cloned());
        let gb = groebner(&self.ring, &all)?;
        self.components.push(gb);
        self.canonicalize();
        Ok(())
    }

    fn canonicalize(&mut self) {
        let mut comps: Vec<GroebnerBasis> =
            std::mem::take(&mut self.components).into_iter().filter(|c| !irrelevant(c)).collect();
        comps.sort_by_key(|c| component_key(&self.ring, c));
        comps.dedup_by(|a, b| a.basis == b.basis);
        let mut kept: Vec<GroebnerBasis> = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            let redundant = comps.iter().enumerate().any(|(j, d)| {
                if i == j {
                    return false;
                }
                let inside = component_inclusion(&self.ring, c, &d.basis) == Inclusion::Yes;
                let back = component_inclusion(&self.ring, d, &c.basis) == Inclusion::Yes;
                // Equal radicals: keep the first one only.
                inside && (!back || j < i)
            });
            if !redundant {
                kept.push(c.clone());
            }
        }
        self.components = kept;
    }

    /// Whether this subset lies inside `other`.
    pub fn included_in(&self, other: &FiberSubset) -> Inclusion {
        let mut acc = Inclusion::Yes;
        for c in &self.components {
            // V(I) ⊆ ∪ V(K_l) = V(∏ K_l).
            let product = product_generators(&other.ring, &other.components);
            acc = acc.and(component_inclusion(&self.ring, c, &product));
            if acc == Inclusion::No {
                break;
            }
        }
        acc
    }

    fn to_json(&self) -> serde_json::Value {
        json!(self
            .components
            .iter()
            .map(|c| c.basis.iter().map(|g| self.ring.format(g)).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

fn component_key(ring: &PolyRing, c: &GroebnerBasis) -> Vec<String> {
    c.basis.iter().map(|g| ring.format(g)).collect()
}

/// `V(I)` is empty in `Proj` exactly when every variable has a pure power
/// among the leading monomials.
fn irrelevant(c: &GroebnerBasis) -> bool {
    let n = c.ring.nvars();
    (0..n).all(|i| {
        c.basis.iter().any(|g| {
            let m = &g.leading().expect("nonzero basis element").exps;
            m[i] > 0 && m.iter().enumerate().all(|(j, &e)| j == i || e == 0)
        }) || c.is_unit_ideal()
    })
}

fn product_generators(ring: &PolyRing, comps: &[GroebnerBasis]) -> Vec<Poly> {
    let mut acc = vec![ring.one()];
    for c in comps {
        let mut next = Vec::with_capacity(acc.len() * c.basis.len());
        for a in &acc {
            for g in &c.basis {
                next.push(ring.mul(a, g));
            }
        }
        acc = next;
    }
    acc
}

/// Whether `V(I) ⊆ V(K)` for `I` given by a Gröbner basis.
fn component_inclusion(ring: &PolyRing, i: &GroebnerBasis, k: &[Poly]) -> Inclusion {
    if irrelevant(i) {
        return Inclusion::Yes;
    }
    let p = ring.coeffs.characteristic();
    let mut acc = Inclusion::Yes;
    for g in k {
        let mut found = false;
        let mut power = g.clone();
        for _ in 0..=RADICAL_EXPONENT {
            if i.contains(&power) {
                found = true;
                break;
            }
            power = ring.pow(&power, p as u32);
        }
        if found {
            continue;
        }
        // Look for a witness point of V(I) off V(g).
        let mut witnessed = false;
        for e in 1..=3 {
            let Ok(points) = PointSet::enumerate(ring, &i.basis, e) else { break };
            if points.points.iter().any(|pt| !points.field.is_zero(&ring.eval(g, &points.field, pt))) {
                witnessed = true;
                break;
            }
        }
        acc = acc.and(if witnessed { Inclusion::No } else { Inclusion::Indeterminate });
        if acc == Inclusion::No {
            break;
        }
    }
    acc
}

/// Specialization-closed subset of a spectrum model: per fiber, a finite
/// union of closed subsets `V(I_j)` in inclusion-reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationClosedSubset {
    key: String,
    fibers: BTreeMap<u64, FiberSubset>,
}

impl SpecializationClosedSubset {
    pub fn fibers(&self) -> &BTreeMap<u64, FiberSubset> {
        &self.fibers
    }

    pub fn fiber(&self, p: u64) -> Option<&FiberSubset> {
        self.fibers.get(&p)
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.values().all(|f| f.is_empty())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.key == other.key {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, f) in out.fibers.iter_mut() {
            f.components.extend(other.fibers[p].components.iter().cloned());
            f.canonicalize();
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, f) in out.fibers.iter_mut() {
            let theirs = &other.fibers[p].components;
            let mut comps = Vec::new();
            for a in &f.components {
                for b in theirs {
                    let mut gens = a.basis.clone();
                    gens.extend(b.basis.iter().cloned());
                    comps.push(groebner(&f.ring, &gens)?);
                }
            }
            f.components = comps;
            f.canonicalize();
        }
        Ok(out)
    }

    /// Whether `self ⊆ other`, up to radical.
    pub fn included_in(&self, other: &Self) -> Result<Inclusion> {
        self.check(other)?;
        let mut acc = Inclusion::Yes;
        for (p, f) in &self.fibers {
            acc = acc.and(f.included_in(&other.fibers[p]));
        }
        Ok(acc)
    }

    pub fn same_as(&self, other: &Self) -> Result<Inclusion> {
        Ok(self.included_in(other)?.and(other.included_in(self)?))
    }

    /// `F_{p^e}`-points per fiber.
    pub fn points(&self, e: u32) -> Result<BTreeMap<u64, PointSet>> {
        let mut out = BTreeMap::new();
        for (&p, f) in &self.fibers {
            let field = CoeffRing::finite_field(p, e)?;
            let mut set = PointSet { field, weights: f.ring.weights.clone(), points: Vec::new() };
            for c in &f.components {
                for pt in PointSet::enumerate(&f.ring, &c.basis, e)?.points {
                    if set.find(&pt).is_none() {
                        set.points.push(pt);
                    }
                }
            }
            out.insert(p, set);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fibers: serde_json::Map<String, serde_json::Value> =
            self.fibers.iter().map(|(p, f)| (p.to_string(), f.to_json())).collect();
        json!({ "fibers": fibers, "empty": self.is_empty() })
    }
}

/// Outcome of the desk-scale Quillen comparison at one prime.
#[derive(Clone, Debug)]
pub struct QuillenReport {
    pub group: String,
    pub prime: u64,
    pub cap: usize,
    pub nil_bound: u64,
    pub subgroups: Vec<Vec<usize>>,
    /// `(degree, kernel dimension, worst exponent found)`; `None` when some
    /// kernel element was not shown nilpotent.
    pub kernel: Vec<(usize, usize, Option<u64>)>,
    pub kernel_nilpotent: bool,
    /// `(q, F_q-rational points of the G-fiber, how many are hit)`.
    pub surjectivity: Vec<(u64, usize, usize)>,
    pub points_surjective: bool,
    pub orbits_identified: bool,
    pub notes: Vec<String>,
}

impl QuillenReport {
    pub fn passed(&self) -> bool {
        self.kernel_nilpotent && self.points_surjective && self.orbits_identified
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "group": self.group,
            "prime": self.prime,
            "cap": self.cap,
            "nil_bound": self.nil_bound,
            "subgroups": self.subgroups,
            "kernel": self.kernel.iter().map(|(d, k, e)| json!({"degree": d, "dimension": k, "exponent": e})).collect::<Vec<_>>(),
            "kernel_nilpotent": self.kernel_nilpotent,
            "surjectivity": self.surjectivity.iter().map(|(q, n, h)| json!({"q": q, "points": n, "hit": h})).collect::<Vec<_>>(),
            "points_surjective": self.points_surjective,
            "orbits_identified": self.orbits_identified,
            "notes": self.notes,
            "passed": self.passed(),
        })
    }
}

fn find_root(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Compares `H*(G; F_p)` with the elementary abelian `p`-subgroups through
/// degree `cap`: nilpotent kernel of the restriction, surjectivity onto
/// `F_p`- and `F_{p²}`-rational points, and identification of points along
/// the orbit category.
pub fn quillen_check(group: &Arc<FiniteGroup>, p: u64, cap: usize, nil_bound: u64) -> Result<QuillenReport> {
    crate::groups::check_prime(p)?;
    let fp = CoeffRing::PrimeField(p);
    let g_pres = Arc::new(GradedRingPresentation::build(group, fp, cap)?);
    let cat = group.orbit_category_at(p);
    let mut e_pres = Vec::new();
    for e in &cat.objects {
        e_pres.push(Arc::new(GradedRingPresentation::build(e.group(), fp, cap)?));
    }
    quillen_check_with(&g_pres, &e_pres, p, nil_bound)
}

/// As [`quillen_check`], with the presentations supplied (one per object of
/// `orbit_category_at(p)`, in order).
pub fn quillen_check_with(
    g_pres: &Arc<GradedRingPresentation>,
    e_pres: &[Arc<GradedRingPresentation>],
    p: u64,
    nil_bound: u64,
) -> Result<QuillenReport> {
    let group = g_pres.group().clone();
    let fp = CoeffRing::PrimeField(p);
    if g_pres.ring() != fp {
        return Err(Error::RingMismatch);
    }
    let cat = group.orbit_category_at(p);
    if e_pres.len() != cat.objects.len() {
        return Err(Error::PresentationMissing(format!(
            "{} elementary abelian subgroups, {} presentations",
            cat.objects.len(),
            e_pres.len()
        )));
    }
    let cap = e_pres.iter().map(|e| e.cap()).fold(g_pres.cap(), usize::min);
    let mut notes = Vec::new();
    let res_maps = cat
        .objects
        .iter()
        .zip(e_pres)
        .map(|(sub, ep)| restriction_ring_map(g_pres, ep, sub))
        .collect::<Result<Vec<_>>>()?;

    // (i) kernel of restriction in generator degrees.
    let mut degrees: Vec<usize> = g_pres.generators().iter().map(|g| g.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut kernel = Vec::new();
    let mut kernel_nilpotent = true;
    for &d in &degrees {
        if d > cap {
            continue;
        }
        let h = g_pres.cohomology_group(d)?;
        let dim = h.num_generators();
        let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut e = vec![fp.zero(); dim];
            e[k] = fp.one();
            let f = g_pres.express(d, &e)?;
            let mut col = Vec::new();
            for (map, ep) in res_maps.iter().zip(e_pres) {
                let img = map.apply(&f);
                let h_e = ep.cohomology_group(d)?;
                if img.is_zero() {
                    col.extend(vec![fp.zero(); h_e.num_generators()]);
                } else {
                    col.extend(h_e.coords(&ep.evaluate(&img)?.1)?);
                }
            }
            cols.push(col);
        }
        let rows = cols.first().map_or(0, |c| c.len());
        let ker = if rows == 0 {
            Matrix::identity(fp, dim)
        } else {
            kernel_basis(&Matrix::from_columns(fp, rows, &cols))?
        };
        let mut worst = Some(1u64);
        for j in 0..ker.cols() {
            let f = g_pres.express(d, &ker.col(j))?;
            let mut q = p;
            let mut exponent = None;
            while q <= nil_bound && (q as usize) * d <= g_pres.cap() {
                let (n, c) = g_pres.evaluate(&g_pres.poly_ring().pow(&f, q as u32))?;
                if g_pres.cohomology_group(n)?.is_coboundary(&c)? {
                    exponent = Some(q);
                    break;
                }
                q *= p;
            }
            match (exponent, worst) {
                (Some(e), Some(w)) => worst = Some(w.max(e)),
                _ => {
                    worst = None;
                    notes.push(format!("kernel element in degree {d} not shown nilpotent"));
                }
            }
        }
        if ker.cols() == 0 {
            worst = Some(1);
        }
        kernel_nilpotent &= worst.is_some();
        kernel.push((d, ker.cols(), worst));
    }

    // (ii) and (iii) on enumerated points.
    let g_fiber = ProjFiber::reduced(g_pres.clone())?;
    let e_fibers = e_pres.iter().map(|ep| ProjFiber::reduced(ep.clone())).collect::<Result<Vec<_>>>()?;
    let res_images: Vec<Vec<Poly>> = res_maps
        .iter()
        .zip(&e_fibers)
        .map(|(map, ef)| {
            g_fiber.kept().iter().map(|&i| ef.project(&map.target_ring, &map.images[i])).collect()
        })
        .collect();
    let mut morphism_images = Vec::new();
    for m in &cat.morphisms {
        let phi = cat.local_map(m);
        let map = ring_map_along(&e_pres[m.target], &e_pres[m.source], phi)?;
        let ef = &e_fibers[m.source];
        let tf = &e_fibers[m.target];
        let imgs: Vec<Poly> = tf.kept().iter().map(|&i| ef.project(&map.target_ring, &map.images[i])).collect();
        morphism_images.push(imgs);
    }
    let mut surjectivity = Vec::new();
    let mut points_surjective = true;
    let mut orbits_identified = true;
    for e in 1..=2u32 {
        let q = p.pow(e);
        // Preimages of an F_q-point form one Weyl orbit, so they are defined
        // over F_{q²}; work there and keep the Frobenius-stable G-points.
        let g_points = g_fiber.points(2 * e)?;
        let field = g_points.field;
        let rational: Vec<bool> = g_points
            .points
            .iter()
            .map(|a| {
                let frob: Vec<Elem> = a.iter().map(|x| field.pow(x, q)).collect();
                weighted_equivalent(field, &g_points.weights, a, &frob)
            })
            .collect();
        let e_points: Vec<PointSet> = e_fibers.iter().map(|f| f.points(2 * e)).collect::<Result<_>>()?;
        let offsets: Vec<usize> = e_points
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s.len();
                Some(o)
            })
            .collect();
        let total: usize = e_points.iter().map(|s| s.len()).sum();
        let mut image_of = vec![usize::MAX; total];
        let mut hit = vec![false; g_points.len()];
        for (k, set) in e_points.iter().enumerate() {
            for (j, pt) in set.points.iter().enumerate() {
                let img = map_point(e_fibers[k].coordinate_ring(), &res_images[k], set.field, pt);
                match g_points.find(&img) {
                    Some(i) => {
                        hit[i] = true;
                        image_of[offsets[k] + j] = i;
                    }
                    None => {
                        orbits_identified = false;
                        notes.push(format!("a point of subgroup {k} does not land on the G-fiber"));
                    }
                }
            }
        }
        let n_rational = rational.iter().filter(|r| **r).count();
        let n_hit = rational.iter().zip(&hit).filter(|(r, h)| **r && **h).count();
        points_surjective &= n_hit == n_rational;
        surjectivity.push((q, n_rational, n_hit));
        let mut parent: Vec<usize> = (0..total).collect();
        for (m, imgs) in cat.morphisms.iter().zip(&morphism_images) {
            let src = &e_points[m.source];
            for (j, pt) in src.points.iter().enumerate() {
                let img = map_point(e_fibers[m.source].coordinate_ring(), imgs, src.field, pt);
                match e_points[m.target].find(&img) {
                    Some(t) => {
                        let (a, b) = (
                            find_root(&mut parent, offsets[m.source] + j),
                            find_root(&mut parent, offsets[m.target] + t),
                        );
                        parent[a.max(b)] = a.min(b);
                    }
                    None => {
                        orbits_identified = false;
                        notes.push(format!("morphism {} -> {} leaves the target fiber", m.source, m.target));
                    }
                }
            }
        }
        let mut class_of_image: BTreeMap<usize, usize> = BTreeMap::new();
        for x in 0..total {
            if image_of[x] == usize::MAX {
                continue;
            }
            let r = find_root(&mut parent, x);
            match class_of_image.get(&image_of[x]) {
                Some(&c) if c != r => {
                    orbits_identified = false;
                    notes.push("two unrelated subgroup points share an image".to_string());
                }
                Some(_) => {}
                None => {
                    class_of_image.insert(image_of[x], r);
                }
            }
        }
    }
    notes.dedup();
    Ok(QuillenReport {
        group: group.name().to_string(),
        prime: p,
        cap,
        nil_bound,
        subgroups: cat.objects.iter().map(|e| e.elements().to_vec()).collect(),
        kernel,
        kernel_nilpotent,
        surjectivity,
        points_surjective,
        orbits_identified,
        notes,
    })
}

/// Comparison of the two fiber models at one prime, both built on the same
/// integral resolution.
#[derive(Clone, Debug)]
pub struct ReductionComparison {
    pub prime: u64,
    pub q: u64,
    pub reduced_points: usize,
    pub integral_points: usize,
    pub bijective: bool,
}

/// Maps `F_{p^e}`-points of the reduced model to the `H*(G;Z)/(p)` model
/// along reduction of coefficients and checks that this is a bijection.
pub fn compare_fiber_models(group: &Arc<FiniteGroup>, p: u64, cap: usize, e: u32) -> Result<ReductionComparison> {
    let res_z = Arc::new(Resolution::build(group, CoeffRing::Integers, cap + 1, Strategy::Auto)?);
    let pres_z = Arc::new(GradedRingPresentation::from_resolution(res_z.clone(), cap)?);
    let fp = CoeffRing::PrimeField(p);
    let res_p = Arc::new(res_z.change_ring(fp)?);
    let pres_p = Arc::new(GradedRingPresentation::from_resolution(res_p.clone(), cap)?);
    let red = ProjFiber::reduced(pres_p.clone())?;
    let int = ProjFiber::integral(pres_z.clone(), p)?;
    let mut images = Vec::new();
    for &i in int.kept() {
        let g = &pres_z.generators()[i];
        let c: Vec<Elem> = g.class.cocycle().iter().map(|x| fp.coerce_from(&CoeffRing::Integers, x).expect("mod p")).collect();
        let class = CohomologyClass::new(&res_p, g.degree, c)?;
        let poly = pres_p.express(g.degree, &pres_p.coords(&class)?)?;
        images.push(red.project(pres_p.poly_ring(), &poly));
    }
    let a = red.points(e)?;
    let b = int.points(e)?;
    let mut hit = vec![0usize; b.len()];
    let mut inside = true;
    for pt in &a.points {
        let img = map_point(red.coordinate_ring(), &images, a.field, pt);
        match b.find(&img) {
            Some(i) => hit[i] += 1,
            None => inside = false,
        }
    }
    Ok(ReductionComparison {
        prime: p,
        q: p.pow(e),
        reduced_points: a.len(),
        integral_points: b.len(),
        bijective: inside && hit.iter().all(|&h| h == 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use proptest::strategy::Strategy as _;
    use std::sync::OnceLock;

    fn grp(name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::builtin(name).unwrap())
    }

    fn v4_model() -> &'static SpecHModel {
        static M: OnceLock<SpecHModel> = OnceLock::new();
        M.get_or_init(|| stmod_spectrum(&grp("V4"), CoeffRing::Integers, 4).unwrap())
    }

    #[test]
    fn fiber_shapes() {
        let m = v4_model();
        assert_eq!(m.fibers().keys().copied().collect::<Vec<_>>(), vec![2]);
        let f = m.fiber(2).unwrap();
        assert_eq!(f.coordinate_ring().weights, vec![1, 1]);
        assert!(f.ideal().basis.is_empty());
        assert_eq!((0..=4).map(|d| f.hilbert(d)).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert_eq!(f.points(1).unwrap().len(), 3);
        assert_eq!(f.points(2).unwrap().len(), 5);

        let c6 = stmod_spectrum(&grp("C6"), CoeffRing::Integers, 4).unwrap();
        assert_eq!(c6.fibers().keys().copied().collect::<Vec<_>>(), vec![2, 3]);
        for f in c6.fibers().values() {
            assert_eq!(f.points(1).unwrap().len(), 1);
            assert_eq!(f.points(2).unwrap().len(), 1);
        }
        assert!(stmod_spectrum(&grp("S3"), CoeffRing::Rationals, 4).unwrap().is_empty());
        let local = stmod_spectrum(&grp("C6"), CoeffRing::LocalizedIntegers(3), 4).unwrap();
        assert_eq!(local.fibers().keys().copied().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn nilpotents_are_removed() {
        // Mod-3 cohomology of C3 has an exterior class in degree one.
        let m = stmod_spectrum(&grp("C3"), CoeffRing::PrimeField(3), 6).unwrap();
        let f = m.fiber(3).unwrap();
        assert_eq!(f.coordinate_ring().weights, vec![2]);
        assert_eq!(f.points(1).unwrap().len(), 1);
        // Q8 at 2: degree-one classes are nilpotent, leaving one point.
        let q8 = stmod_spectrum(&grp("Q8"), CoeffRing::PrimeField(2), 8).unwrap();
        let f = q8.fiber(2).unwrap();
        assert_eq!(f.points(1).unwrap().len(), 1);
        assert_eq!(f.points(2).unwrap().len(), 1);
    }

    #[test]
    fn missing_presentation() {
        let g = grp("C6");
        let err = SpecHModel::from_presentations(&g, CoeffRing::Integers, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, Error::PresentationMissing(_)));
    }

    #[test]
    fn subset_examples() {
        let m = v4_model();
        let r = m.fiber(2).unwrap().coordinate_ring().clone();
        let x1 = m.subset(2, &[vec![r.var(0)]]).unwrap();
        let x2 = m.subset(2, &[vec![r.var(1)]]).unwrap();
        let x1sq = m.subset(2, &[vec![r.pow(&r.var(0), 2)]]).unwrap();
        let empty = m.empty_subset();
        assert_eq!(x1.union(&empty).unwrap(), x1);
        assert!(x1.intersection(&x2).unwrap().is_empty());
        assert_eq!(x1.included_in(&x1sq).unwrap(), Inclusion::Yes);
        assert_eq!(x1sq.included_in(&x1).unwrap(), Inclusion::Yes);
        assert_eq!(x1.included_in(&x2).unwrap(), Inclusion::No);
        let both = x1.union(&x2).unwrap();
        assert_eq!(both.points(1).unwrap()[&2].len(), 2);
        let c6 = stmod_spectrum(&grp("C6"), CoeffRing::Integers, 3).unwrap();
        assert!(matches!(x1.union(&c6.empty_subset()), Err(Error::ModelMismatch)));
    }

    #[test]
    fn quillen_small_groups() {
        let s3 = grp("S3");
        for p in [2, 3] {
            let r = quillen_check(&s3, p, 6, 8).unwrap();
            assert!(r.passed(), "{:?}", r.to_json());
        }
        let v4 = quillen_check(&grp("V4"), 2, 4, 8).unwrap();
        assert!(v4.passed());
        assert_eq!(v4.surjectivity, vec![(2, 3, 3), (4, 5, 5)]);
    }

    #[test]
    fn reduction_insensitive() {
        for (name, p) in [("C2", 2), ("V4", 2), ("C3", 3), ("C6", 2), ("C6", 3)] {
            for e in 1..=2 {
                let c = compare_fiber_models(&grp(name), p, 6, e).unwrap();
                assert!(c.bijective, "{name} at {p}: {c:?}");
            }
        }
    }

    fn f2_linear_or_quadratic() -> impl proptest::strategy::Strategy<Value = Vec<Poly>> {
        // Homogeneous forms of degree 1 or 2 in two variables over F_2.
        let form = (1u32..=2, 1u8..8).prop_map(|(d, mask)| {
            let r = PolyRing::linear(CoeffRing::PrimeField(2), 2);
            let monos = r.monomials_of_degree(d);
            let terms: Vec<(Monomial, Elem)> = monos
                .into_iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, m)| (m, CoeffRing::PrimeField(2).one()))
                .collect();
            r.from_terms(terms)
        });
        proptest::collection::vec(form, 0..=2)
    }

    fn subset_of(gens: &[Poly]) -> SpecializationClosedSubset {
        let m = v4_model();
        let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        m.subset(2, &[gens]).unwrap()
    }

    fn same(a: &SpecializationClosedSubset, b: &SpecializationClosedSubset) -> bool {
        a.same_as(b).unwrap() == Inclusion::Yes
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn subset_ops_form_a_distributive_lattice(a in f2_linear_or_quadratic(), b in f2_linear_or_quadratic(), c in f2_linear_or_quadratic()) {
            let (a, b, c) = (subset_of(&a), subset_of(&b), subset_of(&c));
            prop_assert!(same(&a.union(&a).unwrap(), &a));
            prop_assert!(same(&a.intersection(&a).unwrap(), &a));
            prop_assert!(same(&a.union(&b).unwrap(), &b.union(&a).unwrap()));
            prop_assert!(same(&a.intersection(&b).unwrap(), &b.intersection(&a).unwrap()));
            prop_assert!(same(&a.union(&a.intersection(&b).unwrap()).unwrap(), &a));
            prop_assert!(same(&a.intersection(&a.union(&b).unwrap()).unwrap(), &a));
            let lhs = a.intersection(&b.union(&c).unwrap()).unwrap();
            let rhs = a.intersection(&b).unwrap().union(&a.intersection(&c).unwrap()).unwrap();
            prop_assert!(same(&lhs, &rhs));
            // Point sets agree with the symbolic comparison.
            let pl = lhs.points(2).unwrap()[&2].len();
            let pr = rhs.points(2).unwrap()[&2].len();
            prop_assert_eq!(pl, pr);
        }
    }
}
