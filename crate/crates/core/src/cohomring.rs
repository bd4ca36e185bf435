//! Finite presentations of cohomology rings through a degree cap, module
//! structures on `H*(G; End M)`, and ring maps induced by homomorphisms.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::{AbelianGroup, CoeffRing, EchelonSpan, Elem, Matrix, Monomial, Poly, PolyRing, Solver};
use crate::groups::{FiniteGroup, Subgroup};
use crate::homalg::{
    act_on_module_cocycle, cohomology, cup_product, CohomologyClass, CohomologyGroup, ComparisonMap, Resolution, Strategy,
};
use crate::lattices::Lattice;

#[derive(Clone, Debug)]
pub struct RingGenerator {
    pub name: String,
    pub degree: usize,
    pub class: CohomologyClass,
}

/// Span of vectors inside `R^c / diag(moduli)`.
struct QuotientSpan {
    ring: CoeffRing,
    solver: Option<Solver>,
    ncols: usize,
    dim: usize,
}

impl QuotientSpan {
    fn new(ring: CoeffRing, moduli: &[Elem], vectors: &[Vec<Elem>]) -> Result<Self> {
        let dim = moduli.len();
        let mut cols: Vec<Vec<Elem>> = vectors.to_vec();
        for (k, m) in moduli.iter().enumerate() {
            if !ring.is_zero(m) {
                let mut e = vec![ring.zero(); dim];
                e[k] = *m;
                cols.push(e);
            }
        }
        let solver = if dim == 0 || cols.is_empty() {
            None
        } else {
            Some(Solver::new(&Matrix::from_columns(ring, dim, &cols))?)
        };
        Ok(QuotientSpan { ring, solver, ncols: vectors.len(), dim })
    }

    /// Coefficients on the spanning vectors, if `v` lies in the span.
    fn express(&self, v: &[Elem]) -> Result<Option<Vec<Elem>>> {
        if v.iter().all(|x| self.ring.is_zero(x)) {
            return Ok(Some(vec![self.ring.zero(); self.ncols]));
        }
        let Some(s) = &self.solver else { return Ok(None) };
        Ok(s.solve(v)?.map(|mut y| {
            y.truncate(self.ncols);
            y
        }))
    }

    fn contains(&self, v: &[Elem]) -> Result<bool> {
        Ok(self.express(v)?.is_some())
    }

    fn spans_everything(&self) -> Result<bool> {
        for k in 0..self.dim {
            let mut e = vec![self.ring.zero(); self.dim];
            e[k] = self.ring.one();
            if !self.contains(&e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `Σ c_i v_i` vanishes in the quotient.
    fn is_relation(ring: CoeffRing, moduli: &[Elem], vectors: &[Vec<Elem>], c: &[Elem]) -> bool {
        (0..moduli.len()).all(|k| {
            let s = vectors.iter().zip(c).fold(ring.zero(), |acc, (v, x)| ring.add(&acc, &ring.mul(&v[k], x)));
            if ring.is_zero(&moduli[k]) {
                ring.is_zero(&s)
            } else {
                ring.divides(&moduli[k], &s)
            }
        })
    }

    /// Generators of the relation module among the spanning vectors.
    fn relations(&self) -> Result<Vec<Vec<Elem>>> {
        let ring = self.ring;
        let Some(s) = &self.solver else {
            // Nothing to span against: every coefficient vector is a relation.
            return Ok((0..self.ncols)
                .map(|i| {
                    let mut e = vec![ring.zero(); self.ncols];
                    e[i] = ring.one();
                    e
                })
                .collect());
        };
        let k = s.kernel();
        Ok((0..k.cols())
            .map(|j| k.col(j)[..self.ncols].to_vec())
            .filter(|v| v.iter().any(|x| !ring.is_zero(x)))
            .collect())
    }
}

/// `H*(G; R)` presented by generators and relations, certified through `cap`.
pub struct GradedRingPresentation {
    group: Arc<FiniteGroup>,
    ring: CoeffRing,
    res: Arc<Resolution>,
    cap: usize,
    generators: Vec<RingGenerator>,
    relations: Vec<Poly>,
    poly_ring: PolyRing,
    groups: Vec<CohomologyGroup>,
    memo: Mutex<HashMap<Monomial, CohomologyClass>>,
}

impl std::fmt::Debug for GradedRingPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GradedRingPresentation({})", self.to_json())
    }
}

/// Scales a polynomial so its leading coefficient is canonical (positive over
/// Z, one over a field).
fn normalize(r: &PolyRing, p: &Poly) -> Poly {
    let Some(lead) = p.leading() else { return p.clone() };
    let (_, unit) = r.coeffs.associate(&lead.coeff);
    let inv = r.coeffs.inv(&unit).expect("unit");
    r.scale(p, &inv)
}

fn trim(m: &[u32]) -> Monomial {
    let mut v = m.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl GradedRingPresentation {
    pub fn build(group: &Arc<FiniteGroup>, ring: CoeffRing, cap: usize) -> Result<Self> {
        let res = Resolution::build(group, ring, cap + 1, Strategy::Auto)?;
        Self::from_resolution(Arc::new(res), cap)
    }

    /// Uses an existing resolution, which must reach degree `cap + 1`.
    pub fn from_resolution(res: Arc<Resolution>, cap: usize) -> Result<Self> {
        if cap < 2 {
            return Err(Error::CapTooSmall(format!("presentations need cap ≥ 2, got {cap}")));
        }
        if res.cap() < cap + 1 {
            return Err(Error::CapTooSmall(format!("resolution reaches degree {}, need {}", res.cap(), cap + 1)));
        }
        let group = res.group().clone();
        let ring = res.ring();
        let triv = Lattice::trivial(&group, ring);
        let groups: Vec<CohomologyGroup> = (0..=cap).map(|n| cohomology(&res, &triv, n)).collect::<Result<_>>()?;
        let mut pres = GradedRingPresentation {
            group,
            ring,
            res: res.clone(),
            cap,
            generators: Vec::new(),
            relations: Vec::new(),
            poly_ring: PolyRing::new(ring, vec![], vec![]),
            groups,
            memo: Mutex::new(HashMap::new()),
        };
        pres.memo.lock().expect("memo").insert(vec![], CohomologyClass::one(&res));
        for n in 1..=cap {
            pres.extend_degree(n)?;
        }
        Ok(pres)
    }

    fn extend_degree(&mut self, n: usize) -> Result<()> {
        let ring = self.ring;
        let h = &self.groups[n];
        let moduli = h.moduli().to_vec();
        let mut monos = self.poly_ring.monomials_of_degree(n as u32);
        let mut vecs: Vec<Vec<Elem>> = Vec::with_capacity(monos.len());
        for m in &monos {
            let c = self.evaluate_monomial(m)?;
            vecs.push(h.coords(c.cocycle())?);
        }
        // New generators, greedily in quotient-basis order.
        let mut span = QuotientSpan::new(ring, &moduli, &vecs)?;
        for k in 0..h.num_generators() {
            let mut e = vec![ring.zero(); moduli.len()];
            e[k] = ring.one();
            if span.contains(&e)? {
                continue;
            }
            let idx = self.generators.len();
            let class = CohomologyClass::new(&self.res, n, h.generator(k))?;
            let name = format!("x{}", idx + 1);
            self.generators.push(RingGenerator { name, degree: n, class: class.clone() });
            self.poly_ring = PolyRing::new(
                ring,
                self.generators.iter().map(|g| g.degree as u32).collect(),
                self.generators.iter().map(|g| g.name.clone()).collect(),
            );
            let mut mono = vec![0; idx + 1];
            mono[idx] = 1;
            self.memo.lock().expect("memo").insert(mono.clone(), class);
            for m in monos.iter_mut() {
                m.push(0);
            }
            monos.push(mono);
            vecs.push(e);
            span = QuotientSpan::new(ring, &moduli, &vecs)?;
        }
        for r in self.relations.iter_mut() {
            // Pad earlier relations with the new variables.
            let padded: Vec<(Monomial, Elem)> = r
                .terms()
                .iter()
                .map(|t| {
                    let mut e = t.exps.clone();
                    e.resize(self.poly_ring.nvars(), 0);
                    (e, t.coeff)
                })
                .collect();
            *r = self.poly_ring.from_terms(padded);
        }
        if !span.spans_everything()? {
            return Err(Error::CapTooSmall(format!("could not certify generation in degree {n}")));
        }
        // Relations not already implied by multiples of earlier ones.
        let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut implied = EchelonSpan::new(ring, monos.len());
        for r in &self.relations {
            let d = self.poly_ring.degree(r).unwrap_or(0) as usize;
            if d >= n {
                continue;
            }
            for m in self.poly_ring.monomials_of_degree((n - d) as u32) {
                let prod = self.poly_ring.mul_term(r, &m, &ring.one());
                let mut v = vec![ring.zero(); monos.len()];
                for t in prod.terms() {
                    v[index[&t.exps]] = t.coeff;
                }
                if QuotientSpan::is_relation(ring, &moduli, &vecs, &v) {
                    implied.insert(v);
                }
            }
        }
        for rel in span.relations()? {
            if implied.insert(rel.clone()) {
                let p = self.poly_ring.from_terms(monos.iter().cloned().zip(rel));
                self.relations.push(normalize(&self.poly_ring, &p));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn resolution(&self) -> &Arc<Resolution> {
        &self.res
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[RingGenerator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.poly_ring
    }

    pub fn cohomology_group(&self, n: usize) -> Result<&CohomologyGroup> {
        self.groups.get(n).ok_or(Error::CapExceeded { requested: n as i64, cap: self.cap })
    }

    /// `H^n` for `n ≤ cap`.
    pub fn hilbert(&self) -> Vec<AbelianGroup> {
        self.groups.iter().map(|h| h.group().clone()).collect()
    }

    /// Class of a monomial in the generators (evaluated left to right).
    pub fn evaluate_monomial(&self, m: &[u32]) -> Result<CohomologyClass> {
        let key = trim(m);
        if let Some(c) = self.memo.lock().expect("memo").get(&key) {
            return Ok(c.clone());
        }
        let last = key.len() - 1;
        let mut prefix = key.clone();
        prefix[last] -= 1;
        let head = self.evaluate_monomial(&prefix)?;
        let c = cup_product(&head, &self.generators[last].class)?;
        self.memo.lock().expect("memo").insert(key, c.clone());
        Ok(c)
    }

    /// Cocycle of a homogeneous polynomial in the generators.
    pub fn evaluate(&self, p: &Poly) -> Result<(usize, Vec<Elem>)> {
        let ring = self.ring;
        let Some(d) = self.poly_ring.degree(p) else {
            return Ok((0, vec![ring.zero()]));
        };
        if !self.poly_ring.is_homogeneous(p) {
            return Err(Error::NonHomogeneousInput(self.poly_ring.format(p)));
        }
        let d = d as usize;
        if d > self.cap {
            return Err(Error::CapExceeded { requested: d as i64, cap: self.cap });
        }
        let mut acc = vec![ring.zero(); self.res.rank(d)];
        for t in p.terms() {
            let c = self.evaluate_monomial(&t.exps)?;
            for (a, x) in acc.iter_mut().zip(c.cocycle()) {
                *a = ring.add(a, &ring.mul(&t.coeff, x));
            }
        }
        Ok((d, acc))
    }

    pub fn coords(&self, class: &CohomologyClass) -> Result<Vec<Elem>> {
        self.cohomology_group(class.degree())?.coords(class.cocycle())
    }

    /// A polynomial in the generators whose class has the given coordinates.
    pub fn express(&self, n: usize, coords: &[Elem]) -> Result<Poly> {
        let h = self.cohomology_group(n)?;
        let monos = self.poly_ring.monomials_of_degree(n as u32);
        let vecs: Vec<Vec<Elem>> = monos
            .iter()
            .map(|m| h.coords(self.evaluate_monomial(m)?.cocycle()))
            .collect::<Result<_>>()?;
        let span = QuotientSpan::new(self.ring, h.moduli(), &vecs)?;
        let c = span
            .express(coords)?
            .ok_or_else(|| Error::CapTooSmall(format!("class in degree {n} is not in the monomial span")))?;
        Ok(self.poly_ring.from_terms(monos.into_iter().zip(c)))
    }

    /// Linear relations in degree `n` among monomials in the allowed variables.
    pub fn degree_relations(&self, n: usize, allowed: &[bool]) -> Result<Vec<Poly>> {
        let h = self.cohomology_group(n)?;
        let monos: Vec<Monomial> = self
            .poly_ring
            .monomials_of_degree(n as u32)
            .into_iter()
            .filter(|m| m.iter().zip(allowed).all(|(e, ok)| *e == 0 || *ok))
            .collect();
        let vecs: Vec<Vec<Elem>> = monos
            .iter()
            .map(|m| h.coords(self.evaluate_monomial(m)?.cocycle()))
            .collect::<Result<_>>()?;
        let span = QuotientSpan::new(self.ring, h.moduli(), &vecs)?;
        Ok(span
            .relations()?
            .into_iter()
            .map(|r| self.poly_ring.from_terms(monos.iter().cloned().zip(r)))
            .collect())
    }

    /// Whether every listed relation evaluates to a coboundary.
    pub fn verify_relations(&self) -> Result<bool> {
        for r in &self.relations {
            let (d, c) = self.evaluate(r)?;
            if !self.groups[d].is_coboundary(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether monomials span each `H^n`, recomputed from scratch.
    pub fn verify_generation(&self) -> Result<bool> {
        for n in 1..=self.cap {
            let h = &self.groups[n];
            let vecs: Vec<Vec<Elem>> = self
                .poly_ring
                .monomials_of_degree(n as u32)
                .iter()
                .map(|m| h.coords(self.evaluate_monomial(m)?.cocycle()))
                .collect::<Result<_>>()?;
            if !QuotientSpan::new(self.ring, h.moduli(), &vecs)?.spans_everything()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn hilbert_json(&self, g: &AbelianGroup) -> serde_json::Value {
        if self.ring.is_field() {
            json!(g.dimension())
        } else {
            g.to_json()
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "group": self.group.name(),
            "ring": self.ring.descriptor(),
            "generators": self.generators.iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect::<Vec<_>>(),
            "relations": self.relations.iter().map(|r| self.poly_ring.format(r)).collect::<Vec<_>>(),
            "certified_cap": self.cap,
            "hilbert": self.groups.iter().map(|h| self.hilbert_json(h.group())).collect::<Vec<_>>(),
        })
    }
}

pub fn ring_presentation(group: &Arc<FiniteGroup>, ring: CoeffRing, cap: usize) -> Result<GradedRingPresentation> {
    GradedRingPresentation::build(group, ring, cap)
}

/// `H*(G; End_R(M))` as a graded module over a ring presentation.
#[derive(Debug)]
pub struct GradedModulePresentation {
    base: Arc<GradedRingPresentation>,
    lattice: Lattice,
    end: Lattice,
    cap: usize,
    groups: Vec<CohomologyGroup>,
    /// `(degree, coordinates)` of each module generator.
    generators: Vec<(usize, Vec<Elem>)>,
    /// `(ring generator, n)` ↦ matrix of multiplication `H^n → H^{n+d}`.
    actions: BTreeMap<(usize, usize), Matrix>,
}

impl GradedModulePresentation {
    pub fn build(m: &Lattice, base: &Arc<GradedRingPresentation>, cap: usize) -> Result<Self> {
        if m.ring() != base.ring() {
            return Err(Error::RingMismatch);
        }
        if m.group() != base.group() {
            return Err(Error::GroupMismatch);
        }
        if cap > base.cap() {
            return Err(Error::CapExceeded { requested: cap as i64, cap: base.cap() });
        }
        let ring = m.ring();
        let end = m.end();
        let res = base.resolution();
        let groups: Vec<CohomologyGroup> = (0..=cap).map(|n| cohomology(res, &end, n)).collect::<Result<_>>()?;
        let mut actions = BTreeMap::new();
        for (gi, g) in base.generators().iter().enumerate() {
            for n in 0..=cap {
                if n + g.degree > cap {
                    break;
                }
                let (src, dst) = (&groups[n], &groups[n + g.degree]);
                let cols: Vec<Vec<Elem>> = (0..src.num_generators())
                    .map(|k| {
                        let psi = src.generator(k);
                        let img = act_on_module_cocycle(&g.class, &psi, n, &end)?;
                        dst.coords(&img)
                    })
                    .collect::<Result<_>>()?;
                actions.insert((gi, n), Matrix::from_columns(ring, dst.num_generators(), &cols));
            }
        }
        let mut pres = GradedModulePresentation {
            base: base.clone(),
            lattice: m.clone(),
            end,
            cap,
            groups,
            generators: Vec::new(),
            actions,
        };
        pres.choose_generators()?;
        Ok(pres)
    }

    fn choose_generators(&mut self) -> Result<()> {
        let ring = self.lattice.ring();
        for n in 0..=self.cap {
            let h = &self.groups[n];
            let mut vecs = Vec::new();
            for (d, c) in &self.generators {
                for mono in self.base.poly_ring().monomials_of_degree((n - d) as u32) {
                    vecs.push(self.act_monomial(&mono, *d, c)?);
                }
            }
            let mut span = QuotientSpan::new(ring, h.moduli(), &vecs)?;
            for k in 0..h.num_generators() {
                let mut e = vec![ring.zero(); h.num_generators()];
                e[k] = ring.one();
                if !span.contains(&e)? {
                    self.generators.push((n, e.clone()));
                    vecs.push(e);
                    span = QuotientSpan::new(ring, h.moduli(), &vecs)?;
                }
            }
        }
        Ok(())
    }

    /// Coordinates of `mono · c` for `c ∈ H^d`, applying generators one by one.
    pub fn act_monomial(&self, mono: &[u32], d: usize, c: &[Elem]) -> Result<Vec<Elem>> {
        let mut cur = c.to_vec();
        let mut deg = d;
        for (gi, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                let a = self
                    .actions
                    .get(&(gi, deg))
                    .ok_or(Error::CapExceeded { requested: (deg + self.base.generators()[gi].degree) as i64, cap: self.cap })?;
                let img = a.apply(&cur);
                deg += self.base.generators()[gi].degree;
                let h = &self.groups[deg];
                cur = img.iter().zip(h.moduli()).map(|(x, m)| self.lattice.ring().residue(x, m)).collect();
            }
        }
        Ok(cur)
    }

    pub fn base(&self) -> &Arc<GradedRingPresentation> {
        &self.base
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coefficients(&self) -> &Lattice {
        &self.end
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[(usize, Vec<Elem>)] {
        &self.generators
    }

    pub fn group_in_degree(&self, n: usize) -> Result<&CohomologyGroup> {
        self.groups.get(n).ok_or(Error::CapExceeded { requested: n as i64, cap: self.cap })
    }

    pub fn action(&self, generator: usize, n: usize) -> Option<&Matrix> {
        self.actions.get(&(generator, n))
    }

    /// Coordinates of the identity of `M` in `H^0(G; End M)`.
    pub fn identity_coords(&self) -> Result<Vec<Elem>> {
        let id = identity_vector(&self.lattice);
        self.groups[0].coords(&id)
    }

    /// Checks `x·(y·ψ) = (y·x)·ψ` for generator pairs through the cap.
    pub fn check_associativity(&self) -> Result<bool> {
        let ring = self.lattice.ring();
        let gens = self.base.generators();
        for (i, x) in gens.iter().enumerate() {
            for (j, y) in gens.iter().enumerate() {
                let yx = cup_product(&y.class, &x.class)?;
                for n in 0..=self.cap {
                    if n + x.degree + y.degree > self.cap {
                        break;
                    }
                    let src = &self.groups[n];
                    let dst = &self.groups[n + x.degree + y.degree];
                    for k in 0..src.num_generators() {
                        let mut e = vec![ring.zero(); src.num_generators()];
                        e[k] = ring.one();
                        let mut mono = vec![0u32; gens.len()];
                        mono[j] += 1;
                        let step = self.act_monomial(&mono, n, &e)?;
                        let mut mono = vec![0u32; gens.len()];
                        mono[i] += 1;
                        let lhs = self.act_monomial(&mono, n + y.degree, &step)?;
                        let psi = src.generator(k);
                        let rhs = dst.coords(&act_on_module_cocycle(&yx, &psi, n, &self.end)?)?;
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "base": self.base.to_json(),
            "generators": self.generators.iter().map(|(d, _)| json!({"degree": d})).collect::<Vec<_>>(),
            "hilbert": self.groups.iter().map(|h| self.base.hilbert_json(h.group())).collect::<Vec<_>>(),
            "certified_cap": self.cap,
        })
    }
}

/// `vec(id_M)` in the row-major coordinates of `End(M)`.
pub fn identity_vector(m: &Lattice) -> Vec<Elem> {
    let r = m.rank();
    let ring = m.ring();
    (0..r * r).map(|k| if k / r == k % r { ring.one() } else { ring.zero() }).collect()
}

pub fn end_module_presentation(m: &Lattice, base: &Arc<GradedRingPresentation>, cap: usize) -> Result<GradedModulePresentation> {
    GradedModulePresentation::build(m, base, cap)
}

/// Ring map `H*(G) → H*(H)` induced by a homomorphism `φ: H → G`, with each
/// generator of the source sent to a polynomial in the target's generators.
#[derive(Clone, Debug)]
pub struct RingMap {
    pub images: Vec<Poly>,
    pub target_ring: PolyRing,
    pub source_ring: PolyRing,
}

impl RingMap {
    pub fn apply(&self, p: &Poly) -> Poly {
        self.source_ring.substitute(p, &self.target_ring, &self.images)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .source_ring
            .names
            .iter()
            .zip(&self.images)
            .map(|(n, p)| json!({"generator": n, "image": self.target_ring.format(p)}))
            .collect::<Vec<_>>())
    }
}

/// Ring map along `φ: H → G` (`phi[h]` is the image of `h`).
pub fn ring_map_along(
    source: &GradedRingPresentation,
    target: &GradedRingPresentation,
    phi: Vec<usize>,
) -> Result<RingMap> {
    let depth = source.generators().iter().map(|g| g.degree).max().unwrap_or(0);
    if depth > target.cap() {
        return Err(Error::CapExceeded { requested: depth as i64, cap: target.cap() });
    }
    let cmp = ComparisonMap::new(target.resolution(), source.resolution(), phi, depth)?;
    let mut images = Vec::new();
    for g in source.generators() {
        let pulled = cmp.pull_back(&g.class)?;
        let coords = target.coords(&pulled)?;
        images.push(target.express(g.degree, &coords)?);
    }
    Ok(RingMap { images, target_ring: target.poly_ring().clone(), source_ring: source.poly_ring().clone() })
}

/// Restriction `H*(G) → H*(E)` for a subgroup `E`.
pub fn restriction_ring_map(
    g_pres: &GradedRingPresentation,
    e_pres: &GradedRingPresentation,
    sub: &Subgroup,
) -> Result<RingMap> {
    if sub.parent().as_ref() != g_pres.group().as_ref() || sub.group().as_ref() != e_pres.group().as_ref() {
        return Err(Error::NotASubgroup("presentations do not match the subgroup".into()));
    }
    let phi = (0..sub.order()).map(|x| sub.inclusion(x)).collect();
    ring_map_along(g_pres, e_pres, phi)
}
