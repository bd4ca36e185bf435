//! R[G]-lattices given by action matrices, equivariant maps, and the standard
//! functors between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactalg::{kernel_basis, CoeffRing, Elem, Matrix, Solver};
use crate::groups::{FiniteGroup, Subgroup};

/// Finitely generated R[G]-module with free underlying R-module. `action[g]`
/// acts on column vectors.
#[derive(Clone, Debug)]
pub struct Lattice {
    group: Arc<FiniteGroup>,
    ring: CoeffRing,
    rank: usize,
    action: Vec<Matrix>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.group == other.group && self.action == other.action
    }
}

impl Eq for Lattice {}

impl Lattice {
    pub fn new(group: Arc<FiniteGroup>, ring: CoeffRing, action: Vec<Matrix>) -> Result<Self> {
        let n = group.order();
        if action.len() != n {
            return Err(Error::InvalidLattice(format!("{} action matrices for a group of order {n}", action.len())));
        }
        let rank = action[0].rows();
        for m in &action {
            if m.shape() != (rank, rank) || m.ring() != ring {
                return Err(Error::InvalidLattice("action matrices must be square over the lattice ring".into()));
            }
        }
        if !action[0].is_identity() {
            return Err(Error::InvalidLattice("identity must act trivially".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if action[a].dot(&action[b]) != action[group.mul(a, b)] {
                    return Err(Error::InvalidLattice(format!("action is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(Lattice { group, ring, rank, action })
    }

    /// Builds the action from matrices for some elements, closing under products.
    pub fn from_partial(group: Arc<FiniteGroup>, ring: CoeffRing, given: &BTreeMap<usize, Matrix>) -> Result<Self> {
        let n = group.order();
        let rank = match given.values().next() {
            Some(m) => m.rows(),
            None => return Err(Error::InvalidLattice("no action matrices given".into())),
        };
        let mut action: Vec<Option<Matrix>> = vec![None; n];
        action[0] = Some(Matrix::identity(ring, rank));
        for (&g, m) in given {
            if g >= n {
                return Err(Error::InvalidLattice(format!("element {g} out of range")));
            }
            if m.shape() != (rank, rank) {
                return Err(Error::InvalidLattice("action matrices must be square of one size".into()));
            }
            action[g] = Some(m.clone());
        }
        let mut frontier: Vec<usize> = (0..n).filter(|&g| action[g].is_some()).collect();
        while let Some(a) = frontier.pop() {
            for &b in given.keys() {
                let c = group.mul(a, b);
                if action[c].is_none() {
                    action[c] = Some(action[a].as_ref().unwrap().dot(&given[&b]));
                    frontier.push(c);
                }
            }
        }
        let action: Option<Vec<Matrix>> = action.into_iter().collect();
        let action = action.ok_or_else(|| Error::InvalidLattice("given elements do not generate the group".into()))?;
        Self::new(group, ring, action)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn trivial(group: &Arc<FiniteGroup>, ring: CoeffRing) -> Self {
        let action = vec![Matrix::identity(ring, 1); group.order()];
        Lattice { group: group.clone(), ring, rank: 1, action }
    }

    /// `R[G]` with basis `e_g` and left translation.
    pub fn regular(group: &Arc<FiniteGroup>, ring: CoeffRing) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|x| {
                let mut m = Matrix::zeros(ring, n, n);
                for g in 0..n {
                    m.set(group.mul(x, g), g, ring.one());
                }
                m
            })
            .collect();
        Lattice { group: group.clone(), ring, rank: n, action }
    }

    /// `R[G/H]` with basis the left cosets, in least-representative order.
    pub fn permutation(sub: &Subgroup, ring: CoeffRing) -> Self {
        Self::induce(&Lattice::trivial(sub.group(), ring), sub).expect("trivial lattice over the subgroup")
    }

    /// Rank-1 lattice where `G \ H` acts by −1, for `H` of index 2.
    pub fn sign(sub: &Subgroup, ring: CoeffRing) -> Result<Self> {
        if sub.index() != 2 {
            return Err(Error::InvalidSubgroup("sign lattice needs an index-2 subgroup".into()));
        }
        let g = sub.parent();
        let action = (0..g.order())
            .map(|x| {
                let s = if sub.contains(x) { ring.one() } else { ring.neg(&ring.one()) };
                Matrix::scalar(ring, 1, s)
            })
            .collect();
        Ok(Lattice { group: g.clone(), ring, rank: 1, action })
    }

    /// Kernel of the augmentation `R[G/H] -> R`, basis `e_i - e_last`.
    pub fn reduced_permutation(sub: &Subgroup, ring: CoeffRing) -> Result<Self> {
        let perm = Self::permutation(sub, ring);
        let k = perm.rank;
        if k < 2 {
            return Err(Error::InvalidSubgroup("reduced permutation lattice needs a proper subgroup".into()));
        }
        let inc = Matrix::from_fn(ring, k, k - 1, |i, j| {
            if i == j {
                ring.one()
            } else if i == k - 1 {
                ring.neg(&ring.one())
            } else {
                ring.zero()
            }
        });
        let emb = EquivariantMapBuilder::sublattice(&perm, &inc)?;
        Ok(emb)
    }

    pub fn change_ring(&self, target: CoeffRing) -> Result<Self> {
        let action = self.action.iter().map(|m| m.change_ring(target)).collect::<Result<Vec<_>>>()?;
        Ok(Lattice { group: self.group.clone(), ring: target, rank: self.rank, action })
    }

    fn check_compatible(&self, other: &Lattice) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Lattice) -> Result<Self> {
        self.check_compatible(other)?;
        let (a, b) = (self.rank, other.rank);
        let r = self.ring;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| {
                Matrix::from_fn(r, a + b, a + b, |i, j| match (i < a, j < a) {
                    (true, true) => *x.get(i, j),
                    (false, false) => *y.get(i - a, j - a),
                    _ => r.zero(),
                })
            })
            .collect();
        Ok(Lattice { group: self.group.clone(), ring: r, rank: a + b, action })
    }

    /// Diagonal action on `M ⊗ N`, basis index `i * rank(N) + j`.
    pub fn tensor(&self, other: &Lattice) -> Result<Self> {
        self.check_compatible(other)?;
        let action = self.action.iter().zip(&other.action).map(|(x, y)| x.kron(y)).collect();
        Ok(Lattice { group: self.group.clone(), ring: self.ring, rank: self.rank * other.rank, action })
    }

    /// `Hom_R(M, N)` with `g·f = ρ_N(g) f ρ_M(g)⁻¹`; `f` is vectorized row-major,
    /// index `a * rank(M) + b` for entry `f[a][b]`.
    pub fn hom(&self, target: &Lattice) -> Result<Self> {
        self.check_compatible(target)?;
        let g = &self.group;
        let action = (0..g.order())
            .map(|x| target.action[x].kron(&self.action[g.inv(x)].transpose()))
            .collect();
        Ok(Lattice { group: g.clone(), ring: self.ring, rank: self.rank * target.rank, action })
    }

    pub fn dual(&self) -> Self {
        let g = &self.group;
        let action = (0..g.order()).map(|x| self.action[g.inv(x)].transpose()).collect();
        Lattice { group: g.clone(), ring: self.ring, rank: self.rank, action }
    }

    pub fn end(&self) -> Self {
        self.hom(self).expect("same lattice")
    }

    /// Restriction to a subgroup of this lattice's group.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Self> {
        if **sub.parent() != *self.group {
            return Err(Error::NotASubgroup("subgroup of a different group".into()));
        }
        let action = sub.elements().iter().map(|&x| self.action[x].clone()).collect();
        Ok(Lattice { group: sub.group().clone(), ring: self.ring, rank: self.rank, action })
    }

    /// `ind_H^G M = ⊕_c t_c ⊗ M`, basis index `c * rank(M) + i`, with `t_c` the
    /// least coset representatives.
    pub fn induce(&self, sub: &Subgroup) -> Result<Self> {
        if **sub.group() != *self.group {
            return Err(Error::NotASubgroup("lattice does not live on this subgroup".into()));
        }
        let g = sub.parent();
        let reps = sub.left_coset_reps();
        let (k, r) = (reps.len(), self.rank);
        let ring = self.ring;
        let action = (0..g.order())
            .map(|x| {
                let mut m = Matrix::zeros(ring, k * r, k * r);
                for (c, &t) in reps.iter().enumerate() {
                    let (c2, h) = sub.coset_decompose(&reps, g.mul(x, t));
                    let rho = &self.action[h];
                    for i in 0..r {
                        for j in 0..r {
                            m.set(c2 * r + i, c * r + j, *rho.get(i, j));
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Lattice { group: g.clone(), ring, rank: k * r, action })
    }

    /// `Σ_g ρ(g)`.
    pub fn norm_matrix(&self) -> Matrix {
        let mut acc = Matrix::zeros(self.ring, self.rank, self.rank);
        for m in &self.action {
            acc = acc.add(m).expect("same shape");
        }
        acc
    }

    /// Matrix of the transfer `f ↦ Σ_g ρ_N(g) f ρ_M(g)⁻¹` on row-major `vec(f)`.
    pub fn transfer_matrix(&self, target: &Lattice) -> Result<Matrix> {
        Ok(self.hom(target)?.norm_matrix())
    }

    /// Basis of `Hom_{R[G]}(M, N)` as vectorized matrices (columns).
    pub fn equivariant_hom_basis(&self, target: &Lattice) -> Result<Matrix> {
        self.check_compatible(target)?;
        let ring = self.ring;
        let (rm, rn) = (self.rank, target.rank);
        let gens = self.group.generating_set();
        if gens.is_empty() {
            return Ok(Matrix::identity(ring, rm * rn));
        }
        // f ρ_M(g) - ρ_N(g) f = 0, stacked over generators.
        let mut sys: Option<Matrix> = None;
        for &g in &gens {
            let left = Matrix::identity(ring, rn).kron(&self.action[g].transpose());
            let right = target.action[g].kron(&Matrix::identity(ring, rm));
            let block = left.sub(&right)?;
            sys = Some(match sys {
                None => block,
                Some(s) => s.vstack(&block),
            });
        }
        kernel_basis(&sys.unwrap())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut action = serde_json::Map::new();
        for (g, m) in self.action.iter().enumerate() {
            action.insert(g.to_string(), m.to_json());
        }
        serde_json::json!({ "ring": self.ring.descriptor(), "rank": self.rank, "action": action })
    }

    /// Parses `{"ring": ..., "rank": r, "action": {"g": [[...]]}}`; the listed
    /// elements must generate the group.
    pub fn from_json(group: &Arc<FiniteGroup>, v: &serde_json::Value) -> Result<Self> {
        let ring = CoeffRing::parse(v["ring"].as_str().ok_or_else(|| Error::Parse("lattice needs a ring".into()))?)?;
        let rank = v["rank"].as_u64().ok_or_else(|| Error::Parse("lattice needs a rank".into()))? as usize;
        let obj = v["action"].as_object().ok_or_else(|| Error::Parse("lattice needs an action object".into()))?;
        let mut given = BTreeMap::new();
        for (k, m) in obj {
            let g: usize = k.parse().map_err(|_| Error::Parse(format!("bad element key {k}")))?;
            let mat = Matrix::from_json(ring, m)?;
            if mat.shape() != (rank, rank) {
                return Err(Error::InvalidLattice(format!("action of {g} is not {rank}x{rank}")));
            }
            given.insert(g, mat);
        }
        if given.is_empty() && group.order() == 1 {
            return Ok(Lattice { group: group.clone(), ring, rank, action: vec![Matrix::identity(ring, rank)] });
        }
        Self::from_partial(group.clone(), ring, &given)
    }

    /// `P ρ(g) P⁻¹` for an invertible `P`.
    pub fn conjugate(&self, p: &Matrix, p_inv: &Matrix) -> Self {
        let action = self.action.iter().map(|m| p.dot(m).dot(p_inv)).collect();
        Lattice { group: self.group.clone(), ring: self.ring, rank: self.rank, action }
    }
}

/// Helpers for sublattices and quotients given by explicit bases.
pub struct EquivariantMapBuilder;

impl EquivariantMapBuilder {
    /// The G-stable saturated sublattice spanned by the columns of `basis`.
    pub fn sublattice(m: &Lattice, basis: &Matrix) -> Result<Lattice> {
        let ring = m.ring;
        let solver = Solver::new(basis)?;
        let k = basis.cols();
        let mut action = Vec::with_capacity(m.group.order());
        for g in 0..m.group.order() {
            let img = m.action[g].dot(basis);
            let mut cols = Vec::with_capacity(k);
            for j in 0..k {
                let c = solver
                    .solve(&img.col(j))?
                    .ok_or_else(|| Error::InvalidLattice("span is not G-stable".into()))?;
                cols.push(c);
            }
            action.push(Matrix::from_columns(ring, k, &cols));
        }
        Lattice::new(m.group.clone(), ring, action)
    }
}

/// R[G]-linear map `source -> target` acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantMap {
    pub source: Lattice,
    pub target: Lattice,
    pub matrix: Matrix,
}

impl EquivariantMap {
    pub fn new(source: Lattice, target: Lattice, matrix: Matrix) -> Result<Self> {
        source.check_compatible(&target)?;
        if matrix.shape() != (target.rank, source.rank) {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {:?}, expected {}x{}",
                matrix.shape(),
                target.rank,
                source.rank
            )));
        }
        for g in 0..source.group.order() {
            if matrix.dot(&source.action[g]) != target.action[g].dot(&matrix) {
                return Err(Error::NotEquivariant(format!("fails at element {g}")));
            }
        }
        Ok(EquivariantMap { source, target, matrix })
    }

    pub fn identity(m: &Lattice) -> Self {
        EquivariantMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.ring, m.rank) }
    }

    pub fn compose(&self, after: &EquivariantMap) -> Result<Self> {
        if after.source != self.target {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        Ok(EquivariantMap { source: self.source.clone(), target: after.target.clone(), matrix: after.matrix.dot(&self.matrix) })
    }

    /// Inverse over the ring, when the matrix is invertible.
    pub fn inverse(&self) -> Option<EquivariantMap> {
        let inv = invert(&self.matrix)?;
        Some(EquivariantMap { source: self.target.clone(), target: self.source.clone(), matrix: inv })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}

/// Inverse of a square matrix over its ring, if it exists.
pub fn invert(m: &Matrix) -> Option<Matrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let ring = m.ring();
    let n = m.rows();
    let solver = Solver::new(m).ok()?;
    if solver.rank() != n {
        return None;
    }
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![ring.zero(); n];
        e[j] = ring.one();
        cols.push(solver.solve(&e).ok()??);
    }
    Some(Matrix::from_columns(ring, n, &cols))
}

/// `ind(res(X) ⊗ Y) -> X ⊗ ind(Y)`, `t_c ⊗ (x ⊗ y) ↦ t_c x ⊗ (t_c ⊗ y)`.
pub fn projection_formula_iso(x: &Lattice, y: &Lattice, sub: &Subgroup) -> Result<EquivariantMap> {
    if **sub.parent() != **x.group() || **sub.group() != **y.group() {
        return Err(Error::NotASubgroup("lattices do not match the subgroup".into()));
    }
    let source = x.restrict(sub)?.tensor(y)?.induce(sub)?;
    let ind_y = y.induce(sub)?;
    let target = x.tensor(&ind_y)?;
    let reps = sub.left_coset_reps();
    let (rx, ry, k) = (x.rank(), y.rank(), reps.len());
    let ring = x.ring();
    let mut m = Matrix::zeros(ring, rx * k * ry, k * rx * ry);
    for (c, &t) in reps.iter().enumerate() {
        let rho = x.action(t);
        for i in 0..rx {
            for j in 0..ry {
                let col = c * rx * ry + i * ry + j;
                for a in 0..rx {
                    let v = rho.get(a, i);
                    if !ring.is_zero(v) {
                        m.set(a * k * ry + c * ry + j, col, *v);
                    }
                }
            }
        }
    }
    let map = EquivariantMap::new(source, target, m)?;
    if !map.is_isomorphism() {
        return Err(Error::InvalidLattice("projection formula map is not invertible".into()));
    }
    Ok(map)
}

/// Canonical `M -> M**`, which is the identity matrix in the standard dual bases.
pub fn double_dual_iso(m: &Lattice) -> Result<EquivariantMap> {
    EquivariantMap::new(m.clone(), m.dual().dual(), Matrix::identity(m.ring(), m.rank()))
}

/// Small indecomposable-ish building blocks: trivial, signs, permutation and
/// reduced permutation lattices of rank ≤ `max_rank`, in a fixed order.
pub fn building_blocks(group: &Arc<FiniteGroup>, ring: CoeffRing, max_rank: usize) -> Vec<Lattice> {
    let mut out = vec![Lattice::trivial(group, ring)];
    let subs = group.all_subgroups();
    for h in &subs {
        if h.index() == 2 {
            out.push(Lattice::sign(h, ring).expect("index 2"));
        }
    }
    for h in &subs {
        let k = h.index();
        if k >= 2 && k <= max_rank {
            out.push(Lattice::permutation(h, ring));
        }
        if k >= 3 && k - 1 <= max_rank {
            out.push(Lattice::reduced_permutation(h, ring).expect("proper subgroup"));
        }
    }
    out
}

/// Random invertible matrix as a product of elementary operations with small
/// coefficients, with its inverse.
pub fn random_unimodular(ring: CoeffRing, n: usize, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let mut p = Matrix::identity(ring, n);
    let mut q = Matrix::identity(ring, n);
    if n < 2 {
        return (p, q);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = ring.from_int(rng.gen_range(-2i128..=2));
        // P <- E P, Q <- Q E⁻¹ with E = I + c e_ij.
        p.add_row_multiple(i, j, &c);
        q.add_col_multiple(j, i, &ring.neg(&c));
    }
    (p, q)
}

/// Pseudorandom lattice of rank in `1..=max_rank`: a direct sum of building
/// blocks, sometimes with a tensor factor, conjugated by a random
/// unimodular matrix. Deterministic given the RNG state.
pub fn random_lattice(group: &Arc<FiniteGroup>, ring: CoeffRing, max_rank: usize, rng: &mut impl Rng) -> Lattice {
    let blocks = building_blocks(group, ring, max_rank);
    let target = rng.gen_range(1..=max_rank);
    let mut acc: Option<Lattice> = None;
    let mut rank = 0;
    let mut attempts = 0;
    while rank < target && attempts < 32 {
        attempts += 1;
        let mut b = blocks[rng.gen_range(0..blocks.len())].clone();
        if b.rank() <= 2 && rng.gen_bool(0.25) {
            let c = &blocks[rng.gen_range(0..blocks.len())];
            if b.rank() * c.rank() + rank <= target {
                b = b.tensor(c).expect("same group and ring");
            }
        }
        if rng.gen_bool(0.2) {
            b = b.dual();
        }
        if rank + b.rank() > target {
            continue;
        }
        rank += b.rank();
        acc = Some(match acc {
            None => b,
            Some(a) => a.direct_sum(&b).expect("same group and ring"),
        });
    }
    let m = acc.unwrap_or_else(|| Lattice::trivial(group, ring));
    let (p, q) = random_unimodular(ring, m.rank(), rng);
    m.conjugate(&p, &q)
}

/// Element of `Hom_R(M, N)` from a row-major vector.
pub fn unvec(ring: CoeffRing, rows: usize, cols: usize, v: &[Elem]) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |i, j| v[i * cols + j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::builtin(name).unwrap())
    }

    #[test]
    fn sign_and_regular() {
        let c2 = g("C2");
        let z = CoeffRing::Integers;
        let h = c2.subgroup(vec![0]).unwrap();
        let s = Lattice::sign(&h, z).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(*s.action(1).get(0, 0), z.from_int(-1));
        assert_eq!(s.tensor(&s).unwrap(), Lattice::trivial(&c2, z));
        let r = Lattice::regular(&c2, z);
        assert_eq!(r.tensor(&r).unwrap().rank(), 4);
        assert_eq!(Lattice::trivial(&c2, z).tensor(&r).unwrap(), r);
    }

    #[test]
    fn restriction_and_induction() {
        let s3 = g("S3");
        let z = CoeffRing::Integers;
        let c3 = s3.elementary_abelian_subgroups(Some(3)).remove(0);
        let res = Lattice::regular(&s3, z).restrict(&c3).unwrap();
        assert_eq!(res.rank(), 6);
        // Two copies of the regular C3 lattice: the free module on coset reps.
        let free2 = Lattice::regular(c3.group(), z).direct_sum(&Lattice::regular(c3.group(), z)).unwrap();
        assert_eq!(res.equivariant_hom_basis(&free2).unwrap().cols(), free2.equivariant_hom_basis(&free2).unwrap().cols());
        let whole = s3.whole();
        let triv = Lattice::trivial(&s3, z);
        assert_eq!(triv.restrict(&whole).unwrap(), triv);
        assert_eq!(Lattice::trivial(c3.group(), z).induce(&c3).unwrap(), Lattice::permutation(&c3, z));
    }

    #[test]
    fn projection_formula() {
        let c2 = g("C2");
        let z = CoeffRing::Integers;
        let h = c2.subgroup(vec![0]).unwrap();
        let sign = Lattice::sign(&c2.subgroup(vec![0]).unwrap(), z).unwrap();
        let y = Lattice::trivial(h.group(), z);
        let iso = projection_formula_iso(&sign, &y, &h).unwrap();
        assert_eq!(iso.matrix.shape(), (2, 2));
        let triv = Lattice::trivial(&c2, z);
        let iso = projection_formula_iso(&triv, &y, &h).unwrap();
        assert!(iso.matrix.is_identity());

        let s3 = g("S3");
        for sub in s3.all_subgroups() {
            for x in building_blocks(&s3, z, 3) {
                let y = Lattice::regular(sub.group(), z);
                let iso = projection_formula_iso(&x, &y, &sub).unwrap();
                assert_eq!(iso.source.rank(), sub.index() * x.rank() * y.rank());
            }
        }
    }

    #[test]
    fn frobenius_reciprocity_dimensions() {
        let f2 = CoeffRing::PrimeField(2);
        for name in ["S3", "D4"] {
            let grp = g(name);
            let blocks = building_blocks(&grp, f2, 4);
            for sub in grp.all_subgroups() {
                let hblocks = building_blocks(sub.group(), f2, 2);
                for m in &hblocks {
                    for n in &blocks {
                        let lhs = m.induce(&sub).unwrap().equivariant_hom_basis(n).unwrap().cols();
                        let rhs = m.equivariant_hom_basis(&n.restrict(&sub).unwrap()).unwrap().cols();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn double_dual_and_json() {
        let d4 = g("D4");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let m = random_lattice(&d4, CoeffRing::Integers, 4, &mut rng);
            assert!(double_dual_iso(&m).unwrap().is_isomorphism());
            let back = Lattice::from_json(&d4, &m.to_json()).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn hom_is_dual_tensor() {
        let s3 = g("S3");
        let z = CoeffRing::Integers;
        let m = Lattice::permutation(&s3.elementary_abelian_subgroups(Some(2))[0], z);
        let hom = m.hom(&Lattice::trivial(&s3, z)).unwrap();
        assert_eq!(hom, m.dual());
    }

    #[test]
    fn invalid_inputs() {
        let c2 = g("C2");
        let z = CoeffRing::Integers;
        let bad = vec![Matrix::identity(z, 1), Matrix::scalar(z, 1, z.from_int(2))];
        assert!(matches!(Lattice::new(c2.clone(), z, bad), Err(Error::InvalidLattice(_))));
        let m = Lattice::trivial(&c2, z);
        let other = Lattice::trivial(&c2, CoeffRing::Rationals);
        assert!(matches!(m.tensor(&other), Err(Error::RingMismatch)));
        let c3 = g("C3");
        assert!(matches!(m.tensor(&Lattice::trivial(&c3, z)), Err(Error::GroupMismatch)));
    }
}
