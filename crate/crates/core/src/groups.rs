//! Finite groups given by multiplication tables, their subgroups and the
//! orbit category of elementary abelian subgroups.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::ring::{is_prime, prime_divisors};

pub const DEFAULT_ORDER_BOUND: usize = 64;

/// Elements are `0..order` with `0` the identity. Equality compares tables
/// only, not names.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl std::hash::Hash for FiniteGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.table.hash(state);
    }
}

impl FiniteGroup {
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_bounded(name, table, DEFAULT_ORDER_BOUND)
    }

    pub fn from_table_bounded(name: impl Into<String>, table: Vec<Vec<usize>>, bound: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > bound {
            return Err(Error::GroupTooLarge { order: n, bound });
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidTable("table must be square with entries in 0..n".into()));
            }
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return Err(Error::NoIdentity);
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverse[a] = b,
                None => return Err(Error::NoInverse(a)),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), table, inverse })
    }

    /// Closure of permutations of `{0..k-1}` (composition `(st)(i) = s(t(i))`).
    /// Elements are numbered in breadth-first discovery order from the identity.
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<Self> {
        let k = gens.first().map_or(0, |g| g.len());
        for g in gens {
            let mut seen = vec![false; k];
            if g.len() != k || g.iter().any(|&x| x >= k || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidTable("generators must be permutations of one set".into()));
            }
        }
        let id: Vec<usize> = (0..k).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let prod: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= DEFAULT_ORDER_BOUND {
                        return Err(Error::GroupTooLarge { order: elems.len() + 1, bound: DEFAULT_ORDER_BOUND });
                    }
                    index.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }
        let n = elems.len();
        let table = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let prod: Vec<usize> = elems[b].iter().map(|&x| elems[a][x]).collect();
                        index[&prod]
                    })
                    .collect()
            })
            .collect();
        Self::from_table(name, table)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("C{n}"), table).expect("cyclic group table")
    }

    /// `(Z/p)^r` with element `sum a_i p^i` for coordinate vector `a`.
    pub fn elementary_abelian(p: usize, r: u32) -> Self {
        let n = p.pow(r);
        let digits = |mut x: usize| {
            let mut v = Vec::with_capacity(r as usize);
            for _ in 0..r {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let table = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let (da, db) = (digits(a), digits(b));
                        da.iter().zip(&db).rev().fold(0, |acc, (x, y)| acc * p + (x + y) % p)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(format!("E{p}^{r}"), table).expect("elementary abelian table")
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3")
    }

    /// Dihedral group of order 8, symmetries of a square.
    pub fn dihedral8() -> Self {
        Self::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).expect("D4")
    }

    /// Quaternion group; element `2u + s` is `(-1)^s * [1, i, j, k][u]`.
    pub fn quaternion8() -> Self {
        // Unit products: table[u][v] = (sign, unit) for u*v among 1,i,j,k.
        const PROD: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (ua, sa, ub, sb) = (a / 2, a % 2, b / 2, b % 2);
                        let (s, u) = PROD[ua][ub];
                        2 * u + (s + sa + sb) % 2
                    })
                    .collect()
            })
            .collect();
        Self::from_table("Q8", table).expect("Q8")
    }

    /// Builtin groups: C2, C3, C4, C6, V4, E9, S3, D4, Q8.
    pub fn builtin(name: &str) -> Result<Self> {
        Ok(match name {
            "C2" => Self::cyclic(2),
            "C3" => Self::cyclic(3),
            "C4" => Self::cyclic(4),
            "C6" => Self::cyclic(6),
            "V4" => Self { name: "V4".into(), ..Self::elementary_abelian(2, 2) },
            "E9" => Self { name: "E9".into(), ..Self::elementary_abelian(3, 2) },
            "S3" => Self::symmetric3(),
            "D4" => Self::dihedral8(),
            "Q8" => Self::quaternion8(),
            other => {
                if let Some(n) = other.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
                    if (1..=DEFAULT_ORDER_BOUND).contains(&n) {
                        return Ok(Self::cyclic(n));
                    }
                }
                return Err(Error::Parse(format!("unknown builtin group {other}")));
            }
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Parses `{"order": n, "table": [...]}` or `{"permutation_generators": [...]}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct GroupJson {
            name: Option<String>,
            order: Option<usize>,
            table: Option<Vec<Vec<usize>>>,
            permutation_generators: Option<Vec<Vec<usize>>>,
        }
        let g: GroupJson = serde_json::from_value(v.clone())?;
        let name = g.name.unwrap_or_else(|| "G".into());
        match (g.table, g.permutation_generators) {
            (Some(t), _) => {
                if let Some(n) = g.order {
                    if n != t.len() {
                        return Err(Error::InvalidTable(format!("order {n} but table has {} rows", t.len())));
                    }
                }
                Self::from_table(name, t)
            }
            (None, Some(gens)) => Self::from_permutations(name, &gens),
            _ => Err(Error::Parse("group JSON needs \"table\" or \"permutation_generators\"".into())),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "name": self.name, "order": self.order(), "table": self.table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Least element generating the whole group.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&a| self.element_order(a) == self.order())
    }

    pub fn is_p_group(&self, p: usize) -> bool {
        let mut n = self.order();
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }

    pub fn prime_divisors(&self) -> Vec<u64> {
        prime_divisors(self.order() as u64)
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([0usize]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Greedy generating set: each element, in index order, that is not yet
    /// in the subgroup generated by the earlier picks.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for a in 1..self.order() {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// Decomposition as an internal direct product of cyclic subgroups:
    /// `(generator, order)` pairs with every element uniquely a product of powers.
    /// Generators are chosen greedily by largest order, then least index.
    pub fn cyclic_decomposition(&self) -> Option<Vec<(usize, usize)>> {
        if !self.is_abelian() {
            return None;
        }
        let n = self.order();
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        let mut span = vec![0usize];
        while span.len() < n {
            let mut cands: Vec<usize> = (1..n).filter(|a| !span.contains(a)).collect();
            cands.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
            let mut picked = None;
            for a in cands {
                let k = self.element_order(a);
                // Direct: <a> meets the current span trivially.
                if (1..k).all(|e| !span.contains(&self.pow(a, e))) {
                    picked = Some((a, k));
                    break;
                }
            }
            let (a, k) = picked?;
            chosen.push((a, k));
            let gens: Vec<usize> = chosen.iter().map(|c| c.0).collect();
            span = self.generated(&gens);
            let expected: usize = chosen.iter().map(|c| c.1).product();
            if span.len() != expected {
                return None;
            }
        }
        Some(chosen)
    }

    /// Element for exponent vector `e` over a cyclic decomposition.
    pub fn product_of_powers(&self, decomp: &[(usize, usize)], e: &[usize]) -> usize {
        decomp.iter().zip(e).fold(0, |acc, ((g, _), &k)| self.mul(acc, self.pow(*g, k)))
    }

    pub fn subgroup(self: &Arc<Self>, elements: Vec<usize>) -> Result<Subgroup> {
        Subgroup::new(self.clone(), elements)
    }

    pub fn whole(self: &Arc<Self>) -> Subgroup {
        Subgroup::new(self.clone(), (0..self.order()).collect()).expect("whole group")
    }

    /// Every subgroup, sorted by (order, elements).
    pub fn all_subgroups(self: &Arc<Self>) -> Vec<Subgroup> {
        let n = self.order();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            let s = self.generated(&[a]);
            if found.insert(s.clone()) {
                frontier.push(s);
            }
        }
        while let Some(s) = frontier.pop() {
            for a in 0..n {
                if s.binary_search(&a).is_ok() {
                    continue;
                }
                let mut gens = s.clone();
                gens.push(a);
                let t = self.generated(&gens);
                if found.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        let mut v: Vec<Vec<usize>> = found.into_iter().collect();
        v.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        v.into_iter().map(|e| Subgroup::new(self.clone(), e).expect("generated subgroup")).collect()
    }

    /// A Sylow `p`-subgroup (the first one in [`all_subgroups`](Self::all_subgroups) order).
    pub fn sylow(self: &Arc<Self>, p: u64) -> Subgroup {
        let mut part = 1;
        let mut n = self.order();
        while n % p as usize == 0 {
            n /= p as usize;
            part *= p as usize;
        }
        if part == 1 {
            return Subgroup::new(self.clone(), vec![0]).expect("trivial subgroup");
        }
        self.all_subgroups().into_iter().find(|s| s.order() == part).expect("Sylow subgroups exist")
    }

    /// Nontrivial elementary abelian subgroups (for the prime `p`, or every prime).
    pub fn elementary_abelian_subgroups(self: &Arc<Self>, p: Option<u64>) -> Vec<Subgroup> {
        self.elementary_abelian_subgroups_with(p, false)
    }

    pub fn elementary_abelian_subgroups_with(self: &Arc<Self>, p: Option<u64>, include_trivial: bool) -> Vec<Subgroup> {
        let primes: Vec<u64> = match p {
            Some(p) => vec![p],
            None => self.prime_divisors(),
        };
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &p in &primes {
            let p = p as usize;
            let order_p: Vec<usize> = (1..self.order()).filter(|&a| self.element_order(a) == p).collect();
            let mut frontier: Vec<Vec<usize>> = Vec::new();
            for &a in &order_p {
                let s = self.generated(&[a]);
                if found.insert(s.clone()) {
                    frontier.push(s);
                }
            }
            while let Some(s) = frontier.pop() {
                for &a in &order_p {
                    if s.binary_search(&a).is_ok() || s.iter().any(|&x| self.mul(a, x) != self.mul(x, a)) {
                        continue;
                    }
                    let mut gens = s.clone();
                    gens.push(a);
                    let t = self.generated(&gens);
                    if found.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
        }
        let mut v: Vec<Vec<usize>> = found.into_iter().collect();
        if include_trivial {
            v.push(vec![0]);
        }
        v.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        v.into_iter().map(|e| Subgroup::new(self.clone(), e).expect("elementary abelian subgroup")).collect()
    }

    pub fn orbit_category(self: &Arc<Self>) -> ElabOrbitCategory {
        ElabOrbitCategory::new(self)
    }

    pub fn orbit_category_at(self: &Arc<Self>, p: u64) -> ElabOrbitCategory {
        ElabOrbitCategory::from_objects(self, self.elementary_abelian_subgroups(Some(p)))
    }
}

/// A subgroup together with its own group structure (elements renumbered in
/// increasing parent order, so the identity stays 0).
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    group: Arc<FiniteGroup>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn new(parent: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let n = parent.order();
        if elements.first() != Some(&0) || elements.iter().any(|&x| x >= n) {
            return Err(Error::NotASubgroup("must contain the identity and valid elements".into()));
        }
        let pos = |x: usize| elements.binary_search(&x).ok();
        for &a in &elements {
            if pos(parent.inv(a)).is_none() {
                return Err(Error::NotASubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &elements {
                if pos(parent.mul(a, b)).is_none() {
                    return Err(Error::NotASubgroup(format!("not closed: {a}*{b}")));
                }
            }
        }
        if n % elements.len() != 0 {
            return Err(Error::NotASubgroup("order does not divide the group order".into()));
        }
        let table = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| pos(parent.mul(a, b)).unwrap()).collect())
            .collect();
        let name = format!("{}<{}>", parent.name(), elements.len());
        let group = Arc::new(FiniteGroup::from_table_bounded(name, table, usize::MAX)?);
        Ok(Subgroup { parent, elements, group })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// The subgroup as an abstract group.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Parent elements, increasing; index `i` is element `i` of [`group`].
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Local index of a parent element.
    pub fn local(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn inclusion(&self, local: usize) -> usize {
        self.elements[local]
    }

    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let els = self.elements.iter().map(|&x| self.parent.conjugate(g, x)).collect();
        Subgroup::new(self.parent.clone(), els).expect("conjugate of a subgroup")
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Left coset representatives `t` of `G/H`, each the least element of `tH`,
    /// in increasing order.
    pub fn left_coset_reps(&self) -> Vec<usize> {
        let g = &self.parent;
        let mut seen = vec![false; g.order()];
        let mut reps = Vec::new();
        for t in 0..g.order() {
            if seen[t] {
                continue;
            }
            reps.push(t);
            for &h in &self.elements {
                seen[g.mul(t, h)] = true;
            }
        }
        reps
    }

    /// `(c, h)` with `x = reps[c] * h`, `h` a local index.
    pub fn coset_decompose(&self, reps: &[usize], x: usize) -> (usize, usize) {
        let g = &self.parent;
        for (c, &t) in reps.iter().enumerate() {
            if let Some(h) = self.local(g.mul(g.inv(t), x)) {
                return (c, h);
            }
        }
        unreachable!("coset representatives cover the group")
    }

    /// `Some((p, rank))` when the subgroup is `(Z/p)^rank` with rank ≥ 1.
    pub fn elementary_abelian_type(&self) -> Option<(u64, u32)> {
        let n = self.order();
        if n == 1 {
            return None;
        }
        let primes = prime_divisors(n as u64);
        if primes.len() != 1 || !self.group.is_abelian() {
            return None;
        }
        let p = primes[0];
        if (1..n).any(|a| self.group.element_order(a) as u64 != p) {
            return None;
        }
        let mut rank = 0;
        let mut m = n;
        while m > 1 {
            m /= p as usize;
            rank += 1;
        }
        Some((p, rank))
    }

    /// Basis of an elementary abelian subgroup as local indices, chosen greedily
    /// by least index.
    pub fn elementary_basis(&self) -> Result<Vec<usize>> {
        self.elementary_abelian_type().ok_or(Error::NotElementaryAbelian)?;
        let g = &self.group;
        let mut basis = Vec::new();
        let mut span = vec![0usize];
        for a in 1..g.order() {
            if !span.contains(&a) {
                basis.push(a);
                span = g.generated(&basis);
            }
        }
        Ok(basis)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MorphismKind {
    Inclusion,
    Conjugation,
}

/// Generating morphism `E_source -> E_target`, `x ↦ g x g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrbitMorphism {
    pub source: usize,
    pub target: usize,
    pub conjugator: usize,
    pub kind: MorphismKind,
}

/// Elementary abelian subgroups with inclusion and conjugation morphisms.
#[derive(Clone, Debug)]
pub struct ElabOrbitCategory {
    pub objects: Vec<Subgroup>,
    pub morphisms: Vec<OrbitMorphism>,
}

impl ElabOrbitCategory {
    pub fn new(g: &Arc<FiniteGroup>) -> Self {
        Self::from_objects(g, g.elementary_abelian_subgroups(None))
    }

    fn from_objects(g: &Arc<FiniteGroup>, objects: Vec<Subgroup>) -> Self {
        let mut morphisms = Vec::new();
        let mut seen: BTreeSet<(usize, usize, Vec<usize>)> = BTreeSet::new();
        for (si, s) in objects.iter().enumerate() {
            for (ti, t) in objects.iter().enumerate() {
                for c in 0..g.order() {
                    let image: Vec<usize> = s.elements().iter().map(|&x| g.conjugate(c, x)).collect();
                    if !image.iter().all(|&y| t.contains(y)) {
                        continue;
                    }
                    // Identity morphisms are implicit.
                    let is_identity = si == ti && image == s.elements();
                    if is_identity || !seen.insert((si, ti, image.clone())) {
                        continue;
                    }
                    let kind = if c == 0 { MorphismKind::Inclusion } else { MorphismKind::Conjugation };
                    if kind == MorphismKind::Conjugation && s.order() < t.order() {
                        // Composite of a conjugation and an inclusion; keep the generators only.
                        let conj_target = s.conjugate_by(c);
                        if objects.contains(&conj_target) {
                            continue;
                        }
                    }
                    morphisms.push(OrbitMorphism { source: si, target: ti, conjugator: c, kind });
                }
            }
        }
        ElabOrbitCategory { objects, morphisms }
    }

    /// Element map of a morphism, as local indices of source and target.
    pub fn local_map(&self, m: &OrbitMorphism) -> Vec<usize> {
        let s = &self.objects[m.source];
        let t = &self.objects[m.target];
        let g = s.parent();
        s.elements().iter().map(|&x| t.local(g.conjugate(m.conjugator, x)).expect("morphism lands in target")).collect()
    }

    /// Connected components of objects under the generating morphisms.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for m in &self.morphisms {
            let (a, b) = (find(&mut parent, m.source), find(&mut parent, m.target));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            comps.entry(r).or_default().push(i);
        }
        comps.into_values().collect()
    }
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidRing(format!("{p} is not prime")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    #[test]
    fn small_groups() {
        assert_eq!(FiniteGroup::cyclic(2).order(), 2);
        assert_eq!(FiniteGroup::symmetric3().order(), 6);
        assert_eq!(FiniteGroup::dihedral8().order(), 8);
        let q = FiniteGroup::quaternion8();
        assert_eq!(q.order(), 8);
        assert!(!q.is_abelian());
        assert_eq!((1..8).filter(|&a| q.element_order(a) == 2).count(), 1);
    }

    #[test]
    fn table_errors() {
        let bad = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        assert!(matches!(FiniteGroup::from_table("x", bad), Err(Error::NoInverse(_)) | Err(Error::NotAssociative { .. })));
        // A Latin square with identity 0 that is not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("x", t), Err(Error::NotAssociative { .. })));
        let t = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(FiniteGroup::from_table("x", t), Err(Error::NoIdentity)));
    }

    #[test]
    fn elementary_abelian_enumeration() {
        let s3 = arc(FiniteGroup::symmetric3());
        let e2 = s3.elementary_abelian_subgroups(Some(2));
        assert_eq!(e2.len(), 3);
        assert!(e2.iter().all(|e| e.order() == 2));
        assert_eq!(s3.elementary_abelian_subgroups(Some(3)).len(), 1);
        let q8 = arc(FiniteGroup::quaternion8());
        let eq = q8.elementary_abelian_subgroups(Some(2));
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].elements(), &[0, 1]);
        for s in q8.all_subgroups() {
            if s.order() > 2 && s.order() < 8 {
                assert!(s.group().is_cyclic());
            }
        }
        assert_eq!(s3.elementary_abelian_subgroups_with(Some(2), true).len(), 4);
    }

    #[test]
    fn orbit_categories() {
        let c2 = arc(FiniteGroup::cyclic(2));
        let oc = c2.orbit_category();
        assert_eq!(oc.objects.len(), 1);
        assert!(oc.morphisms.is_empty());

        let s3 = arc(FiniteGroup::symmetric3());
        let oc = s3.orbit_category();
        assert_eq!(oc.objects.len(), 4);
        let c2s: Vec<usize> = (0..4).filter(|&i| oc.objects[i].order() == 2).collect();
        assert_eq!(c2s.len(), 3);
        let comps = oc.components();
        assert!(comps.iter().any(|c| c == &c2s));

        let v4 = arc(FiniteGroup::builtin("V4").unwrap());
        let oc = v4.orbit_category();
        assert_eq!(oc.objects.len(), 4);
        let incl = oc.morphisms.iter().filter(|m| m.kind == MorphismKind::Inclusion).count();
        assert_eq!(incl, 3);
    }

    #[test]
    fn permutation_input_and_relabeling() {
        // Two presentations of S3: different generators give different labelings.
        let a = arc(FiniteGroup::from_permutations("a", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap());
        let b = arc(FiniteGroup::from_permutations("b", &[vec![0, 2, 1], vec![2, 0, 1], vec![1, 0, 2]]).unwrap());
        assert_eq!(a.order(), b.order());
        for p in [2, 3] {
            assert_eq!(a.elementary_abelian_subgroups(Some(p)).len(), b.elementary_abelian_subgroups(Some(p)).len());
        }
        let j = serde_json::json!({"permutation_generators": [[1, 0, 2], [1, 2, 0]]});
        assert_eq!(FiniteGroup::from_json(&j).unwrap().order(), 6);
        let j = serde_json::json!({"order": 2, "table": [[0, 1], [1, 0]]});
        assert_eq!(FiniteGroup::from_json(&j).unwrap().order(), 2);
    }

    #[test]
    fn subgroup_invariants_and_conjugation_closure() {
        for name in ["S3", "D4", "Q8", "C6", "V4"] {
            let g = arc(FiniteGroup::builtin(name).unwrap());
            for s in g.all_subgroups() {
                assert_eq!(g.order() % s.order(), 0);
                for &a in s.elements() {
                    for &b in s.elements() {
                        assert!(s.contains(g.mul(a, b)));
                    }
                }
            }
            let elab = g.elementary_abelian_subgroups(None);
            for e in &elab {
                for c in 0..g.order() {
                    assert!(elab.contains(&e.conjugate_by(c)));
                }
            }
        }
    }

    #[test]
    fn decompositions() {
        let v4 = FiniteGroup::builtin("V4").unwrap();
        assert_eq!(v4.cyclic_decomposition().unwrap(), vec![(1, 2), (2, 2)]);
        let e9 = FiniteGroup::builtin("E9").unwrap();
        assert_eq!(e9.cyclic_decomposition().unwrap().len(), 2);
        assert!(FiniteGroup::symmetric3().cyclic_decomposition().is_none());
    }
}
