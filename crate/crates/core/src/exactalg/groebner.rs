use crate::error::{Error, Result};
use crate::exactalg::poly::{Monomial, Poly, PolyRing};

/// Reduced Gröbner basis of a homogeneous ideal over a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroebnerBasis {
    pub ring: PolyRing,
    pub generators: Vec<Poly>,
    /// Monic, inter-reduced, sorted by increasing leading monomial.
    pub basis: Vec<Poly>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

/// Fully reduces `f` modulo `basis` (any finite set of polynomials).
pub fn normal_form(ring: &PolyRing, f: &Poly, basis: &[Poly]) -> Poly {
    let k = ring.coeffs;
    let mut rem = Poly::zero();
    let mut p = f.clone();
    while let Some(lt) = p.leading().cloned() {
        let reducer = basis.iter().find(|g| g.leading().is_some_and(|gl| divides(&gl.exps, &lt.exps)));
        match reducer {
            Some(g) => {
                let gl = g.leading().unwrap();
                let c = k.mul(&lt.coeff, &k.inv(&gl.coeff).expect("field coefficients"));
                let m = quotient(&lt.exps, &gl.exps);
                p = ring.sub(&p, &ring.mul_term(g, &m, &c));
            }
            None => {
                rem = ring.add(&rem, &ring.term(lt.exps.clone(), lt.coeff));
                p = ring.sub(&p, &ring.term(lt.exps, lt.coeff));
            }
        }
    }
    rem
}

pub fn groebner(ring: &PolyRing, generators: &[Poly]) -> Result<GroebnerBasis> {
    if !ring.coeffs.is_field() {
        return Err(Error::UnsupportedRing(format!("Gröbner bases need a field, got {}", ring.coeffs)));
    }
    for g in generators {
        if !ring.is_homogeneous(g) {
            return Err(Error::NonHomogeneousInput(ring.format(g)));
        }
    }
    let mut basis: Vec<Poly> = Vec::new();
    for g in generators {
        let r = normal_form(ring, g, &basis);
        if !r.is_zero() {
            basis.push(ring.make_monic(&r));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // Lowest-degree pair first keeps the computation degree-by-degree.
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, (i, j))| {
                let l = lcm(&basis[*i].leading().unwrap().exps, &basis[*j].leading().unwrap().exps);
                (ring.monomial_degree(&l), *j, *i)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(idx);
        let (li, lj) = (basis[i].leading().unwrap().clone(), basis[j].leading().unwrap().clone());
        let l = lcm(&li.exps, &lj.exps);
        // Buchberger's coprime criterion.
        if li.exps.iter().zip(&lj.exps).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let one = ring.coeffs.one();
        let s = ring.sub(
            &ring.mul_term(&basis[i], &quotient(&l, &li.exps), &one),
            &ring.mul_term(&basis[j], &quotient(&l, &lj.exps), &one),
        );
        let r = normal_form(ring, &s, &basis);
        if !r.is_zero() {
            basis.push(ring.make_monic(&r));
            let n = basis.len() - 1;
            for i in 0..n {
                pairs.push((i, n));
            }
        }
    }
    // Minimalize then inter-reduce.
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = &g.leading().unwrap().exps;
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            let lh = &h.leading().unwrap().exps;
            m != k && divides(lh, lg) && (lh != lg || m < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, p)| p.clone()).collect();
        let lt = minimal[k].leading().unwrap().clone();
        let tail = ring.sub(&minimal[k], &ring.term(lt.exps.clone(), lt.coeff));
        let r = ring.add(&ring.term(lt.exps, lt.coeff), &normal_form(ring, &tail, &others));
        reduced.push(ring.make_monic(&r));
    }
    reduced.sort_by(|a, b| ring.cmp_monomials(&a.leading().unwrap().exps, &b.leading().unwrap().exps));
    Ok(GroebnerBasis { ring: ring.clone(), generators: generators.to_vec(), basis: reduced })
}

impl GroebnerBasis {
    pub fn reduce(&self, f: &Poly) -> Poly {
        normal_form(&self.ring, f, &self.basis)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Monomials of degree `d` not divisible by any leading monomial.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        self.ring
            .monomials_of_degree(d)
            .into_iter()
            .filter(|m| !self.basis.iter().any(|g| divides(&g.leading().unwrap().exps, m)))
            .collect()
    }

    /// Dimension of the degree-`d` part of the quotient ring.
    pub fn hilbert_function(&self, d: u32) -> usize {
        self.standard_monomials(d).len()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(|g| g.leading().unwrap().exps.iter().all(|&e| e == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ring::CoeffRing;

    fn f2xy() -> PolyRing {
        PolyRing::new(CoeffRing::PrimeField(2), vec![1, 1], vec!["x".into(), "y".into()])
    }

    #[test]
    fn single_variable_ideal() {
        let r = f2xy();
        let gb = groebner(&r, &[r.parse("x").unwrap()]).unwrap();
        assert_eq!(gb.basis, vec![r.parse("x").unwrap()]);
    }

    #[test]
    fn membership_of_x2y() {
        let r = f2xy();
        let gb = groebner(&r, &[r.parse("x^2").unwrap(), r.parse("x*y").unwrap()]).unwrap();
        assert!(gb.contains(&r.parse("x^2*y").unwrap()));
        assert!(!gb.contains(&r.parse("y^3").unwrap()));
    }

    #[test]
    fn linear_span_basis() {
        // Degree-1 span of {x+y, x} is all linear forms, so the basis is {x, y}
        // (sorted by increasing leading monomial: y < x in grevlex).
        let r = f2xy();
        let gb = groebner(&r, &[r.parse("x+y").unwrap(), r.parse("x").unwrap()]).unwrap();
        let mut got: Vec<String> = gb.basis.iter().map(|p| r.format(p)).collect();
        got.sort();
        assert_eq!(got, vec!["x", "y"]);
    }

    #[test]
    fn rejects_inhomogeneous() {
        let r = f2xy();
        assert!(matches!(groebner(&r, &[r.parse("x + x*y").unwrap()]), Err(Error::NonHomogeneousInput(_))));
    }

    use proptest::prelude::*;

    /// Membership by linear algebra in a single degree: the degree-`d` part of
    /// the ideal is spanned by monomial multiples of the generators.
    fn brute_force_member(r: &PolyRing, gens: &[Poly], f: &Poly) -> bool {
        use crate::exactalg::snf::EchelonSpan;
        let d = match r.degree(f) {
            None => return true,
            Some(d) => d,
        };
        let monos = r.monomials_of_degree(d);
        let k = r.coeffs;
        let to_vec = |p: &Poly| monos.iter().map(|m| r.coeff_of(p, m)).collect::<Vec<_>>();
        let mut span = EchelonSpan::new(k, monos.len());
        for g in gens {
            let Some(dg) = r.degree(g) else { continue };
            if dg > d {
                continue;
            }
            for m in r.monomials_of_degree(d - dg) {
                span.insert(to_vec(&r.mul_term(g, &m, &k.one())));
            }
        }
        span.contains(&to_vec(f))
    }

    fn arb_poly(deg: u32) -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(0u8..2, (deg + 1) as usize)
    }

    fn build(r: &PolyRing, deg: u32, coeffs: &[u8]) -> Poly {
        let monos = r.monomials_of_degree(deg);
        r.from_terms(monos.into_iter().zip(coeffs).map(|(m, &c)| (m, r.coeffs.from_int(c as i128))))
    }

    proptest! {
        #[test]
        fn membership_agrees_with_linear_algebra(
            d1 in 1u32..4, c1 in arb_poly(3),
            d2 in 1u32..4, c2 in arb_poly(3),
            d3 in 1u32..4, c3 in arb_poly(3),
            df in 1u32..7, cf in arb_poly(6),
        ) {
            let r = f2xy();
            let gens: Vec<Poly> = [(d1, &c1), (d2, &c2), (d3, &c3)]
                .iter()
                .map(|(d, c)| build(&r, *d, &c[..(*d as usize + 1)]))
                .filter(|p| !p.is_zero())
                .collect();
            let f = build(&r, df, &cf[..(df as usize + 1)]);
            let gb = groebner(&r, &gens).unwrap();
            prop_assert_eq!(gb.contains(&f), brute_force_member(&r, &gens, &f));
        }
    }
}
