//! Commutative polynomials in weighted variables.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::ring::{CoeffRing, Elem};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exps: Monomial,
    pub coeff: Elem,
}

/// Terms sorted decreasingly in the ring's monomial order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }
}

/// Polynomial ring over `coeffs` whose variables carry positive degrees.
/// Monomials are ordered by weighted degree, then reverse lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub coeffs: CoeffRing,
    pub weights: Vec<u32>,
    pub names: Vec<String>,
}

impl PolyRing {
    pub fn new(coeffs: CoeffRing, weights: Vec<u32>, names: Vec<String>) -> Self {
        assert_eq!(weights.len(), names.len());
        PolyRing { coeffs, weights, names }
    }

    /// Variables `x1..xn`, all of degree 1.
    pub fn linear(coeffs: CoeffRing, n: usize) -> Self {
        Self::new(coeffs, vec![1; n], (1..=n).map(|i| format!("x{i}")).collect())
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn monomial_degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    pub fn cmp_monomials(&self, a: &[u32], b: &[u32]) -> Ordering {
        let (da, db) = (self.monomial_degree(a), self.monomial_degree(b));
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                // Reverse lex: smaller exponent in the last variable is larger.
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    }

    /// All monomials of weighted degree `d`, in decreasing monomial order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        fn rec(w: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == w.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut e = 0;
            while e * w[i] <= left {
                cur.push(e);
                rec(w, i + 1, left - e * w[i], cur, out);
                cur.pop();
                e += 1;
            }
        }
        let mut out = Vec::new();
        rec(&self.weights, 0, d, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| self.cmp_monomials(b, a));
        out
    }

    pub fn constant(&self, c: Elem) -> Poly {
        self.term(vec![0; self.nvars()], c)
    }

    pub fn one(&self) -> Poly {
        self.constant(self.coeffs.one())
    }

    pub fn term(&self, exps: Monomial, coeff: Elem) -> Poly {
        if self.coeffs.is_zero(&coeff) {
            Poly::zero()
        } else {
            Poly { terms: vec![Term { exps, coeff }] }
        }
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.term(e, self.coeffs.one())
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Poly {
        let mut v: Vec<Term> = terms.into_iter().map(|(exps, coeff)| Term { exps, coeff }).collect();
        v.sort_by(|a, b| self.cmp_monomials(&b.exps, &a.exps));
        let mut out: Vec<Term> = Vec::with_capacity(v.len());
        for t in v {
            match out.last_mut() {
                Some(last) if last.exps == t.exps => last.coeff = self.coeffs.add(&last.coeff, &t.coeff),
                _ => out.push(t),
            }
        }
        out.retain(|t| !self.coeffs.is_zero(&t.coeff));
        Poly { terms: out }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let r = self.coeffs;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match self.cmp_monomials(&a.terms[i].exps, &b.terms[j].exps) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = r.add(&a.terms[i].coeff, &b.terms[j].coeff);
                    if !r.is_zero(&c) {
                        out.push(Term { exps: a.terms[i].exps.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend_from_slice(&b.terms[j..]);
        Poly { terms: out }
    }

    pub fn scale(&self, a: &Poly, c: &Elem) -> Poly {
        let r = self.coeffs;
        if r.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|t| Term { exps: t.exps.clone(), coeff: r.mul(&t.coeff, c) })
                .filter(|t| !r.is_zero(&t.coeff))
                .collect(),
        }
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.scale(a, &self.coeffs.neg(&self.coeffs.one()))
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn mul_term(&self, a: &Poly, exps: &[u32], c: &Elem) -> Poly {
        let r = self.coeffs;
        Poly {
            terms: a
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.iter().zip(exps).map(|(x, y)| x + y).collect(),
                    coeff: r.mul(&t.coeff, c),
                })
                .filter(|t| !r.is_zero(&t.coeff))
                .collect(),
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for t in &b.terms {
            acc = self.add(&acc, &self.mul_term(a, &t.exps, &t.coeff));
        }
        acc
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn degree(&self, a: &Poly) -> Option<u32> {
        a.terms.first().map(|t| self.monomial_degree(&t.exps))
    }

    pub fn is_homogeneous(&self, a: &Poly) -> bool {
        match self.degree(a) {
            None => true,
            Some(d) => a.terms.iter().all(|t| self.monomial_degree(&t.exps) == d),
        }
    }

    pub fn make_monic(&self, a: &Poly) -> Poly {
        match a.leading() {
            None => Poly::zero(),
            Some(t) => {
                let inv = self.coeffs.inv(&t.coeff).expect("monic normalization needs a unit leading coefficient");
                self.scale(a, &inv)
            }
        }
    }

    pub fn coeff_of(&self, a: &Poly, m: &[u32]) -> Elem {
        a.terms.iter().find(|t| t.exps == m).map_or(self.coeffs.zero(), |t| t.coeff)
    }

    /// Evaluates at a point whose coordinates live in `target` (which must
    /// receive the coefficient ring canonically).
    pub fn eval(&self, a: &Poly, target: &CoeffRing, point: &[Elem]) -> Elem {
        let mut acc = target.zero();
        for t in &a.terms {
            let mut v = target.coerce_from(&self.coeffs, &t.coeff).expect("coefficients map into target");
            for (x, &e) in point.iter().zip(&t.exps) {
                if e > 0 {
                    v = target.mul(&v, &target.pow(x, e as u64));
                }
            }
            acc = target.add(&acc, &v);
        }
        acc
    }

    /// Substitutes polynomials (from `target`) for the variables.
    pub fn substitute(&self, a: &Poly, target: &PolyRing, images: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for t in &a.terms {
            let c = target.coeffs.coerce_from(&self.coeffs, &t.coeff).expect("coefficient map");
            let mut m = target.constant(c);
            for (img, &e) in images.iter().zip(&t.exps) {
                if e > 0 {
                    m = target.mul(&m, &target.pow(img, e));
                }
            }
            acc = target.add(&acc, &m);
        }
        acc
    }

    /// Coefficient-wise image in a ring over different coefficients (same variables).
    pub fn change_coeffs(&self, a: &Poly, target: &PolyRing) -> Poly {
        target.from_terms(
            a.terms
                .iter()
                .map(|t| (t.exps.clone(), target.coeffs.coerce_from(&self.coeffs, &t.coeff).expect("coefficient map"))),
        )
    }

    pub fn format_monomial(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let r = self.coeffs;
        let mut out = String::new();
        for (k, t) in a.terms.iter().enumerate() {
            let mono = self.format_monomial(&t.exps);
            let c = r.format(&t.coeff);
            let (neg, mag) = match c.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, c),
            };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if mono == "1" {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }

    /// Parses sums of products like `x1 + 2*x1*x2^3 - x2`.
    pub fn parse(&self, s: &str) -> Result<Poly> {
        let r = self.coeffs;
        let bad = |m: &str| Error::Parse(format!("cannot parse polynomial {s:?}: {m}"));
        let cleaned = s.replace(' ', "");
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut chunks = Vec::new();
        let mut cur = String::new();
        for ch in cleaned.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        chunks.push(cur);
        for chunk in chunks {
            let (sign, body) = match chunk.strip_prefix('-') {
                Some(b) => (-1i128, b.to_string()),
                None => (1, chunk.trim_start_matches('+').to_string()),
            };
            let mut coeff = r.from_int(sign);
            let mut exps = vec![0u32; self.nvars()];
            for factor in body.split('*') {
                let (base, e) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                if let Some(i) = self.names.iter().position(|n| n == base) {
                    exps[i] += e;
                } else {
                    let c = r.parse_elem(base).map_err(|_| bad(&format!("unknown symbol {base}")))?;
                    coeff = r.mul(&coeff, &r.pow(&c, e as u64));
                }
            }
            terms.push((exps, coeff));
        }
        Ok(self.from_terms(terms))
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.names.iter().zip(&self.weights).map(|(n, w)| format!("{n}({w})")).collect();
        write!(f, "{}[{}]", self.coeffs, vars.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let r = PolyRing::linear(CoeffRing::Integers, 2);
        let p = r.parse("2*x1 - x2^2 + x1*x2").unwrap();
        assert_eq!(r.format(&p), "x1*x2 - x2^2 + 2*x1");
        assert!(!r.is_homogeneous(&p));
        assert!(r.parse("y").is_err());
    }

    #[test]
    fn weighted_monomials() {
        let r = PolyRing::new(CoeffRing::PrimeField(2), vec![1, 2], vec!["a".into(), "b".into()]);
        assert_eq!(r.monomials_of_degree(4).len(), 3);
        assert_eq!(r.monomials_of_degree(3).len(), 2);
    }

    #[test]
    fn frobenius_in_char_two() {
        let r = PolyRing::linear(CoeffRing::PrimeField(2), 2);
        let s = r.parse("x1 + x2").unwrap();
        assert_eq!(r.pow(&s, 2), r.parse("x1^2 + x2^2").unwrap());
    }
}
