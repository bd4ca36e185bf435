//! Coefficient rings and their elements.
//!
//! Every ring shares one compact element type, [`Elem`], whose meaning is
//! fixed by the [`CoeffRing`] that produced it. Arithmetic is exact; integer
//! overflow of the `i128` backing store is treated as a fatal bug and panics.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoeffRing {
    Integers,
    Rationals,
    PrimeField(u64),
    /// The field with `p^n` elements, built as `F_p[t]/(f)` for the
    /// lexicographically first monic irreducible `f` of degree `n`.
    FiniteField(u64, u32),
    /// `Z` localized at the prime ideal `(p)`.
    LocalizedIntegers(u64),
    IntegersMod(u64),
}

/// A ring element. Canonical representation per ring:
///
/// * `Integers`, `IntegersMod`, `PrimeField`: `den == 1`, residues in `[0, m)`.
/// * `Rationals`, `LocalizedIntegers`: reduced fraction, `den > 0`.
/// * `FiniteField(p, n)`: `num` encodes the coefficient vector in base `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    num: i128,
    den: i128,
}

impl Elem {
    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n` in increasing order, without multiplicity.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mul_ck(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("exact arithmetic overflowed i128")
}

fn add_ck(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("exact arithmetic overflowed i128")
}

fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("field size overflow")
}

/// p-adic valuation of a nonzero integer.
fn valuation(mut a: i128, p: i128) -> u32 {
    debug_assert!(a != 0);
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

fn modinv(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r == 1 {
        Some(old_s.rem_euclid(m))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// F_q arithmetic on base-p encoded polynomials.

fn decode(mut x: u64, p: u64, n: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(n as usize);
    for _ in 0..n {
        v.push(x % p);
        x /= p;
    }
    v
}

fn encode(v: &[u64], p: u64) -> u64 {
    v.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo a monic polynomial `m` (coefficient vectors, low first).
fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                a[idx] = (a[idx] + p - (lead * c) % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = pow_u64(p, d as u32);
        for low in 0..count {
            let mut g = decode(low, p, d as u32);
            g.push(1);
            let r = poly_rem(f.to_vec(), &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn conway_like_modulus(p: u64, n: u32) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&(p, n)) {
        return m.clone();
    }
    let count = pow_u64(p, n);
    let mut found = None;
    for low in 0..count {
        let mut f = decode(low, p, n);
        f.push(1);
        if is_irreducible(&f, p) {
            found = Some(f);
            break;
        }
    }
    let m = found.expect("irreducible polynomials exist in every degree");
    cache.lock().unwrap().insert((p, n), m.clone());
    m
}

impl CoeffRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(CoeffRing::PrimeField(p))
    }

    pub fn finite_field(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) || n == 0 {
            return Err(Error::InvalidRing(format!("F_{{{p}^{n}}} is not a valid field")));
        }
        if n == 1 {
            return Ok(CoeffRing::PrimeField(p));
        }
        pow_u64(p, n);
        Ok(CoeffRing::FiniteField(p, n))
    }

    pub fn localized(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(CoeffRing::LocalizedIntegers(p))
    }

    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRing(format!("Z/{m} needs m >= 2")));
        }
        Ok(CoeffRing::IntegersMod(m))
    }

    /// Parses `Z`, `Q`, `F2`, `Fp:3`, `Zp:2`, `Fq:2,2`, `Zmod:4`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<u64> {
            t.trim().parse::<u64>().map_err(|_| Error::InvalidRing(s.to_string()))
        };
        match s {
            "Z" => return Ok(CoeffRing::Integers),
            "Q" => return Ok(CoeffRing::Rationals),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            return CoeffRing::prime_field(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("Zp:") {
            return CoeffRing::localized(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("Zmod:") {
            return CoeffRing::integers_mod(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("Fq:") {
            let (p, n) = rest.split_once(',').ok_or_else(|| Error::InvalidRing(s.to_string()))?;
            return CoeffRing::finite_field(num(p)?, num(n)? as u32);
        }
        if let Some(rest) = s.strip_prefix('F') {
            return CoeffRing::prime_field(num(rest)?);
        }
        Err(Error::InvalidRing(s.to_string()))
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            CoeffRing::Integers | CoeffRing::Rationals | CoeffRing::LocalizedIntegers(_) => 0,
            CoeffRing::PrimeField(p) | CoeffRing::FiniteField(p, _) => p,
            CoeffRing::IntegersMod(m) => m,
        }
    }

    pub fn is_field(&self) -> bool {
        match *self {
            CoeffRing::Rationals | CoeffRing::PrimeField(_) | CoeffRing::FiniteField(..) => true,
            CoeffRing::IntegersMod(m) => is_prime(m),
            _ => false,
        }
    }

    /// Rings on which Smith normal form and linear solving are supported.
    pub fn is_pid(&self) -> bool {
        match *self {
            CoeffRing::IntegersMod(m) => is_prime(m),
            _ => true,
        }
    }

    pub fn require_pid(&self) -> Result<()> {
        if self.is_pid() {
            Ok(())
        } else {
            Err(Error::UnsupportedRing(format!("{self} is not a principal ideal domain")))
        }
    }

    /// Number of elements for finite rings.
    pub fn size(&self) -> Option<u64> {
        match *self {
            CoeffRing::PrimeField(p) => Some(p),
            CoeffRing::FiniteField(p, n) => Some(pow_u64(p, n)),
            CoeffRing::IntegersMod(m) => Some(m),
            _ => None,
        }
    }

    fn modulus(&self) -> Option<i128> {
        match *self {
            CoeffRing::PrimeField(p) | CoeffRing::IntegersMod(p) => Some(p as i128),
            _ => None,
        }
    }

    fn raw(num: i128) -> Elem {
        Elem { num, den: 1 }
    }

    pub fn zero(&self) -> Elem {
        Self::raw(0)
    }

    pub fn one(&self) -> Elem {
        Self::raw(1)
    }

    pub fn from_int(&self, a: i128) -> Elem {
        match *self {
            CoeffRing::PrimeField(p) | CoeffRing::IntegersMod(p) => Self::raw(a.rem_euclid(p as i128)),
            CoeffRing::FiniteField(p, _) => Self::raw(a.rem_euclid(p as i128)),
            _ => Self::raw(a),
        }
    }

    /// `a / b`, when `b` is a unit of the ring.
    pub fn from_frac(&self, a: i128, b: i128) -> Option<Elem> {
        if b == 0 {
            return None;
        }
        match *self {
            CoeffRing::Integers => (a % b == 0).then(|| Self::raw(a / b)),
            CoeffRing::Rationals => Some(self.reduce_frac(a, b)),
            CoeffRing::LocalizedIntegers(p) => {
                let g = gcd_i128(a, b);
                let b2 = b / g;
                (b2 % p as i128 != 0).then(|| self.reduce_frac(a, b))
            }
            _ => {
                let bi = self.inv(&self.from_int(b))?;
                Some(self.mul(&self.from_int(a), &bi))
            }
        }
    }

    fn reduce_frac(&self, a: i128, b: i128) -> Elem {
        let g = gcd_i128(a, b).max(1);
        let (mut n, mut d) = (a / g, b / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Elem { num: n, den: d }
    }

    /// Field element with the given coefficient vector (low degree first).
    pub fn ff_from_coeffs(&self, coeffs: &[u64]) -> Elem {
        match *self {
            CoeffRing::FiniteField(p, n) => {
                let mut v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
                v.resize(n as usize, 0);
                if v.len() > n as usize {
                    v = poly_rem(v, &conway_like_modulus(p, n), p);
                }
                Self::raw(encode(&v, p) as i128)
            }
            _ => self.from_int(coeffs.first().copied().unwrap_or(0) as i128),
        }
    }

    /// All elements of a finite ring, in increasing encoded order.
    pub fn elements(&self) -> Vec<Elem> {
        let q = self.size().expect("elements() requires a finite ring");
        (0..q as i128).map(Self::raw).collect()
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.num == 0
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        a.num == 1 && a.den == 1
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match *self {
            CoeffRing::Integers => Self::raw(add_ck(a.num, b.num)),
            CoeffRing::Rationals | CoeffRing::LocalizedIntegers(_) => {
                if a.den == b.den {
                    return self.reduce_frac(add_ck(a.num, b.num), a.den);
                }
                let n = add_ck(mul_ck(a.num, b.den), mul_ck(b.num, a.den));
                self.reduce_frac(n, mul_ck(a.den, b.den))
            }
            CoeffRing::PrimeField(m) | CoeffRing::IntegersMod(m) => {
                Self::raw((a.num + b.num) % m as i128)
            }
            CoeffRing::FiniteField(p, n) => {
                let (x, y) = (decode(a.num as u64, p, n), decode(b.num as u64, p, n));
                let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                Self::raw(encode(&s, p) as i128)
            }
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match *self {
            CoeffRing::Integers | CoeffRing::Rationals | CoeffRing::LocalizedIntegers(_) => {
                Elem { num: -a.num, den: a.den }
            }
            CoeffRing::PrimeField(m) | CoeffRing::IntegersMod(m) => {
                Self::raw((m as i128 - a.num) % m as i128)
            }
            CoeffRing::FiniteField(p, n) => {
                let x = decode(a.num as u64, p, n);
                let s: Vec<u64> = x.iter().map(|u| (p - u) % p).collect();
                Self::raw(encode(&s, p) as i128)
            }
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match *self {
            CoeffRing::Integers => Self::raw(mul_ck(a.num, b.num)),
            CoeffRing::Rationals | CoeffRing::LocalizedIntegers(_) => {
                if a.num == 0 || b.num == 0 {
                    return self.zero();
                }
                let g1 = gcd_i128(a.num, b.den);
                let g2 = gcd_i128(b.num, a.den);
                let n = mul_ck(a.num / g1, b.num / g2);
                let d = mul_ck(a.den / g2, b.den / g1);
                self.reduce_frac(n, d)
            }
            CoeffRing::PrimeField(m) | CoeffRing::IntegersMod(m) => {
                Self::raw(mul_ck(a.num, b.num) % m as i128)
            }
            CoeffRing::FiniteField(p, n) => {
                let (x, y) = (decode(a.num as u64, p, n), decode(b.num as u64, p, n));
                let mut prod = vec![0u64; 2 * n as usize - 1];
                for (i, u) in x.iter().enumerate() {
                    for (j, v) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + u * v) % p;
                    }
                }
                let r = poly_rem(prod, &conway_like_modulus(p, n), p);
                Self::raw(encode(&r, p) as i128)
            }
        }
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.inv(a).is_some()
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if a.num == 0 {
            return None;
        }
        match *self {
            CoeffRing::Integers => (a.num.abs() == 1).then_some(*a),
            CoeffRing::Rationals => Some(self.reduce_frac(a.den, a.num)),
            CoeffRing::LocalizedIntegers(p) => {
                (a.num % p as i128 != 0).then(|| self.reduce_frac(a.den, a.num))
            }
            CoeffRing::PrimeField(m) | CoeffRing::IntegersMod(m) => {
                modinv(a.num, m as i128).map(Self::raw)
            }
            CoeffRing::FiniteField(p, n) => Some(self.pow(a, pow_u64(p, n) - 2)),
        }
    }

    /// Euclidean size: `|a|` over Z, the p-adic valuation over Z_(p), 0 for
    /// nonzero field elements. `None` for zero.
    pub fn euclid_norm(&self, a: &Elem) -> Option<u128> {
        if a.num == 0 {
            return None;
        }
        Some(match *self {
            CoeffRing::Integers => a.num.unsigned_abs(),
            CoeffRing::LocalizedIntegers(p) => valuation(a.num, p as i128) as u128,
            _ => 0,
        })
    }

    /// Division with remainder such that the remainder is zero or has smaller
    /// Euclidean size than `b`.
    pub fn div_rem(&self, a: &Elem, b: &Elem) -> (Elem, Elem) {
        assert!(b.num != 0, "division by zero");
        match *self {
            CoeffRing::Integers => {
                let q = a.num.div_euclid(b.num);
                let r = a.num.rem_euclid(b.num);
                // Prefer the remainder of least absolute value.
                if 2 * r > b.num.abs() {
                    let q2 = if b.num > 0 { q + 1 } else { q - 1 };
                    (Self::raw(q2), Self::raw(r - b.num.abs()))
                } else {
                    (Self::raw(q), Self::raw(r))
                }
            }
            CoeffRing::LocalizedIntegers(p) => {
                if a.num == 0 {
                    return (self.zero(), self.zero());
                }
                let (va, vb) = (valuation(a.num, p as i128), valuation(b.num, p as i128));
                if va >= vb {
                    let q = self.mul(a, &self.reduce_frac(b.den, b.num));
                    (q, self.zero())
                } else {
                    (self.zero(), *a)
                }
            }
            _ => {
                let bi = self.inv(b).expect("nonzero element of a field is invertible");
                (self.mul(a, &bi), self.zero())
            }
        }
    }

    /// `a / b` when `b` divides `a`.
    pub fn exact_div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        if b.num == 0 {
            return (a.num == 0).then(|| self.zero());
        }
        match *self {
            CoeffRing::IntegersMod(m) if !is_prime(m) => {
                (0..m as i128).map(Self::raw).find(|q| self.mul(q, b) == *a)
            }
            _ => {
                let (q, r) = self.div_rem(a, b);
                (r.num == 0).then_some(q)
            }
        }
    }

    pub fn divides(&self, b: &Elem, a: &Elem) -> bool {
        self.exact_div(a, b).is_some()
    }

    /// Splits `a = unit * canonical` and returns `(canonical, unit)`.
    /// Canonical associates: `|a|` over Z, `p^v` over Z_(p), 1 over fields.
    pub fn associate(&self, a: &Elem) -> (Elem, Elem) {
        if a.num == 0 {
            return (*a, self.one());
        }
        match *self {
            CoeffRing::Integers => (Self::raw(a.num.abs()), Self::raw(a.num.signum())),
            CoeffRing::LocalizedIntegers(p) => {
                let v = valuation(a.num, p as i128);
                let pv = (p as i128).pow(v);
                (Self::raw(pv), self.reduce_frac(a.num / pv, a.den))
            }
            CoeffRing::IntegersMod(m) if !is_prime(m) => (*a, self.one()),
            _ => (self.one(), *a),
        }
    }

    pub fn gcd(&self, a: &Elem, b: &Elem) -> Elem {
        let (mut x, mut y) = (*a, *b);
        while y.num != 0 {
            let (_, r) = self.div_rem(&x, &y);
            x = y;
            y = r;
        }
        self.associate(&x).0
    }

    /// `(g, s, t)` with `s a + t b = g` a gcd of `a` and `b` (not normalized).
    pub fn xgcd(&self, a: &Elem, b: &Elem) -> (Elem, Elem, Elem) {
        let (mut r0, mut r1) = (*a, *b);
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while r1.num != 0 {
            let (q, r) = self.div_rem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    /// Canonical representative of `a` modulo the ideal `(d)`.
    pub fn residue(&self, a: &Elem, d: &Elem) -> Elem {
        if d.num == 0 {
            return *a;
        }
        if self.is_unit(d) {
            return self.zero();
        }
        match *self {
            CoeffRing::Integers => Self::raw(a.num.rem_euclid(d.num.abs())),
            CoeffRing::LocalizedIntegers(p) => {
                let m = (p as i128).pow(valuation(d.num, p as i128));
                let inv = modinv(a.den, m).expect("denominator prime to p");
                Self::raw(mul_ck(a.num.rem_euclid(m), inv) % m)
            }
            _ => self.div_rem(a, d).1,
        }
    }

    /// Image of an element of `source` under the canonical map `source -> self`
    /// (Z -> anything, Z_(p) -> F_p, Z/p^k -> F_p, F_p -> F_q, ...).
    pub fn coerce_from(&self, source: &CoeffRing, a: &Elem) -> Option<Elem> {
        match (source, self) {
            (s, t) if s == t => Some(*a),
            (CoeffRing::FiniteField(..), _) => None,
            (_, CoeffRing::FiniteField(p, _)) => {
                let b = CoeffRing::PrimeField(*p).coerce_from(source, a)?;
                Some(Self::raw(b.num))
            }
            _ => {
                if a.den == 1 {
                    if let (Some(ms), Some(mt)) = (source.modulus(), self.modulus()) {
                        if ms % mt != 0 {
                            return None;
                        }
                    }
                    Some(self.from_int(a.num))
                } else {
                    self.from_frac(a.num, a.den)
                }
            }
        }
    }

    pub fn format(&self, a: &Elem) -> String {
        match *self {
            CoeffRing::FiniteField(p, n) => {
                let v = decode(a.num as u64, p, n);
                let mut terms = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    terms.push(match i {
                        0 => format!("{c}"),
                        1 if *c == 1 => "t".to_string(),
                        1 => format!("{c}t"),
                        _ if *c == 1 => format!("t^{i}"),
                        _ => format!("{c}t^{i}"),
                    });
                }
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
            _ if a.den == 1 => format!("{}", a.num),
            _ => format!("{}/{}", a.num, a.den),
        }
    }

    /// Parses an integer or fraction `a/b`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let bad = || Error::Parse(format!("bad ring element {s:?} for {self}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: i128 = a.trim().parse().map_err(|_| bad())?;
            let b: i128 = b.trim().parse().map_err(|_| bad())?;
            self.from_frac(a, b).ok_or_else(bad)
        } else {
            let a: i128 = s.parse().map_err(|_| bad())?;
            Ok(self.from_int(a))
        }
    }

    pub fn elem_from_json(&self, v: &serde_json::Value) -> Result<Elem> {
        match v {
            serde_json::Value::Number(n) => {
                let a = n.as_i64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                Ok(self.from_int(a as i128))
            }
            serde_json::Value::String(s) => self.parse_elem(s),
            other => Err(Error::Parse(format!("bad ring element {other}"))),
        }
    }

    pub fn elem_to_json(&self, a: &Elem) -> serde_json::Value {
        if a.den == 1 && !matches!(self, CoeffRing::FiniteField(..)) {
            serde_json::Value::from(a.num as i64)
        } else {
            serde_json::Value::String(self.format(a))
        }
    }

    /// Short descriptor used on the command line and in JSON.
    pub fn descriptor(&self) -> String {
        match *self {
            CoeffRing::Integers => "Z".into(),
            CoeffRing::Rationals => "Q".into(),
            CoeffRing::PrimeField(p) => format!("Fp:{p}"),
            CoeffRing::FiniteField(p, n) => format!("Fq:{p},{n}"),
            CoeffRing::LocalizedIntegers(p) => format!("Zp:{p}"),
            CoeffRing::IntegersMod(m) => format!("Zmod:{m}"),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::Rationals => write!(f, "Q"),
            CoeffRing::PrimeField(p) => write!(f, "F_{p}"),
            CoeffRing::FiniteField(p, n) => write!(f, "F_{{{p}^{n}}}"),
            CoeffRing::LocalizedIntegers(p) => write!(f, "Z_({p})"),
            CoeffRing::IntegersMod(m) => write!(f, "Z/{m}"),
        }
    }
}
