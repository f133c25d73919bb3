//! Finite fields GF(q), q = p^m <= 256.
//!
//! The linear algebra in this crate is written against the [`Field`] trait.
//! A field value acts as the arithmetic context; elements are small `Copy`
//! values that carry no reference back to their field. Two implementations
//! ship with the crate: [`FieldSpec`] (any supported q, table driven) and
//! [`Gf2`] (the binary field as plain bit operations).

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Arithmetic context for a finite field.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    /// Number of elements q.
    fn order(&self) -> u32;
    /// Prime characteristic p.
    fn characteristic(&self) -> u32;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; zero has none.
    fn inv(&self, a: Self::Elem) -> Result<Self::Elem>;

    /// Element from its integer encoding in `[0, q)`.
    fn elem(&self, value: u32) -> Result<Self::Elem>;
    /// Integer encoding of an element.
    fn value(&self, a: Self::Elem) -> u32;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    /// All q elements in ascending encoding order.
    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order())
            .map(|v| self.elem(v).expect("value below q"))
            .collect()
    }
}

/// An element of a [`FieldSpec`] field, stored as its base-p encoding
/// `value = sum c_i p^i` of the residue polynomial's coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u8);

impl FieldElem {
    pub fn value(self) -> u32 {
        u32::from(self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u8,
    add: Vec<u8>,
    neg: Vec<u8>,
    exp: Vec<u8>,
    log: Vec<u16>,
}

/// GF(q) with a fixed irreducible modulus.
///
/// For every supported `(p, m)` the modulus is the monic irreducible
/// polynomial of degree m whose coefficient vector has the smallest base-p
/// encoding, so element encodings in files are unambiguous. Cloning is
/// cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.0.p)
            .field("m", &self.0.m)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Factor `q` as `p^m`, if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn pow_mod(mut base: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn decode(value: u32, p: u32, m: u32) -> Vec<u32> {
    let mut v = value;
    (0..m)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect()
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `low`.
fn monic(low: u32, deg: u32, p: u32) -> Vec<u32> {
    let mut c = decode(low, p, deg);
    c.push(1);
    c
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = (trim(poly.to_vec()).len() - 1) as u32;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d) {
            if poly_rem(poly, &monic(low, d, p), p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, modulus, p)
}

impl FieldSpec {
    /// GF(p^m) with the built-in modulus for `(p, m)`.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = u64::from(p).checked_pow(m).unwrap_or(u64::MAX);
        if m == 0 || !(2..=256).contains(&q) {
            return Err(Error::FieldOrder(q));
        }
        let q = q as u32;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| monic(low, m, p))
                .find(|f| is_irreducible(f, p))
                .expect("an irreducible polynomial exists in every degree")
        };

        let mut add = vec![0u8; (q * q) as usize];
        let mut neg = vec![0u8; q as usize];
        for a in 0..q {
            let ca = decode(a, p, m);
            let na: Vec<u32> = ca.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = encode(&na, p) as u8;
            for b in 0..q {
                let cb = decode(b, p, m);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&s, p) as u8;
            }
        }

        let order = q - 1;
        let (primitive, powers) = (1..q)
            .find_map(|g| {
                let gp = trim(decode(g, p, m));
                let mut powers = Vec::with_capacity(order as usize);
                let mut cur = vec![1];
                for _ in 0..order {
                    let v = encode(&cur, p);
                    if !powers.is_empty() && v == 1 {
                        return None;
                    }
                    powers.push(v);
                    cur = poly_mulmod(&cur, &gp, &modulus, p);
                }
                Some((g, powers))
            })
            .expect("GF(q)* is cyclic");

        let mut exp = vec![0u8; 2 * order as usize];
        let mut log = vec![0u16; q as usize];
        for (i, &v) in powers.iter().enumerate() {
            exp[i] = v as u8;
            exp[i + order as usize] = v as u8;
            log[v as usize] = i as u16;
        }

        Ok(FieldSpec(Arc::new(Tables {
            p,
            m,
            q,
            modulus,
            primitive: primitive as u8,
            add,
            neg,
            exp,
            log,
        })))
    }

    /// GF(q) from the order alone, as named in files (`q=<integer>`).
    pub fn with_order(q: u32) -> Result<Self> {
        if !(2..=256).contains(&q) {
            return Err(Error::FieldOrder(u64::from(q)));
        }
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, lowest degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn primitive(&self) -> FieldElem {
        FieldElem(self.0.primitive)
    }

    /// `g^i` for the primitive element g.
    pub fn primitive_power(&self, i: u32) -> FieldElem {
        FieldElem(self.0.exp[(i % (self.0.q - 1)) as usize])
    }
}

impl Field for FieldSpec {
    type Elem = FieldElem;

    fn order(&self) -> u32 {
        self.0.q
    }

    fn characteristic(&self) -> u32 {
        self.0.p
    }

    fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    #[inline]
    fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    #[inline]
    fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let t = &self.0;
        FieldElem(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize])
    }

    fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &self.0;
        let order = t.q as usize - 1;
        Ok(FieldElem(t.exp[(order - t.log[a.0 as usize] as usize) % order]))
    }

    fn elem(&self, value: u32) -> Result<FieldElem> {
        if value >= self.0.q {
            return Err(Error::ElementRange { value, q: self.0.q });
        }
        Ok(FieldElem(value as u8))
    }

    fn value(&self, a: FieldElem) -> u32 {
        a.value()
    }
}

/// The binary field with elements as `bool`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Gf2;

impl Field for Gf2 {
    type Elem = bool;

    fn order(&self) -> u32 {
        2
    }

    fn characteristic(&self) -> u32 {
        2
    }

    fn zero(&self) -> bool {
        false
    }

    fn one(&self) -> bool {
        true
    }

    #[inline]
    fn add(&self, a: bool, b: bool) -> bool {
        a ^ b
    }

    #[inline]
    fn neg(&self, a: bool) -> bool {
        a
    }

    #[inline]
    fn mul(&self, a: bool, b: bool) -> bool {
        a & b
    }

    fn inv(&self, a: bool) -> Result<bool> {
        if a {
            Ok(true)
        } else {
            Err(Error::DivisionByZero)
        }
    }

    fn elem(&self, value: u32) -> Result<bool> {
        match value {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(Error::ElementRange { value, q: 2 }),
        }
    }

    fn value(&self, a: bool) -> u32 {
        u32::from(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(f: &FieldSpec, v: u32) -> FieldElem {
        f.elem(v).unwrap()
    }

    #[test]
    fn construction() {
        let gf2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(gf2.q(), 2);
        let gf4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(gf4.modulus(), &[1, 1, 1]);
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldSpec::new(2, 9).unwrap_err(), Error::FieldOrder(512));
        assert_eq!(FieldSpec::new(2, 0).unwrap_err(), Error::FieldOrder(1));
        assert_eq!(FieldSpec::with_order(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(FieldSpec::with_order(257).unwrap_err(), Error::FieldOrder(257));
    }

    #[test]
    fn known_moduli() {
        assert_eq!(FieldSpec::with_order(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldSpec::with_order(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(FieldSpec::with_order(9).unwrap().modulus(), &[1, 0, 1]);
        // x^8 + x^4 + x^3 + x + 1
        assert_eq!(
            FieldSpec::with_order(256).unwrap().modulus(),
            &[1, 1, 0, 1, 1, 0, 0, 0, 1]
        );
    }

    #[test]
    fn small_examples() {
        let gf2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(gf2.add(e(&gf2, 1), e(&gf2, 1)), e(&gf2, 0));
        assert_eq!(gf2.mul(e(&gf2, 1), e(&gf2, 1)), e(&gf2, 1));
        assert_eq!(gf2.inv(e(&gf2, 1)).unwrap(), e(&gf2, 1));

        let gf4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(gf4.add(e(&gf4, 2), e(&gf4, 3)), e(&gf4, 1));
        assert_eq!(gf4.mul(e(&gf4, 2), e(&gf4, 2)), e(&gf4, 3));
        assert_eq!(gf4.inv(e(&gf4, 2)).unwrap(), e(&gf4, 3));

        let gf3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(gf3.add(e(&gf3, 2), e(&gf3, 2)), e(&gf3, 1));

        let gf5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(gf5.mul(e(&gf5, 3), e(&gf5, 4)), e(&gf5, 2));
        assert_eq!(gf5.inv(e(&gf5, 2)).unwrap(), e(&gf5, 3));
        assert_eq!(gf5.inv(e(&gf5, 0)), Err(Error::DivisionByZero));
        assert!(gf5.elem(5).is_err());
    }

    #[test]
    fn axioms_exhaustive_small() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = FieldSpec::with_order(q).unwrap();
            let els = f.elements();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !f.is_zero(a) {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplication_matches_polynomial_product() {
        for q in [4, 8, 9, 25, 27, 32, 49, 64, 81, 125, 128, 243, 256] {
            let f = FieldSpec::with_order(q).unwrap();
            let (p, m) = (f.p(), f.m());
            for a in 0..q {
                for b in (0..q).step_by(7) {
                    let want = encode(
                        &poly_mulmod(&trim(decode(a, p, m)), &trim(decode(b, p, m)), f.modulus(), p),
                        p,
                    );
                    assert_eq!(f.mul(e(&f, a), e(&f, b)).value(), want, "q={q} {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn every_supported_order_builds() {
        let mut count = 0;
        for q in 2..=256 {
            if prime_power(q).is_some() {
                let f = FieldSpec::with_order(q).unwrap();
                assert!(is_irreducible(f.modulus(), f.p()));
                let mut seen = vec![false; q as usize];
                for i in 0..q - 1 {
                    let v = f.primitive_power(i).value() as usize;
                    assert!(!seen[v] && v != 0);
                    seen[v] = true;
                }
                count += 1;
            }
        }
        // primes below 256 plus the proper prime powers
        assert_eq!(count, 54 + 16);
    }

    #[test]
    fn gf2_agrees_with_table_field() {
        let spec = FieldSpec::new(2, 1).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let (x, y) = (Gf2.elem(a).unwrap(), Gf2.elem(b).unwrap());
                assert_eq!(Gf2.value(Gf2.add(x, y)), spec.add(e(&spec, a), e(&spec, b)).value());
                assert_eq!(Gf2.value(Gf2.mul(x, y)), spec.mul(e(&spec, a), e(&spec, b)).value());
            }
        }
        assert!(Gf2.inv(false).is_err());
    }
}
