//! Small finite fields GF(p^h) with table-driven arithmetic.
//!
//! An element is stored as its code `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`, where
//! `c_0 + c_1 x + ... + c_{h-1} x^{h-1}` is its polynomial representative modulo
//! the field's fixed irreducible modulus.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn code(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Splits `q` into `(p, h)` with `q = p^h`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

/// The finite field GF(p^h) with precomputed operation tables.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        write!(f, "GF({}); modulus=[{}]", self.q, coeffs.join(","))
    }
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in m.iter().enumerate() {
            let idx = i + shift;
            r[idx] = (r[idx] + p * p - factor * c % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|x| a * x % p == 1).expect("nonzero residue mod a prime")
}

/// Monic polynomials of degree `deg` in lexicographic order of their
/// coefficient sequence read from the constant term upwards.
fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(deg);
    (0..count).map(move |k| {
        let mut coeffs = vec![0; deg as usize + 1];
        let mut rest = k;
        for i in (0..deg as usize).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[deg as usize] = 1;
        coeffs
    })
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|f| !poly_rem(poly, &f, p).is_empty()))
}

fn decode(code: u32, p: u32, h: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(h as usize);
    let mut rest = code;
    for _ in 0..h {
        out.push(rest % p);
        rest /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Field {
    /// Builds GF(p^h) over the lexicographically smallest monic irreducible
    /// modulus of degree `h` (coefficients compared from the constant term up).
    pub fn new(p: u32, h: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let out_of_range = Error::FieldOutOfRange { p, h, max: MAX_ORDER };
        if h == 0 {
            return Err(out_of_range);
        }
        let q = p.checked_pow(h).filter(|&q| q <= MAX_ORDER).ok_or(out_of_range)?;
        let modulus =
            monic_polys(p, h).find(|m| is_irreducible(m, p)).expect("an irreducible polynomial exists in every degree");

        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let pa = decode(a, p, h);
            for b in 0..q {
                let pb = decode(b, p, h);
                let sum: Vec<u32> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
                let mut prod = poly_rem(&poly_mul(&pa, &pb, p), &modulus, p);
                prod.resize(h as usize, 0);
                add[a as usize * qs + b as usize] = encode(&sum, p) as u8;
                mul[a as usize * qs + b as usize] = encode(&prod, p) as u8;
            }
        }
        let neg = (0..qs).map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8).collect();
        let inv = (0..qs)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..qs).find(|&b| mul[a * qs + b] == 1).expect("field element has an inverse") as u8
                }
            })
            .collect();
        Ok(Field { p, h, q, modulus, add, mul, neg, inv })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first, leading 1 last.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u8).map(FieldElem)
    }

    pub fn elem(&self, code: u32) -> Result<FieldElem> {
        if code < self.q {
            Ok(FieldElem(code as u8))
        } else {
            Err(Error::CoordinateOutOfRange { code, q: self.q })
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(FieldElem(self.inv[a.0 as usize]))
        }
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Smallest-code generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let n = self.q - 1;
        self.elements()
            .skip(1)
            .find(|&a| {
                let mut x = a;
                let mut ord = 1;
                while x != FieldElem::ONE {
                    x = self.mul(x, a);
                    ord += 1;
                }
                ord == n
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// The Frobenius powers `x -> x^(p^i)`, `i = 0..h`, each checked to
    /// preserve addition and multiplication.
    pub fn automorphisms(&self) -> Vec<FieldAutomorphism> {
        (0..self.h)
            .map(|i| {
                let exp = (self.p as u64).pow(i);
                let table: Vec<FieldElem> = self.elements().map(|a| self.pow(a, exp)).collect();
                let auto = FieldAutomorphism { power: i, table };
                assert!(
                    self.is_automorphism(&auto.table),
                    "Frobenius power {i} of {self} failed the homomorphism check"
                );
                auto
            })
            .collect()
    }

    /// Exhaustive check that `table` is a bijective ring homomorphism.
    pub fn is_automorphism(&self, table: &[FieldElem]) -> bool {
        if table.len() != self.q as usize {
            return false;
        }
        let mut seen = vec![false; table.len()];
        for t in table {
            match seen.get_mut(t.0 as usize) {
                Some(s) if !*s => *s = true,
                _ => return false,
            }
        }
        let img = |a: FieldElem| table[a.0 as usize];
        self.elements().all(|a| {
            self.elements().all(|b| {
                img(self.add(a, b)) == self.add(img(a), img(b)) && img(self.mul(a, b)) == self.mul(img(a), img(b))
            })
        })
    }
}

/// The automorphism `x -> x^(p^power)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldAutomorphism {
    pub power: u32,
    pub table: Vec<FieldElem>,
}

impl FieldAutomorphism {
    #[inline]
    pub fn apply(&self, a: FieldElem) -> FieldElem {
        self.table[a.0 as usize]
    }

    pub fn compose(&self, then: &FieldAutomorphism, h: u32) -> FieldAutomorphism {
        FieldAutomorphism {
            power: (self.power + then.power) % h,
            table: self.table.iter().map(|&a| then.apply(a)).collect(),
        }
    }
}
