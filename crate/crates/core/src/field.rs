//! Small prime-power fields GF(p^n) with dense coefficient vectors.
//!
//! Only used to realize the Singer cycle of PG(2, q), so fields are capped at
//! 2^20 elements and every choice (modulus, primitive element) is made by an
//! exhaustive scan in a fixed order.
//!
//! Polynomials and elements are ordered by their *index*: the coefficient
//! vector read as a base-p integer with the constant term least significant.
//! `x^3 + x + 1` (index 11) therefore precedes `x^3 + x^2 + 1` (index 13).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q = p^e` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    /// Inverse of the first operand; the second is ignored.
    Inv,
}

/// GF(p^n) presented as `Z/pZ[x] / (modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    /// Monic, low degree first, length `n + 1`.
    modulus: Vec<u32>,
}

/// An element of a [`FieldSpec`]: `n` coefficients in `[0, p)`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    coeffs: Vec<u32>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs)
    }
}

impl FieldSpec {
    /// Builds GF(p^n) with the smallest (by index) monic irreducible modulus
    /// of degree `n` having a nonzero constant term.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = (n >= 1)
            .then(|| p.checked_pow(n))
            .flatten()
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or(Error::DegreeOutOfRange { p, n })?;
        let p = p as u32;
        // Monic degree-n polynomials, enumerated by the index of their low part.
        let low_count = order as u32;
        let modulus = (0..low_count)
            .map(|i| {
                let mut poly = digits(i, p, n as usize);
                poly.push(1);
                poly
            })
            .find(|poly| poly[0] != 0 && is_irreducible(poly, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(FieldSpec { p, n, modulus })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Number of elements, `p^n`.
    pub fn order(&self) -> u32 {
        self.p.pow(self.n)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.n as usize] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_index(1)
    }

    /// The element whose coefficients are the base-p digits of `index`.
    pub fn from_index(&self, index: u32) -> FieldElem {
        FieldElem { coeffs: digits(index % self.order(), self.p, self.n as usize) }
    }

    pub fn index(&self, a: &FieldElem) -> u32 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// Builds an element from coefficients (low degree first), reducing them mod p.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.n as usize {
            return Err(Error::FieldMismatch);
        }
        let mut out = self.zero();
        for (slot, &c) in out.coeffs.iter_mut().zip(coeffs) {
            *slot = c % self.p;
        }
        Ok(out)
    }

    /// Embeds an integer of the prime field.
    pub fn scalar(&self, c: u32) -> FieldElem {
        let mut out = self.zero();
        out.coeffs[0] = c % self.p;
        out
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    fn check(&self, a: &FieldElem) -> Result<()> {
        if a.coeffs.len() == self.n as usize && a.coeffs.iter().all(|&c| c < self.p) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % self.p).collect();
        FieldElem { coeffs }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = u64::from(self.p);
        let n = self.n as usize;
        let mut prod = vec![0u64; 2 * n];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        // Reduce from the top using x^n = -(modulus low part).
        for deg in (n..2 * n).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (k, &m) in self.modulus[..n].iter().enumerate() {
                let slot = &mut prod[deg - n + k];
                *slot = (*slot + (p - c) * u64::from(m)) % p;
            }
        }
        FieldElem { coeffs: prod[..n].iter().map(|&c| c as u32).collect() }
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
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

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, u64::from(self.order()) - 2))
    }

    /// Checked binary operation on two elements of this field.
    pub fn arith(&self, a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &FieldElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let one = self.one();
        let mut order = u64::from(self.order()) - 1;
        for r in prime_factors(order) {
            while order % r == 0 && self.pow(a, order / r) == one {
                order /= r;
            }
        }
        Ok(order)
    }

    /// The smallest element (by index) generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let full = u64::from(self.order()) - 1;
        (1..self.order())
            .map(|i| self.from_index(i))
            .find(|a| self.multiplicative_order(a) == Ok(full))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod ", self.p, self.n)?;
        write_poly(f, &self.modulus)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[u32]) -> fmt::Result {
    let mut first = true;
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            f.write_str("+")?;
        }
        first = false;
        match (deg, c) {
            (0, _) => write!(f, "{c}")?,
            (1, 1) => f.write_str("x")?,
            (1, _) => write!(f, "{c}x")?,
            (_, 1) => write!(f, "x^{deg}")?,
            _ => write!(f, "{c}x^{deg}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

fn digits(mut index: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = index % p;
        index /= p;
    }
    out
}

/// Remainder of `a` modulo a monic `b` over Z/pZ (both low degree first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| u64::from(c)).collect();
    let db = b.len() - 1;
    let p = u64::from(p);
    while r.len() > db {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = r.len() - db;
        for (k, &bk) in b[..db].iter().enumerate() {
            let slot = &mut r[shift + k];
            *slot = (*slot + (p - lead) * u64::from(bk)) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive factor search over monic divisors of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}
