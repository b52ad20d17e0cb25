//! Finite fields GF(p^r).
//!
//! A field is fixed by its characteristic `p`, degree `r` and a monic
//! irreducible modulus of degree `r`; the modulus is always the
//! lexicographically smallest one (coefficients compared constant term
//! first), so every run builds bit-identical fields. Elements are stored by
//! their base-`p` integer encoding `sum(c_i * p^i)`, which doubles as the
//! total order used for every "smallest element" choice.
//!
//! Multiplication goes through discrete log / antilog tables built from the
//! primitive element with the smallest encoding.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest field order `p^r` accepted by [`Field::new`].
pub const FIELD_ORDER_CAP: u64 = 1 << 20;

/// An element of GF(p^r), stored by its integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps an encoding without checking it against a field order.
    pub const fn from_encoding_unchecked(value: u32) -> Self {
        FieldElement(value)
    }

    pub const fn encoding(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^r) together with its canonical modulus and log tables.
#[derive(Clone)]
pub struct Field {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^r) with the lexicographically smallest monic irreducible
    /// modulus of degree `r` (the polynomial `x` when `r = 1`).
    pub fn new(p: u32, r: u32) -> Result<Field> {
        let q = check_order(p, r)?;
        Ok(Self::build(p, r, q, smallest_irreducible(p, r)))
    }

    /// Builds GF(p^r) over an explicit monic irreducible modulus, given
    /// constant term first. Elements are encoded relative to that modulus,
    /// so two such fields of the same order are isomorphic but not equal.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field> {
        let r = modulus.len().saturating_sub(1) as u32;
        let q = check_order(p, r)?;
        let valid = modulus.last() == Some(&1)
            && modulus.iter().all(|&c| c < p)
            && is_irreducible(modulus, p);
        if !valid {
            return Err(Error::ReducibleModulus(modulus.to_vec()));
        }
        Ok(Self::build(p, r, q, modulus.to_vec()))
    }

    fn build(p: u32, r: u32, q: u32, modulus: Vec<u32>) -> Field {
        let primitive = find_primitive(p, r, q, &modulus);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let g = decode(primitive, p, r);
        let mut cur = vec![0u32; r as usize];
        cur[0] = 1;
        for k in 0..(q - 1) {
            let e = encode(&cur, p);
            exp.push(e);
            log[e as usize] = k;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        Field {
            p,
            r,
            q,
            modulus,
            primitive,
            exp,
            log,
        }
    }

    /// Parses the `p^r` notation used on the command line, e.g. `"3^2"`.
    pub fn parse_order(text: &str) -> Result<(u32, u32)> {
        let bad = || Error::Parse(format!("field must be given as p^r, got {text:?}"));
        let (p, r) = text.trim().split_once('^').ok_or_else(bad)?;
        let p = p.trim().parse::<u32>().map_err(|_| bad())?;
        let r = r.trim().parse::<u32>().map_err(|_| bad())?;
        Ok((p, r))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first (length `r + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Checked conversion from an integer encoding.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.q as u64 {
            return Err(Error::ElementOutOfRange {
                value,
                q: self.q as u64,
            });
        }
        Ok(FieldElement(value as u32))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, value: i64) -> FieldElement {
        FieldElement(value.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficients over F_p, constant term first, length `r`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        decode(x.0, self.p, self.r)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!(
                "coefficient vector {coeffs:?} does not describe an element of GF({}^{})",
                self.p, self.r
            )));
        }
        Ok(FieldElement(encode(coeffs, self.p)))
    }

    /// All elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.r == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.r {
            let s = x % p + y % p;
            let digit = if s >= p { s - p } else { s };
            out += digit * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.p;
        if p == 2 {
            return a;
        }
        if self.r == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.r {
            let c = x % p;
            let digit = if c == 0 { 0 } else { p - c };
            out += digit * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.q - 1;
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if k >= n { k - n } else { k }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.q - 1;
        let k = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - k) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElement(self.exp[k as usize])
    }

    /// The p-th power map.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// Generator of the multiplicative group with the smallest encoding.
    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.primitive)
    }

    /// Discrete logarithm to the base [`Field::primitive_element`].
    pub fn log(&self, a: FieldElement) -> Result<u32> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        let k = self.log(a)? as u64;
        let n = (self.q - 1) as u64;
        Ok(n / gcd(n, k))
    }

    /// The group of `n`-th roots of unity, sorted by encoding.
    pub fn roots_of_unity(&self, n: u64) -> Result<Vec<FieldElement>> {
        let order = (self.q - 1) as u64;
        if n == 0 || !order.is_multiple_of(n) {
            return Err(Error::RootOfUnityNotRational {
                n,
                q: self.q as u64,
            });
        }
        let step = order / n;
        let mut roots: Vec<FieldElement> = (0..n)
            .map(|k| FieldElement(self.exp[(k * step) as usize]))
            .collect();
        roots.sort_unstable();
        Ok(roots)
    }

    /// Generator of the order-`n` subgroup of the multiplicative group: the
    /// `(q-1)/n`-th power of the primitive element.
    pub fn root_of_unity(&self, n: u64) -> Result<FieldElement> {
        let order = (self.q - 1) as u64;
        if n == 0 || !order.is_multiple_of(n) {
            return Err(Error::RootOfUnityNotRational {
                n,
                q: self.q as u64,
            });
        }
        Ok(FieldElement(self.exp[(order / n) as usize % self.exp.len()]))
    }

    pub fn is_square(&self, a: FieldElement) -> Result<bool> {
        if a.0 == 0 {
            return Err(Error::ZeroNotSquareClass);
        }
        Ok(self.p == 2 || self.log[a.0 as usize].is_multiple_of(2))
    }

    /// A square root, the one with the smaller encoding when there are two.
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return Some(a);
        }
        let k = self.log[a.0 as usize];
        if self.p == 2 {
            // squaring is a bijection with inverse x -> x^(q/2)
            return Some(self.pow(a, (self.q / 2) as u64));
        }
        if k % 2 == 1 {
            return None;
        }
        let root = FieldElement(self.exp[(k / 2) as usize]);
        Some(root.min(self.neg(root)))
    }
}

/// Field embedding GF(p^s) -> GF(p^r) for `s | r`.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    small_p: u32,
    small_r: u32,
    big_r: u32,
    image: Vec<FieldElement>,
    preimage: HashMap<FieldElement, FieldElement>,
}

impl SubfieldEmbedding {
    pub fn apply(&self, x: FieldElement) -> FieldElement {
        self.image[x.0 as usize]
    }

    /// Inverse of [`SubfieldEmbedding::apply`] on its image.
    pub fn preimage(&self, y: FieldElement) -> Option<FieldElement> {
        self.preimage.get(&y).copied()
    }

    /// Image of the whole small field, indexed by encoding.
    pub fn image(&self) -> &[FieldElement] {
        &self.image
    }

    pub fn degrees(&self) -> (u32, u32) {
        (self.small_r, self.big_r)
    }

    pub fn characteristic(&self) -> u32 {
        self.small_p
    }
}

/// Embeds `small` into `big`, sending the class of `x` in `small` to the
/// root of the small modulus in `big` with the smallest encoding.
pub fn subfield_embedding(small: &Field, big: &Field) -> Result<SubfieldEmbedding> {
    if small.p != big.p || !big.r.is_multiple_of(small.r) {
        return Err(Error::IncompatibleEmbedding {
            small_p: small.p,
            small_r: small.r,
            big_p: big.p,
            big_r: big.r,
        });
    }
    // Prime field residues have the same encoding in every extension.
    let image: Vec<FieldElement> = if small.r == 1 {
        small.elements().collect()
    } else {
        let root = big
            .elements()
            .find(|&t| {
                let mut acc = FieldElement::ZERO;
                for &c in small.modulus.iter().rev() {
                    acc = big.add(big.mul(acc, t), FieldElement(c));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::Internal("irreducible modulus has no root in extension".into()))?;
        small
            .elements()
            .map(|x| {
                let mut acc = FieldElement::ZERO;
                for c in small.coeffs(x).into_iter().rev() {
                    acc = big.add(big.mul(acc, root), FieldElement(c));
                }
                acc
            })
            .collect()
    };
    let preimage = image
        .iter()
        .enumerate()
        .map(|(i, &y)| (y, FieldElement(i as u32)))
        .collect();
    Ok(SubfieldEmbedding {
        small_p: small.p,
        small_r: small.r,
        big_r: big.r,
        image,
        preimage,
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Multiplicative order of `a` modulo `n` (`n >= 1`, `gcd(a, n) = 1`).
pub fn multiplicative_order_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if gcd(a, n) != 1 {
        return None;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * a % n;
        k += 1;
    }
    Some(k)
}

fn check_order(p: u32, r: u32) -> Result<u32> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if r == 0 {
        return Err(Error::ZeroDegree);
    }
    let too_large = Error::FieldTooLarge {
        p: p as u64,
        r,
        cap: FIELD_ORDER_CAP,
    };
    let q = (p as u64).checked_pow(r).ok_or(too_large.clone())?;
    if q > FIELD_ORDER_CAP {
        return Err(too_large);
    }
    Ok(q as u32)
}

fn decode(mut value: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(value % p);
        value /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// `a * b mod modulus` for coefficient vectors of length `deg(modulus)`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let r = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * r];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for k in (r..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus[..r].iter().enumerate() {
            let idx = k - r + i;
            prod[idx] = (prod[idx] + (p64 - c) * m as u64) % p64;
        }
    }
    prod[..r].iter().map(|&c| c as u32).collect()
}

fn poly_pow(x: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let r = modulus.len() - 1;
    let mut result = vec![0u32; r];
    result[0] = 1;
    let mut base = x.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, modulus, p);
        }
        base = poly_mulmod(&base, &base, modulus, p);
        e >>= 1;
    }
    result
}

/// Remainder of `f` modulo the monic polynomial `g` (constant term first).
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let dg = g.len() - 1;
    let mut rem: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    for k in (dg..rem.len()).rev() {
        let c = rem[k] % p64;
        if c == 0 {
            continue;
        }
        for (i, &gc) in g.iter().enumerate() {
            let idx = k - dg + i;
            rem[idx] = (rem[idx] + (p64 - c) * gc as u64) % p64;
        }
    }
    rem.truncate(dg);
    rem.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility by exhaustive search for a monic divisor of degree at most
/// `deg / 2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for t in 0..count {
            let mut g = decode(t as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// All monic irreducibles of degree `r` in canonical order (the first is
/// the modulus [`Field::new`] picks).
pub fn monic_irreducibles(p: u32, r: u32) -> Vec<Vec<u32>> {
    if r == 1 {
        return (0..p).map(|c| vec![(p - c) % p, 1]).collect();
    }
    (0..(p as u64).pow(r))
        .map(|t| {
            let mut f: Vec<u32> = decode(t as u32, p, r).into_iter().rev().collect();
            f.push(1);
            f
        })
        .filter(|f| f[0] != 0 && is_irreducible(f, p))
        .collect()
}

fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    if r == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(r);
    for t in 0..count {
        // c_0 is the most significant digit of the scan counter.
        let mut f: Vec<u32> = decode(t as u32, p, r).into_iter().rev().collect();
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn find_primitive(p: u32, r: u32, q: u32, modulus: &[u32]) -> u32 {
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let mut one = vec![0u32; r as usize];
    one[0] = 1;
    (1..q)
        .find(|&enc| {
            let g = decode(enc, p, r);
            factors
                .iter()
                .all(|&l| poly_pow(&g, order / l, modulus, p) != one)
        })
        .expect("multiplicative group of a finite field is cyclic")
}
