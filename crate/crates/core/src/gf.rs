//! Exact arithmetic in GF(p^m) for small prime powers.
//!
//! Elements are stored as integer indices in `0..p^m`: the index encodes the
//! polynomial coefficient vector base p, with the coefficient of `x^i`
//! carrying weight `p^i`. The printable form is the base-p digit string with
//! the most significant (highest-degree) coefficient first, so in GF(8) the
//! string `011` is x+1 and has index 3. Multiplication goes through
//! discrete-log tables built once at construction.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Hard cap on field size; lattice enumeration needs all of GF(q)^n in memory.
pub const FIELD_SIZE_CAP: u64 = 1 << 20;
/// Maximum extension degree.
pub const MAX_DEGREE: u32 = 16;

/// An immutable description of GF(p^m) together with its arithmetic tables.
///
/// Construction validates primality of `p` and irreducibility of the modulus,
/// so a `FieldSpec` in hand is always a genuine field. Share it via `Arc`.
#[derive(Debug)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic irreducible modulus, coefficient of x^i at position i (length m+1).
    modulus: Vec<u32>,
    /// exp[i] = g^i for the canonical generator g, i in 0..q-1.
    exp: Vec<u32>,
    /// log[v] for v in 1..q; log[0] is unused.
    log: Vec<u32>,
    generator: u32,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial arithmetic over GF(p) on coefficient vectors (index = degree).
mod poly {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of a modulo the monic polynomial b.
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        debug_assert_eq!(b[db], 1, "modulus must be monic");
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            for i in 0..=db {
                let sub = ((lead as u64 * b[i] as u64) % p as u64) as u32;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub as u64) % p as u64) as u32;
            }
            // the leading coefficient is now zero
            trim(&mut r);
        }
        r
    }
}

impl FieldSpec {
    /// Builds GF(p^m). With `modulus = None` a deterministic default is used:
    /// the monic irreducible polynomial of degree m whose coefficient vector
    /// has the least integer encoding (so GF(4) gets x^2+x+1, GF(8) gets
    /// x^3+x+1).
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::OutOfRange(format!("extension degree {m}")));
        }
        let size = (p as u64)
            .checked_pow(m)
            .unwrap_or(u64::MAX);
        if size > FIELD_SIZE_CAP {
            return Err(Error::SizeCapExceeded {
                size,
                cap: FIELD_SIZE_CAP,
            });
        }
        let q = size as u32;

        let modulus = match modulus {
            Some(mut c) => {
                poly::trim(&mut c);
                if c.len() != m as usize + 1 || c[m as usize] != 1 {
                    return Err(Error::Parse(format!(
                        "modulus must be monic of degree {m}"
                    )));
                }
                if c.iter().any(|&x| x >= p) {
                    return Err(Error::Parse("modulus coefficient out of range".into()));
                }
                if !Self::irreducible(&c, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                c
            }
            None => Self::default_modulus(p, m),
        };

        let mut spec = FieldSpec {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        spec.build_tables();
        Ok(Arc::new(spec))
    }

    fn default_modulus(p: u32, m: u32) -> Vec<u32> {
        if m == 1 {
            return vec![0, 1]; // x
        }
        // candidates x^m + c, c encoded base p, in increasing integer order
        let lower = (p as u64).pow(m) as u32;
        for c in 0..lower {
            let mut coeffs = Vec::with_capacity(m as usize + 1);
            let mut v = c;
            for _ in 0..m {
                coeffs.push(v % p);
                v /= p;
            }
            coeffs.push(1);
            if Self::irreducible(&coeffs, p) {
                return coeffs;
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// Exhaustive factor check: no monic divisor of degree 1..=m/2.
    fn irreducible(coeffs: &[u32], p: u32) -> bool {
        let m = coeffs.len() - 1;
        if m == 1 {
            return true;
        }
        for d in 1..=m / 2 {
            let count = (p as u64).pow(d as u32);
            for c in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut v = c;
                for _ in 0..d {
                    div.push((v % p as u64) as u32);
                    v /= p as u64;
                }
                div.push(1);
                if poly::rem(coeffs, &div, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn value_to_coeffs(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut v = v;
        for _ in 0..self.m {
            out.push(v % self.p);
            v /= self.p;
        }
        poly::trim(&mut out);
        out
    }

    fn coeffs_to_value(&self, c: &[u32]) -> u32 {
        let mut v = 0u32;
        for &ci in c.iter().rev() {
            v = v * self.p + ci;
        }
        v
    }

    /// Multiplication straight from the polynomial representation; used only
    /// while bootstrapping the log tables.
    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.value_to_coeffs(a);
        let pb = self.value_to_coeffs(b);
        let prod = poly::mul(&pa, &pb, self.p);
        let red = poly::rem(&prod, &self.modulus, self.p);
        self.coeffs_to_value(&red)
    }

    fn raw_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.q;
        if q == 2 {
            self.generator = 1;
            self.exp = vec![1];
            self.log = vec![0, 0];
            return;
        }
        let group = (q - 1) as u64;
        let mut rest = group;
        let mut primes = Vec::new();
        let mut d = 2u64;
        while d * d <= rest {
            if rest.is_multiple_of(d) {
                primes.push(d);
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        // least generator in the canonical (integer) element order
        let generator = (2..q)
            .find(|&g| primes.iter().all(|&l| self.raw_pow(g, group / l) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        self.generator = generator;
        let mut exp = vec![0u32; group as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..group as usize {
            exp[i] = acc;
            log[acc as usize] = i as u32;
            acc = self.raw_mul(acc, generator);
        }
        debug_assert_eq!(acc, 1);
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements, p^m.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u32;
        let mut pw = 1u32;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.m {
            out += (a % self.p + b % self.p) % self.p * pw;
            a /= self.p;
            b /= self.p;
            pw *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut out = 0u32;
        let mut pw = 1u32;
        let mut a = a;
        for _ in 0..self.m {
            out += (self.p - a % self.p) % self.p * pw;
            a /= self.p;
            pw *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.q == 2 {
            return 1;
        }
        let group = (self.q - 1) as u64;
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % group;
        self.exp[s as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.q == 2 {
            return Ok(1);
        }
        let group = self.q - 1;
        let l = self.log[a as usize];
        Ok(self.exp[((group - l) % group) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius endomorphism x -> x^p.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// The deterministic generator of the multiplicative group: the least
    /// element of order p^m - 1 in the canonical element ordering.
    pub fn primitive_value(&self) -> u32 {
        self.generator
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut acc = a;
        let mut ord = 1;
        while acc != 1 {
            acc = self.mul(acc, a);
            ord += 1;
        }
        Ok(ord)
    }

    /// Embeds a residue of GF(p) as a constant polynomial.
    pub fn embed_prime(&self, c: u32) -> u32 {
        c % self.p
    }

    /// True when the element lies in the prime subfield GF(p).
    pub fn in_prime_subfield(&self, a: u32) -> bool {
        a < self.p
    }

    /// Base-p digit string, most significant coefficient first: GF(8) element
    /// x+1 prints as `011`. Characteristics above 10 separate digits with `.`.
    pub fn format_elem(&self, v: u32) -> String {
        let mut digits = Vec::with_capacity(self.m as usize);
        let mut v = v;
        for _ in 0..self.m {
            digits.push(v % self.p);
            v /= self.p;
        }
        digits.reverse();
        if self.p <= 10 {
            digits
                .iter()
                .map(|d| char::from_digit(*d, 10).unwrap())
                .collect()
        } else {
            digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<u32> {
        let digits: Vec<u32> = if self.p <= 10 {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::Parse(format!("bad digit '{c}'")))
                })
                .collect::<Result<_>>()?
        } else {
            s.split('.')
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad digit '{t}'")))
                })
                .collect::<Result<_>>()?
        };
        if digits.len() != self.m as usize {
            return Err(Error::Parse(format!(
                "element '{s}' must have {} digits",
                self.m
            )));
        }
        if digits.iter().any(|&d| d >= self.p) {
            return Err(Error::Parse(format!("digit out of range in '{s}'")));
        }
        Ok(digits.iter().fold(0, |acc, &d| acc * self.p + d))
    }

    /// `GF(p)` or `GF(p^m)` literal.
    pub fn literal(&self) -> String {
        if self.m == 1 {
            format!("GF({})", self.p)
        } else {
            format!("GF({}^{})", self.p, self.m)
        }
    }
}

/// Splits q into (p, m) with p prime, or rejects.
pub fn factor_prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::OutOfRange(format!("q = {q}")));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut m = 0;
            let mut v = q;
            while v.is_multiple_of(p) {
                v /= p;
                m += 1;
            }
            if v != 1 {
                return Err(Error::NonPrimeCharacteristic(q));
            }
            return Ok((p, m));
        }
        p += 1;
    }
    Ok((q, 1))
}

/// An element paired with its field, for code that wants checked arithmetic
/// rather than the raw index ops on `FieldSpec`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Arc<FieldSpec>,
    value: u32,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}]",
            self.field.literal(),
            self.field.format_elem(self.value)
        )
    }
}

impl FieldElem {
    pub fn new(field: Arc<FieldSpec>, value: u32) -> Result<Self> {
        if value >= field.order() {
            return Err(Error::OutOfRange(format!("element index {value}")));
        }
        Ok(FieldElem { field, value })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(FieldElem {
            field: self.field.clone(),
            value: self.field.add(self.value, other.value),
        })
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(FieldElem {
            field: self.field.clone(),
            value: self.field.sub(self.value, other.value),
        })
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(FieldElem {
            field: self.field.clone(),
            value: self.field.mul(self.value, other.value),
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(FieldElem {
            field: self.field.clone(),
            value: self.field.div(self.value, other.value)?,
        })
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(FieldElem {
            field: self.field.clone(),
            value: self.field.inv(self.value)?,
        })
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            value: self.field.pow(self.value, e),
        }
    }
}

/// The deterministic primitive element as a `FieldElem`.
pub fn primitive_element(field: &Arc<FieldSpec>) -> FieldElem {
    FieldElem {
        field: field.clone(),
        value: field.primitive_value(),
    }
}
