//! Finite fields `F_q`, `q = p^e`, with elements stored by their base-`p` encoding.
//!
//! An element of `F_{p^e}` is a coefficient vector `(c_0, ..., c_{e-1})` of a
//! polynomial in the residue class ring `F_p[x] / (modulus)`. The encoding used
//! everywhere in the crate (JSON, CSV, explicit point lists) reads that vector
//! as the base-`p` integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`, so elements of
//! the prime subfield encode as themselves.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Moduli used when an extension field is requested without one.
/// Coefficients are listed from the constant term up to the (monic) leading term.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("no built-in modulus for q = {0}; supply one explicitly")]
    NoBuiltinModulus(u32),
    #[error("modulus must be monic of degree {expected} (got {got} coefficients)")]
    BadModulus { expected: u32, got: usize },
    #[error("modulus coefficient {0} is not reduced mod p")]
    ModulusCoefficient(u32),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("element encoding {value} is outside F_{q}")]
    OutOfRange { value: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// A field element, stored as its base-`p` encoding. Only meaningful together
/// with the [`Field`] it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The base-`p` integer encoding.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus: Vec<u32>,
}

fn one() -> u32 {
    1
}

pub fn is_prime(n: u32) -> bool {
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

/// Splits `q` into `(p, e)` with `q = p^e`.
pub fn prime_power(q: u32) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p, e))
}

pub fn builtin_modulus(p: u32, e: u32) -> Option<&'static [u32]> {
    BUILTIN_MODULI
        .iter()
        .find(|(bp, be, _)| *bp == p && *be == e)
        .map(|(_, _, m)| *m)
}

// Dense polynomials over F_p, low degree first. Only used while building a field.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lead_inv = mod_inv(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (k, &bc) in b.iter().enumerate() {
            let sub = (factor as u64 * bc as u64 % p as u64) as u32;
            r[shift + k] = (r[shift + k] + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime and small, Fermat is fine.
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    base = acc as u32;
    base
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                cand.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `F_{p^e}`. For `e > 1` the modulus is the monic irreducible
    /// polynomial given low degree first; when omitted a built-in one is used
    /// (available for `q <= 32`).
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = if e == 1 {
            Vec::new()
        } else {
            let m = match modulus {
                Some(m) => m.to_vec(),
                None => builtin_modulus(p, e)
                    .ok_or(FieldError::NoBuiltinModulus(q))?
                    .to_vec(),
            };
            if m.len() != e as usize + 1 || m[e as usize] != 1 {
                return Err(FieldError::BadModulus { expected: e, got: m.len() });
            }
            if let Some(&c) = m.iter().find(|&&c| c >= p) {
                return Err(FieldError::ModulusCoefficient(c));
            }
            if !is_irreducible(&m, p) {
                return Err(FieldError::Reducible(p));
            }
            m
        };
        let mut field = Field { p, e, q, modulus, exp: Vec::new(), log: Vec::new(), add_table: None };
        field.build_tables();
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// `F_q` with the built-in modulus when `q` is not prime.
    pub fn with_order(q: u32) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q)?;
        Self::new(p, e, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self, FieldError> {
        let modulus = (!spec.modulus.is_empty()).then_some(spec.modulus.as_slice());
        Self::new(spec.p, spec.e, modulus)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, e: self.e, modulus: self.modulus.clone() }
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let ca = self.decode(a);
        let cb = self.decode(b);
        let mut prod = vec![0u32; ca.len() + cb.len() - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let r = if self.e == 1 { prod } else { poly_rem(&prod, &self.modulus, self.p) };
        self.encode(&r)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        // smallest generator of the multiplicative group
        let factors: Vec<u32> = (2..=order).filter(|d| order.is_multiple_of(*d) && is_prime(*d)).collect();
        let generator = (1..q)
            .find(|&g| {
                factors.iter().all(|&f| self.slow_pow(g, order / f) != 1) && (order > 1 || g == 1)
            })
            .expect("irreducible modulus yields a cyclic group");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        if self.e > 1 && q <= 256 {
            let mut tab = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    tab[(a * q + b) as usize] = self.digit_add(a, b) as u16;
                }
            }
            self.add_table = Some(tab);
        }
    }

    fn slow_pow(&self, mut base: u32, mut e: u32) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn decode(&self, mut v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn digit_add(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elem(&self, code: u32) -> Result<Fe, FieldError> {
        if code >= self.q {
            return Err(FieldError::OutOfRange { value: code, q: self.q });
        }
        Ok(Fe(code))
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        self.decode(a.0)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Fe, FieldError> {
        if coeffs.len() != self.e as usize {
            return Err(FieldError::BadModulus { expected: self.e, got: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::OutOfRange { value: c, q: self.p });
        }
        Ok(Fe(self.encode(coeffs)))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// The generator of `F_q^*` used for the log tables.
    pub fn primitive_element(&self) -> Fe {
        Fe(self.exp.get(1).copied().unwrap_or(1))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.e == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(tab) => Fe(tab[(a.0 * self.q + b.0) as usize] as u32),
            None => Fe(self.digit_add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.e == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut v = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((self.p - v % self.p) % self.p) * place;
            v /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.e == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let n = self.q - 1;
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[(if k >= n { k - n } else { k }) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(Fe(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        Fe(self.exp[k as usize])
    }

    pub fn apply(&self, op: FieldOp, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
        })
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fe) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(n / gcd(n, l))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
