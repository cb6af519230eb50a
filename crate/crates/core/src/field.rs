//! Finite fields F_q = F_p[t]/(m(t)) with a deterministic primitive modulus.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field size; element tables are dense.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{a} exceeds the supported maximum {max}")]
    TooLarge { p: u64, a: u32, max: u64 },
    #[error("cannot parse field element {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

struct FieldData {
    p: u32,
    a: u32,
    q: u32,
    /// Monic modulus, coefficients from t^0 upward (length a+1).
    modulus: Vec<u32>,
    /// exp[k] = index of t^k (for a = 1, of g^k with g the primitive root -m_0).
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field F_q, q = p^a. Cheap to clone.
#[derive(Clone)]
pub struct GroundField {
    data: Arc<FieldData>,
}

/// An element of F_q, stored as its base-p digit index (digit j = coefficient of t^j).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u32);

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PartialEq for GroundField {
    fn eq(&self, other: &Self) -> bool {
        self.data.p == other.data.p && self.data.a == other.data.a
    }
}

impl Eq for GroundField {}

impl fmt::Debug for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.data.p, self.data.a)
    }
}

impl fmt::Display for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.data.a == 1 {
            write!(f, "F_{}", self.data.p)
        } else {
            write!(f, "F_{}", self.data.q)
        }
    }
}

impl GroundField {
    pub fn new(p: u64, a: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if a == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(a).filter(|&q| q <= MAX_FIELD_SIZE as u128);
        let q = q.ok_or(FieldError::TooLarge { p, a, max: MAX_FIELD_SIZE })? as u32;
        let p = p as u32;
        let (modulus, exp) = find_primitive_modulus(p, a, q);
        let mut log = vec![0u32; q as usize];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        Ok(GroundField { data: Arc::new(FieldData { p, a, q, modulus, exp, log }) })
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.data.p
    }

    pub fn degree(&self) -> u32 {
        self.data.a
    }

    pub fn size(&self) -> u32 {
        self.data.q
    }

    /// Coefficients of the monic modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.data.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }

    pub fn one(&self) -> Fq {
        Fq(1)
    }

    /// The class of t (for a = 1, the primitive root used for the tables).
    pub fn generator(&self) -> Fq {
        Fq(self.data.exp[1 % self.data.exp.len()])
    }

    pub fn from_index(&self, index: u32) -> Fq {
        Fq(index % self.data.q)
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.data.p as i64) as u32)
    }

    /// Digits of x as a polynomial in t, lowest degree first.
    pub fn digits(&self, x: Fq) -> Vec<u32> {
        let p = self.data.p;
        let mut v = x.0;
        (0..self.data.a)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Fq {
        let p = self.data.p;
        let mut v = 0u32;
        for &d in digits.iter().take(self.data.a as usize).rev() {
            v = v * p + d % p;
        }
        Fq(v)
    }

    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        if self.data.a == 1 {
            return Fq((x.0 + y.0) % self.data.p);
        }
        let p = self.data.p;
        let (mut u, mut v, mut out, mut place) = (x.0, y.0, 0u32, 1u32);
        while u > 0 || v > 0 {
            out += ((u % p + v % p) % p) * place;
            u /= p;
            v /= p;
            place *= p;
        }
        Fq(out)
    }

    pub fn neg(&self, x: Fq) -> Fq {
        if self.data.a == 1 {
            return Fq((self.data.p - x.0) % self.data.p);
        }
        let p = self.data.p;
        let (mut u, mut out, mut place) = (x.0, 0u32, 1u32);
        while u > 0 {
            out += ((p - u % p) % p) * place;
            u /= p;
            place *= p;
        }
        Fq(out)
    }

    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        if x.0 == 0 || y.0 == 0 {
            return Fq(0);
        }
        let n = self.data.q - 1;
        let k = (self.data.log[x.0 as usize] + self.data.log[y.0 as usize]) % n;
        Fq(self.data.exp[k as usize])
    }

    pub fn inv(&self, x: Fq) -> Option<Fq> {
        if x.0 == 0 {
            return None;
        }
        let n = self.data.q - 1;
        let k = (n - self.data.log[x.0 as usize]) % n;
        Some(Fq(self.data.exp[k as usize]))
    }

    pub fn pow(&self, x: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq(1);
        }
        if x.0 == 0 {
            return Fq(0);
        }
        let n = (self.data.q - 1) as u64;
        let k = (self.data.log[x.0 as usize] as u64 * (e % n)) % n;
        Fq(self.data.exp[k as usize])
    }

    /// x ↦ x^p.
    pub fn frobenius(&self, x: Fq) -> Fq {
        self.pow(x, self.data.p as u64)
    }

    /// x ↦ x^{p^k} for any integer k (negative k gives p-th roots).
    pub fn frobenius_pow(&self, x: Fq, k: i64) -> Fq {
        let a = self.data.a as i64;
        let k = k.rem_euclid(a) as u32;
        self.pow(x, (self.data.p as u64).pow(k))
    }

    /// The unique p-th root.
    pub fn frobenius_inv(&self, x: Fq) -> Fq {
        self.frobenius_pow(x, -1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.data.q).map(Fq)
    }

    pub fn format(&self, x: Fq) -> String {
        if self.data.a == 1 {
            return x.0.to_string();
        }
        let digits = self.digits(x);
        let mut terms = Vec::new();
        for (j, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && j > 0 { String::new() } else { c.to_string() };
            let term = match j {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{j}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Parses an integer (reduced mod p) or a polynomial in `t` such as `2t^2+t+1`.
    pub fn parse(&self, text: &str) -> Result<Fq, FieldError> {
        let err = |reason: &str| FieldError::Parse { text: text.to_string(), reason: reason.to_string() };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        let p = self.data.p as i64;
        let mut coeffs = vec![0i64; self.data.a as usize];
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let mut sign = 1;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            }
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, exp) = match term.find('t') {
                None => (term.parse::<i64>().map_err(|_| err("bad coefficient"))?, 0usize),
                Some(pos) => {
                    let c = &term[..pos];
                    let c = if c.is_empty() {
                        1
                    } else {
                        c.trim_end_matches('*').parse::<i64>().map_err(|_| err("bad coefficient"))?
                    };
                    let e = &term[pos + 1..];
                    let e = if e.is_empty() {
                        1
                    } else {
                        e.strip_prefix('^')
                            .ok_or_else(|| err("expected ^"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (c, e)
                }
            };
            if exp >= coeffs.len() {
                return Err(err("degree too large for this field"));
            }
            coeffs[exp] = (coeffs[exp] + sign * coef).rem_euclid(p);
        }
        let digits: Vec<u32> = coeffs.iter().map(|&c| c as u32).collect();
        Ok(self.from_digits(&digits))
    }
}

/// Multiplies two digit vectors modulo the monic `modulus` over F_p.
fn mul_mod(p: u32, modulus: &[u32], x: &[u32], y: &[u32]) -> Vec<u32> {
    let a = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * a];
    for (i, &u) in x.iter().enumerate() {
        for (j, &v) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p as u64;
        }
    }
    for k in (a..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &m) in modulus.iter().take(a).enumerate() {
            let idx = k - a + j;
            prod[idx] = (prod[idx] + (p as u64 - c) * m as u64) % p as u64;
        }
    }
    prod.truncate(a);
    prod.into_iter().map(|c| c as u32).collect()
}

fn index_of(p: u32, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Lexicographically smallest primitive monic modulus (coefficients read from t^{a-1} down to t^0),
/// together with the exponential table of t.
fn find_primitive_modulus(p: u32, a: u32, q: u32) -> (Vec<u32>, Vec<u32>) {
    let a_us = a as usize;
    let count = q;
    for code in 0..count {
        let mut modulus = vec![0u32; a_us + 1];
        let mut c = code;
        for j in 0..a_us {
            modulus[j] = c % p;
            c /= p;
        }
        modulus[a_us] = 1;
        if modulus[0] == 0 {
            continue;
        }
        if let Some(exp) = exp_table(p, &modulus, q) {
            return (modulus, exp);
        }
    }
    unreachable!("every finite field has a primitive element")
}

fn exp_table(p: u32, modulus: &[u32], q: u32) -> Option<Vec<u32>> {
    let a = modulus.len() - 1;
    let mut t = vec![0u32; a];
    if a == 1 {
        t[0] = (p - modulus[0]) % p;
    } else {
        t[1] = 1;
    }
    let mut one = vec![0u32; a];
    one[0] = 1;
    let mut cur = one.clone();
    let mut exp = Vec::with_capacity((q - 1) as usize);
    for k in 0..q - 1 {
        if k > 0 && cur == one {
            return None;
        }
        exp.push(index_of(p, &cur));
        cur = mul_mod(p, modulus, &cur, &t);
    }
    if cur == one {
        Some(exp)
    } else {
        None
    }
}
