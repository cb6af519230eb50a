//! Truncated p-typical Witt vectors W_n(F_q).
//!
//! Vectors are stored in Witt coordinates. Ring operations pass through the
//! isomorphism W_n(F_q) ≅ Z_q/p^n, (x_0, …, x_{n−1}) ↦ Σ p^i [x_i^{p^{−i}}].

pub mod structure;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, Fq, GroundField};
use crate::zq::{Zq, ZqElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} coordinates, got {got}")]
    Length { expected: usize, got: usize },
}

/// How binary operations treat operands of different precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecisionPolicy {
    /// Mismatched precision is an error.
    #[default]
    Strict,
    /// Both operands are truncated to the smaller precision.
    TruncateToMin,
}

/// The ring W_n(F_q).
#[derive(Clone, PartialEq, Eq)]
pub struct WittRing {
    zq: Zq,
}

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}({})", self.precision(), self.field())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WittVector {
    ring: WittRing,
    coords: Vec<Fq>,
}

impl WittRing {
    pub fn new(field: &GroundField, n: u32) -> Self {
        WittRing { zq: Zq::new(field, n) }
    }

    pub fn field(&self) -> &GroundField {
        self.zq.field()
    }

    pub fn precision(&self) -> u32 {
        self.zq.precision()
    }

    pub fn p(&self) -> u64 {
        self.zq.p()
    }

    /// The integral model Z_q/p^n of this ring.
    pub fn zq(&self) -> &Zq {
        &self.zq
    }

    pub fn zero(&self) -> WittVector {
        WittVector { ring: self.clone(), coords: vec![Fq(0); self.precision() as usize] }
    }

    pub fn one(&self) -> WittVector {
        self.teichmuller(Fq(1))
    }

    pub fn vector(&self, coords: Vec<Fq>) -> Result<WittVector, WittError> {
        let n = self.precision() as usize;
        if coords.len() != n {
            return Err(WittError::Length { expected: n, got: coords.len() });
        }
        let q = self.field().size();
        if coords.iter().any(|c| c.0 >= q) {
            return Err(WittError::Shape("coordinate outside the field".into()));
        }
        Ok(WittVector { ring: self.clone(), coords })
    }

    pub fn from_ints(&self, coords: &[i64]) -> Result<WittVector, WittError> {
        let f = self.field();
        self.vector(coords.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn parse(&self, coords: &[&str]) -> Result<WittVector, WittError> {
        let f = self.field();
        let coords = coords.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>, _>>()?;
        self.vector(coords)
    }

    /// (a, 0, …, 0).
    pub fn teichmuller(&self, a: Fq) -> WittVector {
        let mut coords = vec![Fq(0); self.precision() as usize];
        coords[0] = a;
        WittVector { ring: self.clone(), coords }
    }

    /// The image of an integer.
    pub fn from_int(&self, k: i64) -> WittVector {
        self.from_zq(&self.zq.from_int(k))
    }

    pub fn to_zq(&self, x: &WittVector) -> ZqElem {
        let zq = &self.zq;
        let f = self.field();
        let mut acc = zq.zero();
        for (i, &c) in x.coords.iter().enumerate() {
            if c.0 == 0 {
                continue;
            }
            let root = f.frobenius_pow(c, -(i as i64));
            acc = zq.add(&acc, &zq.mul_p_pow(&zq.teichmuller(root), i as u32));
        }
        acc
    }

    pub fn from_zq(&self, z: &ZqElem) -> WittVector {
        let zq = &self.zq;
        let f = self.field();
        let mut z = z.clone();
        let mut coords = Vec::with_capacity(self.precision() as usize);
        for i in 0..self.precision() {
            let y = zq.residue(&z);
            coords.push(f.frobenius_pow(y, i as i64));
            z = zq.div_p_pow(&zq.sub(&z, &zq.teichmuller(y)), 1);
        }
        WittVector { ring: self.clone(), coords }
    }

    /// Random-access enumeration helper: the vector whose coordinates are the base-q digits of `index`.
    pub fn from_index(&self, mut index: u64) -> WittVector {
        let q = self.field().size() as u64;
        let coords = (0..self.precision())
            .map(|_| {
                let c = Fq((index % q) as u32);
                index /= q;
                c
            })
            .collect();
        WittVector { ring: self.clone(), coords }
    }

    pub fn truncated(&self, n: u32) -> WittRing {
        WittRing { zq: self.zq.with_precision(n) }
    }
}

impl WittVector {
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn coords(&self) -> &[Fq] {
        &self.coords
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn field(&self) -> &GroundField {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.0 == 0)
    }

    /// Explicit truncation to precision m ≤ n.
    pub fn truncate(&self, m: u32) -> Result<WittVector, WittError> {
        if m == 0 || m > self.precision() {
            return Err(WittError::Shape(format!("cannot truncate precision {} to {m}", self.precision())));
        }
        Ok(WittVector { ring: self.ring.truncated(m), coords: self.coords[..m as usize].to_vec() })
    }

    fn align(&self, other: &WittVector, policy: PrecisionPolicy) -> Result<(WittVector, WittVector), WittError> {
        if self.field() != other.field() {
            return Err(WittError::Shape(format!("fields {} and {} differ", self.field(), other.field())));
        }
        let (n, m) = (self.precision(), other.precision());
        if n == m {
            return Ok((self.clone(), other.clone()));
        }
        match policy {
            PrecisionPolicy::Strict => Err(WittError::Shape(format!("precisions {n} and {m} differ"))),
            PrecisionPolicy::TruncateToMin => {
                let k = n.min(m);
                Ok((self.truncate(k)?, other.truncate(k)?))
            }
        }
    }

    fn binary(
        &self,
        other: &WittVector,
        policy: PrecisionPolicy,
        op: impl Fn(&Zq, &ZqElem, &ZqElem) -> ZqElem,
    ) -> Result<WittVector, WittError> {
        let (x, y) = self.align(other, policy)?;
        let ring = x.ring.clone();
        let z = op(ring.zq(), &ring.to_zq(&x), &ring.to_zq(&y));
        Ok(ring.from_zq(&z))
    }

    pub fn add(&self, other: &WittVector) -> Result<WittVector, WittError> {
        self.add_with(other, PrecisionPolicy::Strict)
    }

    pub fn add_with(&self, other: &WittVector, policy: PrecisionPolicy) -> Result<WittVector, WittError> {
        self.binary(other, policy, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &WittVector) -> Result<WittVector, WittError> {
        self.binary(other, PrecisionPolicy::Strict, |r, a, b| r.sub(a, b))
    }

    pub fn mul(&self, other: &WittVector) -> Result<WittVector, WittError> {
        self.mul_with(other, PrecisionPolicy::Strict)
    }

    pub fn mul_with(&self, other: &WittVector, policy: PrecisionPolicy) -> Result<WittVector, WittError> {
        self.binary(other, policy, |r, a, b| r.mul(a, b))
    }

    pub fn neg(&self) -> WittVector {
        let z = self.ring.zq().neg(&self.ring.to_zq(self));
        self.ring.from_zq(&z)
    }

    /// F: coordinatewise p-th power.
    pub fn frobenius(&self) -> WittVector {
        let f = self.field();
        WittVector { ring: self.ring.clone(), coords: self.coords.iter().map(|&c| f.frobenius(c)).collect() }
    }

    /// V: shift right, truncated at n.
    pub fn verschiebung(&self) -> WittVector {
        let mut coords = vec![Fq(0)];
        coords.extend_from_slice(&self.coords[..self.coords.len() - 1]);
        WittVector { ring: self.ring.clone(), coords }
    }

    pub fn mul_by_p(&self) -> WittVector {
        let z = self.ring.zq().scale_int(&self.ring.to_zq(self), self.ring.p() as i64);
        self.ring.from_zq(&z)
    }

    /// Ghost components with canonical lifts, w_i = Σ_{j≤i} p^j lift(x_j)^{p^{i−j}} mod p^n,
    /// as elements of Z_q/p^n (integers when q = p).
    pub fn ghost(&self) -> Vec<ZqElem> {
        let zq = self.ring.zq();
        let p = self.ring.p();
        let lifts: Vec<ZqElem> = self.coords.iter().map(|&c| zq.lift(c)).collect();
        (0..self.coords.len())
            .map(|i| {
                (0..=i).fold(zq.zero(), |acc, j| {
                    let term = zq.pow(&lifts[j], p.pow((i - j) as u32));
                    zq.add(&acc, &zq.mul_p_pow(&term, j as u32))
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> WittJson {
        let f = self.field();
        WittJson {
            p: f.p() as u64,
            a: f.degree(),
            n: self.precision(),
            coords: self.coords.iter().map(|&c| f.format(c)).collect(),
        }
    }

    pub fn from_json(json: &WittJson) -> Result<WittVector, WittError> {
        let field = GroundField::new(json.p, json.a)?;
        let ring = WittRing::new(&field, json.n);
        let coords: Vec<&str> = json.coords.iter().map(|s| s.as_str()).collect();
        ring.parse(&coords)
    }
}

/// Ghost components of integer lifts: w_i = Σ_{j≤i} p^j lifts_j^{p^{i−j}} mod p^n.
pub fn ghost_of_lifts(p: u64, n: u32, lifts: &[i64]) -> Vec<u64> {
    let m = p.pow(n) as i128;
    let powmod = |b: i128, mut e: u64| {
        let mut acc = 1i128;
        let mut b = b.rem_euclid(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc
    };
    (0..lifts.len())
        .map(|i| {
            let s = (0..=i).fold(0i128, |acc, j| {
                (acc + (p.pow(j as u32) as i128 % m) * powmod(lifts[j] as i128, p.pow((i - j) as u32))) % m
            });
            s as u64
        })
        .collect()
}

/// Serialized form: header {p, a, n} plus coordinate strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittJson {
    pub p: u64,
    pub a: u32,
    pub n: u32,
    pub coords: Vec<String>,
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        let parts: Vec<String> = self.coords.iter().map(|&c| field.format(c)).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.ring)
    }
}
