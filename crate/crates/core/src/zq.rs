//! The ring Z_q / p^n, realized as (Z/p^n)[t] / (M(t)) for the canonical lift M of the field modulus.
//! It is isomorphic to W_n(F_q); this is the integral form used for linear algebra.

use std::fmt;
use std::sync::Arc;

use crate::field::{Fq, GroundField};

struct ZqData {
    field: GroundField,
    n: u32,
    p: u64,
    pn: u64,
    a: usize,
    /// Lifted monic modulus, lowest degree first, length a + 1.
    modulus: Vec<u64>,
    /// σ(t): the root of M congruent to t^p mod p.
    sigma_t: ZqElem,
}

#[derive(Clone)]
pub struct Zq {
    data: Arc<ZqData>,
}

/// Element of Z_q/p^n: coefficients of 1, t, …, t^{a−1}, each in [0, p^n).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZqElem(pub Vec<u64>);

impl fmt::Debug for ZqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl PartialEq for Zq {
    fn eq(&self, other: &Self) -> bool {
        self.data.field == other.data.field && self.data.n == other.data.n
    }
}

impl Eq for Zq {}

impl fmt::Debug for Zq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}/p^{}", self.data.field.size(), self.data.n)
    }
}

fn mulmod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

impl Zq {
    /// Panics if p^n does not fit in 63 bits.
    pub fn new(field: &GroundField, n: u32) -> Self {
        assert!(n >= 1, "precision must be at least 1");
        let p = field.p() as u64;
        let pn = p.checked_pow(n).filter(|&v| v < 1 << 62).expect("p^n too large");
        let a = field.degree() as usize;
        let modulus: Vec<u64> = field.modulus().iter().map(|&c| c as u64).collect();
        let mut ring = Zq {
            data: Arc::new(ZqData {
                field: field.clone(),
                n,
                p,
                pn,
                a,
                modulus,
                sigma_t: ZqElem(vec![0; a]),
            }),
        };
        let sigma_t = ring.compute_sigma_t();
        Arc::get_mut(&mut ring.data).expect("fresh ring").sigma_t = sigma_t;
        ring
    }

    pub fn field(&self) -> &GroundField {
        &self.data.field
    }

    pub fn precision(&self) -> u32 {
        self.data.n
    }

    pub fn p(&self) -> u64 {
        self.data.p
    }

    /// p^n, the characteristic of the ring.
    pub fn modulus_int(&self) -> u64 {
        self.data.pn
    }

    pub fn degree(&self) -> usize {
        self.data.a
    }

    pub fn zero(&self) -> ZqElem {
        ZqElem(vec![0; self.data.a])
    }

    pub fn one(&self) -> ZqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> ZqElem {
        let mut c = vec![0; self.data.a];
        c[0] = (v as i128).rem_euclid(self.data.pn as i128) as u64;
        ZqElem(c)
    }

    pub fn from_i128(&self, v: i128) -> ZqElem {
        let mut c = vec![0; self.data.a];
        c[0] = v.rem_euclid(self.data.pn as i128) as u64;
        ZqElem(c)
    }

    /// Canonical lift of a field element (digits in [0, p)).
    pub fn lift(&self, x: Fq) -> ZqElem {
        ZqElem(self.data.field.digits(x).into_iter().map(|d| d as u64).collect())
    }

    /// Reduction modulo p.
    pub fn residue(&self, x: &ZqElem) -> Fq {
        let p = self.data.p;
        let digits: Vec<u32> = x.0.iter().map(|&c| (c % p) as u32).collect();
        self.data.field.from_digits(&digits)
    }

    pub fn is_zero(&self, x: &ZqElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &ZqElem, y: &ZqElem) -> ZqElem {
        let m = self.data.pn;
        ZqElem(x.0.iter().zip(&y.0).map(|(&u, &v)| (u + v) % m).collect())
    }

    pub fn neg(&self, x: &ZqElem) -> ZqElem {
        let m = self.data.pn;
        ZqElem(x.0.iter().map(|&u| (m - u) % m).collect())
    }

    pub fn sub(&self, x: &ZqElem, y: &ZqElem) -> ZqElem {
        let m = self.data.pn;
        ZqElem(x.0.iter().zip(&y.0).map(|(&u, &v)| (u + m - v) % m).collect())
    }

    pub fn mul(&self, x: &ZqElem, y: &ZqElem) -> ZqElem {
        let a = self.data.a;
        let m = self.data.pn;
        if a == 1 {
            return ZqElem(vec![mulmod(x.0[0], y.0[0], m)]);
        }
        let mut prod = vec![0u64; 2 * a - 1];
        for (i, &u) in x.0.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(u, v, m)) % m;
            }
        }
        let md = &self.data.modulus;
        for k in (a..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..a {
                let idx = k - a + j;
                prod[idx] = (prod[idx] + m - mulmod(c, md[j], m)) % m;
            }
        }
        prod.truncate(a);
        ZqElem(prod)
    }

    pub fn scale_int(&self, x: &ZqElem, k: i64) -> ZqElem {
        self.mul(x, &self.from_int(k))
    }

    pub fn pow(&self, x: &ZqElem, mut e: u64) -> ZqElem {
        let mut base = x.clone();
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

    /// p-adic valuation; `None` for zero (valuation ≥ n).
    pub fn valuation(&self, x: &ZqElem) -> Option<u32> {
        x.0.iter().filter(|&&c| c != 0).map(|&c| int_valuation(c, self.data.p)).min()
    }

    pub fn is_unit(&self, x: &ZqElem) -> bool {
        self.valuation(x) == Some(0)
    }

    /// p^k · x.
    pub fn mul_p_pow(&self, x: &ZqElem, k: u32) -> ZqElem {
        if k >= self.data.n {
            return self.zero();
        }
        self.scale_int(x, self.data.p.pow(k) as i64)
    }

    /// x / p^k, assuming p^k divides x. The result is the canonical representative
    /// whose top k p-adic digits are zero.
    pub fn div_p_pow(&self, x: &ZqElem, k: u32) -> ZqElem {
        let d = self.data.p.pow(k.min(self.data.n));
        ZqElem(x.0.iter().map(|&c| c / d).collect())
    }

    pub fn inverse(&self, x: &ZqElem) -> Option<ZqElem> {
        let f = &self.data.field;
        let r = f.inv(self.residue(x))?;
        let mut y = self.lift(r);
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.data.n {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            prec *= 2;
        }
        Some(y)
    }

    /// The Teichmüller representative [x].
    pub fn teichmuller(&self, x: Fq) -> ZqElem {
        let mut y = self.lift(x);
        let q = self.data.field.size() as u64;
        for _ in 1..self.data.n {
            y = self.pow(&y, q);
        }
        y
    }

    fn eval_modulus(&self, s: &ZqElem) -> (ZqElem, ZqElem) {
        let md = &self.data.modulus;
        let mut val = self.zero();
        let mut der = self.zero();
        for &c in md.iter().rev() {
            der = self.add(&self.mul(&der, s), &val);
            val = self.add(&self.mul(&val, s), &self.from_int(c as i64));
        }
        (val, der)
    }

    fn compute_sigma_t(&self) -> ZqElem {
        let a = self.data.a;
        if a == 1 {
            return self.zero();
        }
        let mut t = self.zero();
        t.0[1] = 1;
        let mut s = self.pow(&t, self.data.p);
        for _ in 0..=self.data.n {
            let (val, der) = self.eval_modulus(&s);
            let inv = self.inverse(&der).expect("separable modulus");
            s = self.sub(&s, &self.mul(&val, &inv));
        }
        s
    }

    /// The Witt vector Frobenius σ.
    pub fn sigma(&self, x: &ZqElem) -> ZqElem {
        if self.data.a == 1 {
            return x.clone();
        }
        let s = &self.data.sigma_t;
        let mut acc = self.zero();
        for &c in x.0.iter().rev() {
            acc = self.add(&self.mul(&acc, s), &self.from_int(c as i64));
        }
        acc
    }

    /// σ^k for any integer k.
    pub fn sigma_pow(&self, x: &ZqElem, k: i64) -> ZqElem {
        let a = self.data.a as i64;
        let k = k.rem_euclid(a);
        let mut y = x.clone();
        for _ in 0..k {
            y = self.sigma(&y);
        }
        y
    }

    /// The same ring at a different precision.
    pub fn with_precision(&self, n: u32) -> Zq {
        Zq::new(&self.data.field, n)
    }

    /// Reduction of an element of `other` (precision ≥ self) into this ring.
    pub fn reduce_from(&self, x: &ZqElem) -> ZqElem {
        ZqElem(x.0.iter().map(|&c| c % self.data.pn).collect())
    }

    pub fn format(&self, x: &ZqElem) -> String {
        if self.data.a == 1 {
            return x.0[0].to_string();
        }
        let parts: Vec<String> = x.0.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

pub fn int_valuation(mut c: u64, p: u64) -> u32 {
    let mut v = 0;
    while c % p == 0 {
        c /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_mod_pn() {
        let f = GroundField::prime(3).unwrap();
        let r = Zq::new(&f, 3);
        let x = r.from_int(-1);
        assert_eq!(x.0, vec![26]);
        assert_eq!(r.valuation(&r.from_int(18)), Some(2));
        assert_eq!(r.valuation(&r.zero()), None);
        let inv = r.inverse(&r.from_int(2)).unwrap();
        assert_eq!(r.mul(&inv, &r.from_int(2)), r.one());
        assert!(r.inverse(&r.from_int(3)).is_none());
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for (p, a) in [(3u64, 1u32), (2, 2), (3, 2), (5, 1)] {
            let f = GroundField::new(p, a).unwrap();
            let r = Zq::new(&f, 4);
            let q = f.size() as u64;
            for x in f.elements() {
                let t = r.teichmuller(x);
                assert_eq!(r.pow(&t, q), t);
                assert_eq!(r.residue(&t), x);
            }
        }
    }

    #[test]
    fn sigma_is_a_ring_automorphism_of_order_a() {
        let f = GroundField::new(2, 3).unwrap();
        let r = Zq::new(&f, 3);
        let elems: Vec<ZqElem> =
            (0..40u64).map(|k| ZqElem(vec![k % 8, (k * 5 + 1) % 8, (k * k) % 8])).collect();
        for x in &elems {
            assert_eq!(r.sigma_pow(x, 3), *x);
            assert_eq!(r.residue(&r.sigma(x)), f.frobenius(r.residue(x)));
            for y in elems.iter().take(7) {
                assert_eq!(r.sigma(&r.mul(x, y)), r.mul(&r.sigma(x), &r.sigma(y)));
                assert_eq!(r.sigma(&r.add(x, y)), r.add(&r.sigma(x), &r.sigma(y)));
            }
        }
        for x in f.elements() {
            let t = r.teichmuller(x);
            assert_eq!(r.sigma(&t), r.pow(&t, 2));
        }
    }

    #[test]
    fn division_by_p_powers() {
        let f = GroundField::new(3, 2).unwrap();
        let r = Zq::new(&f, 4);
        let x = ZqElem(vec![5, 7]);
        let y = r.mul_p_pow(&x, 2);
        assert_eq!(r.valuation(&y), Some(2));
        assert_eq!(r.mul_p_pow(&r.div_p_pow(&y, 2), 2), y);
    }
}
