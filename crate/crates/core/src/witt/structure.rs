//! Witt addition and multiplication polynomials S_k, P_k, built by the integral ghost recursion
//! and cached per (p, n). Coefficients are kept modulo p, which is all that evaluation over
//! F_q needs; the recursion itself runs modulo p^{k+1}.
//!
//! These are an independent route to the ring structure, used to cross-check the
//! Teichmüller-based arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::field::{Fq, GroundField};

/// Exponent vector over the variables X_0..X_{n−1}, Y_0..Y_{n−1}.
type Monomial = Vec<u32>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, u64>,
}

impl Poly {
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn var(nvars: usize, i: usize, exp: u32) -> Poly {
        let mut m = vec![0; nvars];
        m[i] = exp;
        let mut terms = BTreeMap::new();
        terms.insert(m, 1);
        Poly { terms }
    }

    fn reduce(&mut self, modulus: u64) {
        self.terms.retain(|_, c| {
            *c %= modulus;
            *c != 0
        });
    }

    fn add_scaled(&mut self, other: &Poly, scale: u64, modulus: u64) {
        for (m, &c) in &other.terms {
            let entry = self.terms.entry(m.clone()).or_insert(0);
            *entry = ((*entry as u128 + c as u128 * scale as u128) % modulus as u128) as u64;
        }
        self.reduce(modulus);
    }

    fn mul(&self, other: &Poly, modulus: u64) -> Poly {
        let mut out: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let entry = out.entry(m).or_insert(0);
                *entry = ((*entry as u128 + c1 as u128 * c2 as u128) % modulus as u128) as u64;
            }
        }
        let mut p = Poly { terms: out };
        p.reduce(modulus);
        p
    }

    fn pow(&self, mut e: u64, modulus: u64, nvars: usize) -> Poly {
        let mut acc = Poly { terms: BTreeMap::from([(vec![0; nvars], 1)]) };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, modulus);
            }
        }
        acc
    }

    /// Divides every coefficient by d (exact by construction) and reduces mod `modulus`.
    fn div_exact(&self, d: u64, modulus: u64) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            debug_assert_eq!(c % d, 0, "inexact division in the Witt recursion");
            let v = (c / d) % modulus;
            if v != 0 {
                terms.insert(m.clone(), v);
            }
        }
        Poly { terms }
    }

    /// Evaluates with coefficients read in F_p ⊆ F_q.
    pub fn eval(&self, field: &GroundField, vars: &[Fq]) -> Fq {
        let mut acc = field.zero();
        for (m, &c) in &self.terms {
            let mut term = field.from_int(c as i64);
            for (v, &e) in vars.iter().zip(m) {
                if e > 0 {
                    term = field.mul(term, field.pow(*v, e as u64));
                }
            }
            acc = field.add(acc, term);
        }
        acc
    }
}

#[derive(Debug)]
pub struct StructurePolys {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<Poly>,
    pub prod: Vec<Poly>,
}

/// Ghost polynomial w_k in the variables starting at `offset`, modulo `modulus`.
fn ghost_poly(p: u64, k: usize, offset: usize, nvars: usize, modulus: u64) -> Poly {
    let mut w = Poly::default();
    for i in 0..=k {
        let e = p.pow((k - i) as u32) as u32;
        w.add_scaled(&Poly::var(nvars, offset + i, e), p.pow(i as u32) % modulus, modulus);
    }
    w
}

fn build(p: u64, n: usize) -> StructurePolys {
    let nvars = 2 * n;
    let mut sum: Vec<Poly> = Vec::with_capacity(n);
    let mut prod: Vec<Poly> = Vec::with_capacity(n);
    for k in 0..n {
        let modulus = p.pow(k as u32 + 1);
        let wx = ghost_poly(p, k, 0, nvars, modulus);
        let wy = ghost_poly(p, k, n, nvars, modulus);
        let mut s_num = wx.clone();
        s_num.add_scaled(&wy, 1, modulus);
        let mut p_num = wx.mul(&wy, modulus);
        for i in 0..k {
            let e = p.pow((k - i) as u32);
            let scale = modulus - p.pow(i as u32) % modulus;
            s_num.add_scaled(&sum[i].pow(e, modulus, nvars), scale, modulus);
            p_num.add_scaled(&prod[i].pow(e, modulus, nvars), scale, modulus);
        }
        let d = p.pow(k as u32);
        sum.push(s_num.div_exact(d, p));
        prod.push(p_num.div_exact(d, p));
    }
    StructurePolys { p, n, sum, prod }
}

type Cache = Mutex<HashMap<(u64, usize), Arc<StructurePolys>>>;

/// Cached structure polynomials for (p, n).
pub fn structure_polys(p: u64, n: usize) -> Arc<StructurePolys> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = cache.lock().expect("cache lock").get(&(p, n)) {
        return Arc::clone(found);
    }
    let built = Arc::new(build(p, n));
    let mut guard = cache.lock().expect("cache lock");
    Arc::clone(guard.entry((p, n)).or_insert(built))
}

impl StructurePolys {
    fn eval_all(&self, polys: &[Poly], field: &GroundField, x: &[Fq], y: &[Fq]) -> Vec<Fq> {
        let vars: Vec<Fq> = x.iter().chain(y).copied().collect();
        polys.iter().map(|s| s.eval(field, &vars)).collect()
    }

    pub fn add(&self, field: &GroundField, x: &[Fq], y: &[Fq]) -> Vec<Fq> {
        self.eval_all(&self.sum, field, x, y)
    }

    pub fn mul(&self, field: &GroundField, x: &[Fq], y: &[Fq]) -> Vec<Fq> {
        self.eval_all(&self.prod, field, x, y)
    }
}
