//! Graded modules over the Raynaud ring R = W[F, V, d]: explicit finite-length presentations,
//! relation checking, V^{-∞}Z and F^∞B, dominoes and their dimensions.

pub mod fixtures;
pub mod structure;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::GroundField;
use crate::linalg::{coker_length, kernel, smith, Mat};
use crate::zq::{Zq, ZqElem};

pub use structure::{domino_duality_violations, DominoSpec, GradedEntry, GradedRStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RModError {
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("field error: {0}")]
    Field(String),
}

/// A single relation of the Raynaud ring, as checked on generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    FV,
    VF,
    FSemilinear,
    VSemilinear,
    DLinear,
    DSquared,
    FdV,
    Vd,
    DF,
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::FV => "FV",
            Relation::VF => "VF",
            Relation::FSemilinear => "Fa",
            Relation::VSemilinear => "Va",
            Relation::DLinear => "da",
            Relation::DSquared => "dd",
            Relation::FdV => "FdV",
            Relation::Vd => "Vd",
            Relation::DF => "dF",
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            Relation::FV => "FV = p",
            Relation::VF => "VF = p",
            Relation::FSemilinear => "Fa = σ(a)F",
            Relation::VSemilinear => "Vσ(a) = aV",
            Relation::DLinear => "da = ad",
            Relation::DSquared => "d² = 0",
            Relation::FdV => "FdV = d",
            Relation::Vd => "Vd = pdV",
            Relation::DF => "dF = pFd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub relation: Relation,
    pub degree: i64,
    pub generator: usize,
}

impl fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violation at generator {} of degree {} ({})",
            self.relation.name(),
            self.generator,
            self.degree,
            self.relation.formula()
        )
    }
}

/// A submodule of one degree, given by generators in that degree's coordinates.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub degree: i64,
    pub gens: Vec<Vec<ZqElem>>,
    pub length: u32,
}

impl Submodule {
    pub fn is_zero(&self) -> bool {
        self.length == 0
    }
}

/// Finite-length graded R-module. Degree k holds ⊕_g W_n/p^{e_g}; F is σ-linear, V is
/// σ^{-1}-linear, d is W-linear, all given by matrices whose columns are images of generators.
/// An optional boundary submodule per degree marks the cut of a V-adic truncation; relations
/// are then checked modulo it.
#[derive(Debug, Clone)]
pub struct RModuleExplicit {
    ring: Zq,
    lo: i64,
    ann: Vec<Vec<u32>>,
    f: Vec<Mat>,
    v: Vec<Mat>,
    d: Vec<Mat>,
    boundary: Vec<Vec<Vec<ZqElem>>>,
}

fn reduce_mod(ring: &Zq, x: &ZqElem, e: u32) -> ZqElem {
    if e >= ring.precision() {
        return x.clone();
    }
    let pe = ring.p().pow(e);
    ZqElem(x.0.iter().map(|c| c % pe).collect())
}

fn semi_apply(ring: &Zq, m: &Mat, x: &[ZqElem], s: i64) -> Vec<ZqElem> {
    let tw: Vec<ZqElem> = x.iter().map(|c| ring.sigma_pow(c, s)).collect();
    m.apply(ring, &tw)
}

fn unit_vec(ring: &Zq, len: usize, k: usize) -> Vec<ZqElem> {
    let mut v = vec![ring.zero(); len];
    v[k] = ring.one();
    v
}

fn relation_diag(ring: &Zq, ann: &[u32]) -> Mat {
    let r = ann.len();
    let mut m = Mat::zeros(ring, r, r);
    for (k, &e) in ann.iter().enumerate() {
        m.set(k, k, ring.mul_p_pow(&ring.one(), e));
    }
    m
}

fn hcat_cols(ring: &Zq, rows: usize, blocks: &[&[Vec<ZqElem>]]) -> Mat {
    let cols: Vec<Vec<ZqElem>> = blocks.iter().flat_map(|b| b.iter().cloned()).collect();
    Mat::from_columns(ring, rows, &cols)
}

fn columns(m: &Mat) -> Vec<Vec<ZqElem>> {
    (0..m.cols).map(|j| m.column(j)).collect()
}

impl RModuleExplicit {
    /// Builds and shape-checks a presentation. `d[k]` maps degree lo+k to lo+k+1.
    pub fn new(
        ring: &Zq,
        lo: i64,
        ann: Vec<Vec<u32>>,
        f: Vec<Mat>,
        v: Vec<Mat>,
        d: Vec<Mat>,
    ) -> Result<Self, RModError> {
        let boundary = vec![Vec::new(); ann.len()];
        let m = RModuleExplicit { ring: ring.clone(), lo, ann, f, v, d, boundary };
        m.check_shapes()?;
        Ok(m)
    }

    pub fn with_boundary(mut self, boundary: Vec<Vec<Vec<ZqElem>>>) -> Result<Self, RModError> {
        if boundary.len() != self.ann.len() {
            return Err(RModError::Shape("one boundary list per degree expected".into()));
        }
        for (k, b) in boundary.iter().enumerate() {
            if b.iter().any(|g| g.len() != self.ann[k].len()) {
                return Err(RModError::Shape(format!("boundary generator of wrong length in degree {}", self.lo + k as i64)));
            }
        }
        self.boundary = boundary;
        Ok(self)
    }

    /// The zero module concentrated in degrees lo..=hi.
    pub fn zero(ring: &Zq, lo: i64, hi: i64) -> Self {
        let count = (hi - lo + 1).max(0) as usize;
        RModuleExplicit {
            ring: ring.clone(),
            lo,
            ann: vec![Vec::new(); count],
            f: vec![Mat::zeros(ring, 0, 0); count],
            v: vec![Mat::zeros(ring, 0, 0); count],
            d: vec![Mat::zeros(ring, 0, 0); count.saturating_sub(1)],
            boundary: vec![Vec::new(); count],
        }
    }

    /// W_n in degree 0 with F = σ, V = p·σ^{-1}, d = 0.
    pub fn witt_ring(ring: &Zq) -> Self {
        let n = ring.precision();
        let one = Mat::identity(ring, 1);
        let p = Mat::from_columns(ring, 1, &[vec![ring.from_int(ring.p() as i64)]]);
        RModuleExplicit::new(ring, 0, vec![vec![n]], vec![one], vec![p], vec![]).expect("valid shapes")
    }

    fn check_shapes(&self) -> Result<(), RModError> {
        let c = self.ann.len();
        if self.f.len() != c || self.v.len() != c || self.d.len() != c.saturating_sub(1) {
            return Err(RModError::Shape(format!(
                "{} degrees need {c} F, {c} V and {} d matrices",
                c,
                c.saturating_sub(1)
            )));
        }
        let n = self.ring.precision();
        for (k, a) in self.ann.iter().enumerate() {
            let r = a.len();
            if a.iter().any(|&e| e == 0 || e > n) {
                return Err(RModError::Presentation(format!("annihilator exponents must lie in 1..={n}")));
            }
            for (name, m) in [("F", &self.f[k]), ("V", &self.v[k])] {
                if m.rows != r || m.cols != r {
                    return Err(RModError::Shape(format!("{name} in degree {} is not {r}x{r}", self.lo + k as i64)));
                }
            }
            if k + 1 < c {
                let m = &self.d[k];
                if m.rows != self.ann[k + 1].len() || m.cols != r {
                    return Err(RModError::Shape(format!("d out of degree {} has the wrong shape", self.lo + k as i64)));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Zq {
        &self.ring
    }

    pub fn field(&self) -> &GroundField {
        self.ring.field()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ann.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    fn idx(&self, i: i64) -> Option<usize> {
        (i >= self.lo && i <= self.hi()).then(|| (i - self.lo) as usize)
    }

    pub fn annihilators(&self, i: i64) -> &[u32] {
        self.idx(i).map_or(&[], |k| &self.ann[k])
    }

    pub fn rank(&self, i: i64) -> usize {
        self.annihilators(i).len()
    }

    /// Length of M^i as a W-module, i.e. its F_q-dimension count.
    pub fn length(&self, i: i64) -> u32 {
        self.annihilators(i).iter().sum()
    }

    pub fn f_matrix(&self, i: i64) -> Option<&Mat> {
        self.idx(i).map(|k| &self.f[k])
    }

    pub fn v_matrix(&self, i: i64) -> Option<&Mat> {
        self.idx(i).map(|k| &self.v[k])
    }

    pub fn d_matrix(&self, i: i64) -> Option<&Mat> {
        self.idx(i).and_then(|k| self.d.get(k))
    }

    pub fn boundary(&self, i: i64) -> &[Vec<ZqElem>] {
        self.idx(i).map_or(&[], |k| &self.boundary[k])
    }

    pub fn is_truncated(&self) -> bool {
        self.boundary.iter().any(|b| !b.is_empty())
    }

    fn reduce(&self, k: usize, x: &[ZqElem]) -> Vec<ZqElem> {
        x.iter().zip(&self.ann[k]).map(|(c, &e)| reduce_mod(&self.ring, c, e)).collect()
    }

    fn apply_f(&self, k: usize, x: &[ZqElem]) -> Vec<ZqElem> {
        self.reduce(k, &semi_apply(&self.ring, &self.f[k], x, 1))
    }

    fn apply_v(&self, k: usize, x: &[ZqElem]) -> Vec<ZqElem> {
        self.reduce(k, &semi_apply(&self.ring, &self.v[k], x, -1))
    }

    fn apply_d(&self, k: usize, x: &[ZqElem]) -> Vec<ZqElem> {
        match self.d.get(k) {
            Some(m) => self.reduce(k + 1, &m.apply(&self.ring, x)),
            None => Vec::new(),
        }
    }

    fn scale(&self, k: usize, x: &[ZqElem], c: &ZqElem) -> Vec<ZqElem> {
        self.reduce(k, &x.iter().map(|y| self.ring.mul(y, c)).collect::<Vec<_>>())
    }

    /// Whether x lies in span(gens) inside degree k.
    fn in_span(&self, k: usize, x: &[ZqElem], gens: &[Vec<ZqElem>]) -> bool {
        let r = self.ann[k].len();
        if r == 0 {
            return true;
        }
        let rel = columns(&relation_diag(&self.ring, &self.ann[k]));
        let a = hcat_cols(&self.ring, r, &[gens, &rel]);
        crate::linalg::solve(&self.ring, &a, x).is_some()
    }

    fn agrees(&self, k: usize, lhs: &[ZqElem], rhs: &[ZqElem], modulo_boundary: bool) -> bool {
        let diff: Vec<ZqElem> = lhs.iter().zip(rhs).map(|(a, b)| self.ring.sub(a, b)).collect();
        let diff = self.reduce(k, &diff);
        if diff.iter().all(|c| self.ring.is_zero(c)) {
            return true;
        }
        modulo_boundary && self.in_span(k, &diff, &self.boundary[k])
    }

    fn well_defined(&self) -> Result<(), RModError> {
        let ring = &self.ring;
        for (k, ann) in self.ann.iter().enumerate() {
            for (g, &e) in ann.iter().enumerate() {
                let pe = ring.mul_p_pow(&ring.one(), e);
                let mut targets: Vec<(&str, usize, Vec<ZqElem>)> = vec![
                    ("F", k, self.f[k].column(g)),
                    ("V", k, self.v[k].column(g)),
                ];
                if let Some(d) = self.d.get(k) {
                    targets.push(("d", k + 1, d.column(g)));
                }
                for (name, tk, img) in targets {
                    let killed = self.scale(tk, &img, &pe);
                    if killed.iter().any(|c| !ring.is_zero(c)) {
                        return Err(RModError::Presentation(format!(
                            "{name} does not respect the annihilator p^{e} of generator {g} in degree {}",
                            self.lo + k as i64
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// All Raynaud-ring relations, checked on every generator. Truncated presentations are
    /// checked modulo their boundary.
    pub fn check_relations(&self) -> Result<Vec<RelationViolation>, RModError> {
        self.check_shapes()?;
        self.well_defined()?;
        let ring = &self.ring;
        let p = ring.from_int(ring.p() as i64);
        let a = ring.teichmuller(self.field().generator());
        let mut out = Vec::new();
        let c = self.ann.len();
        for k in 0..c {
            let deg = self.lo + k as i64;
            let r = self.ann[k].len();
            for g in 0..r {
                let e = unit_vec(ring, r, g);
                let mut fail = |rel: Relation| out.push(RelationViolation { relation: rel, degree: deg, generator: g });
                let pe = self.scale(k, &e, &p);
                let fe = self.apply_f(k, &e);
                let ve = self.apply_v(k, &e);
                if !self.agrees(k, &self.apply_f(k, &ve), &pe, true) {
                    fail(Relation::FV);
                }
                if !self.agrees(k, &self.apply_v(k, &fe), &pe, true) {
                    fail(Relation::VF);
                }
                let ae = self.scale(k, &e, &a);
                if !self.agrees(k, &self.apply_f(k, &ae), &self.scale(k, &fe, &ring.sigma(&a)), false) {
                    fail(Relation::FSemilinear);
                }
                let sae = self.scale(k, &e, &ring.sigma(&a));
                if !self.agrees(k, &self.apply_v(k, &sae), &self.scale(k, &ve, &a), false) {
                    fail(Relation::VSemilinear);
                }
                if k + 1 < c {
                    let de = self.apply_d(k, &e);
                    if !self.agrees(k + 1, &self.apply_d(k, &ae), &self.scale(k + 1, &de, &a), false) {
                        fail(Relation::DLinear);
                    }
                    if k + 2 < c {
                        let dde = self.apply_d(k + 1, &de);
                        let zero = vec![ring.zero(); dde.len()];
                        if !self.agrees(k + 2, &dde, &zero, true) {
                            fail(Relation::DSquared);
                        }
                    }
                    let dve = self.apply_d(k, &ve);
                    if !self.agrees(k + 1, &self.apply_f(k + 1, &dve), &de, true) {
                        fail(Relation::FdV);
                    }
                    let pdve = self.scale(k + 1, &dve, &p);
                    if !self.agrees(k + 1, &self.apply_v(k + 1, &de), &pdve, true) {
                        fail(Relation::Vd);
                    }
                    let pfde = self.scale(k + 1, &self.apply_f(k + 1, &de), &p);
                    if !self.agrees(k + 1, &self.apply_d(k, &fe), &pfde, true) {
                        fail(Relation::DF);
                    }
                }
            }
        }
        Ok(out)
    }

    fn span_length(&self, k: usize, gens: &[Vec<ZqElem>]) -> u32 {
        let r = self.ann[k].len();
        if r == 0 {
            return 0;
        }
        let rel = columns(&relation_diag(&self.ring, &self.ann[k]));
        let a = hcat_cols(&self.ring, r, &[gens, &rel]);
        self.ann[k].iter().sum::<u32>() - coker_length(&self.ring, &a)
    }

    fn submodule(&self, k: usize, gens: Vec<Vec<ZqElem>>) -> Submodule {
        let gens: Vec<Vec<ZqElem>> = gens
            .into_iter()
            .map(|g| self.reduce(k, &g))
            .filter(|g| g.iter().any(|c| !self.ring.is_zero(c)))
            .collect();
        let length = self.span_length(k, &gens);
        Submodule { degree: self.lo + k as i64, gens, length }
    }

    /// {x in degree k : A·σ^s(x) ∈ span(target_gens)} where A lands in degree tk.
    fn preimage(&self, k: usize, a: &Mat, s: i64, tk: usize, target_gens: &[Vec<ZqElem>]) -> Vec<Vec<ZqElem>> {
        let ring = &self.ring;
        let r = self.ann[k].len();
        let rt = self.ann[tk].len();
        if rt == 0 {
            return (0..r).map(|g| unit_vec(ring, r, g)).collect();
        }
        let rel = columns(&relation_diag(ring, &self.ann[tk]));
        let big = hcat_cols(ring, rt, &[&columns(a), target_gens, &rel]);
        kernel(ring, &big)
            .into_iter()
            .map(|y| y[..r].iter().map(|c| ring.sigma_pow(c, -s)).collect())
            .collect()
    }

    fn intersect(&self, k: usize, a: &[Vec<ZqElem>], b: &[Vec<ZqElem>]) -> Vec<Vec<ZqElem>> {
        let ring = &self.ring;
        let r = self.ann[k].len();
        if r == 0 || a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let neg_b: Vec<Vec<ZqElem>> = b.iter().map(|g| g.iter().map(|c| ring.neg(c)).collect()).collect();
        let rel = columns(&relation_diag(ring, &self.ann[k]));
        let big = hcat_cols(ring, r, &[a, &neg_b, &rel]);
        let amat = Mat::from_columns(ring, r, a);
        kernel(ring, &big)
            .into_iter()
            .map(|y| amat.apply(ring, &y[..a.len()]))
            .collect()
    }

    /// V^{-∞}Z^i = {x : dV^n x = 0 for all n ≥ 0}, the largest V-stable submodule of ker d.
    pub fn v_inf_z(&self, i: i64) -> Result<Submodule, RModError> {
        let k = self.idx(i).ok_or_else(|| RModError::Domain(format!("degree {i} outside the module")))?;
        let r = self.ann[k].len();
        let mut z = match self.d.get(k) {
            Some(d) => {
                let g = self.preimage(k, d, 0, k + 1, &[]);
                self.submodule(k, g)
            }
            None => self.submodule(k, (0..r).map(|g| unit_vec(&self.ring, r, g)).collect()),
        };
        loop {
            let back = self.preimage(k, &self.v[k], -1, k, &z.gens);
            let next = self.submodule(k, self.intersect(k, &z.gens, &back));
            if next.length == z.length {
                return Ok(z);
            }
            z = next;
        }
    }

    /// F^∞B^i = ∪_n F^n d(M^{i−1}).
    pub fn f_inf_b(&self, i: i64) -> Result<Submodule, RModError> {
        let k = self.idx(i).ok_or_else(|| RModError::Domain(format!("degree {i} outside the module")))?;
        let mut b = if k == 0 {
            self.submodule(k, Vec::new())
        } else {
            self.submodule(k, columns(&self.d[k - 1]))
        };
        loop {
            let mut gens = b.gens.clone();
            gens.extend(b.gens.iter().map(|g| self.apply_f(k, g)));
            let next = self.submodule(k, gens);
            if next.length == b.length {
                return Ok(b);
            }
            b = next;
        }
    }

    /// The domino [M^i / V^{-∞}Z^i → F^∞B^{i+1}] of the differential out of degree i.
    pub fn domino_of(&self, i: i64) -> Result<RModuleExplicit, RModError> {
        let k = self.idx(i).ok_or_else(|| RModError::Domain(format!("degree {i} outside the module")))?;
        let ring = &self.ring;
        if k + 1 >= self.ann.len() {
            return Ok(RModuleExplicit::zero(ring, i, i + 1));
        }
        let z = self.v_inf_z(i)?;
        let b = self.f_inf_b(i + 1)?;
        let q = Quotient::new(ring, &self.ann[k], &z.gens);
        let s = Sub::new(ring, &self.ann[k + 1], &b.gens);

        let f0 = q.induced(ring, |x| self.apply_f(k, x));
        let v0 = q.induced(ring, |x| self.apply_v(k, x));
        let f1 = s.induced(ring, |x| self.apply_f(k + 1, x));
        let v1 = s.induced(ring, |x| self.apply_v(k + 1, x));
        let dcols: Vec<Vec<ZqElem>> = q.lifts.iter().map(|l| s.coords(ring, &self.apply_d(k, l))).collect();
        let d = Mat::from_columns(ring, s.ann.len(), &dcols);

        let b0: Vec<Vec<ZqElem>> = self.boundary[k].iter().map(|g| q.project(ring, g)).collect();
        let b1: Vec<Vec<ZqElem>> = self
            .intersect(k + 1, &b.gens, &self.boundary[k + 1])
            .iter()
            .map(|g| s.coords(ring, &self.reduce(k + 1, g)))
            .collect();
        let out = RModuleExplicit::new(ring, i, vec![q.ann.clone(), s.ann.clone()], vec![f0, f1], vec![v0, v1], vec![d])?;
        let out = out.with_boundary(vec![b0, b1])?;
        Ok(out.pruned_boundary())
    }

    fn pruned_boundary(mut self) -> Self {
        for k in 0..self.ann.len() {
            let gens = std::mem::take(&mut self.boundary[k]);
            self.boundary[k] = self.submodule(k, gens).gens;
        }
        self
    }

    /// Whether a two-degree module satisfies V^{-∞}Z = 0 at the source and F^∞B = everything at
    /// the target.
    pub fn is_domino(&self) -> Result<bool, RModError> {
        if self.ann.len() != 2 {
            return Ok(false);
        }
        let z = self.v_inf_z(self.lo)?;
        let b = self.f_inf_b(self.lo + 1)?;
        Ok(z.is_zero() && b.length == self.length(self.lo + 1))
    }

    /// T(D) = dim_k(D^i / V D^i) for a two-degree domino D.
    pub fn domino_dim(&self) -> Result<u32, RModError> {
        if self.ann.len() != 2 {
            return Err(RModError::Domain(format!("a domino has two degrees, got {}", self.ann.len())));
        }
        let violations = self.check_relations()?;
        if let Some(v) = violations.first() {
            return Err(RModError::Domain(format!("not an R-module: {v}")));
        }
        if !self.is_domino()? {
            return Err(RModError::Domain("V^{-∞}Z ≠ 0 or F^∞B is not the whole target".into()));
        }
        let vimg = self.submodule(0, columns(&self.v[0]));
        Ok(self.length(self.lo) - vimg.length)
    }

    /// T of the differential out of degree i.
    pub fn domino_number(&self, i: i64) -> Result<u32, RModError> {
        self.domino_of(i)?.domino_dim()
    }

    /// Kernel of d out of degree i, as a submodule.
    pub fn d_kernel(&self, i: i64) -> Result<Submodule, RModError> {
        let k = self.idx(i).ok_or_else(|| RModError::Domain(format!("degree {i} outside the module")))?;
        let r = self.ann[k].len();
        Ok(match self.d.get(k) {
            Some(d) => {
                let g = self.preimage(k, d, 0, k + 1, &[]);
                self.submodule(k, g)
            }
            None => self.submodule(k, (0..r).map(|g| unit_vec(&self.ring, r, g)).collect()),
        })
    }

    /// Direct sum, degreewise block diagonal. Both modules must share the ring and degree range.
    pub fn direct_sum(&self, other: &RModuleExplicit) -> Result<RModuleExplicit, RModError> {
        if self.ring != other.ring || self.lo != other.lo || self.ann.len() != other.ann.len() {
            return Err(RModError::Shape("direct sum needs the same ring and degree range".into()));
        }
        let ring = &self.ring;
        let c = self.ann.len();
        let ann = (0..c).map(|k| [self.ann[k].clone(), other.ann[k].clone()].concat()).collect();
        let f = (0..c).map(|k| Mat::block_diag(ring, &self.f[k], &other.f[k])).collect();
        let v = (0..c).map(|k| Mat::block_diag(ring, &self.v[k], &other.v[k])).collect();
        let d = (0..c.saturating_sub(1)).map(|k| Mat::block_diag(ring, &self.d[k], &other.d[k])).collect();
        let boundary = (0..c)
            .map(|k| {
                let (r1, r2) = (self.ann[k].len(), other.ann[k].len());
                let mut b: Vec<Vec<ZqElem>> = self.boundary[k]
                    .iter()
                    .map(|g| [g.clone(), vec![ring.zero(); r2]].concat())
                    .collect();
                b.extend(other.boundary[k].iter().map(|g| [vec![ring.zero(); r1], g.clone()].concat()));
                b
            })
            .collect();
        Ok(RModuleExplicit { ring: ring.clone(), lo: self.lo, ann, f, v, d, boundary })
    }

    /// Whether `maps` (one W-linear matrix per degree) is a morphism self → target, modulo the
    /// target boundary.
    pub fn is_morphism(&self, target: &RModuleExplicit, maps: &[Mat]) -> bool {
        let c = self.ann.len();
        if maps.len() != c || target.ann.len() != c || target.lo != self.lo {
            return false;
        }
        let ring = &self.ring;
        for k in 0..c {
            let m = &maps[k];
            if m.rows != target.ann[k].len() || m.cols != self.ann[k].len() {
                return false;
            }
            for g in 0..self.ann[k].len() {
                let e = unit_vec(ring, self.ann[k].len(), g);
                let img = target.reduce(k, &m.apply(ring, &e));
                // annihilators respected
                let pe = ring.mul_p_pow(&ring.one(), self.ann[k][g]);
                if target.scale(k, &img, &pe).iter().any(|x| !ring.is_zero(x)) {
                    return false;
                }
                let lhs = target.apply_f(k, &img);
                let rhs = target.reduce(k, &m.apply(ring, &self.apply_f(k, &e)));
                if !target.agrees(k, &lhs, &rhs, true) {
                    return false;
                }
                let lhs = target.apply_v(k, &img);
                let rhs = target.reduce(k, &m.apply(ring, &self.apply_v(k, &e)));
                if !target.agrees(k, &lhs, &rhs, true) {
                    return false;
                }
                if k + 1 < c {
                    let lhs = target.apply_d(k, &img);
                    let rhs = target.reduce(k + 1, &maps[k + 1].apply(ring, &self.apply_d(k, &e)));
                    if !target.agrees(k + 1, &lhs, &rhs, true) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn image_length(&self, target: &RModuleExplicit, k: usize, m: &Mat) -> u32 {
        target.submodule(k, columns(m)).length
    }
}

/// Presentation of M/N for M = ⊕ W/p^{e}.
struct Quotient {
    ann: Vec<u32>,
    keep: Vec<usize>,
    p: Mat,
    lifts: Vec<Vec<ZqElem>>,
}

impl Quotient {
    fn new(ring: &Zq, ann: &[u32], gens: &[Vec<ZqElem>]) -> Quotient {
        let r = ann.len();
        let n = ring.precision();
        let rel = columns(&relation_diag(ring, ann));
        let a = hcat_cols(ring, r, &[&rel, gens]);
        let s = smith(ring, &a);
        let mut keep = Vec::new();
        let mut out_ann = Vec::new();
        for k in 0..r {
            let e = s.diag.get(k).copied().unwrap_or(n);
            if e > 0 {
                keep.push(k);
                out_ann.push(e);
            }
        }
        let lifts = keep.iter().map(|&k| s.p_inv.column(k)).collect();
        Quotient { ann: out_ann, keep, p: s.p, lifts }
    }

    fn project(&self, ring: &Zq, x: &[ZqElem]) -> Vec<ZqElem> {
        let y = self.p.apply(ring, x);
        self.keep.iter().zip(&self.ann).map(|(&k, &e)| reduce_mod(ring, &y[k], e)).collect()
    }

    fn induced(&self, ring: &Zq, map: impl Fn(&[ZqElem]) -> Vec<ZqElem>) -> Mat {
        let cols: Vec<Vec<ZqElem>> = self.lifts.iter().map(|l| self.project(ring, &map(l))).collect();
        Mat::from_columns(ring, self.ann.len(), &cols)
    }
}

/// Presentation of a submodule N ⊆ M = ⊕ W/p^{e}, via the embedding M ⊂ W_n^r, e_g ↦ p^{n−e} e_g.
struct Sub {
    ann: Vec<u32>,
    embed_shift: Vec<u32>,
    p: Mat,
    diag: Vec<u32>,
}

impl Sub {
    fn new(ring: &Zq, ann: &[u32], gens: &[Vec<ZqElem>]) -> Sub {
        let r = ann.len();
        let n = ring.precision();
        let embed_shift: Vec<u32> = ann.iter().map(|&e| n - e).collect();
        let emb: Vec<Vec<ZqElem>> = gens.iter().map(|g| embed(ring, &embed_shift, g)).collect();
        let h = Mat::from_columns(ring, r, &emb);
        let s = smith(ring, &h);
        let diag = s.diag.clone();
        let ann = diag.iter().map(|&v| n - v).collect();
        Sub { ann, embed_shift, p: s.p, diag }
    }

    fn gens(&self, ring: &Zq) -> Vec<Vec<ZqElem>> {
        let p_inv = crate::linalg::inverse(ring, &self.p).expect("unimodular");
        self.diag
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let h: Vec<ZqElem> = p_inv.column(k).iter().map(|c| ring.mul_p_pow(c, v)).collect();
                h.iter().zip(&self.embed_shift).map(|(c, &sh)| ring.div_p_pow(c, sh)).collect()
            })
            .collect()
    }

    /// Coordinates of an element of N (in M coordinates) with respect to the generators.
    fn coords(&self, ring: &Zq, x: &[ZqElem]) -> Vec<ZqElem> {
        let z = self.p.apply(ring, &embed(ring, &self.embed_shift, x));
        self.diag
            .iter()
            .enumerate()
            .map(|(k, &v)| reduce_mod(ring, &ring.div_p_pow(&z[k], v), ring.precision() - v))
            .collect()
    }

    fn induced(&self, ring: &Zq, map: impl Fn(&[ZqElem]) -> Vec<ZqElem>) -> Mat {
        let cols: Vec<Vec<ZqElem>> = self.gens(ring).iter().map(|g| self.coords(ring, &map(g))).collect();
        Mat::from_columns(ring, self.ann.len(), &cols)
    }
}

fn embed(ring: &Zq, shift: &[u32], x: &[ZqElem]) -> Vec<ZqElem> {
    x.iter().zip(shift).map(|(c, &s)| ring.mul_p_pow(c, s)).collect()
}

/// Checks 0 → L → M → N → 0 is a short exact sequence of R-modules and compares domino
/// numbers degreewise.
pub fn t_additivity_check(
    l: &RModuleExplicit,
    m: &RModuleExplicit,
    n: &RModuleExplicit,
    iota: &[Mat],
    pi: &[Mat],
) -> Result<bool, RModError> {
    if l.lo != m.lo || n.lo != m.lo || l.ann.len() != m.ann.len() || n.ann.len() != m.ann.len() {
        return Err(RModError::Domain("the three modules must share a degree range".into()));
    }
    if !l.is_morphism(m, iota) || !m.is_morphism(n, pi) {
        return Err(RModError::Domain("maps are not R-module morphisms".into()));
    }
    let ring = &m.ring;
    for k in 0..m.ann.len() {
        let comp = pi[k].mul(ring, &iota[k]);
        if columns(&comp).iter().any(|c| n.reduce(k, c).iter().any(|x| !ring.is_zero(x))) {
            return Err(RModError::Domain(format!("π∘ι ≠ 0 in degree {}", m.lo + k as i64)));
        }
        let len_l = l.ann[k].iter().sum::<u32>();
        let len_n = n.ann[k].iter().sum::<u32>();
        let len_m = m.ann[k].iter().sum::<u32>();
        if l.image_length(m, k, &iota[k]) != len_l {
            return Err(RModError::Domain(format!("ι is not injective in degree {}", m.lo + k as i64)));
        }
        if m.image_length(n, k, &pi[k]) != len_n {
            return Err(RModError::Domain(format!("π is not surjective in degree {}", m.lo + k as i64)));
        }
        if len_m != len_l + len_n {
            return Err(RModError::Domain(format!("not exact in the middle in degree {}", m.lo + k as i64)));
        }
    }
    for i in m.lo..m.hi() {
        if m.domino_number(i)? != l.domino_number(i)? + n.domino_number(i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix entry in fixture JSON: an integer, or a coefficient list in t for a > 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Int(i64),
    Poly(Vec<i64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RModuleJson {
    pub p: u64,
    pub a: u32,
    pub n: u32,
    pub degrees: [i64; 2],
    pub modules: Vec<Vec<u32>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<Vec<EntryJson>>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<Vec<EntryJson>>>,
    pub d: Vec<Vec<Vec<EntryJson>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<Vec<Vec<EntryJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

fn entry_to_json(ring: &Zq, x: &ZqElem) -> EntryJson {
    if ring.degree() == 1 {
        EntryJson::Int(x.0[0] as i64)
    } else {
        EntryJson::Poly(x.0.iter().map(|&c| c as i64).collect())
    }
}

fn entry_from_json(ring: &Zq, e: &EntryJson) -> Result<ZqElem, RModError> {
    match e {
        EntryJson::Int(v) => Ok(ring.from_int(*v)),
        EntryJson::Poly(cs) => {
            if cs.len() > ring.degree() {
                return Err(RModError::Presentation(format!("polynomial entry of degree ≥ {}", ring.degree())));
            }
            let m = ring.modulus_int() as i64;
            let mut coeffs = vec![0u64; ring.degree()];
            for (i, &c) in cs.iter().enumerate() {
                coeffs[i] = c.rem_euclid(m) as u64;
            }
            Ok(ZqElem(coeffs))
        }
    }
}

fn mat_to_json(ring: &Zq, m: &Mat) -> Vec<Vec<EntryJson>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| entry_to_json(ring, m.get(i, j))).collect()).collect()
}

fn mat_from_json(ring: &Zq, rows: &[Vec<EntryJson>], r: usize, c: usize, what: &str) -> Result<Mat, RModError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(RModError::Shape(format!("{what} must be {r}x{c}")));
    }
    let mut m = Mat::zeros(ring, r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            m.set(i, j, entry_from_json(ring, e)?);
        }
    }
    Ok(m)
}

impl RModuleExplicit {
    pub fn to_json(&self) -> RModuleJson {
        let ring = &self.ring;
        RModuleJson {
            p: ring.p(),
            a: ring.degree() as u32,
            n: ring.precision(),
            degrees: [self.lo, self.hi()],
            modules: self.ann.clone(),
            f: self.f.iter().map(|m| mat_to_json(ring, m)).collect(),
            v: self.v.iter().map(|m| mat_to_json(ring, m)).collect(),
            d: self.d.iter().map(|m| mat_to_json(ring, m)).collect(),
            boundary: if self.is_truncated() {
                self.boundary
                    .iter()
                    .map(|b| b.iter().map(|g| g.iter().map(|x| entry_to_json(ring, x)).collect()).collect())
                    .collect()
            } else {
                Vec::new()
            },
            description: None,
        }
    }

    pub fn from_json(j: &RModuleJson) -> Result<RModuleExplicit, RModError> {
        let field = GroundField::new(j.p, j.a).map_err(|e| RModError::Field(e.to_string()))?;
        if j.n == 0 {
            return Err(RModError::Presentation("precision must be positive".into()));
        }
        let ring = Zq::new(&field, j.n);
        let [lo, hi] = j.degrees;
        if hi < lo || (hi - lo + 1) as usize != j.modules.len() {
            return Err(RModError::Shape("degrees and modules disagree".into()));
        }
        let c = j.modules.len();
        if j.f.len() != c || j.v.len() != c || j.d.len() != c - 1 {
            return Err(RModError::Shape(format!("expected {c} F, {c} V and {} d matrices", c - 1)));
        }
        let mut f = Vec::new();
        let mut v = Vec::new();
        let mut d = Vec::new();
        for k in 0..c {
            let r = j.modules[k].len();
            f.push(mat_from_json(&ring, &j.f[k], r, r, "F")?);
            v.push(mat_from_json(&ring, &j.v[k], r, r, "V")?);
            if k + 1 < c {
                d.push(mat_from_json(&ring, &j.d[k], j.modules[k + 1].len(), r, "d")?);
            }
        }
        let m = RModuleExplicit::new(&ring, lo, j.modules.clone(), f, v, d)?;
        if j.boundary.is_empty() {
            return Ok(m);
        }
        let mut boundary = Vec::new();
        for b in &j.boundary {
            let gens: Result<Vec<Vec<ZqElem>>, RModError> =
                b.iter().map(|g| g.iter().map(|e| entry_from_json(&ring, e)).collect()).collect();
            boundary.push(gens?);
        }
        m.with_boundary(boundary)
    }

    pub fn from_json_str(text: &str) -> Result<RModuleExplicit, RModError> {
        let j: RModuleJson = serde_json::from_str(text).map_err(|e| RModError::Presentation(e.to_string()))?;
        Self::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{chain_module, u_sigma, Chain};
    use super::*;

    fn f5(n: u32) -> Zq {
        Zq::new(&GroundField::prime(5).unwrap(), n)
    }

    #[test]
    fn zero_and_witt_ring_satisfy_relations() {
        let ring = f5(3);
        assert!(RModuleExplicit::zero(&ring, 0, 2).check_relations().unwrap().is_empty());
        assert!(RModuleExplicit::witt_ring(&ring).check_relations().unwrap().is_empty());
        let f4 = Zq::new(&GroundField::new(2, 2).unwrap(), 4);
        assert!(RModuleExplicit::witt_ring(&f4).check_relations().unwrap().is_empty());
    }

    #[test]
    fn broken_fdv_is_named() {
        let ring = f5(1);
        // k e in degree 0, k f in degree 1, d e = f, F = V = 0: FdV = 0 ≠ d.
        let m = RModuleExplicit::new(
            &ring,
            0,
            vec![vec![1], vec![1]],
            vec![Mat::zeros(&ring, 1, 1), Mat::zeros(&ring, 1, 1)],
            vec![Mat::zeros(&ring, 1, 1), Mat::zeros(&ring, 1, 1)],
            vec![Mat::identity(&ring, 1)],
        )
        .unwrap();
        let v = m.check_relations().unwrap();
        assert_eq!(v, vec![RelationViolation { relation: Relation::FdV, degree: 0, generator: 0 }]);
        assert!(v[0].to_string().starts_with("FdV violation at generator 0 of degree 0"));
    }

    #[test]
    fn ill_defined_map_is_a_presentation_error() {
        let ring = f5(2);
        // generator killed by p, but F sends it to a unit multiple of a W_2 generator
        let m = RModuleExplicit::new(
            &ring,
            0,
            vec![vec![1, 2]],
            vec![Mat::from_ints(&ring, &[vec![0, 0], vec![1, 0]])],
            vec![Mat::zeros(&ring, 2, 2)],
            vec![],
        )
        .unwrap();
        assert!(matches!(m.check_relations(), Err(RModError::Presentation(_))));
    }

    #[test]
    fn d_zero_collapses() {
        let ring = f5(3);
        let m = RModuleExplicit::witt_ring(&ring);
        assert_eq!(m.v_inf_z(0).unwrap().length, 3);
        assert!(m.f_inf_b(0).unwrap().is_zero());
        let two = RModuleExplicit::zero(&ring, 0, 1);
        assert_eq!(two.domino_of(0).unwrap().domino_dim().unwrap(), 0);
    }

    #[test]
    fn u_sigma_is_a_one_dimensional_domino() {
        let ring = f5(1);
        for sigma in 1..=4 {
            for m in [sigma + 2, sigma + 4] {
                let u = u_sigma(&ring, sigma, m);
                assert!(u.check_relations().unwrap().is_empty(), "σ={sigma} m={m}");
                assert!(u.v_inf_z(0).unwrap().is_zero());
                assert_eq!(u.f_inf_b(1).unwrap().length, u.length(1));
                let dom = u.domino_of(0).unwrap();
                assert_eq!(dom.length(0), u.length(0));
                assert_eq!(dom.length(1), u.length(1));
                assert!(dom.check_relations().unwrap().is_empty());
                assert_eq!(dom.domino_dim().unwrap(), 1);
                assert_eq!(u.d_kernel(0).unwrap().length, sigma as u32);
            }
        }
    }

    #[test]
    fn untruncated_relations_fail_on_truncations() {
        let ring = f5(1);
        let u = u_sigma(&ring, 2, 5);
        let bare = RModuleExplicit { boundary: vec![Vec::new(); 2], ..u };
        let v = bare.check_relations().unwrap();
        assert!(v.iter().all(|x| x.relation == Relation::FdV));
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn direct_sum_with_inert_part() {
        let ring = f5(1);
        let u = u_sigma(&ring, 2, 5);
        let inert = chain_module(&ring, &[Chain { len0: 2, len1: 3, links: vec![] }]);
        let sum = u.direct_sum(&inert).unwrap();
        assert!(sum.check_relations().unwrap().is_empty());
        let z = sum.v_inf_z(0).unwrap();
        assert_eq!(z.length, 2);
        assert_eq!(sum.f_inf_b(1).unwrap().length, u.length(1));
        let dom = sum.domino_of(0).unwrap();
        assert_eq!((dom.length(0), dom.length(1)), (u.length(0), u.length(1)));
        assert_eq!(dom.domino_dim().unwrap(), 1);
    }

    #[test]
    fn linked_extension_has_dimension_two() {
        let ring = f5(1);
        let e = super::fixtures::linked_extension(&ring, 1, 1, 2, 5);
        assert!(e.check_relations().unwrap().is_empty());
        assert_eq!(e.domino_number(0).unwrap(), 2);
    }

    #[test]
    fn json_round_trip() {
        let ring = f5(1);
        let u = u_sigma(&ring, 3, 6);
        let text = serde_json::to_string(&u.to_json()).unwrap();
        let back = RModuleExplicit::from_json_str(&text).unwrap();
        assert_eq!(back.to_json().modules, u.to_json().modules);
        assert!(back.check_relations().unwrap().is_empty());
        assert_eq!(back.domino_number(0).unwrap(), 1);
    }
}
