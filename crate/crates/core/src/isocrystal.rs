//! F-isocrystal slope data: slope multisets, Newton polygons, constraint validation, height.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::field::GroundField;
use crate::linalg::Mat;
use crate::zq::Zq;
use crate::Slope;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsocrystalError {
    #[error("insufficient precision {have}: Newton-polygon vertex at T^{vertex} is undetermined; precision at least {needed} is needed")]
    Precision { vertex: usize, have: u32, needed: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
}

/// Finite multiset of rational slopes.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeMultiset {
    entries: BTreeMap<Slope, u64>,
}

pub fn slope(num: i64, den: i64) -> Slope {
    Ratio::new(num, den)
}

pub fn format_slope(s: &Slope) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

impl SlopeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(Slope, u64)]) -> Self {
        let mut s = Self::new();
        for &(l, m) in pairs {
            s.insert(l, m);
        }
        s
    }

    /// Single slope with multiplicity.
    pub fn single(l: Slope, mult: u64) -> Self {
        Self::from_pairs(&[(l, mult)])
    }

    pub fn insert(&mut self, l: Slope, mult: u64) {
        if mult > 0 {
            *self.entries.entry(l).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, l: &Slope) -> u64 {
        self.entries.get(l).copied().unwrap_or(0)
    }

    pub fn rank(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Slope, &u64)> {
        self.entries.iter()
    }

    pub fn slopes(&self) -> impl Iterator<Item = &Slope> {
        self.entries.keys()
    }

    /// Multiset union ⊎.
    pub fn union(&self, other: &SlopeMultiset) -> SlopeMultiset {
        let mut out = self.clone();
        for (&l, &m) in &other.entries {
            out.insert(l, m);
        }
        out
    }

    /// Every slope λ ↦ λ + n.
    pub fn tate_twist(&self, n: i64) -> SlopeMultiset {
        self.shift(Slope::from_integer(n))
    }

    pub fn shift(&self, by: Slope) -> SlopeMultiset {
        SlopeMultiset { entries: self.entries.iter().map(|(&l, &m)| (l + by, m)).collect() }
    }

    /// Restriction to a half-open interval.
    pub fn slope_part(&self, interval: &Interval) -> SlopeMultiset {
        SlopeMultiset {
            entries: self.entries.iter().filter(|(l, _)| interval.contains(l)).map(|(&l, &m)| (l, m)).collect(),
        }
    }

    /// Σ λ·mult, exact.
    pub fn weighted_sum(&self) -> Slope {
        self.entries.iter().fold(Slope::zero(), |acc, (l, &m)| acc + l * Slope::from_integer(m as i64))
    }

    /// Slopes with multiplicity, sorted.
    pub fn to_list(&self) -> Vec<Slope> {
        self.entries.iter().flat_map(|(&l, &m)| std::iter::repeat(l).take(m as usize)).collect()
    }

    pub fn from_list(list: &[Slope]) -> SlopeMultiset {
        let mut s = SlopeMultiset::new();
        for &l in list {
            s.insert(l, 1);
        }
        s
    }

    /// Slopes of the exterior power Λ^k: sums over k-element sub-multisets.
    pub fn wedge_power(&self, k: usize) -> SlopeMultiset {
        let groups: Vec<(Slope, u64)> = self.entries.iter().map(|(&l, &m)| (l, m)).collect();
        let mut out = SlopeMultiset::new();
        fn rec(groups: &[(Slope, u64)], k: usize, acc: Slope, count: u64, out: &mut SlopeMultiset) {
            if k == 0 {
                out.insert(acc, count);
                return;
            }
            let Some((&(l, m), rest)) = groups.split_first() else { return };
            for take in 0..=(m as usize).min(k) {
                let c = binomial(m, take as u64);
                rec(rest, k - take, acc + l * Slope::from_integer(take as i64), count * c, out);
            }
        }
        rec(&groups, k, Slope::zero(), 1, &mut out);
        out
    }

    pub fn to_triples(&self) -> Vec<[i64; 3]> {
        self.entries.iter().map(|(l, &m)| [*l.numer(), *l.denom(), m as i64]).collect()
    }

    pub fn from_triples(triples: &[[i64; 3]]) -> Result<SlopeMultiset, IsocrystalError> {
        let mut s = SlopeMultiset::new();
        for t in triples {
            if t[1] == 0 {
                return Err(IsocrystalError::Domain("zero denominator".into()));
            }
            if t[2] <= 0 {
                return Err(IsocrystalError::Domain(format!("multiplicity {} must be positive", t[2])));
            }
            s.insert(Ratio::new(t[0], t[1]), t[2] as u64);
        }
        Ok(s)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Display for SlopeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(l, m)| format!("{}:{}", format_slope(l), m)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for SlopeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SlopeMultiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_triples().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SlopeMultiset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let triples = Vec::<[i64; 3]>::deserialize(deserializer)?;
        SlopeMultiset::from_triples(&triples).map_err(D::Error::custom)
    }
}

/// Half-open rational interval [lo, hi); `None` bounds are infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Slope>,
    pub hi: Option<Slope>,
}

impl Interval {
    pub fn new(lo: Slope, hi: Slope) -> Self {
        Interval { lo: Some(lo), hi: Some(hi) }
    }

    /// [i, i + 1).
    pub fn unit(i: i64) -> Self {
        Interval::new(Slope::from_integer(i), Slope::from_integer(i + 1))
    }

    pub fn everything() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn contains(&self, l: &Slope) -> bool {
        self.lo.map_or(true, |lo| *l >= lo) && self.hi.map_or(true, |hi| *l < hi)
    }
}

/// A σ^e-linear endomorphism Φ of W_n(F_q)^m: Φ(c·v) = σ^e(c)·Φ(v), Φ(e_j) = Σ_i A_ij e_i.
#[derive(Debug, Clone)]
pub struct FrobeniusMatrix {
    pub ring: Zq,
    pub matrix: Mat,
    pub semilinearity: i64,
}

impl FrobeniusMatrix {
    pub fn new(ring: &Zq, matrix: Mat, semilinearity: i64) -> Result<Self, IsocrystalError> {
        if matrix.rows != matrix.cols {
            return Err(IsocrystalError::Shape(format!("{}x{} matrix is not square", matrix.rows, matrix.cols)));
        }
        Ok(FrobeniusMatrix { ring: ring.clone(), matrix, semilinearity })
    }

    pub fn field(&self) -> &GroundField {
        self.ring.field()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows
    }

    /// Matrix of the linear map Φ^a: A·σ^e(A)·σ^{2e}(A)⋯σ^{(a−1)e}(A).
    pub fn linearized(&self) -> Mat {
        let ring = &self.ring;
        let a = ring.degree() as i64;
        let mut acc = self.matrix.clone();
        for k in 1..a {
            acc = acc.mul(ring, &self.matrix.sigma_pow(ring, k * self.semilinearity));
        }
        acc
    }

    /// Change of basis Φ ↦ U·A·σ^e(U)^{-1}.
    pub fn conjugate(&self, u: &Mat, u_inv: &Mat) -> FrobeniusMatrix {
        let ring = &self.ring;
        let twisted_inv = u_inv.sigma_pow(ring, self.semilinearity);
        FrobeniusMatrix {
            ring: ring.clone(),
            matrix: u.mul(ring, &self.matrix).mul(ring, &twisted_inv),
            semilinearity: self.semilinearity,
        }
    }

    pub fn block_diag(&self, other: &FrobeniusMatrix) -> FrobeniusMatrix {
        FrobeniusMatrix {
            ring: self.ring.clone(),
            matrix: Mat::block_diag(&self.ring, &self.matrix, &other.matrix),
            semilinearity: self.semilinearity,
        }
    }
}

/// Lower convex hull of points (x, y), sorted by x. Returns hull vertex indices into `points`.
fn lower_hull(points: &[(i64, Slope)]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (k, &(x, y)) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let (x1, y1) = points[hull[hull.len() - 2]];
            let (x2, y2) = points[hull[hull.len() - 1]];
            // Drop the middle point if it lies on or above the chord.
            let lhs = (y2 - y1) * Slope::from_integer(x - x1);
            let rhs = (y - y1) * Slope::from_integer(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// Root valuations from the Newton polygon of a polynomial given by (degree, valuation) points
/// with a nonzero coefficient at both ends.
fn root_valuations(points: &[(i64, Slope)]) -> SlopeMultiset {
    let hull = lower_hull(points);
    let mut out = SlopeMultiset::new();
    for w in hull.windows(2) {
        let (x1, y1) = points[w[0]];
        let (x2, y2) = points[w[1]];
        let len = x2 - x1;
        let s = -(y2 - y1) / Slope::from_integer(len);
        out.insert(s, len as u64);
    }
    out
}

fn int_valuation<I>(c: &I, p: &I) -> u32
where
    I: Integer + Clone,
{
    let mut v = 0;
    let mut c = c.clone();
    while (c.clone() % p.clone()).is_zero() {
        c = c / p.clone();
        v += 1;
    }
    v
}

/// Slopes of a polynomial with integer coefficients (listed from the leading coefficient down),
/// normalized by a = log_p q. Factors of T are stripped (roots of infinite slope).
pub fn newton_from_charpoly<I>(coeffs: &[I], q: u64) -> Result<SlopeMultiset, IsocrystalError>
where
    I: Integer + Clone + Signed + FromPrimitive,
{
    let (p, a) = prime_power(q).ok_or_else(|| IsocrystalError::Domain(format!("{q} is not a prime power")))?;
    let first = coeffs.iter().position(|c| !c.is_zero());
    let Some(first) = first else {
        return Err(IsocrystalError::Domain("zero polynomial".into()));
    };
    let coeffs = &coeffs[first..];
    let pi = I::from_u64(p).expect("prime fits the integer type");
    let mut points = Vec::new();
    for (k, c) in coeffs.iter().rev().enumerate() {
        if !c.is_zero() {
            points.push((k as i64, Slope::from_integer(int_valuation(&c.abs(), &pi) as i64)));
        }
    }
    Ok(root_valuations(&points).scale_down(a))
}

impl SlopeMultiset {
    fn scale_down(&self, a: u32) -> SlopeMultiset {
        let d = Slope::from_integer(a as i64);
        SlopeMultiset { entries: self.entries.iter().map(|(&l, &m)| (l / d, m)).collect() }
    }
}

pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut a = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        a += 1;
    }
    (r == 1).then_some((p, a))
}

/// Slopes of Φ: the Newton polygon of det(T − Φ^a) over W_n, slopes divided by a.
pub fn newton_slopes(m: &FrobeniusMatrix) -> Result<SlopeMultiset, IsocrystalError> {
    let ring = &m.ring;
    let n = ring.precision();
    let a = ring.degree() as u32;
    let cp = m.linearized().charpoly(ring);
    let deg = cp.len() - 1;
    if deg == 0 {
        return Ok(SlopeMultiset::new());
    }
    let vals: Vec<Option<u32>> = cp.iter().map(|c| ring.valuation(c)).collect();
    // Known points all have valuation < n, so an unknown interior point can never dip below
    // the hull; only a lost constant term leaves the polygon undetermined.
    if vals[0].is_none() {
        return Err(IsocrystalError::Precision { vertex: 0, have: n, needed: n + 1 });
    }
    let points: Vec<(i64, Slope)> = vals
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.map(|v| (k as i64, Slope::from_integer(v as i64))))
        .collect();
    Ok(root_valuations(&points).scale_down(a))
}

/// Companion matrix of a monic polynomial given from the leading coefficient down.
pub fn companion(ring: &Zq, coeffs: &[i64]) -> Mat {
    let m = coeffs.len() - 1;
    let mut c = Mat::zeros(ring, m, m);
    for i in 1..m {
        c.set(i, i - 1, ring.one());
    }
    for i in 0..m {
        // last column: −c_i for T^i
        let coef = coeffs[m - i];
        c.set(i, m - 1, ring.from_int(-coef));
    }
    c
}

/// Crystalline slope data of a d-dimensional variety: one multiset per degree 0..=2d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystallineSlopeData {
    pub d: usize,
    pub degrees: Vec<SlopeMultiset>,
    /// Declared Betti numbers, when known independently of the slopes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Constraint1 { i: usize, lambda: Slope },
    Constraint2 { i: usize, lambda: Slope },
    Range { i: usize, lambda: Slope },
    Rank { i: usize, declared: u64, actual: u64 },
    Shape(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Constraint1 { i, lambda } => {
                write!(f, "constraint1 violation at (i={i}, λ={})", format_slope(lambda))
            }
            Violation::Constraint2 { i, lambda } => {
                write!(f, "constraint2 violation at (i={i}, λ={})", format_slope(lambda))
            }
            Violation::Range { i, lambda } => {
                write!(f, "slope range violation at (i={i}, λ={})", format_slope(lambda))
            }
            Violation::Rank { i, declared, actual } => {
                write!(f, "rank violation in degree {i}: declared b_{i} = {declared}, slopes give {actual}")
            }
            Violation::Shape(msg) => write!(f, "shape violation: {msg}"),
        }
    }
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Constraint1 { .. } => "constraint1",
            Violation::Constraint2 { .. } => "constraint2",
            Violation::Range { .. } => "range",
            Violation::Rank { .. } => "rank",
            Violation::Shape(_) => "shape",
        }
    }
}

impl CrystallineSlopeData {
    pub fn new(d: usize, degrees: Vec<SlopeMultiset>) -> Self {
        CrystallineSlopeData { d, degrees, betti: None }
    }

    pub fn degree(&self, i: usize) -> SlopeMultiset {
        self.degrees.get(i).cloned().unwrap_or_default()
    }

    /// h^i_{crys,λ}.
    pub fn h(&self, i: usize, lambda: &Slope) -> u64 {
        self.degrees.get(i).map_or(0, |s| s.multiplicity(lambda))
    }

    pub fn betti(&self) -> Vec<u64> {
        self.degrees.iter().map(|s| s.rank()).collect()
    }
}

/// Poincaré duality, hard Lefschetz and range checks. Pairs are reported once, at the lower index.
pub fn validate_crys(data: &CrystallineSlopeData) -> Vec<Violation> {
    let d = data.d;
    let mut out = Vec::new();
    if data.degrees.len() != 2 * d + 1 {
        out.push(Violation::Shape(format!("expected {} degrees, got {}", 2 * d + 1, data.degrees.len())));
        return out;
    }
    let dd = Slope::from_integer(d as i64);
    for i in 0..=2 * d {
        let s = &data.degrees[i];
        let top = Slope::from_integer(i.min(d) as i64);
        for l in s.slopes() {
            if *l < Slope::zero() || *l > top {
                out.push(Violation::Range { i, lambda: *l });
            }
        }
        // constraint1: h^i_λ = h^{2d−i}_{d−λ}
        if i < d {
            let dual = &data.degrees[2 * d - i];
            let mut lambdas: Vec<Slope> = s.slopes().copied().collect();
            lambdas.extend(dual.slopes().map(|l| dd - l));
            lambdas.sort();
            lambdas.dedup();
            for l in lambdas {
                if s.multiplicity(&l) != dual.multiplicity(&(dd - l)) {
                    out.push(Violation::Constraint1 { i, lambda: l });
                }
            }
        }
        // constraint2: h^i_λ = h^i_{i−λ}
        let ii = Slope::from_integer(i as i64);
        let mut lambdas: Vec<Slope> = s.slopes().flat_map(|l| [*l, ii - l]).collect();
        lambdas.sort();
        lambdas.dedup();
        for l in lambdas {
            if l < ii - l && s.multiplicity(&l) != s.multiplicity(&(ii - l)) {
                out.push(Violation::Constraint2 { i, lambda: l });
            }
        }
        if let Some(b) = data.betti.as_ref().and_then(|b| b.get(i)) {
            if *b != s.rank() {
                out.push(Violation::Rank { i, declared: *b, actual: s.rank() });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => write!(f, "∞"),
        }
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Height::Finite(h) => serializer.serialize_u64(*h),
            Height::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

/// Rank of the slope-[0,1) part of H^d, or infinity when that part vanishes.
pub fn height(data: &CrystallineSlopeData) -> Height {
    let r = data.degree(data.d).slope_part(&Interval::unit(0)).rank();
    if r == 0 {
        Height::Infinite
    } else {
        Height::Finite(r)
    }
}
