//! Bounded bigraded spectral sequences on structural data: slope, descent (with Brauer twist)
//! and Tate, plus the TR filtration assembly, derived domino numbers and TP for K3-shaped input.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::GroundField;
use crate::invariants::{drw_slopes, NumericalProfile};
use crate::isocrystal::{height, Height, SlopeMultiset};
use crate::rmod::fixtures::{u_sigma, u_sigma_twisted};
use crate::rmod::{DominoSpec, GradedEntry, GradedRStructure};
use crate::zq::Zq;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SSError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Brauer-class data: the p-power order of α (1 means untwisted).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistInfo {
    pub ord: u64,
}

impl TwistInfo {
    pub fn untwisted() -> Self {
        TwistInfo { ord: 1 }
    }

    pub fn is_trivial(&self) -> bool {
        self.ord == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SSKind {
    Slope,
    Descent,
    Tate,
}

impl SSKind {
    /// Bidegree of d_r.
    pub fn bidegree(&self, r: u32) -> (i64, i64) {
        let r = r as i64;
        match self {
            SSKind::Slope => (r, 1 - r),
            SSKind::Descent => (r - 1, r),
            SSKind::Tate => (r, r - 1),
        }
    }

    pub fn first_page(&self) -> u32 {
        match self {
            SSKind::Slope => 1,
            SSKind::Descent | SSKind::Tate => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Marker {
    /// Source of a domino differential.
    DominoOut { t: u32, constituents: Vec<u32> },
    /// Target of a domino differential.
    DominoIn { t: u32 },
    /// Entry replaced by a kernel, e.g. "ord(α)W".
    Kernel { of: String },
    /// Entry replaced by a quotient, e.g. "dlog α".
    Quotient { by: String },
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marker::DominoOut { t, .. } => write!(f, "D{t}>"),
            Marker::DominoIn { t } => write!(f, ">D{t}"),
            Marker::Kernel { of } => write!(f, "ker:{of}"),
            Marker::Quotient { by } => write!(f, "/{by}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub s: i64,
    pub t: i64,
    pub slopes: SlopeMultiset,
    pub torsion_length: u64,
    pub markers: Vec<Marker>,
}

impl Cell {
    pub fn rank(&self) -> u64 {
        self.slopes.rank()
    }

    fn render(&self) -> String {
        let mut out = self.rank().to_string();
        if self.torsion_length > 0 {
            out.push_str(&format!("+t{}", self.torsion_length));
        }
        for m in &self.markers {
            out.push_str(&format!(" {m}"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Effect {
    Domino { t: u32, constituents: Vec<u32> },
    Dlog { ord: u64 },
    Declared,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Differential {
    pub r: u32,
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub effect: Effect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SSPage {
    pub r: u32,
    pub cells: Vec<Cell>,
    pub differentials: Vec<Differential>,
}

impl SSPage {
    pub fn cell(&self, s: i64, t: i64) -> Option<&Cell> {
        self.cells.iter().find(|c| c.s == s && c.t == t)
    }

    fn cell_mut(&mut self, s: i64, t: i64) -> Option<&mut Cell> {
        self.cells.iter_mut().find(|c| c.s == s && c.t == t)
    }

    pub fn rank(&self, s: i64, t: i64) -> u64 {
        self.cell(s, t).map_or(0, |c| c.rank())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralSequence {
    pub kind: SSKind,
    pub d: usize,
    pub pages: Vec<SSPage>,
    /// Page index r with E_r = E_∞.
    pub infinity: u32,
    pub dominoes: Vec<DominoSpec>,
    pub notes: Vec<String>,
}

impl SpectralSequence {
    pub fn page(&self, r: u32) -> Option<&SSPage> {
        self.pages.iter().find(|p| p.r == r)
    }

    pub fn e_infinity(&self) -> &SSPage {
        self.pages.last().expect("at least one page")
    }

    pub fn degenerates_at_first_page(&self) -> bool {
        self.infinity == self.kind.first_page()
    }
}

fn check_domino_positions(profile: &NumericalProfile) -> Result<(), SSError> {
    let d = profile.d as i64;
    for dm in profile.dominoes.iter().filter(|dm| !dm.is_zero()) {
        let j = dm.j.ok_or_else(|| SSError::Validation(format!("domino at i={} has no j", dm.i)))?;
        if j <= 1 || dm.i >= d - 1 || dm.i < 0 || j > d {
            return Err(SSError::Validation(format!("domino at forbidden position ({},{})", dm.i, j)));
        }
    }
    Ok(())
}

/// E_1^{i,j} = H^j(WΩ^i) with slope data from the [i, i+1) window and domino markers.
fn first_table(profile: &NumericalProfile) -> Vec<Cell> {
    let mut cells: Vec<Cell> = drw_slopes(profile)
        .into_iter()
        .map(|c| Cell { s: c.i as i64, t: c.j as i64, slopes: c.slopes, torsion_length: 0, markers: Vec::new() })
        .collect();
    for dm in profile.dominoes.iter().filter(|dm| !dm.is_zero()) {
        let j = dm.j.unwrap_or(0);
        if let Some(c) = cells.iter_mut().find(|c| c.s == dm.i && c.t == j) {
            c.markers.push(Marker::DominoOut { t: dm.dim(), constituents: dm.constituents.clone() });
        }
        if let Some(c) = cells.iter_mut().find(|c| c.s == dm.i + 1 && c.t == j) {
            c.markers.push(Marker::DominoIn { t: dm.dim() });
        }
    }
    cells
}

fn strip_domino_markers(cells: &mut [Cell]) {
    for c in cells.iter_mut() {
        let mut next = Vec::new();
        for m in c.markers.drain(..) {
            match m {
                Marker::DominoOut { .. } => next.push(Marker::Kernel { of: "V^-∞Z".into() }),
                Marker::DominoIn { .. } => next.push(Marker::Quotient { by: "F^∞B".into() }),
                other => next.push(other),
            }
        }
        c.markers = next;
    }
}

/// Slope spectral sequence E_1^{i,j} = H^j(WΩ^i) ⇒ H^{i+j}_crys, d_r of bidegree (r, 1−r).
pub fn slope_ss(profile: &NumericalProfile) -> Result<SpectralSequence, SSError> {
    check_domino_positions(profile)?;
    let e1_cells = first_table(profile);
    let differentials: Vec<Differential> = profile
        .dominoes
        .iter()
        .filter(|dm| !dm.is_zero())
        .map(|dm| {
            let j = dm.j.unwrap_or(0);
            Differential {
                r: 1,
                from: (dm.i, j),
                to: (dm.i + 1, j),
                effect: Effect::Domino { t: dm.dim(), constituents: dm.constituents.clone() },
            }
        })
        .collect();
    let mut pages = vec![SSPage { r: 1, cells: e1_cells.clone(), differentials: differentials.clone() }];
    let infinity = if differentials.is_empty() {
        1
    } else {
        let mut cells = e1_cells;
        strip_domino_markers(&mut cells);
        pages.push(SSPage { r: 2, cells, differentials: Vec::new() });
        2
    };
    Ok(SpectralSequence {
        kind: SSKind::Slope,
        d: profile.d,
        pages,
        infinity,
        dominoes: profile.dominoes.clone(),
        notes: vec!["differentials are zero rationally; torsion effects are the declared dominoes".into()],
    })
}

/// The d_2 arrows a threefold may carry.
pub const THREEFOLD_ARROWS: [((i64, i64), (i64, i64)); 4] =
    [((0, 1), (1, 3)), ((1, 1), (2, 3)), ((1, 0), (2, 2)), ((2, 0), (3, 2))];

/// Descent spectral sequence E_2^{s,t} = H^t(WΩ^s) ⇒ TR_{s−t}, d_r of bidegree (r−1, r).
pub fn descent_ss(profile: &NumericalProfile, twist: TwistInfo) -> Result<SpectralSequence, SSError> {
    check_domino_positions(profile)?;
    let twisted = !twist.is_trivial();
    if twisted && profile.d != 2 {
        return Err(SSError::Unsupported(format!("Brauer twists are only modeled for surfaces, got d = {}", profile.d)));
    }
    let mut o = twist.ord;
    while o > 1 && o % profile.p == 0 {
        o /= profile.p;
    }
    if o != 1 || twist.ord == 0 {
        return Err(SSError::Validation(format!("ord(α) = {} is not a power of p = {}", twist.ord, profile.p)));
    }
    let e2 = first_table(profile);
    let mut differentials = Vec::new();
    for arrow in &profile.descent_differentials {
        let from = (arrow.from[0], arrow.from[1]);
        let (ds, dt) = SSKind::Descent.bidegree(arrow.r);
        let to = (from.0 + ds, from.1 + dt);
        let allowed = profile.d == 3 && arrow.r == 2 && THREEFOLD_ARROWS.contains(&(from, to));
        if !allowed {
            return Err(SSError::Validation(format!(
                "d_{} from ({},{}) to ({},{}) is not an allowed descent differential for d = {}",
                arrow.r, from.0, from.1, to.0, to.1, profile.d
            )));
        }
        differentials.push(Differential { r: 2, from, to, effect: Effect::Declared });
    }
    if twisted {
        differentials.push(Differential { r: 2, from: (0, 0), to: (1, 2), effect: Effect::Dlog { ord: twist.ord } });
    }
    let mut pages = vec![SSPage { r: 2, cells: e2.clone(), differentials: differentials.clone() }];
    let mut notes = vec!["E_2 is the slope E_1 table; rationally degenerate".to_string()];
    let infinity = if differentials.is_empty() {
        2
    } else {
        let mut e3 = SSPage { r: 3, cells: e2, differentials: Vec::new() };
        for dif in &differentials {
            let (src, tgt) = match dif.effect {
                Effect::Dlog { ord } => (Marker::Kernel { of: format!("ord(α)W, ord(α)={ord}") }, Marker::Quotient { by: "dlog α".into() }),
                _ => (Marker::Kernel { of: "d_2".into() }, Marker::Quotient { by: "im d_2".into() }),
            };
            if let Some(c) = e3.cell_mut(dif.from.0, dif.from.1) {
                c.markers.push(src);
            }
            if let Some(c) = e3.cell_mut(dif.to.0, dif.to.1) {
                c.markers.push(tgt);
            }
        }
        pages.push(e3);
        if profile.d == 3 {
            notes.push("the only candidate d_3 leaves the allowed pattern, so E_3 = E_4 = E_∞".into());
        }
        3
    };
    Ok(SpectralSequence { kind: SSKind::Descent, d: profile.d, pages, infinity, dominoes: profile.dominoes.clone(), notes })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationPiece {
    /// Originating row.
    pub t: i64,
    pub s: i64,
    pub slopes: SlopeMultiset,
}

/// TR_n for n = −d..=d with its filtration by rows of E_∞.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TRComplex {
    pub d: usize,
    pub structure: GradedRStructure,
    pub filtration: Vec<Vec<FiltrationPiece>>,
    pub notes: Vec<String>,
}

impl TRComplex {
    pub fn slopes(&self, n: i64) -> SlopeMultiset {
        let idx = n + self.d as i64;
        if idx < 0 {
            return SlopeMultiset::new();
        }
        self.structure.entries.get(idx as usize).map(|e| e.slopes.clone()).unwrap_or_default()
    }

    pub fn rank(&self, n: i64) -> u64 {
        self.slopes(n).rank()
    }

    pub fn finitely_generated(&self, n: i64) -> bool {
        self.structure.finitely_generated(n)
    }
}

/// Graded pieces of TR_n are the E_∞ entries on the antidiagonal s − t = n.
pub fn assemble_tr(ss: &SpectralSequence) -> TRComplex {
    let d = ss.d as i64;
    let einf = ss.e_infinity();
    let mut entries = Vec::new();
    let mut filtration = Vec::new();
    for n in -d..=d {
        let mut pieces: Vec<FiltrationPiece> = einf
            .cells
            .iter()
            .filter(|c| c.s - c.t == n)
            .map(|c| FiltrationPiece { t: c.t, s: c.s, slopes: c.slopes.clone() })
            .collect();
        pieces.sort_by_key(|p| std::cmp::Reverse(p.t));
        let slopes = pieces.iter().fold(SlopeMultiset::new(), |acc, p| acc.union(&p.slopes));
        let torsion_length = einf.cells.iter().filter(|c| c.s - c.t == n).map(|c| c.torsion_length).sum();
        let constituents: Vec<u32> = ss
            .dominoes
            .iter()
            .filter(|dm| dm.j.map_or(false, |j| dm.i - j == n))
            .flat_map(|dm| dm.constituents.iter().copied())
            .collect();
        let outgoing_domino = (!constituents.is_empty()).then(|| DominoSpec { i: n, j: None, constituents });
        entries.push(GradedEntry { slopes, torsion_length, outgoing_domino, ..Default::default() });
        filtration.push(pieces);
    }
    TRComplex {
        d: ss.d,
        structure: GradedRStructure::new(-d, entries),
        filtration,
        notes: vec!["extension data not tracked".into()],
    }
}

/// T^cyc_n = Σ_j T^{n+j, j}, keyed by n.
pub fn derived_dominoes(profile: &NumericalProfile) -> Result<BTreeMap<i64, u32>, SSError> {
    if profile.d > 3 {
        return Err(SSError::Unsupported(format!("domino degeneration is only automatic for d ≤ 3, got {}", profile.d)));
    }
    let d = profile.d as i64;
    let out: BTreeMap<i64, u32> = (-d..=d).map(|n| (n, (0..=d).map(|j| profile.t(n + j, j)).sum())).collect();
    if out[&(-d)] != profile.t(0, d) {
        return Err(SSError::Validation("T^cyc_{-d} ≠ T^{0,d}".into()));
    }
    Ok(out)
}

/// H^0 twisted up by one ⊎ H^2 ⊎ H^4 twisted down by one: rank 24 for a K3.
pub fn mukai_crystal(profile: &NumericalProfile) -> Result<SlopeMultiset, SSError> {
    if !profile.is_k3_shaped() {
        return Err(SSError::Unsupported(format!("{} is not K3-shaped (d = 2, b_1 = 0, b_2 = 22)", profile.name)));
    }
    Ok(profile
        .crys_degree(0)
        .tate_twist(1)
        .union(&profile.crys_degree(2))
        .union(&profile.crys_degree(4).tate_twist(-1)))
}

/// dim K(X, α) read back from the explicit U_σ₀ model: the kernel of the domino differential,
/// with the dlog class of a nontrivial α removing the bottom target class.
pub fn k_dimension(profile: &NumericalProfile, twist: TwistInfo) -> Result<u32, SSError> {
    if !profile.is_k3_shaped() || height(&profile.crys_data()) != Height::Infinite {
        return Err(SSError::Unsupported(format!("{} is not a supersingular K3 profile", profile.name)));
    }
    let dm = profile
        .domino_at(0, 2)
        .ok_or_else(|| SSError::Validation("supersingular K3 profile without a domino at (0,2)".into()))?;
    let sigma = dm.constituents[0] as usize;
    let field = GroundField::prime(profile.p).map_err(|e| SSError::Validation(e.to_string()))?;
    let ring = Zq::new(&field, 1);
    let model = if twist.is_trivial() { u_sigma(&ring, sigma, sigma + 2) } else { u_sigma_twisted(&ring, sigma, sigma + 3) };
    let k = model.d_kernel(0).map_err(|e| SSError::Validation(e.to_string()))?;
    Ok(k.length)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TPEntry {
    pub n: i64,
    pub rank: u64,
    pub slopes: Option<SlopeMultiset>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TPReport {
    pub entries: Vec<TPEntry>,
    pub k_dim: Option<u32>,
    pub notes: Vec<String>,
}

impl TPReport {
    pub fn entry(&self, n: i64) -> Option<&TPEntry> {
        self.entries.iter().find(|e| e.n == n)
    }
}

/// Range of TP degrees reported.
pub const TP_RANGE: std::ops::RangeInclusive<i64> = -4..=3;

/// TP from TR through the 2-periodic Tate spectral sequence, rationally degenerate.
pub fn tate_ss_tp(profile: &NumericalProfile, tr: &TRComplex, twist: TwistInfo) -> Result<TPReport, SSError> {
    let d = tr.d as i64;
    let rank_of = |n: i64| -> u64 { (-d..=d).filter(|t| (t - n).rem_euclid(2) == 0).map(|t| tr.rank(t)).sum() };
    let mut notes = vec!["TP_n ⊗ K is the sum of TR_t ⊗ K over t ≡ n mod 2".to_string()];
    let k3 = profile.d == 2 && profile.is_k3_shaped();
    let supersingular = k3 && height(&profile.crys_data()) == Height::Infinite;
    let mukai = if k3 { Some(mukai_crystal(profile)?) } else { None };
    let mut entries = Vec::new();
    for n in TP_RANGE {
        let rank = rank_of(n);
        let slopes = match &mukai {
            Some(h) if n % 2 == 0 => {
                let i = n.div_euclid(2);
                if supersingular {
                    Some(tr.slopes(0).tate_twist(-i))
                } else {
                    Some(h.tate_twist(-(i + 1)))
                }
            }
            Some(_) => Some(SlopeMultiset::new()),
            None => None,
        };
        entries.push(TPEntry { n, rank, slopes });
    }
    let k_dim = if supersingular {
        notes.push("0 → TR_0(X,α)(−i) → TP_{2i} → K(X,α) → 0".into());
        Some(k_dimension(profile, twist)?)
    } else {
        if !twist.is_trivial() && k3 {
            notes.push("finite height: the twist does not change TP".into());
        }
        None
    };
    Ok(TPReport { entries, k_dim, notes })
}

/// The Tate spectral sequence page E_2^{s,t} = TR_t in every even column s of the window.
pub fn tate_ss(profile: &NumericalProfile, twist: TwistInfo) -> Result<SpectralSequence, SSError> {
    let tr = assemble_tr(&descent_ss(profile, twist)?);
    let d = profile.d as i64;
    let mut cells = Vec::new();
    for s in (-4..=2).step_by(2) {
        for t in -d..=d {
            let entry = &tr.structure.entries[(t + d) as usize];
            let mut markers = Vec::new();
            if let Some(dm) = &entry.outgoing_domino {
                markers.push(Marker::DominoOut { t: dm.dim(), constituents: dm.constituents.clone() });
            }
            cells.push(Cell { s, t, slopes: entry.slopes.clone(), torsion_length: entry.torsion_length, markers });
        }
    }
    Ok(SpectralSequence {
        kind: SSKind::Tate,
        d: profile.d,
        pages: vec![SSPage { r: 2, cells, differentials: Vec::new() }],
        infinity: 2,
        dominoes: profile.dominoes.clone(),
        notes: vec!["2-periodic; rationally degenerate".into()],
    })
}

impl fmt::Display for SpectralSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for page in &self.pages {
            let label = if page.r == self.infinity { format!("E_{} = E_∞", page.r) } else { format!("E_{}", page.r) };
            let (bs, bt) = self.kind.bidegree(page.r);
            writeln!(f, "{:?} spectral sequence, {label}  (d_{} has bidegree ({bs},{bt}))", self.kind, page.r)?;
            let mut ss: Vec<i64> = page.cells.iter().map(|c| c.s).collect();
            ss.sort();
            ss.dedup();
            let mut ts: Vec<i64> = page.cells.iter().map(|c| c.t).collect();
            ts.sort();
            ts.dedup();
            let width = page.cells.iter().map(|c| c.render().chars().count()).max().unwrap_or(1).max(3) + 2;
            write!(f, "{:>5} |", "t\\s")?;
            for s in &ss {
                write!(f, "{:>width$}", s)?;
            }
            writeln!(f)?;
            for t in ts.iter().rev() {
                write!(f, "{:>5} |", t)?;
                for s in &ss {
                    let text = page.cell(*s, *t).map_or(".".to_string(), |c| c.render());
                    write!(f, "{:>width$}", text)?;
                }
                writeln!(f)?;
            }
            for dif in &page.differentials {
                let what = match &dif.effect {
                    Effect::Domino { t, constituents } => format!("domino T={t} {constituents:?}"),
                    Effect::Dlog { ord } => format!("1 ↦ dlog α, ord(α) = {ord}"),
                    Effect::Declared => "declared".to_string(),
                };
                writeln!(f, "  d_{}: ({},{}) → ({},{})  {what}", dif.r, dif.from.0, dif.from.1, dif.to.0, dif.to.1)?;
            }
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::slope;

    fn ms(pairs: &[(i64, i64, u64)]) -> SlopeMultiset {
        SlopeMultiset::from_pairs(&pairs.iter().map(|&(n, d, m)| (slope(n, d), m)).collect::<Vec<_>>())
    }

    fn k3(h2: SlopeMultiset, dominoes: Vec<DominoSpec>) -> NumericalProfile {
        let mut p = NumericalProfile::from_slopes(
            "k3",
            5,
            2,
            vec![ms(&[(0, 1, 1)]), SlopeMultiset::new(), h2, SlopeMultiset::new(), ms(&[(2, 1, 1)])],
        );
        p.dominoes = dominoes;
        p
    }

    fn ss(sigma: u32) -> NumericalProfile {
        k3(ms(&[(1, 1, 22)]), vec![DominoSpec::at(0, 2, vec![sigma])])
    }

    fn finite(h: i64) -> NumericalProfile {
        k3(ms(&[(h - 1, h, h as u64), (1, 1, 22 - 2 * h as u64), (h + 1, h, h as u64)]), vec![])
    }

    #[test]
    fn slope_ss_degeneration() {
        for h in 1..=10 {
            assert!(slope_ss(&finite(h)).unwrap().degenerates_at_first_page());
        }
        let s = slope_ss(&ss(2)).unwrap();
        assert!(!s.degenerates_at_first_page());
        assert_eq!(s.pages[0].differentials.len(), 1);
        assert_eq!((s.pages[0].differentials[0].from, s.pages[0].differentials[0].to), ((0, 2), (1, 2)));
        let curve = NumericalProfile::from_slopes("e", 5, 1, vec![ms(&[(0, 1, 1)]), ms(&[(1, 2, 2)]), ms(&[(1, 1, 1)])]);
        assert!(slope_ss(&curve).unwrap().degenerates_at_first_page());
        let mut bad = finite(1);
        bad.dominoes = vec![DominoSpec::at(1, 2, vec![1])];
        assert!(matches!(slope_ss(&bad), Err(SSError::Validation(_))));
    }

    #[test]
    fn assembled_tr_endpoints_and_ranks() {
        let tr = assemble_tr(&slope_ss(&ss(1)).unwrap());
        assert_eq!(tr.rank(0), 24);
        assert_eq!(tr.slopes(-2), SlopeMultiset::new());
        assert!(!tr.finitely_generated(-2));
        assert!(!tr.finitely_generated(-1));
        assert!(tr.finitely_generated(0));
        let f = assemble_tr(&descent_ss(&finite(3), TwistInfo::untwisted()).unwrap());
        assert_eq!(f.slopes(-2), ms(&[(2, 3, 3)]));
        for n in [-1, 1] {
            assert_eq!(f.rank(n), 0);
        }
        assert_eq!(f.notes, vec!["extension data not tracked".to_string()]);
    }

    #[test]
    fn twisted_descent_pages() {
        let plain = descent_ss(&ss(3), TwistInfo::untwisted()).unwrap();
        assert_eq!(plain.infinity, 2);
        let same = descent_ss(&ss(3), TwistInfo { ord: 1 }).unwrap();
        assert_eq!(plain, same);
        let tw = descent_ss(&ss(3), TwistInfo { ord: 5 }).unwrap();
        assert_eq!(tw.infinity, 3);
        assert_eq!(tw.pages[0].cells, plain.pages[0].cells);
        let e3 = tw.page(3).unwrap();
        assert_eq!(e3.rank(0, 0), 1);
        assert!(e3.cell(0, 0).unwrap().markers.iter().any(|m| matches!(m, Marker::Kernel { .. })));
        assert!(e3.cell(1, 2).unwrap().markers.iter().any(|m| matches!(m, Marker::Quotient { .. })));
        let changed: Vec<(i64, i64)> =
            e3.cells.iter().filter(|c| plain.pages[0].cell(c.s, c.t) != Some(c)).map(|c| (c.s, c.t)).collect();
        assert_eq!(changed, vec![(0, 0), (1, 2)]);
        assert!(descent_ss(&ss(3), TwistInfo { ord: 6 }).is_err());
    }

    #[test]
    fn threefold_arrow_validation() {
        let mut p = NumericalProfile::from_slopes("x", 5, 3, vec![SlopeMultiset::new(); 7]);
        p.descent_differentials = vec![crate::invariants::DescentArrow { from: [1, 0], r: 2 }];
        assert_eq!(descent_ss(&p, TwistInfo::untwisted()).unwrap().infinity, 3);
        p.descent_differentials = vec![crate::invariants::DescentArrow { from: [0, 0], r: 2 }];
        assert!(descent_ss(&p, TwistInfo::untwisted()).is_err());
        p.descent_differentials.clear();
        assert!(matches!(descent_ss(&p, TwistInfo { ord: 5 }), Err(SSError::Unsupported(_))));
    }

    #[test]
    fn derived_domino_examples() {
        let t = derived_dominoes(&ss(1)).unwrap();
        assert_eq!(t[&-2], 1);
        assert!(t.iter().filter(|(n, _)| **n != -2).all(|(_, v)| *v == 0));
        let mut x = NumericalProfile::from_slopes("x", 5, 3, vec![SlopeMultiset::new(); 7]);
        x.dominoes = vec![
            DominoSpec::at(0, 2, vec![1, 1]),
            DominoSpec::at(1, 3, vec![2, 2]),
            DominoSpec::at(0, 3, vec![5]),
            DominoSpec::at(1, 2, vec![5]),
        ];
        let t = derived_dominoes(&x).unwrap();
        assert_eq!((t[&-3], t[&-2], t[&-1]), (1, 4, 1));
        assert!(derived_dominoes(&finite(1)).unwrap().values().all(|&v| v == 0));
    }

    #[test]
    fn mukai_examples() {
        assert_eq!(mukai_crystal(&finite(1)).unwrap(), ms(&[(0, 1, 1), (1, 1, 22), (2, 1, 1)]));
        assert_eq!(mukai_crystal(&ss(4)).unwrap(), ms(&[(1, 1, 24)]));
        for h in 1..=10 {
            assert_eq!(mukai_crystal(&finite(h)).unwrap().rank(), 24);
        }
    }

    #[test]
    fn tp_and_k_dimension() {
        for sigma in 1..=10 {
            let p = ss(sigma);
            assert_eq!(k_dimension(&p, TwistInfo::untwisted()).unwrap(), sigma);
            assert_eq!(k_dimension(&p, TwistInfo { ord: 5 }).unwrap(), sigma + 1);
            let tr = assemble_tr(&descent_ss(&p, TwistInfo { ord: 5 }).unwrap());
            let tp = tate_ss_tp(&p, &tr, TwistInfo { ord: 5 }).unwrap();
            assert_eq!(tp.k_dim, Some(sigma + 1));
            for e in &tp.entries {
                if e.n % 2 != 0 {
                    assert_eq!(e.rank, 0);
                } else {
                    let i = e.n.div_euclid(2);
                    assert_eq!(e.rank, 24);
                    assert_eq!(e.slopes.clone().unwrap(), mukai_crystal(&p).unwrap().tate_twist(-(i + 1)));
                }
            }
        }
        let f = finite(2);
        let tr = assemble_tr(&descent_ss(&f, TwistInfo::untwisted()).unwrap());
        let tp = tate_ss_tp(&f, &tr, TwistInfo::untwisted()).unwrap();
        assert_eq!(tp.entry(-2).unwrap().slopes.clone().unwrap(), mukai_crystal(&f).unwrap());
        assert_eq!(tp.k_dim, None);
    }
}
