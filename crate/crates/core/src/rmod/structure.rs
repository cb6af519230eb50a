//! Structural summaries of graded R-modules: slope part, finite torsion length and the domino of
//! each differential.

use serde::{Deserialize, Serialize};

use crate::isocrystal::SlopeMultiset;

/// A domino, recorded by its position and the σ's of its U_σ constituents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DominoSpec {
    pub i: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(default)]
    pub constituents: Vec<u32>,
}

impl DominoSpec {
    pub fn at(i: i64, j: i64, constituents: Vec<u32>) -> Self {
        DominoSpec { i, j: Some(j), constituents }
    }

    /// T, the dimension.
    pub fn dim(&self) -> u32 {
        self.constituents.len() as u32
    }

    pub fn is_zero(&self) -> bool {
        self.constituents.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedEntry {
    pub slopes: SlopeMultiset,
    #[serde(default)]
    pub torsion_length: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outgoing_domino: Option<DominoSpec>,
    /// Outgoing differential nonzero beyond its domino (finite image).
    #[serde(default)]
    pub outgoing_d_nonzero: bool,
    /// Declared finite generation, when known independently.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finitely_generated: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRStructure {
    pub lo: i64,
    pub entries: Vec<GradedEntry>,
}

impl GradedRStructure {
    pub fn new(lo: i64, entries: Vec<GradedEntry>) -> Self {
        GradedRStructure { lo, entries }
    }

    fn entry(&self, i: i64) -> Option<&GradedEntry> {
        if i < self.lo {
            return None;
        }
        self.entries.get((i - self.lo) as usize)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.entries.len() as i64 - 1
    }

    /// Structural invariants: no domino out of the top degree.
    pub fn validate(&self) -> Result<(), String> {
        if let Some(top) = self.entries.last() {
            if top.outgoing_domino.as_ref().map_or(false, |d| !d.is_zero()) || top.outgoing_d_nonzero {
                return Err(format!("degree {} is the top degree but has an outgoing differential", self.hi()));
            }
        }
        Ok(())
    }

    fn has_domino(&self, i: i64) -> bool {
        self.entry(i).and_then(|e| e.outgoing_domino.as_ref()).map_or(false, |d| !d.is_zero())
    }

    /// Whether the differential out of degree i is nonzero.
    pub fn d_nonzero(&self, i: i64) -> bool {
        self.has_domino(i) || self.entry(i).map_or(false, |e| e.outgoing_d_nonzero)
    }

    /// Degree i touches a domino on either side.
    pub fn infinitely_generated(&self, i: i64) -> bool {
        self.has_domino(i - 1) || self.has_domino(i)
    }

    pub fn finitely_generated(&self, i: i64) -> bool {
        self.entry(i)
            .and_then(|e| e.finitely_generated)
            .unwrap_or_else(|| !self.infinitely_generated(i))
    }

    /// M^i is finitely generated iff both flanking differentials vanish. Returns whether the
    /// structure satisfies this at degree i.
    pub fn finite_iff_flanking_d_zero(&self, i: i64) -> bool {
        let flanking_zero = !self.d_nonzero(i - 1) && !self.d_nonzero(i);
        self.finitely_generated(i) == flanking_zero
    }
}

/// Positions (i, j) where T^{i,j} ≠ T^{d−i−2, d−j+2}, or where a domino sits at a forbidden place
/// (j ≤ 1 or i ≥ d − 1).
pub fn domino_duality_violations(d: usize, t: impl Fn(usize, usize) -> u32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            let v = t(i, j);
            let forbidden = j <= 1 || i + 1 >= d;
            if forbidden {
                if v != 0 {
                    out.push((i, j));
                }
                continue;
            }
            let (di, dj) = (d as i64 - i as i64 - 2, d as i64 - j as i64 + 2);
            let dual = if di >= 0 && dj >= 0 && di <= d as i64 && dj <= d as i64 { t(di as usize, dj as usize) } else { 0 };
            if v != dual {
                out.push((i, j));
            }
        }
    }
    out
}
