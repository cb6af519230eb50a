//! The numerical fingerprint of a variety and its validators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::field::is_prime;
use crate::isocrystal::{newton_from_charpoly, validate_crys, CrystallineSlopeData, SlopeMultiset};
use crate::rmod::{domino_duality_violations, DominoSpec};
use crate::specseq::TwistInfo;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrysDegree {
    pub deg: usize,
    pub slopes: SlopeMultiset,
}

/// A declared differential of the descent spectral sequence, d_r out of (s, t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentArrow {
    pub from: [i64; 2],
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericalProfile {
    pub name: String,
    pub p: u64,
    #[serde(default = "one")]
    pub a: u32,
    pub d: usize,
    /// hodge[i][j] = h^{i,j} = dim H^j(X, Ω^i).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<Vec<Vec<u64>>>,
    pub crys: Vec<CrysDegree>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion_free: Vec<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dominoes: Vec<DominoSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistInfo>,
    /// Characteristic polynomial of Frobenius per degree, leading coefficient first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charpolys: Option<BTreeMap<String, Vec<i128>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub albanese_dim: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hdr_degenerates: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub calabi_yau: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub descent_differentials: Vec<DescentArrow>,
}

fn one() -> u32 {
    1
}

impl NumericalProfile {
    /// A profile with the given slope data in every degree 0..=2d and nothing else.
    pub fn from_slopes(name: &str, p: u64, d: usize, degrees: Vec<SlopeMultiset>) -> Self {
        NumericalProfile {
            name: name.to_string(),
            p,
            a: 1,
            d,
            hodge: None,
            crys: degrees.into_iter().enumerate().map(|(deg, slopes)| CrysDegree { deg, slopes }).collect(),
            torsion_free: Vec::new(),
            dominoes: Vec::new(),
            twist: None,
            charpolys: None,
            albanese_dim: None,
            hdr_degenerates: None,
            calabi_yau: false,
            descent_differentials: Vec::new(),
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.a)
    }

    pub fn crys_degree(&self, deg: usize) -> SlopeMultiset {
        self.crys.iter().find(|c| c.deg == deg).map(|c| c.slopes.clone()).unwrap_or_default()
    }

    pub fn crys_data(&self) -> CrystallineSlopeData {
        CrystallineSlopeData::new(self.d, (0..=2 * self.d).map(|i| self.crys_degree(i)).collect())
    }

    pub fn hodge_number(&self, i: usize, j: usize) -> Option<u64> {
        self.hodge.as_ref().and_then(|h| h.get(i)).and_then(|row| row.get(j)).copied()
    }

    /// T^{i,j}; zero off the table.
    pub fn t(&self, i: i64, j: i64) -> u32 {
        self.dominoes
            .iter()
            .filter(|dm| dm.i == i && dm.j == Some(j))
            .map(|dm| dm.dim())
            .sum()
    }

    pub fn domino_at(&self, i: i64, j: i64) -> Option<&DominoSpec> {
        self.dominoes.iter().find(|dm| dm.i == i && dm.j == Some(j) && !dm.is_zero())
    }

    pub fn twist_order(&self) -> u64 {
        self.twist.map_or(1, |t| t.ord)
    }

    pub fn is_k3_shaped(&self) -> bool {
        self.d == 2 && self.crys_degree(2).rank() == 22 && self.crys_degree(1).rank() == 0
    }

    /// Every structural problem with the profile; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = self.d;
        if !is_prime(self.p) {
            out.push(format!("p = {} is not prime", self.p));
        }
        if self.a == 0 {
            out.push("a must be positive".into());
        }
        if let Some(h) = &self.hodge {
            if h.len() != d + 1 || h.iter().any(|row| row.len() != d + 1) {
                out.push(format!("hodge table must be {}x{}", d + 1, d + 1));
            }
        }
        let mut seen = vec![false; 2 * d + 1];
        for c in &self.crys {
            if c.deg > 2 * d {
                out.push(format!("crys degree {} outside 0..={}", c.deg, 2 * d));
            } else if seen[c.deg] {
                out.push(format!("crys degree {} listed twice", c.deg));
            } else {
                seen[c.deg] = true;
            }
        }
        out.extend(validate_crys(&self.crys_data()).iter().map(|v| v.to_string()));
        if !self.torsion_free.is_empty() && self.torsion_free.len() != 2 * d + 1 {
            out.push(format!("torsion_free needs {} flags", 2 * d + 1));
        }
        for dm in &self.dominoes {
            match dm.j {
                None => out.push(format!("domino at i={} has no j", dm.i)),
                Some(j) => {
                    let (i, di) = (dm.i, d as i64);
                    if i < 0 || j < 0 || i > di || j > di {
                        out.push(format!("domino position ({i},{j}) outside the table"));
                    } else if !dm.is_zero() && (j <= 1 || i >= di - 1) {
                        out.push(format!("domino at forbidden position ({i},{j})"));
                    }
                }
            }
        }
        for (i, j) in domino_duality_violations(d, |i, j| self.t(i as i64, j as i64)) {
            // forbidden positions were reported above
            if j >= 2 && i + 1 < d {
                let (di, dj) = (d - i - 2, d + 2 - j);
                out.push(format!("domino duality fails: T^{{{i},{j}}} ≠ T^{{{di},{dj}}}"));
            }
        }
        if let Some(t) = &self.twist {
            let mut o = t.ord;
            while o > 1 && o % self.p == 0 {
                o /= self.p;
            }
            if o != 1 {
                out.push(format!("twist order {} is not a power of p = {}", t.ord, self.p));
            }
        }
        if let Some(cps) = &self.charpolys {
            for (deg, coeffs) in cps {
                let Ok(k) = deg.parse::<usize>() else {
                    out.push(format!("charpoly key {deg:?} is not a degree"));
                    continue;
                };
                match newton_from_charpoly(coeffs, self.q()) {
                    Ok(s) if s == self.crys_degree(k) => {}
                    Ok(s) => out.push(format!("charpoly slopes {s} in degree {k} disagree with crys {}", self.crys_degree(k))),
                    Err(e) => out.push(format!("charpoly in degree {k}: {e}")),
                }
            }
        }
        for arrow in &self.descent_differentials {
            if arrow.r < 2 {
                out.push(format!("descent differential d_{} out of ({},{}) has r < 2", arrow.r, arrow.from[0], arrow.from[1]));
            }
        }
        out
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("profiles serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
