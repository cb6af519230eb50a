//! Built-in validated profiles, addressed by compact keys, and ingestion of user profiles.
//!
//! Keys: `k3:h:<1..10>`, `k3:ss:<1..10>`, `curve:<g>:<f>`, `abelian:<g>:<newton>`, `pn:2`, `pn:3`,
//! `p1xp1`. A `+twist` suffix on a supersingular K3 adds a Brauer class of order p, and an
//! `@<p>` suffix changes the characteristic (default 5). `k3+twist` is `k3:ss:1+twist`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::is_prime;
use crate::invariants::{m_numbers, NumericalProfile};
use crate::isocrystal::{binomial, prime_power, slope, SlopeMultiset};
use crate::rmod::DominoSpec;
use crate::specseq::TwistInfo;

pub const DEFAULT_P: u64 = 5;

/// Largest Artin invariant of a supersingular K3 surface.
pub const ARTIN_BOUND: u32 = 10;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown catalog key {0:?}")]
    UnknownKey(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperDerived,
    LiteratureDerived,
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::PaperDerived => "paper-derived",
            Provenance::LiteratureDerived => "literature-derived",
            Provenance::User => "user",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub key: String,
    pub profile: NumericalProfile,
    /// Per-field origin of the data.
    pub provenance: BTreeMap<String, Provenance>,
    pub warnings: Vec<String>,
}

impl CatalogEntry {
    fn new(key: String, profile: NumericalProfile, tags: &[(&str, Provenance)]) -> Result<Self, CatalogError> {
        let problems = profile.validate();
        if !problems.is_empty() {
            return Err(CatalogError::Validation(problems));
        }
        let provenance = tags.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Ok(CatalogEntry { key, profile, provenance, warnings: Vec::new() })
    }
}

fn ms(pairs: &[(i64, i64, u64)]) -> SlopeMultiset {
    SlopeMultiset::from_pairs(&pairs.iter().filter(|t| t.2 > 0).map(|&(n, d, m)| (slope(n, d), m)).collect::<Vec<_>>())
}

fn check_p(p: u64) -> Result<(), CatalogError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CatalogError::Domain(format!("p = {p} is not prime")))
    }
}

fn k3_hodge() -> Vec<Vec<u64>> {
    vec![vec![1, 0, 1], vec![0, 20, 0], vec![1, 0, 1]]
}

fn k3_base(name: &str, p: u64, h2: SlopeMultiset, dominoes: Vec<DominoSpec>) -> NumericalProfile {
    let mut prof = NumericalProfile::from_slopes(
        name,
        p,
        2,
        vec![ms(&[(0, 1, 1)]), SlopeMultiset::new(), h2, SlopeMultiset::new(), ms(&[(2, 1, 1)])],
    );
    prof.hodge = Some(k3_hodge());
    prof.torsion_free = vec![true; 5];
    prof.dominoes = dominoes;
    prof.albanese_dim = Some(0);
    prof.hdr_degenerates = Some(true);
    prof.calabi_yau = true;
    prof
}

/// K3 surface of finite height h.
pub fn k3_height(h: u32, p: u64) -> Result<CatalogEntry, CatalogError> {
    check_p(p)?;
    if !(1..=10).contains(&h) {
        return Err(CatalogError::Domain(format!("K3 height must be in 1..=10, got {h}")));
    }
    let (hi, hu) = (h as i64, h as u64);
    let h2 = ms(&[(hi - 1, hi, hu), (1, 1, 22 - 2 * hu), (hi + 1, hi, hu)]);
    let prof = k3_base(&format!("K3 surface of height {h}"), p, h2, Vec::new());
    CatalogEntry::new(
        format!("k3:h:{h}"),
        prof,
        &[("hodge", Provenance::PaperDerived), ("crys", Provenance::LiteratureDerived), ("dominoes", Provenance::PaperDerived)],
    )
}

/// Supersingular K3 surface with Artin invariant σ₀.
pub fn k3_supersingular(sigma0: u32, p: u64) -> Result<CatalogEntry, CatalogError> {
    check_p(p)?;
    if !(1..=ARTIN_BOUND).contains(&sigma0) {
        return Err(CatalogError::Domain(format!("Artin invariant must be in 1..=10, got {sigma0}")));
    }
    let prof = k3_base(
        &format!("supersingular K3 surface, Artin invariant {sigma0}"),
        p,
        ms(&[(1, 1, 22)]),
        vec![DominoSpec::at(0, 2, vec![sigma0])],
    );
    CatalogEntry::new(
        format!("k3:ss:{sigma0}"),
        prof,
        &[("hodge", Provenance::PaperDerived), ("crys", Provenance::PaperDerived), ("dominoes", Provenance::PaperDerived)],
    )
}

/// Either K3 family, by the `k3(...)` parameter convention.
pub fn k3(height: Option<u32>, supersingular_sigma0: Option<u32>, p: u64) -> Result<CatalogEntry, CatalogError> {
    match (height, supersingular_sigma0) {
        (Some(h), None) => k3_height(h, p),
        (None, Some(s)) => k3_supersingular(s, p),
        _ => Err(CatalogError::Domain("give exactly one of a height or an Artin invariant".into())),
    }
}

/// A supersingular K3 with a Brauer class of the given p-power order (1 means untwisted).
pub fn twisted_k3(sigma0: u32, ord_alpha: u64, p: u64) -> Result<CatalogEntry, CatalogError> {
    let mut entry = k3_supersingular(sigma0, p)?;
    let is_p_power = ord_alpha == 1 || prime_power(ord_alpha).map_or(false, |(b, _)| b == p);
    if !is_p_power {
        return Err(CatalogError::Domain(format!("ord(α) = {ord_alpha} is not a power of p = {p}")));
    }
    if ord_alpha == 1 {
        return Ok(entry);
    }
    entry.key = format!("{}+twist", entry.key);
    if ord_alpha != p {
        entry.key = format!("{}:{ord_alpha}", entry.key);
    }
    entry.profile.name = format!("{}, twisted by a Brauer class of order {ord_alpha}", entry.profile.name);
    entry.profile.twist = Some(TwistInfo { ord: ord_alpha });
    entry.provenance.insert("twist".into(), Provenance::PaperDerived);
    if sigma0 + 1 > ARTIN_BOUND {
        entry.warnings.push(format!(
            "σ₀(X,α) = {} exceeds the bound σ₀ ≤ {ARTIN_BOUND} known for untwisted K3 surfaces",
            sigma0 + 1
        ));
    }
    Ok(entry)
}

/// Curve of genus g and p-rank f.
pub fn curve(g: u32, f: u32, p: u64) -> Result<CatalogEntry, CatalogError> {
    check_p(p)?;
    if g == 0 || f > g {
        return Err(CatalogError::Domain(format!("need 1 ≤ g and 0 ≤ f ≤ g, got g = {g}, f = {f}")));
    }
    let (g64, f64_) = (g as u64, f as u64);
    let h1 = ms(&[(0, 1, f64_), (1, 2, 2 * (g64 - f64_)), (1, 1, f64_)]);
    let mut prof = NumericalProfile::from_slopes(
        &format!("curve of genus {g} and p-rank {f}"),
        p,
        1,
        vec![ms(&[(0, 1, 1)]), h1, ms(&[(1, 1, 1)])],
    );
    prof.hodge = Some(vec![vec![1, g64], vec![g64, 1]]);
    prof.torsion_free = vec![true; 3];
    prof.albanese_dim = Some(g64);
    prof.hdr_degenerates = Some(true);
    let pi = p as i128;
    if g == 1 {
        let h1_poly = if f == 1 { vec![1, -1, pi] } else { vec![1, 0, pi] };
        prof.charpolys =
            Some(BTreeMap::from([("0".to_string(), vec![1, -1]), ("1".to_string(), h1_poly), ("2".to_string(), vec![1, -pi])]));
    }
    let mut tags = vec![("hodge", Provenance::LiteratureDerived), ("crys", Provenance::LiteratureDerived)];
    if g == 1 {
        tags.push(("charpolys", Provenance::LiteratureDerived));
    }
    CatalogEntry::new(format!("curve:{g}:{f}"), prof, &tags)
}

fn abelian_profile(g: u32, newton: &SlopeMultiset, p: u64) -> Result<NumericalProfile, CatalogError> {
    check_p(p)?;
    if g == 0 || newton.rank() != 2 * g as u64 {
        return Err(CatalogError::Domain(format!("H¹ of an abelian {g}-fold has rank {}, got {}", 2 * g, newton.rank())));
    }
    let d = g as usize;
    let degrees: Vec<SlopeMultiset> = (0..=2 * d).map(|k| newton.wedge_power(k)).collect();
    let mut prof = NumericalProfile::from_slopes(&format!("abelian variety of dimension {g}, H¹ slopes {newton}"), p, d, degrees);
    prof.hodge = Some((0..=d as u64).map(|i| (0..=d as u64).map(|j| binomial(g as u64, i) * binomial(g as u64, j)).collect()).collect());
    prof.torsion_free = vec![true; 2 * d + 1];
    prof.albanese_dim = Some(g as u64);
    prof.hdr_degenerates = Some(true);
    Ok(prof)
}

/// Abelian variety from its H¹ Newton data, with no dominoes unless given.
pub fn abelian(g: u32, newton: &SlopeMultiset, p: u64, dominoes: Option<Vec<DominoSpec>>) -> Result<CatalogEntry, CatalogError> {
    let mut prof = abelian_profile(g, newton, p)?;
    let tag = if dominoes.is_some() { Provenance::User } else { Provenance::LiteratureDerived };
    prof.dominoes = dominoes.unwrap_or_default();
    CatalogEntry::new(
        format!("abelian:{g}:{newton}"),
        prof,
        &[("hodge", Provenance::LiteratureDerived), ("crys", Provenance::LiteratureDerived), ("dominoes", tag)],
    )
}

/// Domino numbers forced by h = h_W, solved row by row from i = 0.
pub fn solve_dominoes(prof: &NumericalProfile) -> Result<Vec<DominoSpec>, CatalogError> {
    let m = m_numbers(prof).map_err(|e| CatalogError::Validation(vec![e.to_string()]))?;
    let d = prof.d;
    let mut t = vec![vec![0i64; d + 1]; d + 1];
    let get = |t: &Vec<Vec<i64>>, i: i64, j: i64| -> i64 {
        if i < 0 || j < 0 || i > d as i64 || j > d as i64 {
            0
        } else {
            t[i as usize][j as usize]
        }
    };
    let mut out = Vec::new();
    for i in 0..d.saturating_sub(1) {
        for j in 2..=d {
            let h = prof.hodge_number(i, j).ok_or_else(|| CatalogError::Domain("Hodge numbers required".into()))? as i64;
            let (ii, jj) = (i as i64, j as i64);
            let v = h - m[i][j] + 2 * get(&t, ii - 1, jj + 1) - get(&t, ii - 2, jj + 2);
            if v < 0 {
                return Err(CatalogError::Validation(vec![format!("h = h_W forces T^{{{i},{j}}} = {v} < 0")]));
            }
            t[i][j] = v;
            if v > 0 {
                out.push(DominoSpec::at(ii, jj, vec![1; v as usize]));
            }
        }
    }
    Ok(out)
}

/// Abelian variety with domino numbers solved from h = h_W.
pub fn abelian_solved(g: u32, newton: &SlopeMultiset, p: u64) -> Result<CatalogEntry, CatalogError> {
    let prof = abelian_profile(g, newton, p)?;
    let dominoes = solve_dominoes(&prof)?;
    let mut entry = abelian(g, newton, p, Some(dominoes))?;
    entry.provenance.insert("dominoes".into(), Provenance::LiteratureDerived);
    Ok(entry)
}

fn named_newton(g: u32, label: &str) -> Option<SlopeMultiset> {
    let g64 = g as u64;
    match label {
        "ord" => Some(ms(&[(0, 1, g64), (1, 1, g64)])),
        "ss" => Some(ms(&[(1, 2, 2 * g64)])),
        "13" if g == 3 => Some(ms(&[(1, 3, 3), (2, 3, 3)])),
        _ => {
            let f: u64 = label.strip_prefix('f')?.parse().ok()?;
            (f < g64).then(|| ms(&[(0, 1, f), (1, 2, 2 * (g64 - f)), (1, 1, f)]))
        }
    }
}

/// Projective space of dimension n.
pub fn projective_space(n: usize, p: u64) -> Result<CatalogEntry, CatalogError> {
    check_p(p)?;
    let degrees = (0..=2 * n).map(|k| if k % 2 == 0 { ms(&[((k / 2) as i64, 1, 1)]) } else { SlopeMultiset::new() }).collect();
    let mut prof = NumericalProfile::from_slopes(&format!("projective {n}-space"), p, n, degrees);
    prof.hodge = Some((0..=n).map(|i| (0..=n).map(|j| u64::from(i == j)).collect()).collect());
    prof.torsion_free = vec![true; 2 * n + 1];
    prof.albanese_dim = Some(0);
    prof.hdr_degenerates = Some(true);
    CatalogEntry::new(format!("pn:{n}"), prof, &[("hodge", Provenance::LiteratureDerived), ("crys", Provenance::LiteratureDerived)])
}

pub fn p1_times_p1(p: u64) -> Result<CatalogEntry, CatalogError> {
    check_p(p)?;
    let mut prof = NumericalProfile::from_slopes(
        "product of two projective lines",
        p,
        2,
        vec![ms(&[(0, 1, 1)]), SlopeMultiset::new(), ms(&[(1, 1, 2)]), SlopeMultiset::new(), ms(&[(2, 1, 1)])],
    );
    prof.hodge = Some(vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]);
    prof.torsion_free = vec![true; 5];
    prof.albanese_dim = Some(0);
    prof.hdr_degenerates = Some(true);
    CatalogEntry::new("p1xp1".into(), prof, &[("hodge", Provenance::LiteratureDerived), ("crys", Provenance::LiteratureDerived)])
}

/// Every shipped key at the default characteristic.
pub fn keys() -> Vec<String> {
    let mut out = Vec::new();
    out.extend((1..=10).map(|h| format!("k3:h:{h}")));
    out.extend((1..=10).map(|s| format!("k3:ss:{s}")));
    for g in 1..=3 {
        out.extend((0..=g).map(|f| format!("curve:{g}:{f}")));
    }
    out.extend(["ord", "f1", "ss"].iter().map(|l| format!("abelian:2:{l}")));
    out.extend(["ord", "f2", "f1", "ss", "13"].iter().map(|l| format!("abelian:3:{l}")));
    out.extend(["pn:2", "pn:3", "p1xp1"].iter().map(|s| s.to_string()));
    out
}

/// All shipped entries at the default characteristic.
pub fn all() -> Vec<CatalogEntry> {
    keys().iter().map(|k| lookup(k).expect("shipped entries are valid")).collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, CatalogError> {
    s.parse().map_err(|_| CatalogError::UnknownKey(key.to_string()))
}

/// Resolve a catalog key.
pub fn lookup(key: &str) -> Result<CatalogEntry, CatalogError> {
    let (body, p) = match key.rsplit_once('@') {
        Some((b, p)) => (b, parse_num::<u64>(key, p)?),
        None => (key, DEFAULT_P),
    };
    let body = if body == "k3+twist" { "k3:ss:1+twist" } else { body };
    let (body, twist) = match body.split_once("+twist") {
        Some((b, rest)) => {
            let ord = match rest.strip_prefix(':') {
                Some(o) => parse_num::<u64>(key, o)?,
                None if rest.is_empty() => p,
                None => return Err(CatalogError::UnknownKey(key.to_string())),
            };
            (b, Some(ord))
        }
        None => (body, None),
    };
    let parts: Vec<&str> = body.split(':').collect();
    let mut entry = match parts.as_slice() {
        ["k3", "h", h] if twist.is_none() => k3_height(parse_num(key, h)?, p)?,
        ["k3", "ss", s] => match twist {
            Some(ord) => twisted_k3(parse_num(key, s)?, ord, p)?,
            None => k3_supersingular(parse_num(key, s)?, p)?,
        },
        ["curve", g, f] if twist.is_none() => curve(parse_num(key, g)?, parse_num(key, f)?, p)?,
        ["abelian", g, label] if twist.is_none() => {
            let g: u32 = parse_num(key, g)?;
            let newton = named_newton(g, label).ok_or_else(|| CatalogError::UnknownKey(key.to_string()))?;
            let mut e = abelian_solved(g, &newton, p)?;
            e.key = format!("abelian:{g}:{label}");
            e
        }
        ["pn", n] if twist.is_none() => projective_space(parse_num(key, n)?, p)?,
        ["p1xp1"] if twist.is_none() => p1_times_p1(p)?,
        _ => return Err(CatalogError::UnknownKey(key.to_string())),
    };
    if p != DEFAULT_P {
        entry.key = format!("{}@{p}", entry.key);
    }
    Ok(entry)
}

/// Parse and validate a profile from JSON text.
pub fn parse(text: &str, key: &str) -> Result<CatalogEntry, CatalogError> {
    let profile = NumericalProfile::from_json_str(text).map_err(|e| CatalogError::Schema(e.to_string()))?;
    let fields: Vec<&str> = ["hodge", "crys", "dominoes", "twist", "charpolys"].to_vec();
    CatalogEntry::new(key.to_string(), profile, &fields.iter().map(|f| (*f, Provenance::User)).collect::<Vec<_>>())
}

pub fn load(path: &Path) -> Result<CatalogEntry, CatalogError> {
    let text = std::fs::read_to_string(path)?;
    parse(&text, &path.display().to_string())
}

pub fn save(profile: &NumericalProfile, path: &Path) -> Result<(), CatalogError> {
    std::fs::write(path, profile.to_json_pretty() + "\n")?;
    Ok(())
}

/// A catalog key if it resolves, otherwise a profile file.
pub fn resolve(spec: &str) -> Result<CatalogEntry, CatalogError> {
    match lookup(spec) {
        Ok(e) => Ok(e),
        Err(CatalogError::UnknownKey(_)) if Path::new(spec).exists() => load(Path::new(spec)),
        Err(e) => Err(e),
    }
}

/// Skeleton for an Enriques surface in characteristic 2: the structure is fixed, the tables are
/// left for the user to fill in before the profile is accepted.
pub fn enriques_template() -> NumericalProfile {
    let mut prof = NumericalProfile::from_slopes("Enriques surface (template)", 2, 2, vec![SlopeMultiset::new(); 5]);
    prof.torsion_free = vec![true; 5];
    prof
}
