//! Slope numbers, Hodge–Newton and Hodge–Witt numbers, Crew's formula, Betti numbers,
//! Hochschild sums and the Mazur–Ogus / Hodge–Witt predicates.

pub mod profile;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::isocrystal::{height, validate_crys, Height, Interval, SlopeMultiset};
use crate::specseq;
use crate::Slope;

pub use profile::{CrysDegree, DescentArrow, NumericalProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("data inconsistency: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Square table indexed [i][j], 0 ≤ i, j ≤ d.
pub type Table = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrwCell {
    pub i: usize,
    pub j: usize,
    pub slopes: SlopeMultiset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrRow {
    pub n: i64,
    pub slopes: SlopeMultiset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flags {
    /// None when the Hodge table is absent.
    pub mazur_ogus: Option<bool>,
    pub hodge_witt: bool,
    pub derived_hodge_witt: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub name: String,
    pub p: u64,
    pub a: u32,
    pub d: usize,
    pub crys: Vec<SlopeMultiset>,
    pub drw: Vec<DrwCell>,
    pub tr: Vec<TrRow>,
    pub m: Table,
    pub hw: Table,
    pub t: Table,
    /// T^cyc_n for n = −d..=d.
    pub tcyc: Vec<i64>,
    pub betti: Vec<u64>,
    pub euler_chars: Option<Vec<i64>>,
    pub height: Height,
    pub flags: Flags,
    pub consistency: Vec<CheckResult>,
}

impl InvariantReport {
    pub fn consistent(&self) -> bool {
        self.consistency.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.consistency.iter().filter(|c| !c.ok).collect()
    }

    pub fn tcyc(&self, n: i64) -> i64 {
        let idx = n + self.d as i64;
        if idx < 0 {
            return 0;
        }
        self.tcyc.get(idx as usize).copied().unwrap_or(0)
    }

    pub fn tr_row(&self, n: i64) -> SlopeMultiset {
        self.tr.iter().find(|r| r.n == n).map(|r| r.slopes.clone()).unwrap_or_default()
    }

    pub fn drw_cell(&self, i: usize, j: usize) -> SlopeMultiset {
        self.drw.iter().find(|c| c.i == i && c.j == j).map(|c| c.slopes.clone()).unwrap_or_default()
    }
}

/// h^{i,j}_{dRW,λ} = h^{i+j}_{crys, i+λ} for λ ∈ [0,1).
pub fn drw_slopes(profile: &NumericalProfile) -> Vec<DrwCell> {
    let d = profile.d;
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            let window = profile.crys_degree(i + j).slope_part(&Interval::unit(i as i64));
            out.push(DrwCell { i, j, slopes: window.tate_twist(-(i as i64)) });
        }
    }
    out
}

/// h^{TR}_{n,λ} = Σ_{i−j=n} h^{i,j}_{dRW,λ}, for n = −d..=d.
pub fn tr_slopes(profile: &NumericalProfile) -> Vec<TrRow> {
    let drw = drw_slopes(profile);
    let d = profile.d as i64;
    (-d..=d)
        .map(|n| {
            let slopes = drw
                .iter()
                .filter(|c| c.i as i64 - c.j as i64 == n)
                .fold(SlopeMultiset::new(), |acc, c| acc.union(&c.slopes));
            TrRow { n, slopes }
        })
        .collect()
}

/// Hodge–Newton numbers, exact with an integrality and sign check.
pub fn m_numbers(profile: &NumericalProfile) -> Result<Table, InvariantError> {
    let d = profile.d;
    let mut table = vec![vec![0i64; d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            let h = profile.crys_degree(i + j);
            let ii = Slope::from_integer(i as i64);
            let mut acc = Slope::zero();
            for (l, &mult) in h.iter() {
                let mult = Slope::from_integer(mult as i64);
                if Interval::unit(i as i64).contains(l) {
                    acc += (ii + Slope::from_integer(1) - l) * mult;
                } else if Interval::unit(i as i64 - 1).contains(l) {
                    acc += (l - ii + Slope::from_integer(1)) * mult;
                }
            }
            if !acc.is_integer() || acc.is_negative() {
                return Err(InvariantError::Inconsistent(format!(
                    "m^{{{i},{j}}} = {acc} is not a nonnegative integer"
                )));
            }
            table[i][j] = acc.to_integer();
        }
    }
    Ok(table)
}

pub fn t_table(profile: &NumericalProfile) -> Table {
    let d = profile.d;
    (0..=d).map(|i| (0..=d).map(|j| profile.t(i as i64, j as i64) as i64).collect()).collect()
}

fn at(t: &Table, i: i64, j: i64) -> i64 {
    if i < 0 || j < 0 {
        return 0;
    }
    t.get(i as usize).and_then(|row| row.get(j as usize)).copied().unwrap_or(0)
}

/// h^{i,j}_W = m^{i,j} + T^{i,j} − 2T^{i−1,j+1} + T^{i−2,j+2}.
pub fn hw_numbers(profile: &NumericalProfile) -> Result<Table, InvariantError> {
    let m = m_numbers(profile)?;
    let t = t_table(profile);
    let d = profile.d as i64;
    Ok((0..=d)
        .map(|i| {
            (0..=d)
                .map(|j| at(&m, i, j) + at(&t, i, j) - 2 * at(&t, i - 1, j + 1) + at(&t, i - 2, j + 2))
                .collect()
        })
        .collect())
}

/// T^cyc_n = Σ_j T^{n+j, j} for n = −d..=d.
pub fn tcyc_numbers(profile: &NumericalProfile) -> Vec<i64> {
    let t = t_table(profile);
    let d = profile.d as i64;
    (-d..=d).map(|n| (0..=d).map(|j| at(&t, n + j, j)).sum()).collect()
}

pub fn betti(profile: &NumericalProfile) -> Vec<u64> {
    (0..=2 * profile.d).map(|n| profile.crys_degree(n).rank()).collect()
}

fn antidiagonal(t: &Table, n: usize) -> i64 {
    t.iter().enumerate().map(|(i, row)| if n >= i { row.get(n - i).copied().unwrap_or(0) } else { 0 }).sum()
}

/// b_n from crys ranks agrees with Σ_{i+j=n} h^{i,j}_W.
pub fn betti_consistency(profile: &NumericalProfile) -> Result<bool, InvariantError> {
    let hw = hw_numbers(profile)?;
    Ok(betti(profile).iter().enumerate().all(|(n, &b)| antidiagonal(&hw, n) == b as i64))
}

fn hodge_table(profile: &NumericalProfile) -> Option<Table> {
    profile.hodge.as_ref().map(|h| h.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect())
}

/// χ(Ω^i) = Σ_j (−1)^j h^{i,j}.
pub fn euler_chars(profile: &NumericalProfile) -> Option<Vec<i64>> {
    hodge_table(profile).map(|h| h.iter().map(|row| alternating(row)).collect())
}

fn alternating(row: &[i64]) -> i64 {
    row.iter().enumerate().map(|(j, &x)| if j % 2 == 0 { x } else { -x }).sum()
}

/// Crew's formula per column i; None without Hodge numbers.
pub fn crew_check(profile: &NumericalProfile) -> Result<Option<Vec<bool>>, InvariantError> {
    let hw = hw_numbers(profile)?;
    Ok(euler_chars(profile).map(|chi| chi.iter().zip(&hw).map(|(c, row)| *c == alternating(row)).collect()))
}

/// Σ_j h^{j, j−i} for i = −d..=d.
pub fn hh_sums(profile: &NumericalProfile) -> Option<Vec<i64>> {
    let h = hodge_table(profile)?;
    let d = profile.d as i64;
    Some((-d..=d).map(|i| (0..=d).map(|j| at(&h, j, j - i)).sum()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MazurOgus {
    /// Declared Hodge–de Rham degeneration and torsion-free crystalline cohomology.
    pub declared: Option<bool>,
    pub betti_is_hodge_sum: bool,
    pub hodge_is_hodge_witt: bool,
}

impl MazurOgus {
    pub fn agree(&self) -> bool {
        self.declared.map_or(true, |c| c == self.betti_is_hodge_sum) && self.betti_is_hodge_sum == self.hodge_is_hodge_witt
    }

    pub fn value(&self) -> bool {
        self.betti_is_hodge_sum && self.hodge_is_hodge_witt && self.declared.unwrap_or(true)
    }
}

/// The three Mazur–Ogus conditions; None without Hodge numbers.
pub fn mazur_ogus_conditions(profile: &NumericalProfile) -> Result<Option<MazurOgus>, InvariantError> {
    let Some(h) = hodge_table(profile) else { return Ok(None) };
    let hw = hw_numbers(profile)?;
    let b = betti(profile);
    let betti_is_hodge_sum = b.iter().enumerate().all(|(n, &bn)| antidiagonal(&h, n) == bn as i64);
    let hodge_is_hodge_witt = h == hw;
    let declared = profile.hdr_degenerates.map(|hdr| {
        hdr && (profile.torsion_free.is_empty() || profile.torsion_free.iter().all(|&t| t))
    });
    Ok(Some(MazurOgus { declared, betti_is_hodge_sum, hodge_is_hodge_witt }))
}

/// Mazur–Ogus, with the three-way equivalence asserted.
pub fn mazur_ogus(profile: &NumericalProfile) -> Result<Option<bool>, InvariantError> {
    match mazur_ogus_conditions(profile)? {
        None => Ok(None),
        Some(c) if c.agree() => Ok(Some(c.value())),
        Some(c) => Err(InvariantError::Inconsistent(format!("Mazur–Ogus conditions disagree: {c:?}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HodgeWittFlags {
    pub hodge_witt: bool,
    pub derived_hodge_witt: bool,
}

pub fn hodge_witt_predicates(profile: &NumericalProfile) -> Result<HodgeWittFlags, InvariantError> {
    let hodge_witt = t_table(profile).iter().flatten().all(|&t| t == 0);
    let derived_hodge_witt = tcyc_numbers(profile).iter().all(|&t| t == 0);
    if profile.d <= 3 && hodge_witt != derived_hodge_witt {
        return Err(InvariantError::Inconsistent("Hodge–Witt and derived Hodge–Witt disagree".into()));
    }
    Ok(HodgeWittFlags { hodge_witt, derived_hodge_witt })
}

struct Checks(Vec<CheckResult>);

impl Checks {
    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.0.push(CheckResult { name: name.to_string(), ok, detail: detail.into() });
    }
}

fn first_failure<T: fmt::Debug>(items: impl IntoIterator<Item = (T, bool)>) -> (bool, String) {
    for (what, ok) in items {
        if !ok {
            return (false, format!("fails at {what:?}"));
        }
    }
    (true, String::new())
}

/// The full pipeline with every identity check recorded.
pub fn report(profile: &NumericalProfile) -> Result<InvariantReport, InvariantError> {
    let problems = profile.validate();
    if !problems.is_empty() {
        return Err(InvariantError::Validation(problems));
    }
    let d = profile.d;
    let di = d as i64;
    let crys_data = profile.crys_data();
    let drw = drw_slopes(profile);
    let tr = tr_slopes(profile);
    let m = m_numbers(profile)?;
    let hw = hw_numbers(profile)?;
    let t = t_table(profile);
    let tcyc = tcyc_numbers(profile);
    let b = betti(profile);
    let chi = euler_chars(profile);
    let hodge = hodge_table(profile);
    let mut checks = Checks(Vec::new());

    let crys_violations = validate_crys(&crys_data);
    for name in ["constraint1", "constraint2"] {
        let bad: Vec<String> = crys_violations.iter().filter(|v| v.name() == name).map(|v| v.to_string()).collect();
        checks.push(name, bad.is_empty(), bad.join("; "));
    }
    let cell = |i: usize, j: usize| drw.iter().find(|c| c.i == i && c.j == j).map(|c| &c.slopes);
    let (ok, detail) = first_failure(
        (0..=d).flat_map(|i| (0..=d).map(move |j| (i, j))).map(|(i, j)| ((i, j), cell(i, j) == cell(d - j, d - i))),
    );
    checks.push("constraint3", ok, detail);

    let (ok, detail) = first_failure(
        (0..=d).flat_map(|i| (0..=d).map(move |j| (i, j))).map(|(i, j)| ((i, j), m[i][j] == m[j][i] && m[i][j] == m[d - i][d - j])),
    );
    checks.push("m symmetry", ok, detail);

    let (ok, detail) = first_failure((0..=d).flat_map(|i| (0..=d).map(move |j| (i, j))).map(|(i, j)| {
        let serre = hw[i][j] == hw[d - i][d - j];
        let hodge_sym = d > 3 || hw[i][j] == hw[j][i];
        ((i, j), serre && hodge_sym && hw[i][j] >= 0)
    }));
    checks.push("h_W symmetry", ok, detail);

    if let Some(h) = &hodge {
        let (ok, detail) = first_failure(
            (0..=d).flat_map(|i| (0..=d).map(move |j| (i, j))).map(|(i, j)| ((i, j), hw[i][j] <= h[i][j])),
        );
        checks.push("h_W ≤ h", ok, detail);
        let crew: Vec<bool> = chi.as_ref().expect("hodge present").iter().zip(&hw).map(|(c, row)| *c == alternating(row)).collect();
        let (ok, detail) = first_failure(crew.iter().enumerate().map(|(i, &ok)| (i, ok)));
        checks.push("Crew", ok, detail);
    }

    let (ok, detail) = first_failure(b.iter().enumerate().map(|(n, &bn)| (n, antidiagonal(&hw, n) == bn as i64)));
    checks.push("b_n = Σ h_W", ok, detail);

    let assembled = specseq::slope_ss(profile).map(|ss| specseq::assemble_tr(&ss));
    match assembled {
        Ok(trc) => {
            let (ok, detail) = first_failure((-di..=di).map(|n| {
                let direct = tr.iter().find(|r| r.n == n).map(|r| r.slopes.clone()).unwrap_or_default();
                (n, trc.slopes(n) == direct)
            }));
            checks.push("TR antidiagonal", ok, detail);
            let ends = trc.slopes(-di) == cell(0, d).cloned().unwrap_or_default()
                && trc.slopes(di) == cell(d, 0).cloned().unwrap_or_default();
            checks.push("TR endpoints", ends, if ends { String::new() } else { "TR_{±d} differ from the corner entries".into() });
        }
        Err(e) => checks.push("TR antidiagonal", false, e.to_string()),
    }

    let dual = crate::rmod::domino_duality_violations(d, |i, j| t[i][j] as u32);
    checks.push("domino duality", dual.is_empty(), if dual.is_empty() { String::new() } else { format!("fails at {dual:?}") });

    let mo = mazur_ogus_conditions(profile)?;
    if let Some(c) = mo {
        checks.push("Mazur–Ogus equivalence", c.agree(), format!("{c:?}"));
    }
    let hw_flags = hodge_witt_predicates(profile);
    let flags = match hw_flags {
        Ok(f) => {
            checks.push("Hodge–Witt ⟺ derived Hodge–Witt", true, String::new());
            Flags { mazur_ogus: mo.map(|c| c.value()), hodge_witt: f.hodge_witt, derived_hodge_witt: f.derived_hodge_witt }
        }
        Err(e) => {
            checks.push("Hodge–Witt ⟺ derived Hodge–Witt", false, e.to_string());
            Flags {
                mazur_ogus: mo.map(|c| c.value()),
                hodge_witt: t.iter().flatten().all(|&x| x == 0),
                derived_hodge_witt: tcyc.iter().all(|&x| x == 0),
            }
        }
    };

    Ok(InvariantReport {
        name: profile.name.clone(),
        p: profile.p,
        a: profile.a,
        d,
        crys: crys_data.degrees.clone(),
        drw,
        tr,
        m,
        hw,
        t,
        tcyc,
        betti: b,
        euler_chars: chi,
        height: height(&crys_data),
        flags,
        consistency: checks.0,
    })
}

fn render_table(out: &mut String, title: &str, t: &Table) {
    out.push_str(&format!("{title}\n"));
    for (i, row) in t.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
        out.push_str(&format!("  i={i} {}\n", cells.join("")));
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        out.push_str(&format!("{}  (d = {}, q = {}^{})\n", self.name, self.d, self.p, self.a));
        out.push_str("crystalline slopes\n");
        for (n, s) in self.crys.iter().enumerate() {
            out.push_str(&format!("  H^{n}: {s}\n"));
        }
        out.push_str("TR slopes\n");
        for row in &self.tr {
            out.push_str(&format!("  TR_{}: {}\n", row.n, row.slopes));
        }
        render_table(&mut out, "Hodge–Newton m^{i,j}", &self.m);
        render_table(&mut out, "domino numbers T^{i,j}", &self.t);
        render_table(&mut out, "Hodge–Witt h_W^{i,j}", &self.hw);
        let tcyc: Vec<String> = self.tcyc.iter().enumerate().map(|(k, v)| format!("{}:{v}", k as i64 - self.d as i64)).collect();
        out.push_str(&format!("T^cyc: {}\n", tcyc.join(" ")));
        let b: Vec<String> = self.betti.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("betti: {}\n", b.join(" ")));
        if let Some(chi) = &self.euler_chars {
            let c: Vec<String> = chi.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("χ(Ω^i): {}\n", c.join(" ")));
        }
        out.push_str(&format!("height: {}\n", self.height));
        let mo = self.flags.mazur_ogus.map_or("unknown".to_string(), |b| b.to_string());
        out.push_str(&format!(
            "Mazur–Ogus: {mo}  Hodge–Witt: {}  derived Hodge–Witt: {}\n",
            self.flags.hodge_witt, self.flags.derived_hodge_witt
        ));
        out.push_str("checks\n");
        for c in &self.consistency {
            let mark = if c.ok { "ok  " } else { "FAIL" };
            if c.detail.is_empty() || c.ok {
                out.push_str(&format!("  [{mark}] {}\n", c.name));
            } else {
                out.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.detail));
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::slope;
    use crate::rmod::DominoSpec;

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
        p.hodge = Some(vec![vec![1, 0, 1], vec![0, 20, 0], vec![1, 0, 1]]);
        p.dominoes = dominoes;
        p.torsion_free = vec![true; 5];
        p.hdr_degenerates = Some(true);
        p
    }

    fn supersingular() -> NumericalProfile {
        k3(ms(&[(1, 1, 22)]), vec![DominoSpec::at(0, 2, vec![3])])
    }

    fn finite(h: i64) -> NumericalProfile {
        k3(ms(&[(h - 1, h, h as u64), (1, 1, 22 - 2 * h as u64), (h + 1, h, h as u64)]), vec![])
    }

    #[test]
    fn supersingular_ledger() {
        let p = supersingular();
        let m = m_numbers(&p).unwrap();
        assert_eq!((m[1][1], m[0][2], m[2][0]), (22, 0, 0));
        let hw = hw_numbers(&p).unwrap();
        assert_eq!((hw[1][1], hw[0][2], hw[2][0]), (20, 1, 1));
        assert_eq!(drw_slopes(&p).iter().find(|c| (c.i, c.j) == (1, 1)).unwrap().slopes, ms(&[(0, 1, 22)]));
        let tr = tr_slopes(&p);
        assert_eq!(tr.iter().find(|r| r.n == 0).unwrap().slopes, ms(&[(0, 1, 24)]));
        assert_eq!(crew_check(&p).unwrap(), Some(vec![true, true, true]));
        assert_eq!(euler_chars(&p).unwrap()[..2], [2, -20]);
        assert_eq!(betti(&p)[2], 22);
        assert!(betti_consistency(&p).unwrap());
        assert_eq!(tcyc_numbers(&p), vec![1, 0, 0, 0, 0]);
        assert_eq!(mazur_ogus(&p).unwrap(), Some(true));
        let f = hodge_witt_predicates(&p).unwrap();
        assert!(!f.hodge_witt && !f.derived_hodge_witt);
        let r = report(&p).unwrap();
        assert!(r.consistent(), "{r}");
        assert_eq!(r.height, Height::Infinite);
    }

    #[test]
    fn finite_height_ledger() {
        for h in 1..=10 {
            let p = finite(h);
            let m = m_numbers(&p).unwrap();
            assert_eq!((m[0][2], m[1][1], m[2][0]), (1, 20, 1));
            let hw = hw_numbers(&p).unwrap();
            assert_eq!(Some(hw.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect()), p.hodge);
            let r = report(&p).unwrap();
            assert!(r.consistent(), "{r}");
            assert_eq!(r.height, Height::Finite(h as u64));
            assert!(r.flags.hodge_witt && r.flags.derived_hodge_witt);
            assert_eq!(r.flags.mazur_ogus, Some(true));
        }
        let p2 = finite(2);
        assert_eq!(drw_slopes(&p2).iter().find(|c| (c.i, c.j) == (0, 2)).unwrap().slopes, ms(&[(1, 2, 2)]));
    }

    #[test]
    fn hh_sums_of_k3_and_curves() {
        assert_eq!(hh_sums(&finite(1)).unwrap(), vec![1, 0, 22, 0, 1]);
        let mut c = NumericalProfile::from_slopes("c", 5, 1, vec![ms(&[(0, 1, 1)]), ms(&[(0, 1, 2), (1, 1, 2)]), ms(&[(1, 1, 1)])]);
        c.hodge = Some(vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(hh_sums(&c).unwrap(), vec![2, 2, 2]);
        assert_eq!(tr_slopes(&c).iter().find(|r| r.n == 0).unwrap().slopes.multiplicity(&slope(0, 1)), 2);
        assert_eq!(tr_slopes(&c).iter().find(|r| r.n == -1).unwrap().slopes.rank(), 2);
    }

    #[test]
    fn non_integral_m_is_reported() {
        let p = NumericalProfile::from_slopes("bad", 5, 1, vec![ms(&[(0, 1, 1)]), ms(&[(1, 3, 1)]), ms(&[(1, 1, 1)])]);
        assert!(matches!(m_numbers(&p), Err(InvariantError::Inconsistent(_))));
    }

    #[test]
    fn threefold_tcyc() {
        let mut p = NumericalProfile::from_slopes("x", 5, 3, vec![SlopeMultiset::new(); 7]);
        p.dominoes = vec![
            DominoSpec::at(0, 2, vec![1, 2]),
            DominoSpec::at(1, 3, vec![1, 1]),
            DominoSpec::at(0, 3, vec![4]),
            DominoSpec::at(1, 2, vec![2]),
        ];
        assert_eq!(tcyc_numbers(&p), vec![1, 4, 1, 0, 0, 0, 0]);
    }
}
