//! Fourier–Mukai obstruction comparator. Every derived-invariance statement in scope is applied
//! to a pair of profiles; a mismatch is an obstruction to a derived equivalence, while agreement
//! never proves one.

use std::fmt::Write as _;

use serde::Serialize;

use crate::invariants::{
    betti, drw_slopes, euler_chars, hh_sums, hodge_witt_predicates, hw_numbers, mazur_ogus, t_table, tr_slopes,
    NumericalProfile,
};
use crate::isocrystal::{height, Height};
use crate::specseq::{derived_dominoes, k_dimension, TwistInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    InsufficientData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    /// Position in the fixed order, "0" for the ground-field gate then "i".."xii".
    pub id: &'static str,
    pub name: &'static str,
    pub theorem: &'static str,
    pub applicable: bool,
    pub reason: String,
    pub verdict: Verdict,
    pub details: String,
    /// Fields whose absence made the check inconclusive, as "field (side)".
    pub missing: Vec<String>,
}

impl Check {
    pub fn is_obstruction(&self) -> bool {
        self.applicable && self.verdict == Verdict::Mismatch
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub a: String,
    pub b: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

pub const DISCLAIMER: &str = "no obstruction from implemented invariants";

impl ObstructionReport {
    pub fn obstruction(&self) -> bool {
        self.checks.iter().any(Check::is_obstruction)
    }

    pub fn first_obstruction(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.is_obstruction())
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// No applicable check past the dimension gate reached a verdict.
    pub fn all_insufficient(&self) -> bool {
        self.checks.iter().filter(|c| c.applicable && c.id != "0").all(|c| c.verdict == Verdict::InsufficientData)
    }

    /// 0 no obstruction, 2 obstruction, 3 insufficient data everywhere.
    pub fn exit_code(&self) -> i32 {
        if self.obstruction() {
            2
        } else if self.all_insufficient() {
            3
        } else {
            0
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn not_applicable(&mut self, id: &'static str, name: &'static str, theorem: &'static str, reason: impl Into<String>) {
        self.checks.push(Check {
            id,
            name,
            theorem,
            applicable: false,
            reason: reason.into(),
            verdict: Verdict::InsufficientData,
            details: String::new(),
            missing: Vec::new(),
        });
    }

    fn insufficient(&mut self, id: &'static str, name: &'static str, theorem: &'static str, reason: String, missing: Vec<String>) {
        self.checks.push(Check {
            id,
            name,
            theorem,
            applicable: true,
            reason,
            verdict: Verdict::InsufficientData,
            details: format!("missing {}", missing.join(", ")),
            missing,
        });
    }

    fn compared(&mut self, id: &'static str, name: &'static str, theorem: &'static str, reason: String, ok: bool, details: String) {
        self.checks.push(Check {
            id,
            name,
            theorem,
            applicable: true,
            reason,
            verdict: if ok { Verdict::Match } else { Verdict::Mismatch },
            details,
            missing: Vec::new(),
        });
    }
}

fn missing_sides(field: &str, a: bool, b: bool) -> Vec<String> {
    let mut out = Vec::new();
    if !a {
        out.push(format!("{field} (A)"));
    }
    if !b {
        out.push(format!("{field} (B)"));
    }
    out
}

fn diff_detail<T: std::fmt::Debug + PartialEq>(label: &str, a: &T, b: &T) -> String {
    if a == b {
        format!("{label} agree")
    } else {
        format!("{label} differ: A = {a:?}, B = {b:?}")
    }
}

fn is_supersingular_k3(p: &NumericalProfile) -> bool {
    p.is_k3_shaped() && height(&p.crys_data()) == Height::Infinite
}

/// Checks whose inputs are read off the crystalline slope data (domino data is only meaningful
/// alongside it).
const CRYS_DEPENDENT: [&str; 9] = ["ii", "iii", "iv", "vi", "vii", "viii", "ix", "x", "xii"];

/// Run checks (i)–(xii) in order on a pair of profiles.
pub fn compare(a: &NumericalProfile, b: &NumericalProfile) -> ObstructionReport {
    let mut out = Builder { checks: Vec::new() };
    let mut notes = vec![
        "only the numerical shadow is compared (slopes, torsion lengths, domino numbers); isomorphism of the underlying modules is not tested".to_string(),
    ];
    let same_field = a.p == b.p && a.a == b.a;
    if !same_field || a.d != b.d {
        let mut details = Vec::new();
        if !same_field {
            details.push(format!("ground fields differ: F_{} vs F_{}", a.q(), b.q()));
        }
        if a.d != b.d {
            details.push(format!("dimensions differ: {} vs {} (HH and TR endpoint degrees differ)", a.d, b.d));
        }
        out.compared("0", "ground field and dimension", "derived equivalences preserve dimension", "always".into(), false, details.join("; "));
        return ObstructionReport { a: a.name.clone(), b: b.name.clone(), checks: out.checks, notes };
    }
    out.compared(
        "0",
        "ground field and dimension",
        "derived equivalences preserve dimension",
        "always".into(),
        true,
        format!("d = {}, q = {}", a.d, a.q()),
    );
    let d = a.d;
    let low = d <= 3;
    let low_reason = || if low { format!("d = {d} ≤ 3") } else { format!("needs d ≤ 3, have d = {d}") };

    // (i)
    let (name, thm) = ("HH antidiagonal sums", "derived invariance of Hochschild homology");
    if a.p < d as u64 {
        out.not_applicable("i", name, thm, format!("needs p ≥ d, have p = {} < {d}", a.p));
    } else {
        match (hh_sums(a), hh_sums(b)) {
            (Some(x), Some(y)) => out.compared("i", name, thm, format!("p = {} ≥ d = {d}", a.p), x == y, diff_detail("Σ_j h^{j,j−i}", &x, &y)),
            (x, y) => out.insufficient("i", name, thm, format!("p = {} ≥ d = {d}", a.p), missing_sides("hodge", x.is_some(), y.is_some())),
        }
    }

    // (ii)
    let (ta, tb) = (tr_slopes(a), tr_slopes(b));
    let bad: Vec<String> = ta
        .iter()
        .zip(&tb)
        .filter(|(x, y)| x.slopes != y.slopes)
        .map(|(x, y)| format!("TR_{}: {} vs {}", x.n, x.slopes, y.slopes))
        .collect();
    out.compared(
        "ii",
        "TR slope tables",
        "derived invariance of topological restriction homology",
        "all d".into(),
        bad.is_empty(),
        if bad.is_empty() { "all TR_n slope multisets agree".into() } else { bad.join("; ") },
    );

    // (iii)
    let (name, thm) = ("de Rham–Witt and crystalline slope tables", "Newton polygons of low-dimensional varieties are derived invariant");
    if low {
        let mut bad: Vec<String> = drw_slopes(a)
            .iter()
            .zip(drw_slopes(b).iter())
            .filter(|(x, y)| x.slopes != y.slopes)
            .map(|(x, y)| format!("H^{}(WΩ^{}): {} vs {}", x.j, x.i, x.slopes, y.slopes))
            .collect();
        for n in 0..=2 * d {
            let (x, y) = (a.crys_degree(n), b.crys_degree(n));
            if x != y {
                bad.push(format!("H^{n}_crys: {x} vs {y}"));
            }
        }
        let details = if bad.is_empty() { "all slope tables agree".to_string() } else { bad.join("; ") };
        out.compared("iii", name, thm, low_reason(), bad.is_empty(), details);
    } else {
        out.not_applicable("iii", name, thm, low_reason());
    }

    // (iv)
    let (name, thm) = ("Betti numbers", "Betti numbers of low-dimensional varieties are derived invariant");
    if low {
        let (x, y) = (betti(a), betti(b));
        out.compared("iv", name, thm, low_reason(), x == y, diff_detail("b_n", &x, &y));
    } else {
        out.not_applicable("iv", name, thm, low_reason());
    }

    // (v)
    let (name, thm) = ("characteristic polynomials of Frobenius", "zeta functions of low-dimensional varieties are derived invariant");
    if !low {
        out.not_applicable("v", name, thm, low_reason());
    } else {
        match (&a.charpolys, &b.charpolys) {
            (Some(x), Some(y)) => {
                let common: Vec<&String> = x.keys().filter(|k| y.contains_key(*k)).collect();
                if common.is_empty() {
                    out.insufficient("v", name, thm, low_reason(), vec!["charpolys in a common degree".into()]);
                } else {
                    let bad: Vec<String> = common.iter().filter(|k| x[**k] != y[**k]).map(|k| format!("degree {k}")).collect();
                    let details = if bad.is_empty() {
                        format!("agree in degrees {}", common.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", "))
                    } else {
                        format!("differ in {}", bad.join(", "))
                    };
                    out.compared("v", name, thm, low_reason(), bad.is_empty(), details);
                }
            }
            (x, y) => out.insufficient("v", name, thm, low_reason(), missing_sides("charpolys", x.is_some(), y.is_some())),
        }
    }

    // (vi)
    let (name, thm) = ("domino tables", "domino numbers of low-dimensional varieties are derived invariant");
    if low {
        let (x, y) = (t_table(a), t_table(b));
        out.compared("vi", name, thm, low_reason(), x == y, diff_detail("T^{i,j}", &x, &y));
    } else {
        out.not_applicable("vi", name, thm, low_reason());
    }

    // (vii)
    let (name, thm) = ("derived domino numbers", "derived domino numbers are derived invariant");
    match (derived_dominoes(a), derived_dominoes(b)) {
        (Ok(x), Ok(y)) => {
            let (xv, yv): (Vec<u32>, Vec<u32>) = (x.values().copied().collect(), y.values().copied().collect());
            out.compared("vii", name, thm, low_reason(), x == y, diff_detail("T^cyc_n", &xv, &yv));
        }
        _ => out.not_applicable("vii", name, thm, low_reason()),
    }

    // (viii)
    let (name, thm) = ("Hodge–Witt numbers", "Hodge–Witt numbers of low-dimensional varieties are derived invariant");
    if low {
        match (hw_numbers(a), hw_numbers(b)) {
            (Ok(x), Ok(y)) => out.compared("viii", name, thm, low_reason(), x == y, diff_detail("h^{i,j}_W", &x, &y)),
            (x, y) => out.insufficient("viii", name, thm, low_reason(), missing_sides("integral Hodge–Newton numbers", x.is_ok(), y.is_ok())),
        }
    } else {
        out.not_applicable("viii", name, thm, low_reason());
    }

    // (ix)
    let (name, thm) = ("Artin–Mazur height", "the height of a Calabi–Yau variety is derived invariant");
    if a.calabi_yau && b.calabi_yau {
        let (x, y) = (height(&a.crys_data()), height(&b.crys_data()));
        out.compared("ix", name, thm, "both Calabi–Yau".into(), x == y, format!("heights {x} and {y}"));
    } else {
        out.not_applicable("ix", name, thm, "needs both profiles flagged Calabi–Yau");
    }

    // (x)
    let (name, thm) = ("Artin invariant and K(X,α)", "the Artin invariant of a supersingular K3 surface is derived invariant");
    if is_supersingular_k3(a) && is_supersingular_k3(b) {
        let ta = a.twist.unwrap_or_else(TwistInfo::untwisted);
        let tb = b.twist.unwrap_or_else(TwistInfo::untwisted);
        match (k_dimension(a, ta), k_dimension(b, tb)) {
            (Ok(x), Ok(y)) => out.compared(
                "x",
                name,
                thm,
                "both supersingular K3".into(),
                x == y,
                format!("dim K = {x} and {y} (kernel of the domino differential)"),
            ),
            (x, y) => out.insufficient("x", name, thm, "both supersingular K3".into(), missing_sides("domino at (0,2)", x.is_ok(), y.is_ok())),
        }
    } else {
        out.not_applicable("x", name, thm, "needs two supersingular K3 profiles");
    }

    // (xi)
    let (name, thm) = ("Hodge numbers", "Hodge numbers of surfaces, and Euler characteristics of threefolds, are derived invariant");
    match (&a.hodge, &b.hodge) {
        _ if d > 3 => out.not_applicable("xi", name, thm, low_reason()),
        (Some(x), Some(y)) if d <= 2 => {
            out.compared("xi", name, thm, format!("d = {d} ≤ 2: full Hodge tables"), x == y, diff_detail("h^{i,j}", x, y))
        }
        (Some(x), Some(y)) => {
            let (ca, cb) = (euler_chars(a).unwrap_or_default(), euler_chars(b).unwrap_or_default());
            let mo = matches!((mazur_ogus(a), mazur_ogus(b)), (Ok(Some(true)), Ok(Some(true))));
            let full = mo && a.p >= 3;
            let mut ok = ca == cb;
            let mut details = diff_detail("χ(Ω^i)", &ca, &cb);
            let reason = if full {
                ok &= x == y;
                details.push_str("; ");
                details.push_str(&diff_detail("h^{i,j}", x, y));
                "d = 3, both Mazur–Ogus, p ≥ 3: χ(Ω^i) and full Hodge tables".to_string()
            } else if !mo {
                "d = 3: χ(Ω^i) only; full tables need both profiles Mazur–Ogus".to_string()
            } else {
                format!("d = 3: χ(Ω^i) only; full tables need p ≥ 3, have p = {}", a.p)
            };
            out.compared("xi", name, thm, reason, ok, details);
        }
        (x, y) => out.insufficient("xi", name, thm, format!("d = {d} ≤ 3"), missing_sides("hodge", x.is_some(), y.is_some())),
    }

    // (xii)
    let (name, thm) = ("Mazur–Ogus and Hodge–Witt flags", "Mazur–Ogus and Hodge–Witt properties are derived invariant");
    if low {
        let flags = |p: &NumericalProfile| (mazur_ogus(p).ok().flatten(), hodge_witt_predicates(p).map(|f| f.hodge_witt).ok());
        let ((mo_a, hw_a), (mo_b, hw_b)) = (flags(a), flags(b));
        let mut parts = Vec::new();
        let mut ok = true;
        let mut decided = false;
        if let (Some(x), Some(y)) = (mo_a, mo_b) {
            decided = true;
            ok &= x == y;
            parts.push(format!("Mazur–Ogus {x} / {y}"));
        }
        if let (Some(x), Some(y)) = (hw_a, hw_b) {
            decided = true;
            ok &= x == y;
            parts.push(format!("Hodge–Witt {x} / {y}"));
        }
        if decided {
            out.compared("xii", name, thm, low_reason(), ok, parts.join("; "));
        } else {
            out.insufficient("xii", name, thm, low_reason(), missing_sides("hodge", mo_a.is_some(), mo_b.is_some()));
        }
    } else {
        out.not_applicable("xii", name, thm, low_reason());
    }

    let no_crys = missing_sides("crys", !a.crys.is_empty(), !b.crys.is_empty());
    if !no_crys.is_empty() {
        for c in out.checks.iter_mut().filter(|c| c.applicable && CRYS_DEPENDENT.contains(&c.id)) {
            c.verdict = Verdict::InsufficientData;
            c.details = format!("missing {}", no_crys.join(", "));
            c.missing = no_crys.clone();
        }
    }

    if a.twist.is_some() || b.twist.is_some() {
        notes.push("twisted profiles: only the K(X,α) bookkeeping uses the Brauer class".into());
    }
    ObstructionReport { a: a.name.clone(), b: b.name.clone(), checks: out.checks, notes }
}

fn verdict_word(c: &Check) -> &'static str {
    if !c.applicable {
        return "not applicable";
    }
    match c.verdict {
        Verdict::Match => "match",
        Verdict::Mismatch => "MISMATCH",
        Verdict::InsufficientData => "insufficient data",
    }
}

/// Human-readable rendering with the hypothesis audit of every check.
pub fn explain(report: &ObstructionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "A: {}\nB: {}", report.a, report.b);
    for c in &report.checks {
        let _ = writeln!(s, "({}) {}: {}", c.id, c.name, verdict_word(c));
        let _ = writeln!(s, "      theorem: {}", c.theorem);
        let _ = writeln!(s, "      hypotheses: {}", c.reason);
        if c.applicable && !c.details.is_empty() {
            let _ = writeln!(s, "      {}", c.details);
        }
    }
    for n in &report.notes {
        let _ = writeln!(s, "note: {n}");
    }
    if let Some(c) = report.first_obstruction() {
        let _ = writeln!(s, "obstruction: ({}) {} [{}]", c.id, c.name, c.theorem);
    } else if report.all_insufficient() {
        let missing: Vec<&String> = report.checks.iter().flat_map(|c| c.missing.iter()).collect();
        let mut uniq: Vec<&String> = Vec::new();
        for m in missing {
            if !uniq.contains(&m) {
                uniq.push(m);
            }
        }
        let list: Vec<&str> = uniq.iter().map(|m| m.as_str()).collect();
        let _ = writeln!(s, "insufficient data; missing: {}", list.join(", "));
    } else {
        let _ = writeln!(s, "{DISCLAIMER} (agreement does not prove a derived equivalence)");
    }
    s
}
