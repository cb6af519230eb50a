//! The `hwinv` command line.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use hwinv::catalog::{self, CatalogEntry, CatalogError};
use hwinv::field::GroundField;
use hwinv::fmcheck;
use hwinv::invariants::{self, InvariantError};
use hwinv::isocrystal::prime_power;
use hwinv::specseq::{self, SSError, TwistInfo};
use hwinv::witt::WittRing;

pub mod expr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_OBSTRUCTION: i32 = 2;
pub const EXIT_INSUFFICIENT: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hwinv", version, about = "Hodge–Witt invariants, dominoes and derived-equivalence obstructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full invariant report for a catalog key or profile file.
    Invariants {
        profile: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare two profiles for derived-equivalence obstructions.
    Compare {
        a: String,
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Run every identity check; nonzero exit on any failure.
    Verify {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        profile: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Render a spectral sequence.
    Ss {
        profile: String,
        #[arg(long, value_enum, default_value_t = Kind::Slope)]
        kind: Kind,
        /// Order of the Brauer class: `p`, `p^v` or an integer.
        #[arg(long)]
        twist: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Witt vector arithmetic.
    Witt {
        #[command(subcommand)]
        command: WittCommand,
    },
    /// The built-in catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum WittCommand {
    /// Evaluate an expression such as "(1,0)+(1,0)" or "F(V(1))-3".
    Eval {
        expr: String,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Slope,
    Descent,
    Tate,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let code = if matches!(e, CatalogError::Validation(_) | CatalogError::Domain(_)) { EXIT_VALIDATION } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        Failure { code: EXIT_VALIDATION, message: e.to_string() }
    }
}

impl From<SSError> for Failure {
    fn from(e: SSError) -> Self {
        let code = if matches!(e, SSError::Validation(_)) { EXIT_VALIDATION } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn parse_twist(text: &str, p: u64) -> Result<TwistInfo, Failure> {
    let ord = match text.split_once('^') {
        Some((base, exp)) => {
            let base = if base == "p" { p } else { base.parse().map_err(|_| usage(format!("bad twist {text:?}")))? };
            let exp: u32 = exp.parse().map_err(|_| usage(format!("bad twist {text:?}")))?;
            base.checked_pow(exp).ok_or_else(|| usage("twist order overflows"))?
        }
        None if text == "p" => p,
        None => text.parse().map_err(|_| usage(format!("bad twist {text:?}")))?,
    };
    let ok = ord == 1 || prime_power(ord).map_or(false, |(b, _)| b == p);
    if !ok {
        return Err(Failure { code: EXIT_VALIDATION, message: format!("ord(α) = {ord} is not a power of p = {p}") });
    }
    Ok(TwistInfo { ord })
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn print_warnings(entry: &CatalogEntry, err: &mut dyn Write) {
    for w in &entry.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn verify_one(entry: &CatalogEntry) -> Result<(bool, String), Failure> {
    let r = invariants::report(&entry.profile)?;
    let failures = r.failures();
    if failures.is_empty() {
        Ok((true, format!("{}: ok ({} checks)\n", entry.key, r.consistency.len())))
    } else {
        let mut s = format!("{}: FAILED\n", entry.key);
        for c in failures {
            s.push_str(&format!("  {}: {}\n", c.name, c.detail));
        }
        Ok((false, s))
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let mut text = String::new();
    let code = match cli.command {
        Command::Invariants { profile, json: as_json } => {
            let entry = catalog::resolve(&profile)?;
            print_warnings(&entry, err);
            let r = invariants::report(&entry.profile)?;
            text = if as_json { json(&r) } else { r.to_string() };
            EXIT_OK
        }
        Command::Compare { a, b, json: as_json } => {
            let (x, y) = (catalog::resolve(&a)?, catalog::resolve(&b)?);
            let r = fmcheck::compare(&x.profile, &y.profile);
            text = if as_json { r.to_json_pretty() + "\n" } else { fmcheck::explain(&r) };
            r.exit_code()
        }
        Command::Verify { profile, all } => {
            let entries = if all { catalog::all() } else { vec![catalog::resolve(profile.as_deref().unwrap_or_default())?] };
            let mut ok = true;
            for e in &entries {
                let (good, s) = verify_one(e)?;
                ok &= good;
                text.push_str(&s);
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Command::Ss { profile, kind, twist, json: as_json } => {
            let entry = catalog::resolve(&profile)?;
            print_warnings(&entry, err);
            let prof = &entry.profile;
            let tw = match twist {
                Some(t) => parse_twist(&t, prof.p)?,
                None => prof.twist.unwrap_or_else(TwistInfo::untwisted),
            };
            match kind {
                Kind::Slope => {
                    let ss = specseq::slope_ss(prof)?;
                    text = if as_json { json(&ss) } else { ss.to_string() };
                }
                Kind::Descent => {
                    let ss = specseq::descent_ss(prof, tw)?;
                    text = if as_json { json(&ss) } else { ss.to_string() };
                }
                Kind::Tate => {
                    let ss = specseq::tate_ss(prof, tw)?;
                    let tr = specseq::assemble_tr(&specseq::descent_ss(prof, tw)?);
                    let tp = specseq::tate_ss_tp(prof, &tr, tw)?;
                    if as_json {
                        text = json(&serde_json::json!({ "spectral_sequence": ss, "tp": tp }));
                    } else {
                        text = ss.to_string();
                        text.push_str("TP\n");
                        for e in &tp.entries {
                            match &e.slopes {
                                Some(s) => text.push_str(&format!("  TP_{}: rank {} slopes {}\n", e.n, e.rank, s)),
                                None => text.push_str(&format!("  TP_{}: rank {}\n", e.n, e.rank)),
                            }
                        }
                        if let Some(k) = tp.k_dim {
                            text.push_str(&format!("dim K(X,α) = {k}\n"));
                        }
                        for n in &tp.notes {
                            text.push_str(&format!("note: {n}\n"));
                        }
                    }
                }
            }
            EXIT_OK
        }
        Command::Witt { command: WittCommand::Eval { expr: e, p, a, n } } => {
            let field = GroundField::new(p, a).map_err(|e| usage(e.to_string()))?;
            if n == 0 {
                return Err(usage("precision n must be positive"));
            }
            let ring = WittRing::new(&field, n);
            let v = expr::eval(&ring, &e).map_err(usage)?;
            text = format!("{v}\n");
            EXIT_OK
        }
        Command::Catalog { command: CatalogCommand::List { json: as_json } } => {
            let entries = catalog::all();
            if as_json {
                let rows: Vec<_> = entries
                    .iter()
                    .map(|e| serde_json::json!({ "key": e.key, "name": e.profile.name, "d": e.profile.d, "p": e.profile.p }))
                    .collect();
                text = json(&rows);
            } else {
                for e in &entries {
                    text.push_str(&format!("{:<14} d={}  {}\n", e.key, e.profile.d, e.profile.name));
                }
            }
            EXIT_OK
        }
    };
    let _ = out.write_all(text.as_bytes());
    Ok(code)
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
