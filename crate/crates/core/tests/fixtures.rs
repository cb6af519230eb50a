//! The JSON fixtures under `fixtures/` match their generators and satisfy the Raynaud relations.
//! Run with `HWINV_BLESS=1` to regenerate them.

use std::path::PathBuf;

use hwinv::field::GroundField;
use hwinv::rmod::fixtures::{broken_fdv, shipped};
use hwinv::rmod::{RModuleExplicit, Relation};
use hwinv::zq::Zq;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn ring() -> Zq {
    Zq::new(&GroundField::prime(5).unwrap(), 1)
}

fn render(m: &RModuleExplicit, description: &str) -> String {
    let mut j = m.to_json();
    j.description = Some(description.to_string());
    serde_json::to_string_pretty(&j).unwrap() + "\n"
}

fn expected() -> Vec<(String, String)> {
    let r = ring();
    let mut out: Vec<(String, String)> =
        shipped(&r).iter().map(|s| (format!("{}.json", s.name), render(&s.module, &s.description))).collect();
    out.push(("broken_fdv.json".into(), render(&broken_fdv(&r), "FdV = d deliberately broken")));
    out
}

#[test]
fn fixture_files_match_generators() {
    let bless = std::env::var_os("HWINV_BLESS").is_some();
    std::fs::create_dir_all(dir()).unwrap();
    for (name, text) in expected() {
        let path = dir().join(&name);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing fixture {name}; run with HWINV_BLESS=1"));
        assert_eq!(on_disk, text, "{name} is stale");
    }
}

#[test]
fn shipped_fixtures_satisfy_relations() {
    let mut seen = 0;
    for entry in std::fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map_or(true, |e| e != "json") {
            continue;
        }
        let m = RModuleExplicit::from_json_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let violations = m.check_relations().unwrap();
        if path.file_stem().unwrap() == "broken_fdv" {
            assert!(violations.iter().any(|v| v.relation == Relation::FdV), "{violations:?}");
        } else {
            assert!(violations.is_empty(), "{}: {violations:?}", path.display());
            seen += 1;
        }
    }
    assert_eq!(seen, shipped(&ring()).len());
}
