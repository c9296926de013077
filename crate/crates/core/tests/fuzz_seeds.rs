//! The fuzz seed corpora parse and satisfy the fuzz targets' round-trip checks.

use std::fs;
use std::path::PathBuf;

use fomc_core::formulas::{parse_formula, FragmentKey};
use fomc_core::shops::parse_shop;
use fomc_core::structures::{parse_structure, render_structure};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn structure_seeds() {
    for (name, text) in seeds("parse_structure") {
        let s = parse_structure(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_structure(&render_structure(&s)).unwrap(), s, "{name}");
    }
}

#[test]
fn formula_seeds() {
    for (name, text) in seeds("parse_formula") {
        let f = parse_formula(&text, None).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_formula(&f.to_string(), None).unwrap(), f, "{name}");
    }
}

#[test]
fn shop_seeds() {
    for (name, text) in seeds("parse_shop") {
        let f = parse_shop(text.trim()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_shop(&f.to_string()).unwrap(), f, "{name}");
    }
}

#[test]
fn fragment_key_seeds() {
    for (name, text) in seeds("parse_fragment_key") {
        let k: FragmentKey = text.trim().parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(k.to_string().parse::<FragmentKey>().unwrap(), k, "{name}");
        assert_eq!(k.dual().dual(), k);
    }
}
