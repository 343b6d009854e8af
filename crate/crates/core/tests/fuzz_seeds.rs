//! Replays the checked-in fuzz corpus through the same invariants as the
//! fuzz targets.

use std::fs;
use std::path::PathBuf;

use lingwalk::lab::{parse_csv, render_svg};
use lingwalk::language::{parse_walk, LanguageId, Word};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn walk_documents() {
    let mut accepted = 0;
    for (path, text) in seeds("parse_walk") {
        if let Ok(walk) = parse_walk(&text) {
            accepted += 1;
            assert_eq!(parse_walk(&walk.to_json()).unwrap(), walk, "{}", path.display());
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn language_strings() {
    for (_, text) in seeds("parse_language") {
        if let Ok(lang) = text.parse::<LanguageId>() {
            assert_eq!(lang.to_string().parse::<LanguageId>().unwrap(), lang);
        }
        if let Ok(w) = text.parse::<Word>() {
            assert_eq!(w.to_string(), text);
        }
    }
}

#[test]
fn plot_csv() {
    let mut rendered = 0;
    for (_, text) in seeds("plot_csv") {
        let _ = parse_csv(&text);
        if let Ok(svg) = render_svg(&text) {
            rendered += 1;
            assert_eq!(render_svg(&text).unwrap(), svg);
        }
    }
    assert_eq!(rendered, 5);
}
