//! Replays the checked-in fuzz corpus through the bodies of the fuzz targets.

use std::fs;
use std::path::{Path, PathBuf};

use wfomc::parse::{
    parse_formula, parse_mln, parse_problog, parse_theory, parse_weight, print_mln, print_problog,
    print_theory,
};
use wfomc::propcheck::{check_soundness, full_elimination, Outcome};

fn corpus(target: &str) -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(PathBuf, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter_map(|p| {
            let bytes = fs::read(&p).unwrap();
            String::from_utf8(bytes).ok().map(|s| (p, s))
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn parse_theory_corpus() {
    let mut ok = 0;
    for (_, src) in corpus("parse_theory") {
        ok += usize::from(parse_theory(&src).is_ok());
    }
    assert!(ok > 0);
}

#[test]
fn parse_mln_corpus() {
    for (path, src) in corpus("parse_mln") {
        if let Ok(m) = parse_mln(&src) {
            let printed = print_mln(&m);
            assert_eq!(parse_mln(&printed).as_ref(), Ok(&m), "{}", path.display());
        }
    }
}

#[test]
fn parse_problog_corpus() {
    for (path, src) in corpus("parse_problog") {
        let p = parse_problog(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let printed = print_problog(&p);
        assert_eq!(
            parse_problog(&printed).as_ref(),
            Ok(&p),
            "{}",
            path.display()
        );
        let _ = wfomc::encode::encode_problog(&p);
    }
}

#[test]
fn parse_weight_corpus() {
    for (path, src) in corpus("parse_weight") {
        if let Ok(w) = parse_weight(&src) {
            assert_eq!(
                parse_weight(&w.to_string()).as_ref(),
                Ok(&w),
                "{}",
                path.display()
            );
        }
    }
}

#[test]
fn parse_formula_corpus() {
    for (path, src) in corpus("parse_formula") {
        if let Ok(f) = parse_formula(&src) {
            let printed = f.to_string();
            assert_eq!(
                parse_formula(&printed).as_ref(),
                Ok(&f),
                "{}",
                path.display()
            );
        }
    }
}

/// Ordinary seeds must parse; regression seeds may now be rejected.
fn parsed_unless_regression(path: &Path, src: &str) -> Option<wfomc::parse::ParsedTheory> {
    let regression = path
        .file_name()
        .is_some_and(|n| n.to_string_lossy().starts_with("seed_regress"));
    match parse_theory(src) {
        Ok(p) => Some(p),
        Err(_) if regression => None,
        Err(e) => panic!("{}: {e}", path.display()),
    }
}

#[test]
fn roundtrip_theory_corpus() {
    for (path, src) in corpus("roundtrip_theory") {
        let Some(parsed) = parsed_unless_regression(&path, &src) else {
            continue;
        };
        let printed = print_theory(&parsed.theory, parsed.domain.as_ref());
        let back = parse_theory(&printed).expect("printed theory parses");
        assert_eq!(back.theory, parsed.theory, "{printed}");
        assert_eq!(back.domain, parsed.domain);
    }
}

#[test]
fn skolemize_count_corpus() {
    for (path, src) in corpus("skolemize_count") {
        let Some(parsed) = parsed_unless_regression(&path, &src) else {
            continue;
        };
        let t = parsed.theory;
        let out = check_soundness(&t, &[1, 2], &full_elimination());
        assert!(
            !matches!(out, Outcome::Fail(_)),
            "{}: {out:?}",
            path.display()
        );
    }
}
