use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn wfomc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wfomc"))
        .args(args)
        .current_dir(root())
        .env_remove("WFOMC_MAX_ATOMS")
        .output()
        .expect("run wfomc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = wfomc(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    wfomc(args).status.code().expect("exit code")
}

#[test]
fn smokers_count() {
    assert_eq!(
        ok(&["count", "examples/smokers.fol", "--domain-size", "2"]),
        "48\n"
    );
}

#[test]
fn workshop_probability() {
    let out = ok(&[
        "prob",
        "examples/workshop.plp",
        "--query",
        "Series",
        "--domain-size",
        "2",
        "--mode",
        "exact",
    ]);
    assert_eq!(out, "591/10000\n");
}

#[test]
fn float_mode_prints_shortest_decimal() {
    let out = ok(&[
        "prob",
        "examples/workshop.plp",
        "--query",
        "Series",
        "--domain-size",
        "2",
        "--mode",
        "float",
    ]);
    assert_eq!(out, "0.0591\n");
}

#[test]
fn irrational_weights_default_to_float() {
    let out = ok(&["count", "examples/works.mln", "--domain-size", "1"]);
    let z: f64 = out.trim().parse().unwrap();
    assert!((z - (3.0 * 1.3f64.exp() + 1.0)).abs() < 1e-9, "{z}");
    assert_eq!(
        code(&[
            "count",
            "examples/works.mln",
            "--domain-size",
            "1",
            "--mode",
            "exact"
        ]),
        2
    );
}

#[test]
fn json_output() {
    let out = ok(&[
        "--json",
        "count",
        "examples/smokers.fol",
        "--domain-size",
        "2",
    ]);
    assert_eq!(out, "{\"count\":{\"den\":\"1\",\"num\":\"48\"}}\n");
    let out = ok(&[
        "prob",
        "examples/workshop.plp",
        "--json",
        "--query",
        "Series",
        "--domain",
        "A,B",
    ]);
    assert_eq!(
        out,
        "{\"probability\":{\"den\":\"10000\",\"num\":\"591\"}}\n"
    );
    let out = ok(&["--json", "skolemize", "examples/boss.fol"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["theory"]
        .as_str()
        .unwrap()
        .starts_with("weight Sk0 1 1 -1\n"));
}

#[test]
fn golden_files() {
    let cases = [
        ("boss.skolemize.txt", vec!["skolemize", "examples/boss.fol"]),
        (
            "parents.skolemize.txt",
            vec!["skolemize", "examples/parents.fol"],
        ),
        (
            "works.skolemize.txt",
            vec!["skolemize", "examples/works.mln"],
        ),
        (
            "workshop.skolemize.txt",
            vec!["skolemize", "examples/workshop.plp"],
        ),
        (
            "boss.no-propagate.txt",
            vec!["skolemize", "examples/boss.fol", "--no-propagate"],
        ),
        (
            "parents.shortcut.txt",
            vec![
                "skolemize",
                "examples/parents.fol",
                "--shortcut",
                "--no-propagate",
            ],
        ),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (file, args) in cases {
        let expected = std::fs::read_to_string(dir.join(file)).unwrap();
        assert_eq!(ok(&args), expected, "{file}");
    }
}

#[test]
fn engines_agree_on_examples() {
    let examples = [
        "smokers.fol",
        "stress.fol",
        "female.fol",
        "mothers.fol",
        "boss.fol",
        "parents.fol",
        "works.mln",
        "workshop.plp",
    ];
    for e in examples {
        let path = format!("examples/{e}");
        for n in ["1", "2"] {
            let brute = ok(&["count", &path, "--domain-size", n, "--engine", "brute"]);
            let dpll = ok(&["count", &path, "--domain-size", n, "--engine", "dpll"]);
            if e.ends_with(".mln") {
                let (a, b): (f64, f64) =
                    (brute.trim().parse().unwrap(), dpll.trim().parse().unwrap());
                assert!((a - b).abs() <= 1e-9 * a.abs(), "{e} n={n}");
            } else {
                assert_eq!(brute, dpll, "{e} n={n}");
            }
        }
    }
}

#[test]
fn dimacs_output() {
    let out = ok(&[
        "cnf",
        "examples/stress.fol",
        "--dimacs",
        "--domain-size",
        "1",
    ]);
    assert_eq!(
        out,
        "p cnf 2 1\nc wght 1 1\nc wght -1 1\nc wght 2 1\nc wght -2 1\n1 -2 0\n"
    );
}

#[test]
fn cnf_skolemizes_first() {
    let out = ok(&["cnf", "examples/boss.fol"]);
    assert!(out.contains("forall x Z0(x)\n"), "{out}");
    assert!(!out.contains("exists"));
    let t = ok(&["cnf", "examples/boss.fol", "--tseitin"]);
    assert!(!t.contains("exists"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["count"]), 1);
    assert_eq!(code(&["count", "examples/smokers.fol", "--bogus"]), 1);
    assert_eq!(
        code(&[
            "count",
            "examples/smokers.fol",
            "--domain-size",
            "2",
            "--domain",
            "A"
        ]),
        1
    );
    assert_eq!(code(&["count", "examples/smokers.fol"]), 1);
    assert_eq!(code(&["check", "--sizes", "4"]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(
        code(&["count", "examples/missing.fol", "--domain-size", "1"]),
        2
    );
    let dir = std::env::temp_dir().join(format!("wfomc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.fol");
    std::fs::write(&bad, "forall x (P(x) |\n").unwrap();
    let o = wfomc(&["count", bad.to_str().unwrap(), "--domain-size", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.fol:"), "{}", stderr(&o));
    let loop_ = dir.join("loop.plp");
    std::fs::write(&loop_, "P :- Q.\nQ :- P.\n").unwrap();
    let o = wfomc(&["skolemize", loop_.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("P -> Q -> P"), "{}", stderr(&o));
    let named = dir.join("named.fol");
    std::fs::write(&named, "P(A) | P(B)\n").unwrap();
    let n = named.to_str().unwrap();
    assert_eq!(code(&["count", n, "--domain-size", "1"]), 2);
    assert_eq!(code(&["count", n, "--domain", "A"]), 2);
    assert_eq!(ok(&["count", n, "--domain", "A,B"]), "3\n");
    assert_eq!(code(&["count", n, "--domain-size", "0"]), 2);
    assert_eq!(
        code(&[
            "prob",
            "examples/boss.fol",
            "--query",
            "Boss(x)",
            "--domain-size",
            "1"
        ]),
        2
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn declared_domain_is_used() {
    let dir = std::env::temp_dir().join(format!("wfomc-dom-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("d.fol");
    std::fs::write(&f, "domain A, B\nforall x (Stress(x) -> Smokes(x))\n").unwrap();
    assert_eq!(ok(&["count", f.to_str().unwrap()]), "9\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn resource_errors_exit_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_wfomc"))
        .args([
            "count",
            "examples/smokers.fol",
            "--domain-size",
            "3",
            "--engine",
            "brute",
        ])
        .current_dir(root())
        .env("WFOMC_MAX_ATOMS", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("WFOMC_MAX_ATOMS"));
}

#[test]
fn check_passes_and_mutations_fail() {
    let out = ok(&["check", "--seeds", "20"]);
    assert!(out.starts_with("soundness at sizes [1, 2]: "), "{out}");
    assert!(out.contains("modularity"));
    let o = wfomc(&["check", "--seeds", "30", "--mutate", "skolem-weight"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("seed "));
    assert_eq!(
        code(&["check", "--seeds", "50", "--mutate", "forall-rewrite"]),
        4
    );
    let json = ok(&["--json", "check", "--seeds", "5", "--sizes", "1"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["property"], "soundness");
    assert_eq!(v[0]["failed"], 0);
}
