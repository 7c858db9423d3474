use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ringclass::cache::PolyCacheEntry;

fn ringclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringclass"))
        .args(args)
        .env_remove("RINGCLASS_CACHE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = ringclass(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

const SEXTIC: &str = "X^6 + 10*X^5 + 46*X^4 + 108*X^3 + 122*X^2 + 38*X - 1";

#[test]
fn field_info() {
    let out = ok(&["field-info", "--dk", "-4"]);
    assert!(out.contains("unit_count: 4"), "{out}");
    assert!(out.contains("{2,4,3,5}"), "{out}");
    let out = ok(&["field-info", "--dk", "-24"]);
    assert!(out.contains("unit_count: 2"));
    assert!(out.contains("{2}"), "{out}");
}

#[test]
fn invalid_discriminant_exits_2() {
    let o = ringclass(&["field-info", "--dk", "-10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a fundamental discriminant"));
    assert_eq!(
        ringclass(&["minpoly", "--dk", "-4", "--conductor", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ringclass(&[
            "minpoly",
            "--dk",
            "-4",
            "--conductor",
            "13",
            "--precision",
            "16"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        ringclass(&["classgroup", "--disc", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(ringclass(&["solve", "--n", "169"]).status.code(), Some(2));
}

#[test]
fn minpoly_text() {
    assert_eq!(
        ok(&["minpoly", "--dk", "-4", "--conductor", "13"]).trim(),
        SEXTIC
    );
    assert_eq!(
        ok(&[
            "minpoly",
            "--dk",
            "-4",
            "--conductor",
            "13",
            "--precision",
            "64"
        ])
        .trim(),
        SEXTIC
    );
    assert_eq!(
        ok(&["minpoly", "--dk", "-4", "--conductor", "13", "--use-j"]).trim(),
        "X^6 - 10368*X^5 + 44789760*X^4 - 103195607040*X^3 + 133741506723840*X^2 \
         - 92442129447518208*X + 26623333280885243904"
    );
}

#[test]
fn minpoly_json_round_trips() {
    let out = ok(&["minpoly", "--dk", "-7", "--conductor", "7", "--json"]);
    let e: PolyCacheEntry = serde_json::from_str(&out).unwrap();
    assert_eq!(e.d_k, -7);
    assert_eq!(e.conductor, 7);
    assert_eq!(
        e.coeffs,
        ["7", "588", "490", "1162", "679", "175", "21", "1"]
    );
    assert_eq!(e.poly().unwrap().degree(), Some(7));
    let again: PolyCacheEntry = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
    assert_eq!(again, e);
    let frac = e.invariant_approx.split_once('.').unwrap().1;
    assert!(
        frac.len() >= 50 && frac.bytes().all(|c| c.is_ascii_digit()),
        "{}",
        e.invariant_approx
    );
}

fn read_entry(dir: &Path, name: &str) -> PolyCacheEntry {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn cache_hit_equals_cold_computation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cold = ok(&["minpoly", "--dk", "-24", "--conductor", "3", "--json"]);
    let first = ok(&[
        "minpoly",
        "--dk",
        "-24",
        "--conductor",
        "3",
        "--json",
        "--cache",
        d,
    ]);
    let stored = read_entry(dir.path(), "dk-24_N3.json");
    let hit = ok(&[
        "minpoly",
        "--dk",
        "-24",
        "--conductor",
        "3",
        "--json",
        "--cache",
        d,
    ]);
    let parse = |s: &str| serde_json::from_str::<PolyCacheEntry>(s).unwrap();
    assert_eq!(parse(&cold).coeffs, parse(&hit).coeffs);
    assert_eq!(parse(&first), stored);
    assert_eq!(parse(&hit), stored);
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn cache_hit_is_served_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["minpoly", "--dk", "-4", "--conductor", "13", "--cache", d]);
    let mut e = read_entry(dir.path(), "dk-4_N13.json");
    e.invariant_approx = "marker".into();
    fs::write(
        dir.path().join("dk-4_N13.json"),
        serde_json::to_string(&e).unwrap(),
    )
    .unwrap();
    let hit = ok(&[
        "minpoly",
        "--dk",
        "-4",
        "--conductor",
        "13",
        "--json",
        "--cache",
        d,
    ]);
    assert!(hit.contains("marker"));
}

#[test]
fn invalid_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dk-4_N13.json");
    let bogus = PolyCacheEntry {
        d_k: -4,
        conductor: 13,
        coeffs: vec!["5".into(), "1".into()],
        precision_bits: 64,
        invariant_approx: "0".into(),
        spec_exponents: Default::default(),
    };
    fs::write(&path, serde_json::to_string(&bogus).unwrap()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ringclass"))
        .args(["minpoly", "--dk", "-4", "--conductor", "13"])
        .env("RINGCLASS_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), SEXTIC);
    assert_eq!(read_entry(dir.path(), "dk-4_N13.json").coeffs.len(), 7);
}

#[test]
fn solve() {
    assert_eq!(
        ok(&["solve", "--n", "169", "--p", "313"]).trim(),
        "yes x=12 y=1"
    );
    assert_eq!(
        ok(&["solve", "--n", "169", "--p", "13"]).trim(),
        "criterion not applicable (p | n)"
    );
    assert_eq!(ok(&["solve", "--n", "169", "--p", "5"]).trim(), "no");
    assert_eq!(
        ok(&["solve", "--n", "54", "--p", "79"]).trim(),
        "yes x=5 y=1"
    );
    let out = ok(&["solve", "--n", "54", "--sweep-below", "1000"]);
    assert!(out.contains("all agree: true"), "{out}");
    assert!(!out.contains("MISMATCH"));
}

#[test]
fn verify_suites() {
    let out = ok(&[
        "verify",
        "--dk",
        "-4",
        "--conductor",
        "13",
        "--suite",
        "norm",
    ]);
    let r: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("relative residual: 2^"))
        .unwrap()
        .parse()
        .unwrap();
    // 1e-30 is about 2^-99.7
    assert!(r < -100.0, "{out}");
    ok(&["verify", "--conductor", "13", "--suite", "ono"]);
    let out = ok(&[
        "verify",
        "--dk",
        "-24",
        "--conductor",
        "3",
        "--suite",
        "conjugates",
    ]);
    assert_eq!(out.lines().filter(|l| l.contains("gamma=")).count(), 6);
    assert!(out.contains("6 conjugates, class number 6"));
    assert!(out.contains("tau_Q=0 + 1/4*sqrt(-24)"));
    assert_eq!(
        ringclass(&["verify", "--suite", "norm"]).status.code(),
        Some(2)
    );
}

#[test]
fn table1_suite_lists_every_column() {
    let o = ringclass(&["verify", "--suite", "table1"]);
    let out = stdout(&o);
    for label in [
        "Q(sqrt(-1))",
        "Q(sqrt(-3))",
        "1 mod 24",
        "9,17 mod 24",
        "13 mod 24",
        "otherwise",
    ] {
        assert!(out.contains(label), "{label}");
    }
    let reproduced = out.contains("Table 1 reproduced");
    assert_eq!(o.status.code(), Some(if reproduced { 0 } else { 4 }));
}

#[test]
fn classgroup() {
    assert_eq!(ok(&["classgroup", "--disc", "-24"]), "1 0 6\n2 0 3\n");
    assert_eq!(ok(&["classgroup", "--disc", "-4"]), "1 0 1\n");
    assert_eq!(ok(&["classgroup", "--disc", "-3"]), "1 1 1\n");
}
