use std::path::{Path, PathBuf};
use std::process::Command;

use clap::Parser;
use tannaka_cli::{parse_algebra, run, write_algebra, Cli, ResultCache, CACHE_DIR_VAR};
use tannaka_core::bar::{bar_complex, BarBound};
use tannaka_core::dga::validate;
use tannaka_core::fixtures;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn all_data_files() -> Vec<String> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data"].iter().collect();
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "alg"))
        .map(|p| p.to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

fn tannaka(args: &[&str], cache: Option<&Path>) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tannaka"));
    match cache {
        Some(dir) => cmd.env(CACHE_DIR_VAR, dir),
        None => cmd.arg("--no-cache"),
    };
    let out = cmd.args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap(), out.status.code().unwrap())
}

#[test]
fn validate_exit_codes() {
    let (out, _, code) = tannaka(&["validate", &data("polynomial.alg")], None);
    assert_eq!((out.as_str(), code), ("valid: k[x]\n", 0));

    let (out, _, code) = tannaka(&["validate", &data("leibniz_violation.alg")], None);
    assert_eq!(code, 1);
    assert!(out.starts_with("line 9: leibniz"), "{out}");

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.alg");
    std::fs::write(&empty, "").unwrap();
    let (_, err, code) = tannaka(&["validate", empty.to_str().unwrap()], None);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tannaka(&["bar", &data("polynomial.alg")], None).2, 2);
    assert_eq!(tannaka(&["bar", &data("polynomial.alg"), "--cap", "2", "--weight-bound", "2"], None).2, 2);
    assert_eq!(tannaka(&["bar", "/nonexistent/file.alg", "--cap", "2"], None).2, 2);
    assert_eq!(tannaka(&["bar", &data("polynomial.alg"), "--cap", "2", "--window", "3:1"], None).2, 2);
    assert_eq!(tannaka(&["frobnicate"], None).2, 2);
    assert_eq!(tannaka(&["--jobs", "0", "bar", &data("polynomial.alg"), "--cap", "2"], None).2, 2);
}

#[test]
fn refusals_exit_one() {
    // a degree-zero polynomial generator is not Adams positive
    let (_, err, code) = tannaka(&["bar", &data("polynomial.alg"), "--weight-bound", "3"], None);
    assert_eq!(code, 1, "{err}");
    let (_, err, code) = tannaka(&["coarse", &data("negative_generator.alg"), "--weight-bound", "3"], None);
    assert_eq!(code, 1);
    assert!(err.contains("connectivity"), "{err}");
    let (_, err, code) = tannaka(&["coarse", &data("dual_numbers.alg"), "--weight-bound", "3"], None);
    assert_eq!(code, 1);
    assert!(err.contains("mixed-tate"), "{err}");
}

#[test]
fn documented_outputs() {
    let (out, _, _) = tannaka(&["bar", &data("dual_numbers.alg"), "--cap", "5"], None);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["0 -4 1", "0 -3 1", "0 -2 1", "0 -1 1", "0 0 1"]);
    assert!(out.starts_with("# cap 5: stable in degrees above -5\n"), "{out}");

    let (out, _, _) = tannaka(&["bar", &data("exterior.alg"), "--weight-bound", "4"], None);
    assert_eq!(out, "0 0 1\n1 0 1\n2 0 1\n3 0 1\n4 0 1\n");

    let (out, _, _) = tannaka(&["bar", &data("unit.alg"), "--cap", "3"], None);
    assert_eq!(out, "0 0 1\n");

    let (out, _, code) = tannaka(&["coarse", &data("exterior.alg"), "--weight-bound", "3"], None);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("basis ")).count(), 4);
    assert!(out.contains("comul h1 = h0|h1 + h1|h0\n"), "{out}");

    let (out, _, code) = tannaka(&["coarse", &data("unit.alg"), "--weight-bound", "3"], None);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("basis ")).count(), 1);

    let (out, _, code) = tannaka(&["coarse", &data("negative_generator.alg"), "--weight-bound", "2", "--force"], None);
    assert!(out.starts_with("# connectivity check failed"), "{out}");
    assert!(code == 0 || code == 1);

    let (out, _, _) = tannaka(&["cech", &data("polynomial.alg"), "--cap", "6", "--level", "2"], None);
    assert_eq!(out, "0 -2 1\n0 -1 2\n0 0 1\n");

    let (out, _, _) = tannaka(&["truncate", &data("dual_numbers.alg"), "--cap", "5", "--leq", "0", "--geq", "0"], None);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>(), ["0 0 1"]);
    let (out, _, _) = tannaka(&["truncate", &data("dual_numbers.alg"), "--cap", "5", "--geq", "-2"], None);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>(), ["0 -2 1", "0 -1 1", "0 0 1"]);

    let (out, _, code) = tannaka(&["oracle", &data("dual_numbers.alg"), "--levels", "4"], None);
    assert_eq!(code, 0);
    assert!(out.ends_with("MATCH\n"));
}

#[test]
fn windows_restrict_the_table() {
    let (out, _, code) = tannaka(&["bar", &data("dual_numbers.alg"), "--cap", "6", "--window", "-2:0"], None);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>(), ["0 -2 1", "0 -1 1", "0 0 1"]);
}

#[test]
fn round_trip_preserves_validation_and_tables() {
    for f in all_data_files() {
        let src = std::fs::read_to_string(&f).unwrap();
        let a = parse_algebra(&src).unwrap().algebra;
        let text = write_algebra(&a);
        let b = parse_algebra(&text).unwrap_or_else(|e| panic!("{f}: {e}\n{text}")).algebra;
        assert_eq!(write_algebra(&b), text, "{f}");
        assert_eq!(validate(&a).is_valid(), validate(&b).is_valid(), "{f}");
        assert_eq!(a.is_mixed_tate(), b.is_mixed_tate());
        if validate(&a).is_valid() {
            let bound = if a.is_adams_positive() { BarBound::Weight(3) } else { BarBound::WordLength(3) };
            if let (Ok(x), Ok(y)) = (bar_complex(&a, None, bound), bar_complex(&b, None, bound)) {
                assert_eq!(x.table(), y.table(), "{f}");
            }
        }
    }
    for a in [fixtures::exterior_pair(), fixtures::truncated_polynomial(5), fixtures::acyclic_ideal_algebra()] {
        let text = write_algebra(&a);
        assert_eq!(write_algebra(&parse_algebra(&text).unwrap().algebra), text);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["bar", "truncated_quartic.alg", "--cap", "6"],
        vec!["cech", "dual_numbers.alg", "--cap", "4", "--level", "3"],
        vec!["coarse", "two_generator.alg", "--weight-bound", "5"],
        vec!["oracle", "rank3.alg", "--levels", "4"],
    ] {
        let path = data(args[1]);
        let mut a = args.clone();
        a[1] = &path;
        let one = tannaka(&[&["--jobs", "1"], a.as_slice()].concat(), None);
        let again = tannaka(&[&["--jobs", "1"], a.as_slice()].concat(), None);
        let many = tannaka(&[&["--jobs", "3"], a.as_slice()].concat(), None);
        assert_eq!(one, again, "{args:?}");
        assert_eq!(one, many, "{args:?}");
    }
}

#[test]
fn cache_hits_match_fresh_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bar", &data("two_generator.alg"), "--weight-bound", "5"];
    let fresh = tannaka(&args, None);
    let first = tannaka(&args, Some(dir.path()));
    let second = tannaka(&args, Some(dir.path()));
    assert_eq!(fresh, first);
    assert_eq!(fresh, second);
    let stored: Vec<_> = walk(dir.path());
    assert_eq!(stored.len(), 1, "{stored:?}");
    assert_eq!(std::fs::read_to_string(&stored[0]).unwrap(), fresh.0);

    // different parameters use a different entry; failures are not stored
    tannaka(&["bar", &data("two_generator.alg"), "--weight-bound", "4"], Some(dir.path()));
    tannaka(&["bar", &data("polynomial.alg"), "--weight-bound", "4"], Some(dir.path()));
    assert_eq!(walk(dir.path()).len(), 2);
}

#[test]
fn cache_is_consulted_in_process() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ResultCache::at(dir.path());
    let cli = Cli::parse_from(["tannaka", "bar", &data("dual_numbers.alg"), "--cap", "4"]);
    let fresh = run(&cli, &cache);
    assert_eq!(fresh.code, 0);
    let entry = walk(dir.path()).pop().unwrap();
    std::fs::write(&entry, "planted\n").unwrap();
    assert_eq!(run(&cli, &cache).stdout, "planted\n");
    let bypass = Cli::parse_from(["tannaka", "--no-cache", "bar", &data("dual_numbers.alg"), "--cap", "4"]);
    assert_eq!(run(&bypass, &cache).stdout, fresh.stdout);
    // the cache key depends on the file contents, not its path
    let copy = dir.path().join("copy.alg");
    std::fs::copy(data("dual_numbers.alg"), &copy).unwrap();
    let moved = Cli::parse_from(["tannaka", "bar", copy.to_str().unwrap(), "--cap", "4"]);
    assert_eq!(run(&moved, &cache).stdout, "planted\n");
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else if p.extension().is_some_and(|x| x == "out") {
            out.push(p);
        }
    }
    out.sort();
    out
}
