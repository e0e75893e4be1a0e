use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use wicks::cli::{run, Outcome, EXIT_OK, EXIT_REJECTED, EXIT_USAGE};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(rel: &str) -> String {
    root().join(rel).to_string_lossy().into_owned()
}

fn wicks(args: &[&str]) -> Outcome {
    run(std::iter::once("wicks").chain(args.iter().copied()))
}

fn result(out: &Outcome) -> Value {
    let cert: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stderr));
    cert["result"].clone()
}

#[test]
fn check_reports_graph_data() {
    let out = wicks(&["wicks", "check", "abcABC"]);
    assert_eq!(out.code, EXIT_OK);
    let r = result(&out);
    assert_eq!(r, serde_json::json!({"is_wicks_form": true, "genus": 1, "v": 2, "e": 3}));
    let out = wicks(&["wicks", "check", "abBA"]);
    assert_eq!(out.code, EXIT_REJECTED);
    assert_eq!(result(&out)["is_wicks_form"], false);
}

#[test]
fn genus_of_a_commutator() {
    let out = wicks(&["genus", "--group", &fixture("groups/free2.json"), "abAB"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(result(&out)["k"], 1);
}

#[test]
fn conjugate_example() {
    let out = wicks(&["conjugate", "--group", &fixture("groups/free2.json"), "ab", "ba"]);
    assert_eq!(out.code, EXIT_OK);
    let r = result(&out);
    assert_eq!((r["conjugator"].as_str(), r["bound"].as_u64()), (Some("a"), Some(4)));
    let out = wicks(&["conjugate", "--group", &fixture("groups/free2.json"), "ab", "aab"]);
    assert_eq!(out.code, EXIT_REJECTED);
}

#[test]
fn extension_example_is_accepted() {
    let args =
        ["extend", "--group", &fixture("groups/free3.json"), "--plan", &fixture("plans/example_abc.json"), "--n", "3"];
    let out = wicks(&args);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let r = result(&out);
    assert_eq!(r["report"]["F"], "abbAABaaBA");
    assert_eq!((r["report"]["genus"].as_u64(), r["report"]["k"].as_u64()), (Some(3), Some(0)));
    let out = wicks(&[
        "extend",
        "--group",
        &fixture("groups/free3.json"),
        "--plan",
        &fixture("plans/example_abc.json"),
        "--n",
        "1",
    ]);
    assert_eq!(out.code, EXIT_REJECTED);
}

#[test]
fn subdivide_in_a_tree() {
    let out = wicks(&["subdivide", "--group", &fixture("groups/free2.json"), "aab", "B", "Ab", "BA"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(result(&out)["max_dist"], 0);
}

#[test]
fn usage_errors_exit_one() {
    let group = fixture("groups/free2.json");
    for args in [
        vec!["bogus"],
        vec!["wicks", "check", "ab1"],
        vec!["genus", "--group", "/nonexistent.json", "ab"],
        vec!["wicks", "check", "abAB", "--frobnicate"],
        vec!["forms", "synth", "--group", &group, "--variant", "9"],
    ] {
        let out = wicks(&args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty() && !out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_byte_stable() {
    let group = fixture("groups/free2.json");
    for args in [
        vec!["wicks", "enumerate", "--genus", "1"],
        vec!["surface", "abcABC"],
        vec!["forms", "match", "--group", &group, "abAB"],
        vec!["genus", "--group", &group, "abAB", "ba"],
    ] {
        assert_eq!(wicks(&args), wicks(&args), "{args:?}");
    }
}

#[test]
fn certificates_list_assumptions() {
    let free = wicks(&["conjugate", "--group", &fixture("groups/free2.json"), "ab", "ba"]);
    let cert: Value = serde_json::from_str(&free.stdout).unwrap();
    assert!(!cert["assumptions"].as_array().unwrap().is_empty());
    let surface = wicks(&["conjugate", "--group", &fixture("groups/surface2.json"), "--delta", "1", "ab", "ba"]);
    let cert: Value = serde_json::from_str(&surface.stdout).unwrap_or_else(|e| panic!("{e}: {}", surface.stderr));
    let assumptions: Vec<&str> = cert["assumptions"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
    assert!(assumptions.contains(&"dehn-presentation-soundness"), "{assumptions:?}");
    assert!(assumptions.contains(&"delta-declared=1"));
    assert_eq!(cert["version"], "wicks-certificate/1");
}

#[test]
fn synthesized_certificates_re_verify() {
    let dir = std::env::temp_dir().join(format!("wicks-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let group = fixture("groups/free2.json");
    for (variant, seed) in [("1", "X=a,Y=b"), ("2", "xi1=a,u=b,A2=ba"), ("4", "xi1=a,rho1=a,B2=b")] {
        let out = wicks(&["forms", "synth", "--group", &group, "--variant", variant, "--seed", seed]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        let r = result(&out);
        assert_eq!(r["verified"], true);
        let path = dir.join(format!("form{variant}.json"));
        std::fs::write(&path, r["form"].to_string()).unwrap();
        let again = wicks(&["forms", "verify", "--group", &group, "--form", path.to_str().unwrap()]);
        assert_eq!(again.code, EXIT_OK, "{}", again.stderr);
        assert_eq!(result(&again)["verified"], true);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_wicks");
    let ok = Command::new(bin).args(["wicks", "check", "abAB"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), wicks(&["wicks", "check", "abAB"]).stdout);
    let rejected = Command::new(bin).args(["wicks", "check", "aabb"]).output().unwrap();
    assert_eq!(rejected.status.code(), Some(EXIT_REJECTED));
    let usage = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    assert!(!usage.stderr.is_empty());
}
