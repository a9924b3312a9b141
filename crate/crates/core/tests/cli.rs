use std::path::PathBuf;
use std::process::Command;

use chaoprop::cli::{main_with, parse_csp};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(std::iter::once("chaoprop").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn arc_leaves_eq_neq_alone() {
    let file = data("eq_neq.csp");
    let (code, out, err) = call(&["run", &file, "--goal", "arc", "--check-equivalence"]);
    assert_eq!(code, 0, "{err}");
    let before = parse_csp(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(parse_csp(&out).unwrap(), before);
    assert!(err.contains("equivalence: PASS"));
}

#[test]
fn lineq_two_steps_hits_the_limit() {
    let (code, _, err) =
        call(&["run", &data("lineq.csp"), "--reducers", "lineq@c1", "--max-steps", "2", "--trace-values"]);
    assert_eq!(code, 2, "{err}");
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines[0], "step=1 fn=lineq@c1 changed=1 comps=1,2 values=[3..9] | [1..4]");
    assert_eq!(lines[1], "step=2 fn=lineq@c1 changed=1 comps=1 values=[3..8]");
    assert_eq!(lines[2], "outcome=step-limit applications=2");
}

#[test]
fn lineq_converges_without_a_cap() {
    let (code, out, _) = call(&["run", &data("lineq.csp"), "--reducers", "lineq@c1"]);
    assert_eq!(code, 0);
    assert!(out.contains("domain 1 int [3..8]") && out.contains("domain 2 int [1..4]"), "{out}");
}

#[test]
fn omega_needs_the_jump() {
    let (code, out, _) = call(&["omega", "--max-steps", "10"]);
    assert_eq!(code, 2);
    assert!(out.starts_with("value="));
    let (code, out, err) = call(&["omega", "--with-f3", "--mode", "cii", "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(out, "value=ω\n");
    assert!(err.contains("applications=3"), "{err}");
}

#[test]
fn validate_reports_bad_input() {
    let (code, _, err) = call(&["validate", &data("out_of_domain.csp")]);
    assert_eq!(code, 1);
    assert!(err.contains("bad"), "{err}");
    let (code, _, err) = call(&["validate", &data("dup_scheme.csp")]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
    let (code, out, _) = call(&["validate", &data("arc.csp")]);
    assert_eq!((code, out.as_str()), (0, "ok: 2 domains, 2 constraints\n"));
}

#[test]
fn run_rejects_invalid_input_and_arguments() {
    assert_eq!(call(&["run", &data("out_of_domain.csp"), "--goal", "arc"]).0, 1);
    assert_eq!(call(&["run", &data("arc.csp")]).0, 1);
    assert_eq!(call(&["run", &data("arc.csp"), "--goal", "arc", "--reducers", "pi1@lt"]).0, 1);
    assert_eq!(call(&["run", &data("arc.csp"), "--goal", "nonsense"]).0, 1);
    assert_eq!(call(&["run", &data("arc.csp"), "--reducers", "pi9@lt"]).0, 1);
    assert_eq!(call(&["run", "/nonexistent.csp", "--goal", "arc"]).0, 1);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn arc_reduces_and_every_schedule_agrees() {
    let file = data("arc.csp");
    let (code, reference, _) = call(&["run", &file, "--goal", "arc"]);
    assert_eq!(code, 0);
    for mode in ["ci", "cii", "ciq", "ciiq"] {
        for strategy in ["det", "seeded", "lifo", "roundrobin", "block"] {
            let (code, out, err) =
                call(&["run", &file, "--goal", "arc", "--mode", mode, "--strategy", strategy, "--seed", "7", "--check-equivalence"]);
            assert_eq!(code, 0, "{mode}/{strategy}: {err}");
            assert_eq!(out, reference, "{mode}/{strategy}");
        }
    }
}

#[test]
fn explicit_reducers_match_the_arc_goal() {
    let file = data("arc.csp");
    let (_, goal, _) = call(&["run", &file, "--goal", "arc"]);
    let (code, listed, _) = call(&["run", &file, "--reducers", "pi1@lt pi2@lt", "--reducers", "pi1@ne", "--reducers", "pi2@ne"]);
    assert_eq!(code, 0);
    assert_eq!(parse_csp(&listed).unwrap().domains, parse_csp(&goal).unwrap().domains);
}

#[test]
fn json_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let (code, out, _) =
        call(&["run", &data("lineq.csp"), "--reducers", "lineq@c1", "--format", "json", "--output", target.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(j["domains"][0]["lo"], 3);
    assert_eq!(j["domains"][0]["hi"], 8);
    assert_eq!(j["constraints"][0]["id"], "c1");
}

#[test]
fn solutions_enumerates() {
    let (code, out, _) = call(&["solutions", &data("arc.csp")]);
    assert_eq!(code, 0);
    assert_eq!(out, "(1,2)\n");
    let (code, out, _) = call(&["solutions", &data("eq_neq.csp")]);
    assert_eq!((code, out.as_str()), (0, ""));
}

#[test]
fn binary_trace_is_reproducible() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_chaoprop"))
            .args(["run", &data("arc.csp"), "--goal", "arc", "--trace", "--strategy", "seeded", "--seed", "3"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stderr.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn solutions_as_json() {
    let (code, out, _) = call(&["solutions", &data("arc.csp"), "--format", "json"]);
    assert_eq!((code, out.as_str()), (0, "[[1,2]]\n"));
}

#[test]
fn cut_reducer_adds_the_cut() {
    let (code, out, err) = call(&["run", &data("cuts.csp"), "--reducers", "cut@l1,l2;1/2,1/2", "--check-equivalence"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.ends_with("constraint cut1 scheme (1) leq x1 <= 0\n"), "{out}");
    let (code, _, err) = call(&["run", &data("cuts.csp"), "--reducers", "cut@l1,l2;1/2,1/3"]);
    assert_eq!(code, 1);
    assert!(err.contains("x1"), "{err}");
}
