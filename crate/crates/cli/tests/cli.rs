use std::path::PathBuf;
use std::process::Command;

use crystal_cli::execute;
use crystal_core::datum::{holds_at, CheckKind, Witness};
use crystal_core::{examples, CrystalDatum, GradedRing};
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["crystal", "--json"];
    argv.extend_from_slice(args);
    let out = execute(argv);
    let v = serde_json::from_str(&out.output).unwrap_or_else(|e| panic!("{e}: {}", out.output));
    (out.code, v)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name} in {report}"))
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("crystal-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn fixtures_match_library_examples() {
    let pairs = [
        ("gaussian.json", examples::gaussian()),
        ("quaternion.json", examples::quaternion()),
        ("skew-conjugation.json", examples::skew_conjugation()),
        ("z4-alpha2.json", examples::z4_alpha2()),
        ("f2c2.json", examples::f2c2()),
        ("f3c2.json", examples::f3c2()),
        ("pair-swap.json", examples::pair_swap()),
    ];
    for (name, d) in pairs {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let f = CrystalDatum::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(f.ring(), d.ring(), "{name}");
        assert_eq!(f.group(), d.group(), "{name}");
        assert_eq!(f.sigmas(), d.sigmas(), "{name}");
        assert_eq!(f.alpha_table(), d.alpha_table(), "{name}");
    }
}

#[test]
fn validate_gaussian_passes() {
    let (code, r) = run_json(&["validate", &fixture("gaussian.json")]);
    assert_eq!(code, 0);
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
    assert_eq!(r["summary"]["crystalline"], true);
    assert!(r["fingerprint"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn mul_gaussian_basis_squares_to_minus_one() {
    let (code, r) = run_json(&["mul", &fixture("gaussian.json"), "[[1,1]]", "[[1,1]]"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["product"], json!([[0, -1]]));
    let text = execute([
        "crystal",
        "mul",
        &fixture("gaussian.json"),
        "[[1,1]]",
        "[[1,1]]",
    ])
    .output;
    assert!(text.contains("[[0,-1]]"), "{text}");
}

#[test]
fn semiprime_f2c2_reports_witness() {
    let out = execute(["crystal", "semiprime", &fixture("f2c2.json")]);
    assert_eq!(out.code, 0);
    assert!(
        out.output
            .contains("semiprime: false, witness [[0,1],[1,1]]"),
        "{}",
        out.output
    );

    let (_, r) = run_json(&["semiprime", &fixture("f2c2.json")]);
    assert_eq!(r["summary"]["semiprime"], false);
    let w = &r["result"]["witness"];
    // x·a·x = 0 for every a, recomputed through the library.
    let a = GradedRing::new(examples::f2c2()).unwrap();
    let x = a.parse_element(w).unwrap();
    for y in a.elements(64).unwrap() {
        assert!(a.mul(&a.mul(&x, &y), &x).is_zero());
    }

    let (code, r) = run_json(&["semiprime", &fixture("f3c2.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["semiprime"], true);
}

#[test]
fn validation_witnesses_replay() {
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("quaternion.json")).unwrap())
            .unwrap();
    v["alpha"][1][2] = json!(3);
    let path = temp_file("bad-quaternion.json", &v.to_string());
    let (code, r) = run_json(&["validate", &path]);
    assert_eq!(code, 0, "a failing datum is a verdict, not an error");
    assert_eq!(r["summary"]["pre_crystalline"], false);
    let d = CrystalDatum::from_json(&v).unwrap();
    let c = check(&r, "cocycle");
    assert_eq!(c["status"], "fail");
    let w = &c["witness"];
    let triple = Witness::Triple {
        g: w["g"].as_u64().unwrap() as usize,
        h: w["h"].as_u64().unwrap() as usize,
        t: w["t"].as_u64().unwrap() as usize,
    };
    assert!(!holds_at(&d, CheckKind::Cocycle, &triple));
}

#[test]
fn torsion_reports_disagreement_without_failing() {
    let (code, r) = run_json(&["torsion", &fixture("z4-alpha2.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["agreement"], false);
    assert_eq!(
        check(&r, "condition3_alpha_inverse_pair_regular")["witness"]["r"],
        2
    );
    assert_eq!(check(&r, "condition6_sigma_bijective")["status"], "pass");
}

#[test]
fn inverse_over_fraction_field() {
    let d = json!({
        "ring": {"type": "integer"},
        "group": {"type": "cyclic", "order": 2},
        "sigma": ["identity", "identity"],
        "alpha": [[1, 1], [1, 2]]
    });
    let path = temp_file("zsqrt2.json", &d.to_string());
    let (code, r) = run_json(&["inverse", &path, "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["inverse"], json!([[1, [1, 2]]]));
    assert_eq!(r["summary"]["lifted_to_fraction_field"], true);

    let (code, r) = run_json(&["inverse", &fixture("skew-conjugation.json"), "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["inverse"], json!([[1, [1, 0]]]));
}

#[test]
fn ore_hand_example() {
    let (code, r) = run_json(&[
        "ore",
        &fixture("skew-conjugation.json"),
        "[[1,[0,1]]]",
        "[1,1]",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["r_prime"], json!([[1, [-1, 1]]]));
    assert_eq!(r["result"]["s_prime"], json!([2, 0]));
    let (_, r) = run_json(&["ore", &fixture("gaussian.json"), "[[1,3]]", "2"]);
    assert_eq!(r["result"]["r_prime"], json!([[1, 6]]));
    assert_eq!(r["result"]["s_prime"], json!(4));
}

#[test]
fn maschke_f3_and_f2() {
    let (code, r) = run_json(&[
        "maschke",
        &fixture("f3c2.json"),
        &fixture("f3c2-regular.module.json"),
        "[[1,1]]",
        "--projection",
        "[[0,0],[1,1]]",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["lambda"], json!([[2, 2], [2, 2]]));
    assert_eq!(check(&r, "input_projection_a_linear")["status"], "fail");
    assert_eq!(
        check(&r, "input_projection_a_linear")["witness"],
        json!({"g": 1, "basis_vector": 0})
    );
    assert_eq!(check(&r, "lambda_a_linear")["status"], "pass");

    let (code, r) = run_json(&[
        "maschke",
        &fixture("f2c2.json"),
        &fixture("f2c2-regular.module.json"),
        "[[1,1]]",
    ]);
    assert_eq!(code, 2);
    assert!(r["error"]["message"]
        .as_str()
        .unwrap()
        .contains("not invertible"));

    let (code, r) = run_json(&[
        "maschke",
        &fixture("gaussian.json"),
        &fixture("gaussian-regular.module.json"),
        "[[1,0],[0,1]]",
    ]);
    assert_eq!(code, 2, "2 is not a unit in Z: {r}");
    assert_eq!(check(&r, "module_compatibility")["status"], "pass");
}

#[test]
fn maschke_rejects_unstable_submodule_and_bad_projection() {
    let (code, r) = run_json(&[
        "maschke",
        &fixture("f3c2.json"),
        &fixture("f3c2-regular.module.json"),
        "[[1,0]]",
    ]);
    assert_eq!(code, 2);
    assert!(r["error"]["message"]
        .as_str()
        .unwrap()
        .contains("not stable"));
    let (code, _) = run_json(&[
        "maschke",
        &fixture("f3c2.json"),
        &fixture("f3c2-regular.module.json"),
        "[[1,1]]",
        "--projection",
        "[[1,1],[1,1]]",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn lemma14_on_fixtures() {
    for name in ["gaussian.json", "quaternion.json", "skew-conjugation.json"] {
        let (code, r) = run_json(&["lemma14", &fixture(name), "--sample", "-1"]);
        assert_eq!(code, 0, "{r}");
        assert_eq!(r["summary"]["all_passed"], true);
    }
    let (code, r) = run_json(&["lemma14", &fixture("z4-alpha2.json")]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "precondition");
}

#[test]
fn fuzz_examples() {
    let (code, r) = run_json(&[
        "fuzz",
        &fixture("z4-alpha2.json"),
        "--family",
        "cyclic",
        "--seed",
        "1",
        "--trials",
        "50",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["passed"], 50);
    assert!(r["summary"]["torsion_mismatches"].as_u64().unwrap() >= 1);

    let (code, r) = run_json(&[
        "fuzz",
        &fixture("pair-swap.json"),
        "--family",
        "skew",
        "--seed",
        "2",
        "--trials",
        "20",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["passed"], 20);

    let (code, r) = run_json(&["fuzz", &fixture("f3c2.json"), "--family", "skew"]);
    assert_eq!(code, 2, "Z/3 has no nontrivial automorphism: {r}");
    let (code, _) = run_json(&["fuzz", &fixture("gaussian.json")]);
    assert_eq!(code, 2);
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(execute(["crystal", "frobnicate"]).code, 2);
    assert_eq!(execute(["crystal", "validate"]).code, 2);
    assert_eq!(
        execute(["crystal", "validate", "/nonexistent/datum.json"]).code,
        2
    );
    let garbage = temp_file("garbage.json", "{not json");
    assert_eq!(execute(["crystal", "validate", &garbage]).code, 2);
    let (code, r) = run_json(&["mul", &fixture("gaussian.json"), "[[5,1]]", "[[0,1]]"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "malformed");
    let (code, _) = run_json(&["mul", &fixture("gaussian.json"), "[[0,\"x\"]]", "[[0,1]]"]);
    assert_eq!(code, 2);
    let (code, _) = run_json(&["semiprime", &fixture("f3c2.json"), "--max-size", "4"]);
    assert_eq!(code, 2);
    assert_eq!(execute(["crystal", "--help"]).code, 0);
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_crystal");
    let out = Command::new(bin)
        .args(["semiprime", &fixture("f2c2.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("semiprime: false"));
    let out = Command::new(bin)
        .args(["inverse", &fixture("z4-alpha2.json"), "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
}

#[test]
fn json_output_is_stable_in_process() {
    let args = [
        "fuzz",
        &fixture("z4-alpha2.json"),
        "--seed",
        "9",
        "--trials",
        "64",
    ];
    let first = run_json(&args).1;
    for _ in 0..3 {
        assert_eq!(run_json(&args).1, first);
    }
    let other = run_json(&[
        "fuzz",
        &fixture("z4-alpha2.json"),
        "--seed",
        "10",
        "--trials",
        "64",
    ])
    .1;
    assert_ne!(other["result"]["trials"], first["result"]["trials"]);
}
