use koszul::cli::{run_with, EXIT_DISAGREE, EXIT_INPUT, EXIT_NOT_KOSZUL, EXIT_OK};
use std::io::Write;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["koszul"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn tor_of_exterior_on_two_generators() {
    let f = temp_json(r#"{"l":3,"mode":"super","generators":["x","y"],"relations":[]}"#);
    let (code, out, _) = run(&[
        "tor",
        path(&f),
        "--format",
        "json",
        "--max-i",
        "4",
        "--max-j",
        "4",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for i in 0..=4 {
        for j in 0..=4 {
            let want = if i == j { i + 1 } else { 0 };
            assert_eq!(v["dims"][i][j], want, "({i},{j})");
        }
    }
}

#[test]
fn tor_of_triangle_has_a_23_entry() {
    let f = temp_json(r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["a","c"]]}"#);
    let (code, out, _) = run(&[
        "tor",
        path(&f),
        "--format",
        "json",
        "--max-i",
        "3",
        "--max-j",
        "3",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims"][2][3], 1);
}

#[test]
fn missing_file_and_bad_json_exit_2() {
    assert_eq!(run(&["tor", "/definitely/not/here.json"]).0, EXIT_INPUT);
    let f = temp_json("{not json");
    assert_eq!(run(&["check", path(&f)]).0, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).0, EXIT_INPUT);
}

#[test]
fn bound_beyond_truncation_is_raised_not_rejected() {
    let f = temp_json(r#"{"l":2,"mode":"super","generators":["x"],"relations":[]}"#);
    let (code, _, _) = run(&["tor", path(&f), "--max-n", "2", "--max-j", "4", "--max-i", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(run(&["tor", path(&f), "--max-i", "1"]).0, EXIT_INPUT);
}

#[test]
fn local_model_round_trips_through_check() {
    let (code, datum, _) = run(&["gen", "local", "--case", "symplectic", "--dim", "2", "--l", "3"]);
    assert_eq!(code, EXIT_OK);
    let f = temp_json(&datum);
    let (code, out, _) = run(&["check", path(&f), "--max-i", "5", "--max-j", "5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("AGREE"));
}

#[test]
fn four_cycle_is_consistently_not_koszul() {
    let f = temp_json(r#"{"vertices":["a","b","c","d"],"edges":[["a","b"],["b","c"],["c","d"],["a","d"]]}"#);
    let (code, out, _) = run(&["check", path(&f), "--max-i", "4", "--max-j", "5"]);
    assert_eq!(code, EXIT_NOT_KOSZUL, "{out}");
    assert!(out.contains("AGREE"));
}

#[test]
fn corrupted_datum_is_rejected() {
    let (_, datum, _) = run(&[
        "gen",
        "global-symplectic",
        "--s-places",
        "2",
        "--outside",
        "2",
        "--seed",
        "4",
    ]);
    let mut v: serde_json::Value = serde_json::from_str(&datum).unwrap();
    let g = &mut v["generators"][1];
    let key = g["frob"].as_object().unwrap().keys().nth(1).unwrap().clone();
    let old = g["frob"][&key].as_u64().unwrap();
    g["frob"][&key] = ((old + 1) % 3).into();
    let f = temp_json(&v.to_string());
    let (code, _, err) = run(&["check", path(&f)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("reciprocity"), "{err}");
}

#[test]
fn noroot_rejects_l_2() {
    let (code, _, err) = run(&["gen", "noroot", "--l", "2"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("odd"));
}

#[test]
fn gen_is_deterministic_and_canonical() {
    for kind in ["global-symplectic", "global-general", "annihilator", "noroot"] {
        let a = run(&["gen", kind, "--seed", "7", "--s-places", "2", "--outside", "2"]);
        let b = run(&["gen", kind, "--seed", "7", "--s-places", "2", "--outside", "2"]);
        assert_eq!(a.0, EXIT_OK, "{kind}: {}", a.2);
        assert_eq!(a.1, b.1);
        let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
        assert_eq!(a.1.trim_end(), serde_json::to_string(&v).unwrap());
    }
}

#[test]
fn gen_writes_to_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.json");
    let (code, out, _) = run(&[
        "gen",
        "local",
        "--case",
        "square-nonzero",
        "--l",
        "2",
        "--output",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let (code, _, _) = run(&[
        "check",
        p.to_str().unwrap(),
        "--max-i",
        "4",
        "--max-j",
        "4",
        "--format",
        "json",
    ]);
    assert_ne!(code, EXIT_DISAGREE);
    assert_ne!(code, EXIT_INPUT);
}
