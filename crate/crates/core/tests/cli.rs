//! The `bornmeas` binary: outputs and exit codes.

use std::path::PathBuf;
use std::process::Command;

fn write_doc(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn bornmeas(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bornmeas"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const AB: &str = r#"{"format_version": 1,
  "space": {"kind": "finite_labeled", "labels": ["a", "b"]},
  "atoms": [["a", 2], ["b", "-3"]]}"#;

#[test]
fn total_variation() {
    let f = write_doc("ab.json", AB);
    let (code, out, _) = bornmeas(&["tv", f.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "5\n"));
}

#[test]
fn jordan_parts_and_hahn_sets() {
    let f = write_doc("ab_jordan.json", AB);
    let (code, out, _) = bornmeas(&["jordan", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "positive: {a: 2}\nnegative: {b: 3}\nhahn positive: {a}\nhahn negative: {b}\n"
    );
}

#[test]
fn push_along_mod_two_emits_a_document() {
    let f = write_doc(
        "ints.json",
        r#"{"format_version": 1, "space": {"kind": "integer_line"},
            "atoms": [[0, "1/2"], [1, "1/4"], [2, "1/4"], [-3, 1]]}"#,
    );
    let (code, out, err) = bornmeas(&["push", f.to_str().unwrap(), "--map", "mod:2"]);
    assert_eq!(code, 0, "{err}");
    let g = write_doc("ints_mod2.json", &out);
    let (_, jordan, _) = bornmeas(&["jordan", g.to_str().unwrap()]);
    assert!(jordan.starts_with("positive: {0: 3/4, 1: 5/4}"), "{jordan}");
    let (code, _, err) = bornmeas(&["push", f.to_str().unwrap(), "--map", "proj:0"]);
    assert_eq!(code, 2);
    assert!(err.contains("no built-in morphism"));
}

#[test]
fn kappa_flattens_nested_documents() {
    let f = write_doc(
        "nested.json",
        r#"{"format_version": 1,
            "space": {"kind": "measure_space", "base": {"kind": "finite_labeled", "labels": ["x", "y"]}},
            "atoms": [[{"atoms": [["x", 1]]}, 2], [{"atoms": [["y", 3]]}, -1]]}"#,
    );
    let (code, out, err) = bornmeas(&["kappa", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let g = write_doc("flat.json", &out);
    let (_, tv, _) = bornmeas(&["tv", g.to_str().unwrap()]);
    assert_eq!(tv, "5\n");
    assert!(out.contains("\"-3\""));
}

#[test]
fn integrate_barycenter_and_pettis() {
    let corners = write_doc(
        "corners.json",
        r#"{"format_version": 1, "space": {"kind": "rational_vector", "dimension": 2},
            "atoms": [[[0, 0], "1/4"], [[1, 0], "1/4"], [[0, 1], "1/4"], [[1, 1], "1/4"]]}"#,
    );
    let path = corners.to_str().unwrap();
    assert_eq!(bornmeas(&["barycenter", path]).1, "(1/2, 1/2)\n");
    assert_eq!(bornmeas(&["integrate", path, "--map", "proj:1"]).1, "1/2\n");
    assert_eq!(
        bornmeas(&["integrate", path, "--map", "affine:2;0,1"]).1,
        "(1, 2)\n"
    );
    let (code, out, _) = bornmeas(&["pettis", path, "--functional", "1,-1", "--functional", "1/3,2"]);
    assert_eq!((code, out.as_str()), (0, "(1/2, 1/2)\n"));
    assert_eq!(bornmeas(&["pettis", path, "--functional", "1"]).0, 2);

    let signed = write_doc(
        "signed.json",
        r#"{"format_version": 1, "space": {"kind": "rational_vector", "dimension": 1},
            "atoms": [[[1], 2], [[3], "-1"]]}"#,
    );
    let (code, _, err) = bornmeas(&["barycenter", signed.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("probability"), "{err}");
}

#[test]
fn decimal_rendering_flag() {
    let third = write_doc(
        "third.json",
        r#"{"format_version": 1, "space": {"kind": "integer_line"}, "atoms": [[1, "1/3"], [2, "-1/3"]]}"#,
    );
    let (code, out, _) = bornmeas(&["--decimal", "4", "tv", third.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "0.6667\n"));
    let (_, out, _) = bornmeas(&["demo-centroid", "--region", "triangle:0,0;1,0;0,1", "--resolution", "16", "--decimal", "3"]);
    assert!(out.starts_with("(0.3"), "{out}");
}

#[test]
fn parse_failures_exit_two() {
    let cases = [
        ("bad_syntax.json", "{\"format_version\": 1,\n\"space\": "),
        ("bad_rational.json", r#"{"format_version": 1, "space": {"kind": "integer_line"}, "atoms": [[1, "1/0"]]}"#),
        ("bad_kind.json", r#"{"format_version": 1, "space": {"kind": "rational_vector", "dimension": 2}, "atoms": [[[1], "1"]]}"#),
        ("bad_version.json", r#"{"format_version": 9, "space": {"kind": "integer_line"}, "atoms": []}"#),
    ];
    for (name, text) in cases {
        let f = write_doc(name, text);
        let (code, out, err) = bornmeas(&["tv", f.to_str().unwrap()]);
        assert_eq!(code, 2, "{name}");
        assert!(out.is_empty());
        assert!(err.starts_with("error:"), "{name}: {err}");
    }
    let f = write_doc("bad_syntax2.json", "{\"format_version\": 1,\n\"space\": ");
    let (_, _, err) = bornmeas(&["tv", f.to_str().unwrap()]);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(bornmeas(&["tv", "/no/such/file.json"]).0, 2);
    assert_eq!(bornmeas(&["demo-centroid", "--region", "disc"]).0, 2);
    assert_eq!(bornmeas(&["check-laws", "--cases", "0"]).0, 2);
}

#[test]
fn check_laws_and_centroid_demo() {
    let (code, out, _) = bornmeas(&["check-laws", "--seed", "42", "--cases", "1000"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
    let (code, out, _) = bornmeas(&["check-laws", "--seed", "3", "--cases", "5", "--json"]);
    assert_eq!(code, 0);
    let reports: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 9);
    let (code, out, _) = bornmeas(&["demo-centroid", "--region", "unit-square", "--resolution", "64"]);
    assert_eq!((code, out.as_str()), (0, "(1/2, 1/2)\n"));
}

#[test]
fn integer_overflow_is_an_input_error() {
    let f = write_doc(
        "huge.json",
        r#"{"format_version": 1, "space": {"kind": "integer_line"}, "atoms": [[4611686018427387904, 1]]}"#,
    );
    let (code, _, err) = bornmeas(&["push", f.to_str().unwrap(), "--map", "affine:2;0"]);
    assert_eq!(code, 2);
    assert!(err.contains("64-bit"), "{err}");
    let (code, _, _) = bornmeas(&["push", f.to_str().unwrap(), "--map", "affine:1;-5"]);
    assert_eq!(code, 0);
}
