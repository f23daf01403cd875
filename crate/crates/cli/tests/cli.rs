use std::path::Path;
use std::process::{Command, Output};

use symlie::io::{parse_doc, to_json};

fn symlie(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlie"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn catalog_list_names_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let o = symlie(&["catalog", "list"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for name in [
        "g2",
        "so",
        "sl",
        "octonions",
        "magic-square",
        "cube",
        "octonion-s4",
    ] {
        assert!(stdout(&o).lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn built_documents_round_trip_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    for (name, param) in [
        ("g2", None),
        ("so-jts", Some("5")),
        ("cube", None),
        ("hurwitz", Some("4")),
    ] {
        let mut args = vec!["build", name, "--out", "a.json"];
        if let Some(p) = param {
            args.extend(["--param", p]);
        }
        let o = symlie(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        let text = std::fs::read_to_string(dir.path().join("a.json")).unwrap();
        let doc = parse_doc(&text).unwrap();
        assert_eq!(to_json(&doc) + "\n", text, "{name}");
    }
    let a = stdout(&symlie(&["catalog", "build", "g2"], dir.path()));
    let b = stdout(&symlie(&["build", "g2"], dir.path()));
    assert_eq!(a, b);
}

#[test]
fn g2_decomposes_as_three_five_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = symlie(
        &["decompose", "--group", "s3", "--catalog", "g2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("m_U = 3, m_U' = 5, m_W = 3"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn mutated_gm_fails_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        symlie(&["build", "g2-gm", "--out", "gm.json"], dir.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        symlie(&["check", "gm", "gm.json"], dir.path())
            .status
            .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(dir.path().join("gm.json")).unwrap();
    let mut doc = parse_doc(&text).unwrap();
    doc.tri.as_mut().unwrap()[0].4 = "5".into();
    std::fs::write(dir.path().join("bad.json"), to_json(&doc)).unwrap();
    let o = symlie(
        &["check", "gm", "bad.json", "--json", "report.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL gm"));
    assert!(stdout(&o).contains("witness"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], false);
    assert!(!report["results"][0]["witnesses"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn malformed_input_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("broken.json"),
        "{\"dim\": 2,\n \"bil\": [[0, 1, 1, \"1\"],]}",
    )
    .unwrap();
    let o = symlie(&["check", "jacobi", "broken.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    std::fs::write(
        dir.path().join("range.json"),
        r#"{"dim": 2, "bil": [[0, 1, 7, "1"]]}"#,
    )
    .unwrap();
    let o = symlie(&["check", "jacobi", "range.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bil[0]"));

    assert_eq!(
        symlie(&["check", "jacobi", "missing.json"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        symlie(&["build", "no-such-algebra"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(symlie(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn e6_from_the_magic_square() {
    let dir = tempfile::tempdir().unwrap();
    let o = symlie(
        &["build", "magic-square", "--dim", "8", "--out", "e6.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = symlie(&["check", "jacobi", "e6.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS jacobi: dim 78"), "{}", stdout(&o));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        let o = symlie(
            &["check", "action", "--catalog", "cube", "--json", out],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let (a, b) = (run("r.json"), run("r.json"));
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(report["input_digest"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
    assert_eq!(report["command"][0], "check");
    assert!(report.get("timing_seconds").is_none());

    let o = symlie(
        &[
            "tetra", "scodim", "--degree", "4", "--json", "t.json", "--timing",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert!(report["timing_seconds"].is_number());
    assert_eq!(report["results"][0]["detail"]["degree"], 4);
}

#[test]
fn g_of_m_and_extraction_invert_each_other() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["g2-gm", "o0"] {
        assert_eq!(
            symlie(&["build", name, "--out", "m.json"], dir.path())
                .status
                .code(),
            Some(0)
        );
        let o = symlie(
            &["build", "g-of-m", "m.json", "--out", "g.json"],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let o = symlie(&["check", "jacobi", "g.json"], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let expected_dim = if name == "o0" { "dim 28" } else { "dim 14" };
        assert!(stdout(&o).contains(expected_dim), "{}", stdout(&o));
        assert_eq!(
            symlie(
                &["extract", "gm", "g.json", "--out", "back.json"],
                dir.path()
            )
            .status
            .code(),
            Some(0)
        );
        let original = parse_doc(&std::fs::read_to_string(dir.path().join("m.json")).unwrap())
            .unwrap()
            .gm()
            .unwrap();
        let back = parse_doc(&std::fs::read_to_string(dir.path().join("back.json")).unwrap())
            .unwrap()
            .gm()
            .unwrap();
        assert_eq!(back.bil, original.bil, "{name}");
        assert_eq!(back.tri, original.tri, "{name}");
    }
}

#[test]
fn nlrta_pipeline_on_the_cube() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        symlie(&["build", "cube", "--out", "cube.json"], dir.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        symlie(
            &["extract", "nlrta", "cube.json", "--out", "a.json"],
            dir.path()
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        symlie(&["check", "nlrta", "a.json"], dir.path())
            .status
            .code(),
        Some(0)
    );
    let o = symlie(&["build", "g-from-nlrta", "a.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("PASS klein-grading"), "{}", stderr(&o));
}

#[test]
fn tetra_commands_pass() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["tetra", "check-uiuj"],
        vec!["tetra", "vs", "--s", "-3..3"],
        vec!["tetra", "vclosure", "--depth", "6"],
        vec!["tetra", "scodim", "--degree", "10"],
        vec!["tetra", "relations", "--bound", "1"],
    ] {
        let o = symlie(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    assert_eq!(
        symlie(&["tetra", "vs", "--s", "3..-3"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn malcev_check_separates_examples() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        symlie(&["check", "malcev", "--catalog", "o0"], dir.path())
            .status
            .code(),
        Some(0)
    );
    let o = symlie(&["check", "jacobi", "--catalog", "o0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
