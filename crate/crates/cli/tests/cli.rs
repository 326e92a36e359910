use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coxsolid_cli::batch::BatchDocument;
use coxsolid_cli::report::ReportDocument;
use serde_json::Value;

fn coxsolid() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coxsolid"))
}

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn fixture(name: &str) -> PathBuf {
    tests_dir().join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    coxsolid().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn classify_json(name: &str, extra: &[&str]) -> Value {
    let path = fixture(name);
    let mut args = vec!["classify", "--json", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn golden_reports() {
    for name in [
        "a3",
        "atilde2",
        "triangle_334",
        "pentagon",
        "dinfty_x_triangle",
    ] {
        let got = without_timings(classify_json(&format!("{name}.cox"), &[]));
        let golden_path = tests_dir().join("golden").join(format!("{name}.json"));
        let golden: Value =
            serde_json::from_str(&std::fs::read_to_string(golden_path).unwrap()).unwrap();
        assert_eq!(got, golden, "{name}");
    }
}

#[test]
fn json_round_trips_and_names_agree() {
    for name in [
        "a3",
        "atilde2",
        "triangle_334",
        "pentagon",
        "dinfty_x_triangle",
        "free_triangle",
    ] {
        let v = classify_json(&format!("{name}.cox"), &["--oracle"]);
        let doc: ReportDocument = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(serde_json::to_value(&doc).unwrap(), v, "{name}");
        assert!(doc.predicates.verdict_names_agree(), "{name}");
        assert!(doc.oracle.as_ref().unwrap().passed, "{name}");
    }
}

#[test]
fn text_and_json_carry_the_same_verdicts() {
    for name in ["a3", "pentagon", "dinfty_x_triangle"] {
        let v = classify_json(&format!("{name}.cox"), &[]);
        let o = run(&[
            "classify",
            fixture(&format!("{name}.cox")).to_str().unwrap(),
        ]);
        let text = stdout(&o);
        for (key, value) in v["predicates"].as_object().unwrap() {
            let line = text
                .lines()
                .find(|l| l.starts_with(&format!("{key}: ")))
                .unwrap_or_else(|| panic!("{name}: no {key} line"));
            assert!(
                line.starts_with(&format!("{key}: {value}")),
                "{name}: {line}"
            );
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let a = without_timings(classify_json("dinfty_x_triangle.cox", &["--oracle"]));
    let b = without_timings(classify_json("dinfty_x_triangle.cox", &["--oracle"]));
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn classify_text_examples() {
    let text = stdout(&run(&[
        "classify",
        fixture("pentagon.cox").to_str().unwrap(),
    ]));
    assert!(text.contains("strongly_solid: true"));
    assert!(text.contains("word_hyperbolic: true"));
    assert!(text.contains("amenable: false"));

    let text = stdout(&run(&["classify", fixture("a3.cox").to_str().unwrap()]));
    assert!(text.contains("finite: true"));
    assert!(text.contains("strongly_solid: true"));

    let o = run(&[
        "classify",
        "--explain",
        fixture("dinfty_x_triangle.cox").to_str().unwrap(),
    ]);
    let text = stdout(&o);
    assert!(text.contains("strongly_solid: false"));
    assert!(text.contains("witness: J1={u, v} J2={x, y, z}"));
    assert!(text.contains("{x, y, z} perp={u, v} (infinite)"));
}

#[test]
fn exit_codes() {
    for entry in std::fs::read_dir(tests_dir().join("malformed")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["classify", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{}", path.display());
        assert!(
            String::from_utf8_lossy(&o.stderr).contains("line "),
            "{}",
            path.display()
        );
    }
    assert_eq!(
        run(&["classify", "/nonexistent/file.cox"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["family", "X9"]).status.code(), Some(2));
    assert_eq!(run(&["family", "D3"]).status.code(), Some(2));
    assert_eq!(
        run(&["batch", "--random", "3", "--rank", "4"])
            .status
            .code(),
        Some(2)
    );

    let o = run(&[
        "classify",
        fixture("paracompact_x_dinfty.cox").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));

    // the verdict never shows up in the exit code
    assert_eq!(
        run(&[
            "classify",
            fixture("dinfty_x_triangle.cox").to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn explicit_label_two_warns() {
    let o = run(&["classify", fixture("explicit_two.cox").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning:"));
    assert!(stdout(&o).contains("edges: 0"));
}

#[test]
fn family_command() {
    assert_eq!(
        stdout(&run(&["family", "A3"])),
        "vertices s0 s1 s2\nedge s0 s1 3\nedge s1 s2 3\n"
    );
    assert_eq!(
        stdout(&run(&["family", "I2:7"])),
        "vertices s0 s1\nedge s0 s1 7\n"
    );
    assert_eq!(
        stdout(&run(&["family", "Atilde2", "--prefix", "t"])),
        "vertices t0 t1 t2\nedge t0 t1 3\nedge t0 t2 3\nedge t1 t2 3\n"
    );
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g2t.cox");
    let o = run(&["family", "G2tilde", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(out).unwrap(),
        "vertices s0 s1 s2\nedge s0 s1 6\nedge s1 s2 3\n"
    );
}

#[test]
fn product_command() {
    let o = run(&[
        "product",
        fixture("atilde1.cox").to_str().unwrap(),
        fixture("free_triangle.cox").to_str().unwrap(),
    ]);
    let got = coxsolid_core::parse_diagram(&stdout(&o)).unwrap();
    let want = coxsolid_core::parse_diagram(
        &std::fs::read_to_string(fixture("dinfty_x_triangle.cox")).unwrap(),
    )
    .unwrap();
    // same diagram up to the names of the first factor
    assert_eq!(got.rank(), 5);
    assert_eq!(got.renamed(want.names()).unwrap(), want);

    let dir = tempfile::tempdir().unwrap();
    let a1 = dir.path().join("a1.cox");
    let empty = dir.path().join("empty.cox");
    std::fs::write(&a1, "vertices a\n").unwrap();
    std::fs::write(&empty, "vertices\n").unwrap();
    let o = run(&["product", a1.to_str().unwrap(), a1.to_str().unwrap()]);
    assert_eq!(stdout(&o), "vertices l_a r_a\n");
    let o = run(&[
        "product",
        empty.to_str().unwrap(),
        fixture("a3.cox").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), "vertices a b c\nedge a b 3\nedge b c 3\n");
}

fn batch_json(args: &[&str]) -> (Option<i32>, BatchDocument) {
    let mut all = vec!["batch", "--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    (o.status.code(), serde_json::from_slice(&o.stdout).unwrap())
}

#[test]
fn batch_over_named_families() {
    let dir = tempfile::tempdir().unwrap();
    for f in coxsolid_core::corpus::family_names() {
        let path = dir
            .path()
            .join(format!("{}.cox", f.to_string().replace(':', "_")));
        let o = run(&["family", &f.to_string(), "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (code, doc) = batch_json(&[dir.path().to_str().unwrap()]);
    assert_eq!(code, Some(0));
    assert_eq!(doc.summary.failures, 0);
    assert_eq!(
        doc.summary.inputs,
        coxsolid_core::corpus::family_names().len()
    );
    assert_eq!(doc.summary.amenable, doc.summary.inputs);
    assert_eq!(doc.summary.strongly_solid, doc.summary.inputs);
    let names: Vec<&str> = doc.entries.iter().map(|e| e.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
}

#[test]
fn batch_random_and_failures() {
    let (code, doc) = batch_json(&["--random", "200", "--rank", "6", "--seed", "42"]);
    assert_eq!(code, Some(0));
    assert_eq!(doc.summary.inputs, 200);
    assert_eq!(doc.summary.disagreements, 0);

    let (_, again) = batch_json(&["--random", "200", "--rank", "6", "--seed", "42"]);
    let strip = |d: &BatchDocument| {
        let mut v = serde_json::to_value(d).unwrap();
        for e in v["entries"].as_array_mut().unwrap() {
            if let Some(r) = e["report"].as_object_mut() {
                r.remove("timings");
            }
        }
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&doc), strip(&again));

    let empty = tempfile::tempdir().unwrap();
    let (code, doc) = batch_json(&[empty.path().to_str().unwrap()]);
    assert_eq!(code, Some(0));
    assert_eq!(doc.summary.inputs, 0);

    let (code, doc) = batch_json(&[tests_dir().join("malformed").to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert_eq!(doc.summary.parse_errors, doc.summary.inputs);

    let mixed = tempfile::tempdir().unwrap();
    for name in ["a3.cox", "paracompact_x_dinfty.cox"] {
        std::fs::copy(fixture(name), mixed.path().join(name)).unwrap();
    }
    let (code, doc) = batch_json(&[mixed.path().to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert_eq!(doc.summary.disagreements, 1);

    let o = run(&["batch", "/nonexistent/dir"]);
    assert_eq!(o.status.code(), Some(2));
}
