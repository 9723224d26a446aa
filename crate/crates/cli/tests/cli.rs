use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use toric_cohom::cohomology::{cohomology_table, CohomologyTable, DegreeBox};
use toric_cohom::{catalog, MVec, VirtualPolyhedron};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-cohom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn f1() -> String {
    data("f1.json").display().to_string()
}

fn blowup() -> String {
    data("blowup.json").display().to_string()
}

/// Rows of a TSV table as `(m, h)`, header skipped.
fn rows(text: &str, rank: usize) -> Vec<(Vec<i64>, Vec<usize>)> {
    text.lines()
        .skip(1)
        .map(|line| {
            let cells: Vec<&str> = line.split('\t').collect();
            (
                cells[..rank].iter().map(|c| c.parse().unwrap()).collect(),
                cells[rank..].iter().map(|c| c.parse().unwrap()).collect(),
            )
        })
        .collect()
}

fn write_problem(dir: &tempfile::TempDir, name: &str, json: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p.display().to_string()
}

#[test]
fn example_files_validate() {
    for file in [f1(), blowup()] {
        let o = run(&["validate", &file]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("ok"));
    }
}

#[test]
fn non_pointed_cone_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_problem(
        &dir,
        "line.json",
        r#"{"fan": {"rays": [[1,0],[-1,0],[0,1],[0,-1]], "max_cones": [[0,1],[0,2],[1,3]]},
            "bundles": {}}"#,
    );
    let o = run(&["validate", &file]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("fan: cone 0 is not pointed"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn mismatched_tail_is_a_compatibility_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("f1.json")).unwrap().replace(
        r#""O": { "plus": [[0, 0]] }"#,
        r#""O": { "plus": { "points": [[0, 0]], "tail_rays": [[1, 0]] } }"#,
    );
    let file = write_problem(&dir, "f1.json", &text);
    let o = run(&["validate", &file]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("bundles.O.plus: not compatible"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn syntax_errors_report_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_problem(
        &dir,
        "bad.json",
        "{\n  \"fan\": {\n    \"rays\": [[0, 1],\n",
    );
    let o = run(&["validate", &file]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.json:line "), "{}", stderr(&o));
}

#[test]
fn global_sections_of_two_b_minus_a() {
    let o = run(&["cohomology", &f1(), "2B-A"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("m1\tm2\th0\th1\th2"));
    assert_eq!(
        rows(&text, 2),
        vec![
            (vec![0, 1], vec![1, 0, 0]),
            (vec![0, 2], vec![1, 0, 0]),
            (vec![1, 2], vec![1, 0, 0]),
        ]
    );
}

#[test]
fn obstruction_of_a_minus_two_b() {
    let o = run(&["cohomology", &f1(), "A-2B", "--oracle", "all"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&stdout(&o), 2), vec![(vec![0, -1], vec![0, 1, 0])]);
}

#[test]
fn blown_up_plane_needs_a_box() {
    let o = run(&["cohomology", &blowup(), "2E"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("unbounded"));

    let o = run(&[
        "cohomology",
        &blowup(),
        "2E",
        "--box",
        "-3,-3:3,3",
        "--oracle",
        "all",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = rows(&stdout(&o), 2);
    let h1: Vec<_> = table.iter().filter(|(_, h)| h[1] > 0).collect();
    assert_eq!(h1, vec![&(vec![-1, -1], vec![0, 1, 0])]);
    // 2E has sections exactly where the shifted generators (0,2), (2,0) stay in the quadrant
    let mut expected = Vec::new();
    for x in -3..=3i64 {
        for y in -3..=3i64 {
            if [[0, 2], [2, 0]]
                .iter()
                .all(|q| q[0] + x >= 0 && q[1] + y >= 0)
            {
                expected.push(vec![x, y]);
            }
        }
    }
    let h0: Vec<Vec<i64>> = table
        .iter()
        .filter(|(_, h)| h[0] > 0)
        .map(|(m, _)| m.clone())
        .collect();
    assert_eq!(h0, expected);
}

#[test]
fn json_tables_round_trip() {
    let o = run(&["cohomology", &f1(), "A-4B", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let parsed: CohomologyTable = serde_json::from_str(&stdout(&o)).unwrap();
    let again: CohomologyTable =
        serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
    assert_eq!(parsed, again);

    let l = VirtualPolyhedron::new(
        catalog::f1_a(),
        catalog::f1_b().dilate(4),
        std::sync::Arc::new(catalog::hirzebruch1()),
    )
    .unwrap();
    let direct = cohomology_table(&l, parsed.degree_box()).unwrap();
    assert_eq!(parsed, direct);
    assert_eq!(direct.get(&MVec::from([-1, -3])), vec![0, 0, 1]);
}

#[test]
fn fields_and_covers_from_flags() {
    let box_arg = DegreeBox::cube(2, -3, 3).unwrap().to_string();
    let file = f1();
    let base = run(&["cohomology", &file, "-2A", "--box", &box_arg]);
    for extra in [["--field", "fp:7"], ["--cover", "all"]] {
        let mut args = vec!["cohomology", &file, "-2A", "--box", &box_arg];
        args.extend(extra);
        let o = run(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o), stdout(&base));
    }
    assert_eq!(rows(&stdout(&base), 2), vec![(vec![-1, 0], vec![0, 1, 0])]);
    let o = run(&["cohomology", &f1(), "-2A", "--field", "fp:8"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exceptional_examples() {
    let file = f1();
    for seq in [["O", "A", "B", "A+B"], ["O", "B", "A+B", "2B"]] {
        let mut args = vec!["exceptional", file.as_str()];
        args.extend(seq);
        let o = run(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o).trim(), "exceptional (reverse)");
    }
    let o = run(&["exceptional", &f1(), "A", "2B"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "Ext^1(2B, A) = 1 at (0,-1)\nnot exceptional (reverse)\n"
    );
    let o = run(&["exceptional", &f1(), "O", "A", "--direction", "forward"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nef_decomposition() {
    let o = run(&["nef-decompose", &f1(), "--divisor", "0,0,-2,1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("multiple\t2\n"), "{text}");
    assert!(text.contains("plus\t(0,0) (3,0)\n"), "{text}");

    let o = run(&["nef-decompose", &blowup(), "--bundle", "-E"]);
    assert!(stdout(&o).contains("multiple\t0\n"));
}

#[test]
fn renders_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for out in [&a, &b] {
        let o = run(&[
            "render",
            &blowup(),
            "2E",
            "--degree",
            "-1,-1",
            "--box",
            "-3,-3:3,3",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert!(svg.starts_with("<svg"));
    // the shifted quadrant has its apex at (1,1)
    assert!(svg.contains(r#"<polygon class="plus" points="320.00,120.00 320.00,0.00 200.00,0.00 200.00,120.00"/>"#), "{svg}");
    assert!(svg.contains("Δ⁻ ∖ (Δ⁺ − m)"));
}

#[test]
fn empty_difference_is_labelled_as_a_section() {
    let o = run(&["render", &f1(), "2B-A", "--degree", "0,1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("H⁰ contribution"));
    let o = run(&["render", &f1(), "2B-A", "--degree", "1,1"]);
    assert!(!stdout(&o).contains("H⁰ contribution"));
}

#[test]
fn rendering_needs_rank_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_problem(
        &dir,
        "p1.json",
        r#"{"fan": {"rays": [[1],[-1]], "max_cones": [[0],[1]]},
            "bundles": {"O(1)": {"plus": [[0],[1]]}}}"#,
    );
    let o = run(&["cohomology", &file, "O(1)"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        rows(&stdout(&o), 1),
        vec![(vec![0], vec![1, 0]), (vec![1], vec![1, 0])]
    );
    let o = run(&["render", &file, "O(1)", "--degree", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("rank 2"));
}

#[test]
fn valid_files_never_panic() {
    let mut commands: Vec<Vec<String>> = Vec::new();
    for (file, bundles) in [
        (
            f1(),
            vec!["O", "A", "B", "A+B", "2B", "2B-A", "A-2B", "A-4B", "-2A"],
        ),
        (blowup(), vec!["O", "-E", "-2E", "2E"]),
    ] {
        for b in &bundles {
            let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            commands.push(s(&[
                "cohomology",
                &file,
                b,
                "--oracle",
                "all",
                "--box",
                "-2,-2:2,2",
            ]));
            commands.push(s(&["cohomology", &file, b, "--format", "json"]));
            commands.push(s(&["nef-decompose", &file, "--bundle", b]));
            commands.push(s(&["render", &file, b, "--degree", "0,0"]));
            commands.push(s(&["exceptional", &file, b, "O"]));
        }
        commands.push(vec!["cohomology".into(), file.clone(), "missing".into()]);
        commands.push(vec![
            "nef-decompose".into(),
            file.clone(),
            "--divisor".into(),
            "1,2".into(),
        ]);
    }
    for args in commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = run(&args);
        let code = o.status.code().expect("exited normally");
        assert!(
            matches!(code, 0 | 1 | 3),
            "{args:?} exited with {code}: {}",
            stderr(&o)
        );
        assert!(!stderr(&o).contains("panicked"), "{args:?}: {}", stderr(&o));
    }
}
