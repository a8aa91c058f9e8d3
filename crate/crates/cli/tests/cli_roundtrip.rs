//! End-to-end runs of the command-line interface through its public entry
//! point, checking artifacts and exit codes.

use clap::Parser;
use oor_cli::cli::{run, Cli};
use std::path::PathBuf;

fn run_args(args: &[&str]) -> i32 {
    let mut argv = vec!["oor"];
    argv.extend(args);
    run(Cli::parse_from(argv))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oor-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_is_byte_identical_per_spec() {
    let a = tmp("gen-a.json");
    let b = tmp("gen-b.json");
    for out in [&a, &b] {
        let code = run_args(&[
            "gen",
            "--family",
            "random_construction_tree",
            "--size",
            "7",
            "--seed",
            "33",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "generation must be reproducible byte for byte"
    );
}

#[test]
fn check_octahedron_exits_1_with_reason() {
    let g = tmp("octa.json");
    let out = tmp("octa-check.json");
    assert_eq!(
        run_args(&["gen", "--family", "octahedron", "--output", g.to_str().unwrap()]),
        0
    );
    let code = run_args(&[
        "check",
        "--input",
        g.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("inner_degree_violation"), "{text}");
}

#[test]
fn check_fan_exits_0() {
    let g = tmp("fan6.json");
    assert_eq!(
        run_args(&[
            "gen", "--family", "fan", "--size", "6", "--output", g.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(run_args(&["check", "--input", g.to_str().unwrap()]), 0);
    // oracle flag decides identically
    assert_eq!(
        run_args(&["check", "--input", g.to_str().unwrap(), "--oracle"]),
        0
    );
}

#[test]
fn check_gadget_exits_1_with_and_without_oracle() {
    let g = tmp("gadget.json");
    assert_eq!(
        run_args(&["gen", "--family", "triple_k4_gadget", "--output", g.to_str().unwrap()]),
        0
    );
    assert_eq!(run_args(&["check", "--input", g.to_str().unwrap()]), 1);
    assert_eq!(
        run_args(&["check", "--input", g.to_str().unwrap(), "--oracle"]),
        1
    );
}

#[test]
fn draw_then_verify_fan() {
    let g = tmp("fan7.json");
    let d = tmp("fan7-drawing.json");
    let v = tmp("fan7-report.json");
    assert_eq!(
        run_args(&["gen", "--family", "fan", "--size", "7", "--output", g.to_str().unwrap()]),
        0
    );
    assert_eq!(
        run_args(&[
            "draw",
            "--input",
            g.to_str().unwrap(),
            "--output",
            d.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(
        run_args(&[
            "verify",
            "--input",
            d.to_str().unwrap(),
            "--output",
            v.to_str().unwrap(),
        ]),
        0
    );
    let report = std::fs::read_to_string(&v).unwrap();
    assert!(report.contains(r#""verdict": true"#), "{report}");
}

#[test]
fn orient_emits_chord_triples() {
    let g = tmp("diamond.json");
    std::fs::write(
        &g,
        r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0],[0,2]]}"#,
    )
    .unwrap();
    let o = tmp("diamond-orient.json");
    assert_eq!(
        run_args(&[
            "orient",
            "--input",
            g.to_str().unwrap(),
            "--output",
            o.to_str().unwrap(),
        ]),
        0
    );
    let text = std::fs::read_to_string(&o).unwrap();
    assert!(text.contains(r#""->""#), "{text}");
}

#[test]
fn obstacle_svg_for_fan() {
    let g = tmp("fan5.json");
    let d = tmp("fan5-drawing.json");
    let s = tmp("fan5.svg");
    assert_eq!(
        run_args(&["gen", "--family", "fan", "--size", "5", "--output", g.to_str().unwrap()]),
        0
    );
    assert_eq!(
        run_args(&["draw", "--input", g.to_str().unwrap(), "--output", d.to_str().unwrap()]),
        0
    );
    assert_eq!(
        run_args(&[
            "obstacle",
            "--input",
            d.to_str().unwrap(),
            "--format",
            "svg",
            "--output",
            s.to_str().unwrap(),
        ]),
        0
    );
    let svg = std::fs::read_to_string(&s).unwrap();
    assert!(svg.contains("<path"));
    assert!(svg.contains("<svg"));
}

#[test]
fn verify_rejects_trapped_non_edges() {
    // convex square with one chord: the other diagonal never reaches the
    // outer face, so the verdict is false
    let d = tmp("square-drawing.json");
    std::fs::write(
        &d,
        r#"{"points":[["0","0"],["1","0"],["1","1"],["0","1"]],"edges":[[0,1],[1,2],[2,3],[3,0],[0,2]]}"#,
    )
    .unwrap();
    let out = tmp("square-report.json");
    assert_eq!(
        run_args(&[
            "verify",
            "--input",
            d.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]),
        1
    );
    let report = std::fs::read_to_string(&out).unwrap();
    assert!(report.contains(r#""verdict": false"#), "{report}");
}

#[test]
fn malformed_input_exits_2() {
    let g = tmp("broken.json");
    std::fs::write(&g, "{ not json").unwrap();
    assert_eq!(run_args(&["check", "--input", g.to_str().unwrap()]), 2);
    let g2 = tmp("bad-graph.json");
    std::fs::write(&g2, r#"{"n":2,"edges":[[0,5]]}"#).unwrap();
    assert_eq!(run_args(&["check", "--input", g2.to_str().unwrap()]), 2);
}

#[test]
fn non_biconnected_chordal_outerplanar_is_representable() {
    // bowtie: two triangles sharing a vertex
    let g = tmp("bowtie.json");
    std::fs::write(
        &g,
        r#"{"n":5,"edges":[[0,1],[1,2],[2,0],[0,3],[3,4],[4,0]]}"#,
    )
    .unwrap();
    assert_eq!(run_args(&["check", "--input", g.to_str().unwrap()]), 0);
    let d = tmp("bowtie-drawing.json");
    assert_eq!(
        run_args(&["draw", "--input", g.to_str().unwrap(), "--output", d.to_str().unwrap()]),
        0
    );
    assert_eq!(run_args(&["verify", "--input", d.to_str().unwrap()]), 0);
}

#[test]
fn bench_emits_records() {
    let out = tmp("bench.jsonl");
    assert_eq!(
        run_args(&[
            "bench",
            "--family",
            "fan",
            "--sizes",
            "100,1000",
            "--output",
            out.to_str().unwrap(),
        ]),
        0
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains(r#""representable":true"#));
}
