use std::io::Write;
use std::process::{Command, Output, Stdio};

use isograph::{construct_family, parse_graph6, write_graph6, Family};

fn isograph(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_isograph"))
        .args(args)
        .env_remove("ISOGRAPH_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn isograph");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn gen_cocktail_is_the_octahedron() {
    let out = isograph(&["gen", "--family", "cocktail", "--n", "2"], None);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let g = parse_graph6(text.trim()).unwrap();
    assert_eq!(g, construct_family(Family::CocktailParty { n: 2 }).unwrap());
}

#[test]
fn gen_connected_enumeration() {
    let out = isograph(&["gen", "--connected", "4"], None);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
    let out = isograph(&["gen", "--connected", "4", "--labeled"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 38);
}

#[test]
fn embed_tetrahedron_paper_strict() {
    let out = isograph(&["embed", "--graph", "C~", "--space", "sphere", "--dim", "2", "--mode", "paper-strict"], None);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "embeddable");
    let r = v["radius_constraint"]["value"].as_f64().unwrap();
    assert!((r - 1.0 / (-1.0f64 / 3.0).acos()).abs() < 1e-15);
    assert_eq!(v["witness"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn embed_four_cycle_in_euclidean_space_fails() {
    let c4 = write_graph6(&construct_family(Family::Cycle { vertices: 4 }).unwrap()).unwrap();
    let out = isograph(&["embed", "--space", "euclidean", "--dim", "5"], Some(&c4));
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "not_embeddable");
    assert_eq!(v["certificate"]["reason"], "negative_eigenvalue");
}

#[test]
fn embed_output_verifies() {
    let cases: Vec<(Family, Vec<&str>)> = vec![
        (Family::CocktailParty { n: 2 }, vec!["--space", "sphere", "--dim", "2"]),
        (Family::Complete { vertices: 4 }, vec!["--space", "sphere", "--dim", "3", "--radius", "0.8", "--mode", "oracle-extended"]),
        (Family::Complete { vertices: 5 }, vec!["--space", "hyperbolic", "--dim", "4"]),
        (Family::Path { vertices: 5 }, vec!["--space", "hyperbolic", "--dim", "1"]),
        (Family::Path { vertices: 4 }, vec!["--space", "sphere", "--dim", "2", "--radius", "1.5"]),
        (Family::Cycle { vertices: 6 }, vec!["--space", "sphere", "--dim", "2"]),
        (
            Family::CompleteMinusMatching { vertices: 5, matching: 2 },
            vec!["--space", "sphere", "--dim", "2", "--radius", "2/pi"],
        ),
    ];
    for (family, flags) in cases {
        let g6 = write_graph6(&construct_family(family).unwrap()).unwrap();
        let mut args = vec!["embed", "--graph", g6.as_str()];
        args.extend(flags);
        let decision = isograph(&args, None);
        assert_eq!(code(&decision), 0, "{family:?}");
        let text = String::from_utf8(decision.stdout).unwrap();
        let verified = isograph(&["verify", "--embedding", "-", "--graph", &g6], Some(&text));
        assert_eq!(code(&verified), 0, "{family:?}");
        assert_eq!(stdout_json(&verified)["passed"], true);
    }
}

#[test]
fn verify_rejects_wrong_graph() {
    let k4 = isograph(&["embed", "--graph", "C~", "--space", "euclidean", "--dim", "3"], None);
    assert_eq!(code(&k4), 0);
    let text = String::from_utf8(k4.stdout).unwrap();
    // Same vertex count, different metric: the star K_{1,3}.
    let out = isograph(&["verify", "--embedding", "-", "--graph", "CF"], Some(&text));
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["passed"], false);
}

#[test]
fn audit_exit_code_follows_allow_list() {
    let base = ["audit", "--space", "sphere", "--dim", "3", "--radii", "0.8", "--max-vertices", "4"];
    let out = isograph(&base, None);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["discrepancies"], 1);
    assert_eq!(v["summary"]["allow_listed"], 1);

    let mut strict = base.to_vec();
    strict.push("--no-default-allow");
    assert_eq!(code(&isograph(&strict, None)), 1);
}

#[test]
fn audit_csv_is_stable_across_workers() {
    let dir = std::env::temp_dir().join(format!("isograph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut files = Vec::new();
    for workers in ["1", "3"] {
        let path = dir.join(format!("audit-{workers}.csv"));
        let out = isograph(
            &[
                "audit", "--space", "hyperbolic", "--dim", "5", "--max-vertices", "5", "--format", "csv", "--workers",
                workers, "--output", path.to_str().unwrap(),
            ],
            None,
        );
        assert_eq!(code(&out), 0);
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert!(text.starts_with("graph6,vertices,edges,flags,paper_verdict,oracle_verdict,radius,residual,discrepancy\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn audit_reads_a_corpus() {
    let dir = std::env::temp_dir().join(format!("isograph-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("corpus.g6");
    std::fs::write(&path, ">>graph6<<C~\n# star\nCF\n\nEznW\n").unwrap();
    let out = isograph(
        &["audit", "--space", "euclidean", "--dim", "6", "--corpus", path.to_str().unwrap()],
        None,
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["rows"].as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_and_distance() {
    let out = isograph(&["classify", "--graph", "EznW"], None);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["flags"]["is_complete_minus_matching"], true);
    assert_eq!(v["flags"]["matching_size"], 3);
    assert_eq!(v["necessary_form"], serde_json::json!(["cocktail_subgraph"]));

    let out = isograph(&["distance"], Some(r#"{"vertices": 3, "edges": [[0, 1], [1, 2]]}"#));
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["entries"][0][2], 2.0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&isograph(&["classify", "--graph", "C~", "--input", "x"], None)), 2);
    assert_eq!(code(&isograph(&["classify", "--graph", "D?"], None)), 2);
    assert_eq!(code(&isograph(&["classify", "--graph", ":Fa@x^"], None)), 2);
    assert_eq!(code(&isograph(&["distance", "--bogus"], None)), 2);
    assert_eq!(code(&isograph(&["embed", "--graph", "C~", "--space", "sphere", "--dim", "1"], None)), 2);
    assert_eq!(code(&isograph(&["embed", "--graph", "C~", "--space", "sphere", "--dim", "2", "--radius", "-3"], None)), 2);
    assert_eq!(code(&isograph(&["audit", "--space", "sphere", "--dim", "3"], None)), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_isograph"))
        .args(["embed", "--graph", "C~", "--space", "euclidean", "--dim", "3"])
        .env("ISOGRAPH_TOL", "nope")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_override_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_isograph"))
        .args(["embed", "--graph", "C~", "--space", "sphere", "--dim", "2", "--radius", "1/arccos(-1/3)", "--mode", "oracle-extended"])
        .env("ISOGRAPH_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
