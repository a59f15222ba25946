use std::path::PathBuf;
use std::process::Command;

fn glt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_glt"))
}

fn karate() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/karate.edges")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn karate_json_rooted_at_34() {
    let out = glt()
        .arg("--input")
        .arg(karate())
        .args([
            "--importance",
            "degree",
            "--distance",
            "shortest-path",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 34);
    let roots: Vec<_> = nodes
        .iter()
        .filter(|n| n["parent_label"].is_null())
        .collect();
    assert_eq!(roots.len(), 1);
    assert_eq!(roots[0]["label"], "34");
    assert_eq!(roots[0]["importance"], 17.0);
    assert_eq!(v["importance_criterion"], "degree");
    assert_eq!(v["distance_metric"], "shortest-path");
}

#[test]
fn triangle_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(&dir, "tri.edges", "1 2\n2 3\n3 1\n");
    let out = glt()
        .arg("--input")
        .arg(&tri)
        .args(["--importance", "degree", "--distance", "shortest-path"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let root = v["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|n| n["parent_label"].is_null())
        .unwrap();
    assert_eq!(root["label"], "3");
}

#[test]
fn points_cut_writes_partition_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(&dir, "pts.csv", "x\n0\n1\n2\n3\n4\n");
    let out = glt()
        .arg("--input")
        .arg(&pts)
        .args([
            "--kind",
            "points",
            "--importance",
            "density",
            "--dc",
            "1.5",
            "--distance",
            "euclidean",
            "--cut",
            "2",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let communities: std::collections::BTreeSet<_> = text
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(communities.len(), 2);
}

#[test]
fn out_flag_appends_extension() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("forest");
    let status = glt()
        .arg("--input")
        .arg(karate())
        .args(["--format", "newick", "--out"])
        .arg(&stem)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("forest.nwk")).unwrap();
    assert!(text.trim_end().ends_with("34;"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.edges", "a b\nc c\n");
    let out = glt().arg("--input").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = dir.path().join("missing.edges");
    assert_eq!(
        glt().arg("--input").arg(&missing).status().unwrap().code(),
        Some(1)
    );

    let status = glt()
        .arg("--input")
        .arg(karate())
        .args(["--distance", "euclidean"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let out = glt()
        .arg("--input")
        .arg(karate())
        .args(["--importance", "eigenvector", "--max-iter", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("eigenvector") && err.contains("residual"),
        "{err}"
    );
}

#[test]
fn help_lists_defaults() {
    let out = glt().arg("--help").output().unwrap();
    let help = String::from_utf8(out.stdout).unwrap();
    for needle in ["0.85", "0.8", "1e-10", "--cut", "--dc"] {
        assert!(help.contains(needle), "help is missing {needle}:\n{help}");
    }
}
