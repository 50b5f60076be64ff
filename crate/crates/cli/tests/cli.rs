use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/fixtures").join(format!("{name}.pair"))
}

fn csgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csgen")).args(args).env_remove("CSGEN_CONFIG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_prints_sorted_sentences() {
    let p = fixture("pair1");
    let o = csgen(&["generate", "--pair", p.to_str().unwrap(), "--model", "ec0"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 22);
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
    assert!(lines.contains(&"Shanivar neeras hai from that perspective".to_string()));
}

#[test]
fn validate_reports_the_failing_stage() {
    let p = fixture("pair1");
    let p = p.to_str().unwrap();
    let ok =
        csgen(&["validate", "--pair", p, "--model", "ec0", "--sentence", "Shanivar neeras hai from that perspective"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "accepted");
    let bad =
        csgen(&["validate", "--pair", p, "--model", "ec0", "--sentence", "Shanivar neeras hai that perspective se"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(stdout(&bad).trim(), "rejected: position clash");
    let ml = csgen(&[
        "validate",
        "--pair",
        p,
        "--model",
        "ml0",
        "--matrix",
        "l2",
        "--sentence",
        "Shanivar neeras hai that nazariye se",
    ]);
    assert_eq!(ml.status.code(), Some(1));
}

#[test]
fn usage_and_file_errors_exit_with_two() {
    assert_eq!(csgen(&["generate", "--model", "ec0"]).status.code(), Some(2));
    assert_eq!(csgen(&["generate", "--pair", "/nonexistent.pair", "--model", "ec0"]).status.code(), Some(2));
    let p = fixture("pair1");
    assert_eq!(csgen(&["generate", "--pair", p.to_str().unwrap(), "--model", "ec9"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.pair");
    fs::write(&broken, "TREE1: (S (NN a)\nTREE2: (S (NN b))\nALIGN: 0-0\n").unwrap();
    let o = csgen(&["generate", "--pair", broken.to_str().unwrap(), "--model", "ec0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.pair"));
}

#[test]
fn config_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "no_such_key: 1\n").unwrap();
    let p = fixture("pair1");
    let o = Command::new(env!("CARGO_BIN_EXE_csgen"))
        .args(["generate", "--pair", p.to_str().unwrap(), "--model", "ml0"])
        .env("CSGEN_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no_such_key"));

    let open = dir.path().join("open.conf");
    fs::write(&open, "include_monolingual: false\n").unwrap();
    let o = csgen(&["generate", "--pair", p.to_str().unwrap(), "--model", "ec0", "--config", open.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 22);
}

#[test]
fn project_output_is_a_pair_file() {
    let p = fixture("pair2");
    let o = csgen(&["project", "--pair", p.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("TREE1: (S (NP (PRP Our) (NN chance) (IN of) (NP (NN survival))"));
    let dir = tempfile::tempdir().unwrap();
    let again = dir.path().join("again.pair");
    fs::write(&again, &text).unwrap();
    let o2 = csgen(&["project", "--pair", again.to_str().unwrap()]);
    assert_eq!(stdout(&o2), text);

    let trees = csgen(&["project", "--pair", p.to_str().unwrap(), "--dump-trees"]);
    assert_eq!(stdout(&trees).lines().count(), 2);
}

#[test]
fn compare_lists_differences() {
    let p = fixture("pair4");
    let o = csgen(&["compare", "--pair", p.to_str().unwrap(), "--models", "ec1,ml2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("only ec1: 32"), "{text}");
    assert!(text.contains("  Now pour oil in the pan aur heat it"));
    let one = csgen(&["compare", "--pair", p.to_str().unwrap(), "--models", "ec1"]);
    assert_eq!(one.status.code(), Some(2));
}

#[test]
fn report_is_deterministic() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/fixtures");
    let a = csgen(&["report", "--corpus", dir.to_str().unwrap()]);
    let b = csgen(&["report", "--corpus", dir.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("pair1\t6\t11\t4\t3\t22\t22\t8(6)\t32(22)\t28(22)"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 8);
}
