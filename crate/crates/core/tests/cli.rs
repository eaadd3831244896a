use std::process::Command;

fn cloudlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cloudlab"))
        .args(args)
        .env_remove("CLOUDLAB_TOL")
        .env_remove("CLOUDLAB_STATE_CAP")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn firefly_state_count() {
    assert_eq!(
        cloudlab(&["states", "dataset:firefly", "--type", "II", "--count"]),
        (0, "5\n".into(), String::new())
    );
    assert_eq!(
        cloudlab(&["states", "dataset:firefly", "--type", "I"]).1,
        "32\n"
    );
}

#[test]
fn classify_tifs38() {
    let (code, out, _) = cloudlab(&[
        "classify",
        "dataset:tifs38",
        "--a",
        "a",
        "--b",
        "b",
        "--type",
        "III",
    ]);
    assert_eq!((code, out.as_str()), (0, "TIFS\n"));
}

#[test]
fn broken_representation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.cloud");
    std::fs::write(
        &path,
        "cloud broken\ncontext a b c\nvector a = (1, 0, 0)\nvector b = (1, 1, 0)\nvector c = (0, 0, 1)\n",
    )
    .unwrap();
    let (code, out, _) = cloudlab(&["verify-rep", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(
        out.contains("violation adjacent-not-orthogonal a b dot=1"),
        "{out}"
    );
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(cloudlab(&["frobnicate"]).0, 2);
    assert_eq!(cloudlab(&["states", "/definitely/not/here.cloud"]).0, 2);
    assert_eq!(cloudlab(&["states", "dataset:nope"]).0, 2);
    assert_eq!(cloudlab(&["verify-rep", "dataset:bug"]).0, 2);
    assert_eq!(cloudlab(&["--help"]).0, 0);
}

#[test]
fn claims_map_to_exit_codes() {
    assert_eq!(cloudlab(&["ks-check", "dataset:triangle"]).0, 0);
    assert_eq!(cloudlab(&["ks-check", "dataset:firefly"]).0, 1);
    assert_eq!(cloudlab(&["partition", "dataset:firefly"]).0, 0);
    let (code, out, _) = cloudlab(&["partition", "dataset:tifs38"]);
    assert_eq!(code, 1);
    assert!(out.contains("collision 25 17"), "{out}");
    assert_eq!(cloudlab(&["validate", "dataset:hh10"]).0, 0);
}

#[test]
fn state_cap_is_read_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cloudlab"))
        .args(["states", "dataset:hh10", "--count"])
        .env("CLOUDLAB_STATE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("state cap"));
}

#[test]
fn tolerance_override_applies_to_float_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("near.cloud");
    std::fs::write(
        &path,
        "cloud near\ncontext a b\nvector a = (1.0, 0.0, 0.0)\nvector b = (0.001, 1.0, 0.0)\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(cloudlab(&["verify-rep", p]).0, 1);
    assert_eq!(cloudlab(&["verify-rep", p, "--tol", "0.01"]).0, 0);
    let out = Command::new(env!("CARGO_BIN_EXE_cloudlab"))
        .args(["verify-rep", p])
        .env("CLOUDLAB_TOL", "0.01")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn outputs_are_deterministic_across_job_counts() {
    let one = cloudlab(&["--jobs", "1", "states", "dataset:hh10"]);
    let four = cloudlab(&["--jobs", "4", "states", "dataset:hh10"]);
    assert_eq!(one, four);
    assert_eq!(one.1.lines().count(), 89);
    let a = cloudlab(&["tits-pairs", "dataset:hh10", "--jobs", "1"]);
    let b = cloudlab(&["tits-pairs", "dataset:hh10", "--jobs", "3"]);
    assert_eq!(a, b);
}

#[test]
fn dataset_export_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.cloud");
    let p = path.to_str().unwrap();
    assert_eq!(
        cloudlab(&["dataset", "hh10", "--param", "x=1/4", "-o", p]).0,
        0
    );
    assert_eq!(cloudlab(&["states", p, "--count"]).1, "89\n");
    assert_eq!(cloudlab(&["verify-rep", p]).0, 0);
    let (code, out, _) = cloudlab(&["extend", p, "--a", "u1", "--b", "u22"]);
    assert_eq!(code, 0);
    assert!(out.contains("# d = (4, -1, 0) collides with u20"), "{out}");
    assert!(cloudlab(&["dataset", "--list"]).1.contains("tiffts\n"));
}

#[test]
fn paste_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.cloud");
    let p = path.to_str().unwrap();
    let code = cloudlab(&[
        "paste",
        "dataset:firefly",
        "dataset:firefly",
        "--identify",
        "a=b",
        "-o",
        p,
    ])
    .0;
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("context b v2' v3'"));
    assert_eq!(cloudlab(&["states", p, "--count"]).1, "13\n");
    let (code, dot, _) = cloudlab(&["dot", "dataset:firefly", "--state", "4"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph \"firefly\" {"));
    assert_eq!(cloudlab(&["dot", "dataset:firefly", "--state", "5"]).0, 2);
}

#[test]
fn type_iii_propagation_reports_contradictions() {
    let (code, out, _) = cloudlab(&[
        "states",
        "dataset:hh10",
        "--type",
        "III",
        "--seed",
        "u1=1,u22=1",
    ]);
    assert_eq!(code, 1);
    assert!(
        out.ends_with("contradiction: u11 and u12 both 1 in {u11,u12,k10}\n"),
        "{out}"
    );
    let (code, out, _) = cloudlab(&[
        "states",
        "dataset:firefly",
        "--type",
        "III",
        "--seed",
        "a=1",
    ]);
    assert_eq!((code, out.as_str()), (0, "a=1 v2=0 v3=0\n"));
}

#[test]
fn coloring_reports() {
    let (_, out, _) = cloudlab(&["color", "dataset:triangle"]);
    assert!(out.starts_with("chromatic 3\n"));
    let (_, out, _) = cloudlab(&["color", "dataset:firefly", "--separable"]);
    assert!(out.starts_with("separable-chromatic 3\n"));
}
