use std::path::PathBuf;

use splitpanel_cli::run;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["splitpanel"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn sp_panel() {
    assert_eq!(
        ok(&["sp", "--type", "4,3,3,2"]),
        "panel: 4/3,1,1,2/3  min_ratio: 2/3\n"
    );
}

#[test]
fn sp_against_model() {
    let out = ok(&[
        "sp",
        "--type",
        "4,4,1,1,0",
        "--model",
        &fixture("pbundle.json"),
        "--class",
        "1,0",
    ]);
    assert_eq!(
        out,
        "panel: 2,2,1/2,1/2,0  min_ratio: 0\nesp: 3/2,3/2,2/3,2/3,2/3\nhn_bound: 3/2  feasible: yes\n"
    );
    let (code, _, err) = invoke(&[
        "sp",
        "--type",
        "4,4,1,1",
        "--model",
        &fixture("pbundle.json"),
        "--class",
        "1,0",
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: ShapeMismatch: "));
}

#[test]
fn degbd_and_witness() {
    assert_eq!(ok(&["degbd", "--nodal", "2/-1,-1/2", "--m", "1"]), "0\n");
    assert_eq!(
        ok(&["degbd", "--nodal", "2/-1,-1/2", "--m", "1", "--witness"]),
        "pair 2 1 -> 0\ntotal -> 0\n"
    );
    let (code, _, err) = invoke(&["degbd", "--nodal", "2/-1", "--m", "3"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: OutOfRange: "));
}

#[test]
fn smooth_and_glue() {
    assert_eq!(ok(&["smooth", "--nodal", "2/-1,-1/2"]), "2,0\n1,1\n");
    assert_eq!(
        ok(&["smooth", "--nodal", "2/-1,-1/2", "--sequential"]),
        "1,1\n"
    );
    assert_eq!(ok(&["glue", "--type", "2,1,0"]), "2/0,1/1,0/2\n");
    assert_eq!(
        ok(&["glue", "--type", "2,1", "--type", "1,0", "--align", "identity"]),
        "2/1,1/0\n"
    );
    assert_eq!(
        ok(&["glue", "--type", "2,1", "--type", "1,0", "--align", "perm:2,1"]),
        "2/0,1/1\n"
    );
    let (code, _, err) = invoke(&["glue", "--type", "2,1", "--type", "1,0,0"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: RankMismatch: "));
}

#[test]
fn balance_trace() {
    let out = ok(&["balance", "--type", "2,1,0,-1,-2"]);
    assert_eq!(
        out,
        "step 0: 2,1,0,-1,-2  width 4\nstep 1: 1,1,0,-1,-1  width 2\nstep 2: 0,0,0,0,0  width 0\nsteps: 2  copies: 4  converged: yes\n"
    );
    let best = ok(&["balance", "--type", "2,1,0,-1,-2", "--policy", "best"]);
    assert!(best.ends_with("steps: 1  copies: 2  converged: yes\n"));
    let (code, _, err) = invoke(&["balance", "--type", "1,0"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: NonIntegerSlope: "));
    let (code, _, err) = invoke(&["balance", "--type", "1,1,1,1,1,1"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: RankTooLarge: "));
}

#[test]
fn esp_command() {
    let out = ok(&["esp", "--model", &fixture("pbundle.json"), "--class", "1,0"]);
    assert_eq!(
        out,
        "esp: 3/2,3/2,2/3,2/3,2/3\ndegree: 10  min: 2/3  liberated_bound: -7/12\n"
    );
    let (code, _, err) = invoke(&[
        "esp",
        "--model",
        &fixture("pbundle.json"),
        "--class",
        "-1,0",
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: NotInNefCone: "));
}

#[test]
fn count_rho1() {
    let out = ok(&["count", "--model", &fixture("toy_rho1.json"), "--dmax", "3"]);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "d\tpoints\tliberated\tN\tN_lib\tratio");
    let last: Vec<&str> = rows[3].split('\t').collect();
    assert_eq!(last[0], "3");
    assert_eq!(last[3], "14");
}

#[test]
fn count_overrides() {
    let out = ok(&[
        "count",
        "--model",
        &fixture("quadrant.json"),
        "--dmax",
        "2",
        "--q",
        "3",
    ]);
    let row2: Vec<&str> = out
        .lines()
        .find(|l| l.starts_with("2\t"))
        .unwrap()
        .split('\t')
        .collect();
    assert_eq!(row2[3], (2 * 3 + 3 * 9).to_string());
    let (code, _, err) = invoke(&["count", "--model", &fixture("quadrant.json"), "--q", "1"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: InvalidConfig: "));
}

#[test]
fn check_fixtures_and_broken_model() {
    for name in [
        "pbundle.json",
        "toy_rho1.json",
        "toy_rho2.json",
        "quadrant.json",
    ] {
        let out = ok(&["check", "--model", &fixture(name)]);
        assert!(out.ends_with("ok\n"), "{name}: {out}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    let text = std::fs::read_to_string(fixture("toy_rho2.json"))
        .unwrap()
        .replace("\"facets\": [[1, -1]]", "\"facets\": [[1, -2]]");
    std::fs::write(&path, text).unwrap();
    let (code, out, err) = invoke(&["check", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("violation: nef class"), "{out}");
    assert!(err.starts_with("error: InvalidModel: "));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("panel.txt");
    let (code, out, _) = invoke(&["sp", "--type", "4,3,3,2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "panel: 4/3,1,1,2/3  min_ratio: 2/3\n"
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec![],
        vec!["sp"],
        vec!["sp", "--type", "x"],
        vec!["degbd", "--nodal", "2/-1"],
        vec!["balance", "--type", "2,1,0", "--policy", "median"],
        vec![
            "glue",
            "--type",
            "1,0",
            "--align",
            "perm:1,1,1,1,1,1,1,1,1,1,1,1,x",
        ],
        vec!["frobnicate"],
    ] {
        let (code, out, err) = invoke(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn missing_model_is_domain_error() {
    let (code, _, err) = invoke(&[
        "esp",
        "--model",
        "/nonexistent/model.json",
        "--class",
        "1,0",
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: InvalidModel: "));
}

#[test]
fn output_is_deterministic() {
    let args = ["count", "--model", &fixture("toy_rho2.json"), "--dmax", "8"];
    let first = ok(&args);
    for _ in 0..3 {
        assert_eq!(ok(&args), first);
    }
}
