use serde_json::Value;
use stark_sic::cli::{run, EXIT_CONFIG, EXIT_INVALID, EXIT_STAGE, EXIT_VALID};

fn call(args: &[&str]) -> (i32, Vec<Value>) {
    let mut out = Vec::new();
    let mut argv = vec!["stark-sic"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out);
    let lines = String::from_utf8(out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad JSON line {l}: {e}")))
        .collect();
    (code, lines)
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("stark-sic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn field_and_group() {
    let (code, lines) = call(&["group", "--d", "23"]);
    assert_eq!(code, EXIT_VALID);
    assert_eq!(lines[0]["stage"], "group");
    assert_eq!(lines[0]["result"]["invariants"], serde_json::json!([2, 176]));
    let (code, lines) = call(&["field", "--d", "11"]);
    assert_eq!(code, EXIT_VALID);
    assert_eq!(lines[0]["result"]["radicand"], 6);
    assert!(lines[0]["wall_ms"].is_u64());
}

#[test]
fn config_errors_exit_3() {
    for args in [
        vec!["field", "--d", "7"],
        vec!["field", "--d", "5", "--precision", "20"],
        vec!["zeta"],
        vec!["all", "--d", "5", "--threads", "0"],
        vec!["all", "--d", "5", "--sign-strategy", "coinflip"],
        vec!["verify", "--d", "5", "--fiducial", "/nonexistent/v.txt"],
    ] {
        let (code, lines) = call(&args);
        assert_eq!(code, EXIT_CONFIG, "{args:?}");
        assert_eq!(lines.last().unwrap()["stage"], "error");
        assert_eq!(lines.last().unwrap()["result"]["kind"], "config");
    }
    assert_eq!(call(&["frobnicate"]).0, EXIT_CONFIG);
}

#[test]
fn stage_error_exits_2() {
    // right field and degree, but not the minimal polynomial of any sign choice
    let wrong = tmp("wrong_g5.txt");
    let text = stark_sic::fixtures::text("g5").unwrap().replace("18/1 + 0/1", "19/1 + 0/1");
    std::fs::write(&wrong, text).unwrap();
    let strategy = format!("known_g:{}", wrong.display());
    let (code, lines) = call(&["recognize", "--d", "5", "--sign-strategy", &strategy, "--max-precision", "50"]);
    assert_eq!(code, EXIT_STAGE);
    assert_eq!(lines.last().unwrap()["result"]["kind"], "stage");
}

#[test]
fn verify_exit_codes() {
    let good = tmp("v5.txt");
    std::fs::write(&good, stark_sic::fixtures::text("v5").unwrap()).unwrap();
    let (code, lines) = call(&["verify", "--d", "5", "--fiducial", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALID);
    assert_eq!(lines[0]["result"]["valid"], true);

    let bad = tmp("bad5.txt");
    std::fs::write(&bad, "0.6\n0.3 + 0.1i\n0.2\n-0.5i\n0.4 - 0.2i\n").unwrap();
    let (code, lines) = call(&["verify", "--d", "5", "--fiducial", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(lines[0]["result"]["valid"], false);

    let (code, _) = call(&["verify", "--d", "11", "--fiducial", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn all_writes_artifacts_that_verify() {
    let dir = tmp("out5");
    let (code, _) = call(&["all", "--d", "5", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALID);
    for f in ["f5.txt", "g5.txt", "gt5.txt", "h5.txt", "ht5.txt", "v5.txt", "certificate5.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let (code, lines) = call(&["verify", "--d", "5", "--fiducial", dir.join("v5.txt").to_str().unwrap()]);
    assert_eq!(code, EXIT_VALID);
    assert!(lines[0]["result"]["precision"].as_u64().unwrap() >= 45);
    let g = stark_sic::recognition::RecognizedPolynomial::read(&dir.join("g5.txt")).unwrap();
    assert_eq!(g, stark_sic::fixtures::polynomial("g5").unwrap());
}

fn payloads(threads: &str) -> Vec<String> {
    let (code, lines) = call(&["all", "--d", "5", "--threads", threads]);
    assert_eq!(code, EXIT_VALID);
    lines.iter().map(|l| format!("{} {}", l["stage"], l["result"])).collect()
}

#[test]
fn thread_count_does_not_change_results() {
    let one = payloads("1");
    assert_eq!(one, payloads("4"));
    assert_eq!(one, payloads("3"));
}

#[test]
fn fixtures_subcommand() {
    let (code, lines) = call(&["fixtures"]);
    assert_eq!(code, EXIT_VALID);
    assert_eq!(lines.len(), stark_sic::fixtures::NAMES.len());
}
