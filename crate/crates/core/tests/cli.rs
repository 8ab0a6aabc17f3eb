use serde_json::Value;
use transfer_lab::cli::run;
use transfer_lab::json;
use transfer_lab::local_field::FieldParams;

fn json_of(argv: &[&str]) -> (i32, Value) {
    let mut full = vec!["transfer-lab"];
    full.extend_from_slice(argv);
    let out = run(full);
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

#[test]
fn tate_zeta_is_exact_for_small_primes() {
    for p in ["2", "3", "5", "7"] {
        let (code, v) = json_of(&["tate-zeta", "--prime", p]);
        assert_eq!(code, 0);
        let z = &v["result"]["rational_function"];
        assert_eq!(z["num"], serde_json::json!([[1, 0]]));
        assert_eq!(z["den"], serde_json::json!([[1, 0], [-1, 0]]));
        assert_eq!(v["config"]["conventions"]["psi_conductor"], 0);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for argv in [
        vec!["transfer", "--prime", "3", "--d", "5", "--seed", "9"],
        vec!["transfer", "--prime", "5", "--d", "4", "--dprime", "2"],
        vec!["symsq-transfer", "--prime", "5", "--seed", "2"],
        vec!["jx-verify", "--all"],
        vec!["fourier", "--prime", "2"],
    ] {
        let mut a = vec!["transfer-lab"];
        a.extend(argv);
        let first = run(a.clone());
        assert_eq!(first.code, 0, "{a:?}: {}", first.stderr);
        assert_eq!(first.stdout, run(a).stdout);
    }
}

#[test]
fn typed_errors_exit_one_with_named_error() {
    let (code, v) = json_of(&["transfer", "--prime", "4", "--d", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["name"], "InvalidParameter");
    let (code, v) = json_of(&["transfer", "--prime", "3", "--d", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    let (code, v) = json_of(&["jx-verify", "--identity", "no_such_identity"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["name"], "UnknownIdentity");
    let (code, v) = json_of(&["spherical", "--alpha", "2,0", "--q", "5"]);
    assert_eq!((code, v["pass"].clone()), (0, Value::Bool(true)));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(["transfer-lab", "nonsense"]).code, 2);
    assert_eq!(run(["transfer-lab", "transfer", "--prime", "3"]).code, 2);
    assert_eq!(run(["transfer-lab", "spherical"]).code, 2);
    assert_eq!(run(["transfer-lab", "fourier", "--in", "/nonexistent/file.json"]).code, 2);
}

#[test]
fn input_and_output_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("transfer-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let first = dir.join("first.json");
    let out = run(["transfer-lab", "transfer", "--prime", "3", "--d", "3", "--out", first.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let mut image = report["result"]["output"].clone();
    image["kernel"] = serde_json::json!({"type": "G", "d": 3});
    let input = dir.join("image.json");
    std::fs::write(&input, image.to_string()).unwrap();
    let (code, v) = json_of(&["inverse-transfer", "--in", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    let f = FieldParams::new(3, 10).unwrap();
    let got = json::schwartz_from(f, &v["result"]["kuznetsov"]).unwrap();
    let want = json::schwartz_from(f, &report["result"]["input"]).unwrap();
    assert!(got.structural_distance(&want).unwrap() < 1e-12);
    let (code, _) = json_of(&["inverse-transfer", "--in", input.to_str().unwrap(), "--prime", "5"]);
    assert_eq!(code, 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn spectral_verbs_report_residuals() {
    let (code, v) = json_of(&["whittaker", "--prime", "5", "--alpha", "0.6,0.8", "--n", "7"]);
    assert_eq!(code, 0);
    assert!(v["residuals"]["hecke"].as_f64().unwrap() < 1e-10);
    let (code, v) = json_of(&["plancherel-check", "--q", "2", "--quad", "2048"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["target"], 1);
    let (code, v) = json_of(&["period-check", "--q", "5", "--alphas", "1,0;0,1"]);
    assert_eq!(code, 0);
    assert!(v["result"]["certified_tail"].as_f64().unwrap() > 0.0);
    let (code, v) = json_of(&["mellin", "--prime", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rational_function"]["variable"], "t=q^-s");
    let (code, _) = json_of(&["oscillate", "--prime", "3"]);
    assert_eq!(code, 0);
}
