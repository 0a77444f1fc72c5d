use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_kolmo-lab"));
    c.env_remove("KOLMO_THREADS");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kolmo-lab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .args(["--no-timestamp", "--out-dir"])
        .arg(dir)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../report.schema.json");
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        jsonschema::validator_for(&schema).unwrap()
    })
}

fn valid_report(o: &Output) -> Value {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), stderr(o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    v
}

#[test]
fn frame_tails_monomials_csv() {
    let dir = scratch("frame-tails");
    let v = valid_report(&run(&dir, &["frame-tails", "--family", "monomials:0..10"]));
    assert_eq!(v["result"]["verdict"]["verdict"], "precompact_evidence");
    let csv = std::fs::read_to_string(dir.join("frame-tails-profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("level,parameter,q"));
    let q: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(q.len(), 20);
    assert!(q.windows(2).all(|w| w[1] < w[0]), "{q:?}");
    // file report equals stdout
    let file: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("frame-tails.json")).unwrap()).unwrap();
    assert_eq!(file, v);
}

#[test]
fn every_command_validates() {
    let dir = scratch("schema");
    let cases: &[&[&str]] = &[
        &["frame-tails", "--family", "basis:0..4", "--space", "hardy", "--depth", "8"],
        &["frame-tails", "--family", "basis:0..3", "--space", "fock", "--depth", "3"],
        &["toeplitz", "--symbol", "1-|z|^2", "--deg", "24"],
        &["toeplitz", "--symbol", "1", "--deg", "24", "--no-localization"],
        &["hankel", "--fourier", "0,0,1"],
        &["besov", "--family", "basis:0..5"],
        &["l2"],
        &["l2", "--preset", "translated-gaussians", "--stft"],
        &["umbrella"],
        &["umbrella", "--umbrella", "power:1,2"],
    ];
    for args in cases {
        let o = run(&dir, args);
        let v = valid_report(&o);
        assert_eq!(v["command"], args[0]);
        assert!(v.get("timestamp").is_none());
        for f in v["csv_files"].as_array().unwrap() {
            assert!(dir.join(f.as_str().unwrap()).is_file(), "{args:?}: missing {f}");
        }
    }
}

#[test]
fn complex_coefficients_echo_as_re_im() {
    let dir = scratch("complex");
    std::fs::write(
        dir.join("h.toml"),
        "[hankel]\nfourier = [0, 0.5, { re = 0.0, im = 1.0 }]\ndeg = 8\n",
    )
    .unwrap();
    let cfg = dir.join("h.toml");
    let v = valid_report(&run(&dir, &["hankel", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["config"]["hankel"]["fourier"][2], serde_json::json!({ "re": 0.0, "im": 1.0 }));
    assert_eq!(v["config"]["hankel"]["fourier"][1], serde_json::json!({ "re": 0.5, "im": 0.0 }));
    // H[j][k] = ĝ(j + k): the leading 3x3 block is anti-triangular with ĝ(2) = i
    assert_eq!(v["result"]["numerical_rank"], 3);
}

#[test]
fn flags_override_config() {
    let dir = scratch("override");
    std::fs::write(dir.join("c.toml"), "[frame]\ndepth = 4\nspace = \"bergman\"\n[family]\npreset = \"monomials:0..2\"\n").unwrap();
    let cfg = dir.join("c.toml");
    let v = valid_report(&run(&dir, &["frame-tails", "--config", cfg.to_str().unwrap(), "--depth", "6"]));
    assert_eq!(v["config"]["frame"]["depth"], 6);
    assert_eq!(v["result"]["profile"]["values"].as_array().unwrap().len(), 6);
}

#[test]
fn config_errors_exit_2() {
    let dir = scratch("exit2");
    let o = run(&dir, &["toeplitz", "--symbol", "1-"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at offset 2"), "{}", stderr(&o));

    std::fs::write(dir.join("bad.toml"), "[frame]\nbogus = 1\n").unwrap();
    let o = run(&dir, &["frame-tails", "--config", dir.join("bad.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));

    std::fs::write(dir.join("empty.toml"), "[family]\ncoefficients = []\n").unwrap();
    let o = run(&dir, &["frame-tails", "--config", dir.join("empty.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("family"));

    let o = run(&dir, &["frame-tails", "--family", "monomials:0..3", "--depth", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("frame.depth"));

    let o = run(&dir, &["frame-tails", "--family", "monomials:0..3", "--threads", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&dir, &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unbounded_symbol_exits_3() {
    let dir = scratch("exit3");
    for s in ["1/(1-|z|)", "1/|z|"] {
        let o = run(&dir, &["toeplitz", "--symbol", s]);
        assert_eq!(o.status.code(), Some(3), "{s}: {}", stderr(&o));
        assert!(stderr(&o).contains("toeplitz.symbol"));
    }
}

#[test]
fn strict_inconclusive_exits_4() {
    let dir = scratch("exit4");
    // Berezin transform of a constant 0.3 sits between the thresholds
    let args = ["toeplitz", "--symbol", "0.3", "--deg", "16", "--no-localization"];
    let o = run(&dir, &args);
    let v = valid_report(&o);
    assert_eq!(v["result"]["verdict"], "inconclusive");
    let mut strict = args.to_vec();
    strict.push("--strict");
    let o = run(&dir, &strict);
    assert_eq!(o.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 4);
    assert!(validator().is_valid(&v));
}

#[test]
fn deterministic_and_thread_independent() {
    let dir = scratch("determinism");
    let args = ["toeplitz", "--symbol", "z*conj(z)^2 + 0.5", "--deg", "32"];
    let a = run(&dir, &args);
    let b = bin()
        .args(args)
        .args(["--no-timestamp", "--out-dir"])
        .arg(&dir)
        .env("KOLMO_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    let (va, vb): (Value, Value) =
        (serde_json::from_slice(&a.stdout).unwrap(), serde_json::from_slice(&b.stdout).unwrap());
    assert_eq!(vb["config"]["run"]["threads"], 1);
    // only the echoed thread count differs
    let strip = |mut v: Value| {
        v["config"]["run"].as_object_mut().unwrap().remove("threads");
        v
    };
    assert_eq!(strip(va), strip(vb));
    let c = run(&dir, &args);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn timestamp_present_by_default() {
    let dir = scratch("timestamp");
    let o = bin().args(["umbrella", "--out-dir"]).arg(&dir).output().unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["timestamp"].as_u64().unwrap() > 1_600_000_000);
    assert!(validator().is_valid(&v));
}
