use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir()
        .join(format!("qenc-cli-{}-{}", std::process::id(), COUNTER.fetch_add(1, Ordering::SeqCst)));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> (Output, PathBuf) {
    let cfg = dir.join("config.toml");
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join("out.csv");
    let output = Command::new(env!("CARGO_BIN_EXE_qenc"))
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    (output, out)
}

/// Data rows of a CSV written by the tool, comment lines and header dropped.
fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

const SWEEP: &str = "kind = \"divergence-sweep\"\nfamily = \"ry-product\"\nqubits = [1, 2, 4]\ndepths = [1, 2, 6]\nsamples = 2000\n";

#[test]
fn config_errors_exit_with_one() {
    let dir = scratch();
    let cases = [
        ("sweep-divergence", format!("{SWEEP}bogus = 1\n"), vec!["--seed", "1"]),
        ("train", SWEEP.to_string(), vec!["--seed", "1"]),
        ("sweep-divergence", SWEEP.to_string(), vec![]),
        ("sweep-divergence", format!("seed = 2\n{SWEEP}"), vec!["--seed", "1"]),
        ("sweep-divergence", SWEEP.replace("[1, 2, 6]", "[]"), vec!["--seed", "1"]),
        ("sweep-divergence", "kind = ".to_string(), vec!["--seed", "1"]),
    ];
    for (cmd, text, extra) in cases {
        let (output, out) = run(&dir, cmd, &text, &extra);
        assert_eq!(output.status.code(), Some(1), "{cmd} with {text:?}: {}", String::from_utf8_lossy(&output.stderr));
        assert!(!output.stderr.is_empty());
        assert!(!out.exists());
    }
    let missing = Command::new(env!("CARGO_BIN_EXE_qenc")).args(["bounds", "--config", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    let unknown = Command::new(env!("CARGO_BIN_EXE_qenc")).arg("frobnicate").output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn runtime_errors_exit_with_two() {
    let dir = scratch();
    let text = "kind = \"mnist-prep\"\ndir = \"/nonexistent/mnist\"\nsplit = \"test\"\ndigits = [3, 6]\n";
    let (output, _) = run(&dir, "mnist-prep", text, &[]);
    assert_eq!(output.status.code(), Some(2), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(String::from_utf8_lossy(&output.stderr).starts_with("qenc mnist-prep:"));
}

#[test]
fn product_sweep_is_tight_and_carries_metadata() {
    let dir = scratch();
    let (output, out) = run(&dir, "sweep-divergence", SWEEP, &["--seed", "4"]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    for key in ["# tool: qenc", "# command: sweep-divergence", "# seed: 4", "# config_sha256: ", "# config: "] {
        assert!(text.contains(key), "missing {key}");
    }
    assert!(text.contains("n,D,d2_analytic,d2_monte_carlo,bound_warmup,bound_general,bound_ry_layers,M\n"));
    let rows = rows(&out);
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let (n, d) = (num(&r[0]), num(&r[1]));
        let expected = n * (1.0 + (-0.64 * d).exp()).log2();
        assert!((num(&r[2]) - expected).abs() < 1e-8, "{r:?}");
        assert!((num(&r[2]) - num(&r[4])).abs() < 1e-8);
        assert!(num(&r[4]) <= num(&r[5]) + 1e-8);
        assert!((num(&r[3]) - num(&r[2])).abs() < 0.25, "{r:?}");
        assert_eq!(r[7], "2000");
    }
    assert_eq!(rows[0][2], "0.610976315");
}

#[test]
fn entangled_sweep_stays_under_the_general_bound() {
    let dir = scratch();
    let text = SWEEP.replace("ry-product", "u3-entangled");
    let (output, out) = run(&dir, "sweep-divergence", &text, &["--seed", "5"]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    for r in rows(&out) {
        assert!(num(&r[2]) <= num(&r[5]) + 1e-9, "{r:?}");
    }
}

#[test]
fn bounds_report_row_errors_without_failing() {
    let dir = scratch();
    let text = "kind = \"bound\"\n[[query]]\nn = 4\nsigma = 0.8\neps = 0.1\n[[query]]\nn = 2\ndepth = 1\nsigma = 0.0\n";
    let (output, out) = run(&dir, "bounds", text, &[]);
    assert!(output.status.success());
    let rows = rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][7], "16");
    assert!(rows[0][8].is_empty());
    assert!(rows[1][8].contains("sigma"));
    assert!(rows[1][4].is_empty());
}

#[test]
fn identical_classes_are_indistinguishable() {
    let dir = scratch();
    let text = "kind = \"discriminate\"\nfamily = \"strongly-entangling-ry\"\nqubits = [2]\ndepths = [1, 3]\nper_class = 3000\nidentical_classes = true\n";
    let (output, out) = run(&dir, "discriminate", text, &["--seed", "9"]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    for r in rows(&out) {
        assert!((num(&r[3]) - 0.5).abs() <= 2e-2, "{r:?}");
        assert!((num(&r[3]) - 0.5 - num(&r[4]) / 4.0).abs() < 1e-8);
    }
}

#[test]
fn train_writes_summary_and_loss_trace() {
    let dir = scratch();
    let text = "kind = \"train\"\nseed = 3\n[encoder]\nfamily = \"ry-product\"\nn = 2\ndepth = 1\n[data]\nsource = \"synthetic\"\ntrain_per_class = 100\ntest_per_class = 40\n[training]\nbatch_size = 50\nepochs = 3\n";
    let cfg = dir.join("train.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = dir.join("run.json");
    let output = Command::new(env!("CARGO_BIN_EXE_qenc"))
        .arg("train")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["metadata"]["seed"], 3);
    assert_eq!(json["metadata"]["command"], "train");
    let result = &json["result"];
    assert_eq!(result["train_samples"], 200);
    assert_eq!(result["test_samples"], 80);
    assert_eq!(result["steps"], 12);
    assert_eq!(result["theta"].as_array().unwrap().len(), result["parameter_count"].as_u64().unwrap() as usize);
    let acc = result["test_accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));
    let trace = rows(&dir.join("run_loss.csv"));
    assert_eq!(trace.len(), 12);
    assert_eq!(trace[0][0], "1");
}
