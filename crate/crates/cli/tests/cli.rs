use std::path::Path;
use std::process::{Command, Output};

fn densecode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densecode")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_verify_augment_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for d in 2..=5 {
        let fam = dir.path().join(format!("pauli{d}.json"));
        let aug = dir.path().join(format!("aug{d}.json"));
        assert_eq!(code(&densecode(&["construct", "pauli", "--d", &d.to_string(), "--out", p(&fam)])), 0);
        assert!(dir.path().join(format!("pauli{d}.json.manifest.json")).exists());
        assert_eq!(code(&densecode(&["verify", "--in", p(&fam)])), 0);
        let o = densecode(&["augment", "--in", p(&fam), "--out", p(&aug)]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert_eq!(code(&densecode(&["verify", "--in", p(&aug)])), 0);
    }
    let text = std::fs::read_to_string(dir.path().join("pauli4.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["unitaries"].as_array().unwrap().len(), 16);
}

#[test]
fn completion_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("p3.json");
    densecode(&["construct", "pauli", "--d", "3", "--out", p(&fam)]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&fam).unwrap()).unwrap();
    v["unitaries"].as_array_mut().unwrap().remove(4);
    let partial = dir.path().join("partial.json");
    std::fs::write(&partial, v.to_string()).unwrap();
    let full = dir.path().join("full.json");
    let o = densecode(&["construct", "complete", "--in", p(&partial), "--out", p(&full)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&densecode(&["verify", "--in", p(&full)])), 0);
}

#[test]
fn non_orthogonal_family_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("iz.json");
    std::fs::write(
        &f,
        r#"{"d":2,"lambdas":[0.7,0.3],"unitaries":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]],[[0,0],[-1,0]]]]}"#,
    )
    .unwrap();
    let o = densecode(&["verify", "--in", p(&f), "--verbose"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("residual 0.4"), "{}", stdout(&o));
    let o = densecode(&["verify", "--in", p(&f), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert!((v["worst_residual"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(code(&densecode(&["augment", "--in", p(&f), "--out", p(&dir.path().join("a.json"))])), 2);
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, r#"{"d": 2, "lambdas": [0.5, 0.5], "unitaries": [[[[1,0"#).unwrap();
    assert_eq!(code(&densecode(&["verify", "--in", p(&f)])), 1);

    std::fs::write(&f, r#"{"d":2,"lambdas":[0.5,0.5],"unitaries":[[[[1,0],[0,0]]]]}"#).unwrap();
    let o = densecode(&["verify", "--in", p(&f)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unitaries[0]"));

    assert_eq!(code(&densecode(&["verify", "--in", p(&dir.path().join("missing.json"))])), 1);
    assert_eq!(code(&densecode(&["search", "--d", "3", "--lambdas", "0.5,0.5", "--k", "3"])), 1);
    assert_eq!(code(&densecode(&["search", "--d", "3", "--lambdas", "1,0,0", "--k", "2", "--pin", "Q"])), 1);
    assert_eq!(code(&densecode(&["bounds", "--d", "3"])), 1);
}

#[test]
fn bounds_table() {
    let o = densecode(&["bounds", "--d", "3", "--k", "4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("0.75") && out.contains("0.7236"), "{out}");

    let o = densecode(&["bounds", "--d", "3", "--k", "5", "--pinned-shift-powers", "2", "--lambda2-zero"]);
    let out = stdout(&o);
    assert!(out.contains("3/5") && out.contains("0.6") && out.contains("0.5921"), "{out}");

    let o = densecode(&["bounds", "--d", "3", "--k", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["wcsg_exact"], "3/4");
}

#[test]
fn search_outcomes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |out: &Path| {
        vec!["search", "--d", "3", "--lambdas", "2/3,1/3,0", "--k", "4", "--pin", "I,X", "--seed", "3", "--out"]
            .into_iter()
            .map(String::from)
            .chain([p(out).to_string()])
            .collect::<Vec<_>>()
    };
    let run = |out: &Path| densecode(&args(out).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&run(&a)), 0);
    assert_eq!(code(&run(&b)), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(code(&densecode(&["verify", "--in", p(&a), "--tol", "1e-6"])), 0);

    // Replaying the manifest rewrites the same bytes.
    let before = std::fs::read(&a).unwrap();
    std::fs::remove_file(&a).unwrap();
    let manifest = dir.path().join("a.json.manifest.json");
    assert_eq!(code(&densecode(&["replay", "--manifest", p(&manifest)])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), before);

    let o = densecode(&[
        "search",
        "--d",
        "3",
        "--lambdas",
        "0.7,0.3,0",
        "--k",
        "4",
        "--pin",
        "I,X",
        "--restarts",
        "2",
        "--json",
    ]);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"], true);
    assert_eq!(v["certificate"]["theorem"], "shift_power");

    let o = densecode(&["search", "--d", "2", "--lambdas", "0.3,0.7", "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o =
        densecode(&["scan", "--d", "3", "--step", "0.1", "--restarts", "2", "--max-iters", "300", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["lambda0", "lambda1", "lambda2", "max_k_found", "wcsg_cap", "certified_infeasible_above"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 15);
    for r in &rows {
        let l0: f64 = r[0].parse().unwrap();
        let k: usize = r[3].parse().unwrap();
        assert!(k as f64 <= 3.0 / l0 + 1e-9);
        assert_ne!(k, 8);
    }
    assert!(dir.path().join("scan.csv.manifest.json").exists());
}
