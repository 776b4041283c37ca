use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dilab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn dilab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).count()
}

#[test]
fn index_prints_indices() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(&["index", "--p", "inf", "--q", "1"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("mu1 = 1  mu2 = 0"), "{}", stdout(&o));
    let j = json(&dir.path().join("index.json"));
    assert_eq!(j["result"]["mu1"], 1.0);
    assert_eq!(j["result"]["mu2"], 0.0);
    assert_eq!(j["software"], format!("dilab {}", env!("CARGO_PKG_VERSION")));
}

#[test]
fn gaussian_scaling_reports_half_slope() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(
        &["scaling", "--family", "gaussian", "--p", "2", "--q", "2", "--lambda-lo", "1", "--lambda-hi", "64"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let j = json(&dir.path().join("scaling.json"));
    let slope = j["result"]["fit"]["slope"].as_f64().unwrap();
    assert!((slope + 0.5).abs() < 0.01, "{slope}");
    assert_eq!(data_rows(&dir.path().join("sweep.dat")), 7);
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("# dilab "));
    assert!(csv.lines().nth(1).unwrap().starts_with("lambda,norm,norm_f,backend,grid_n,L"));
    assert!(fs::read_to_string(dir.path().join("plot.gp")).unwrap().contains("sweep.dat"));
}

#[test]
fn verify_writes_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(&["verify", "--case", "I1s_tpos"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let j = json(&dir.path().join("verify_I1s_tpos.json"));
    assert_eq!(j["result"]["verdict"], "pass");
    let v = &j["result"]["variants"][0];
    assert!(v["predicted_exponent"].is_number());
    assert!(v["fit"]["slope"].is_number());
    let s = json(&dir.path().join("verify_summary.json"));
    assert_eq!(s["result"][0]["case_id"], "I1s_tpos");
}

#[test]
fn pde_growth_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(&["pde", "--equation", "wave", "--p", "inf", "--q", "1", "--t-max", "8"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(data_rows(&dir.path().join("growth.dat")), 17);
    assert_eq!(data_rows(&dir.path().join("growth_log.dat")), 17);
    let csv = fs::read_to_string(dir.path().join("growth.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "t,norm,flagged");
    let j = json(&dir.path().join("pde.json"));
    assert!(j["result"]["bound_exponent"].as_f64().unwrap() == 2.0);
}

#[test]
fn exit_statuses() {
    let dir = tempfile::tempdir().unwrap();
    // config: missing argument, bad exponent, unknown family, half a grid
    assert_eq!(code(&dilab(&["norm", "--p", "2"], dir.path())), 2);
    assert_eq!(code(&dilab(&["norm", "--p", "0.5", "--q", "2"], dir.path())), 2);
    assert_eq!(code(&dilab(&["scaling", "--family", "nope", "--p", "2", "--q", "2"], dir.path())), 2);
    assert_eq!(code(&dilab(&["norm", "--p", "2", "--q", "2", "--grid-n", "256"], dir.path())), 2);
    // precondition: λ outside the family's regime
    let o = dilab(
        &["scaling", "--family", "lattice_psi_q", "--p", "1", "--q", "2", "--t", "1", "--lambda-hi", "4"],
        dir.path(),
    );
    assert_eq!(code(&o), 3);
    // verification failure: p = 1 Besov slope misses its envelope
    let o = dilab(&["besov", "--p", "1", "--q", "1", "--s", "-1", "--lambda-lo", "1"], dir.path());
    assert_eq!(code(&o), 5, "{}", stdout(&o));
}

#[test]
fn numerical_failure_status() {
    let dir = tempfile::tempdir().unwrap();
    // a grid far too coarse for the dilated bump trips the sampling checks
    let o = dilab(
        &["norm", "--p", "2", "--q", "2", "--signal", "bump", "--lambda", "8", "--grid-n", "16", "--half-width", "8"],
        dir.path(),
    );
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn manifest_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.ini");
    fs::write(&cfg, "[global]\ncommand = index\n\n[index]\np = inf\nq = 1\n").unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(code(&dilab(&["--config", cfg.to_str().unwrap()], &a)), 0);
    assert_eq!(code(&dilab(&["index", "--q", "1", "--p", "inf"], &b)), 0);
    assert_eq!(
        fs::read(a.join("index.json")).unwrap(),
        fs::read(b.join("index.json")).unwrap()
    );
    // a flag on the command line overrides the manifest
    let c = dir.path().join("c");
    assert_eq!(code(&dilab(&["--config", cfg.to_str().unwrap(), "--q", "2"], &c)), 0);
    assert_eq!(json(&c.join("index.json"))["result"]["q"], "2");
    fs::write(&cfg, "[plot]\nx = 1\n").unwrap();
    assert_eq!(code(&dilab(&["index", "--p", "1", "--q", "1", "--config", cfg.to_str().unwrap()], &c)), 2);
}

#[test]
fn reruns_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["embed", "--label", "incl_i"],
        &["besov", "--p", "2", "--q", "2", "--s", "1"],
        &["scaling", "--family", "istar1_a", "--p", "2", "--q", "inf", "--t", "1", "--backend", "frame"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("{i}a"));
        let b = dir.path().join(format!("{i}b"));
        dilab(args, &a);
        dilab(args, &b);
        let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert!(!names.is_empty());
        for n in names {
            assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{args:?} {n:?}");
        }
    }
}
