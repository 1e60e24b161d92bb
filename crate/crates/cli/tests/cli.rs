use std::path::Path;
use std::process::Command;

fn kit() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_effcap-kit"));
    cmd.env_remove("EFFCAP_SEED");
    cmd
}

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"))
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn two_point_grid_gives_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rho.csv");
    let status = kit()
        .args(["rho-vs-snr", "--points", "2", "--min", "0.01", "--max", "1", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[0],
        format!("# effcap-kit v{} job=rho-vs-snr seed=none", env!("CARGO_PKG_VERSION"))
    );
    assert_eq!(lines[1], "bandwidth_hz,snr,snr_db,rho_opt,eta,snr_eff_opt");
    assert!(lines[2].starts_with("10000000,0.01,-20,"));
}

#[test]
fn figure_recipe_reaches_training_limits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let status = kit()
        .args(["rho-vs-snr", "--config"])
        .arg(configs().join("fig3.cfg"))
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let r = rows(&std::fs::read_to_string(&out).unwrap());
    let rho = |row: &Vec<String>| row[3].parse::<f64>().unwrap();
    assert!((rho(&r[0]) - 0.5).abs() < 1e-3);
    assert!((rho(&r[r.len() - 1]) - 0.007).abs() < 5e-4);
}

#[test]
fn asymptotics_recipe_lists_five_thetas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let status = kit()
        .args(["asymptotics-table", "--config"])
        .arg(configs().join("asymptotics.cfg"))
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let r = rows(&std::fs::read_to_string(&out).unwrap());
    let eb: Vec<f64> = r.iter().map(|row| row[1].parse().unwrap()).collect();
    let want = [4.6776, 4.7029, 4.9177, 6.3828, 10.8333];
    for (a, b) in eb.iter().zip(want) {
        assert!((a - b).abs() < 5e-3);
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.cfg");
    std::fs::write(&cfg, "theta = 0.5\npoints = 3\nmin = 0.1\nmax = 1\n").unwrap();
    let out = dir.path().join("o.csv");
    let status = kit()
        .args(["ebn0-vs-snr", "--theta", "0.02", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let r = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|row| row[0] == "0.02"));
}

#[test]
fn every_config_key_is_known() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        let job = first.split_whitespace().nth(2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        // a 2-point axis keeps the check fast; table jobs have no axis
        let mut cmd = kit();
        cmd.current_dir(dir.path()).arg(job).arg("--config").arg(&path);
        if job != "asymptotics-table" {
            cmd.args(["--points", "2"]);
        }
        let status = cmd.status().unwrap();
        assert!(status.success(), "{}", path.display());
    }
}

#[test]
fn exit_codes_follow_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| kit().current_dir(dir.path()).args(args).output().unwrap().status.code();
    assert_eq!(code(&["rho-vs-snr", "--points", "1"]), Some(1));
    assert_eq!(code(&["asymptotics-table", "--theta=-1"]), Some(1));
    assert_eq!(code(&["rho-vs-snr", "--unknown", "3"]), Some(1));
    assert_eq!(
        code(&["rho-vs-snr", "--points", "2", "--output", "missing/dir/x.csv"]),
        Some(3)
    );
    assert_eq!(code(&["rho-vs-snr", "--config", "absent.cfg"]), Some(3));
    assert_eq!(code(&["queue-validate", "--frames", "10"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn failed_jobs_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.csv");
    let status = kit()
        .args(["queue-validate", "--margin", "2", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn seed_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    let status = kit()
        .env("EFFCAP_SEED", "17")
        .args(["queue-validate", "--theta", "0.05", "--frames", "1000000", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().ends_with("job=queue-validate seed=17"));
    assert_eq!(rows(&text)[0][1], "17");
}

#[test]
fn no_nan_and_infinite_bit_energy_is_marked() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    // at SNR 1e-300 the effective SNR underflows to zero
    let status = kit()
        .args([
            "ebn0-vs-snr",
            "--min",
            "1e-300",
            "--max",
            "1",
            "--points",
            "4",
            "--theta",
            "0,1",
            "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.to_lowercase().contains("nan"));
    assert!(rows(&text).iter().any(|r| r[4] == "inf"));
}
