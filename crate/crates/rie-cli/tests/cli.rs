use std::path::Path;
use std::process::{Command, Output};

fn rie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rie")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

const SUBCOMMANDS: [&str; 9] = [
    "kernels",
    "evolve",
    "eof",
    "scan-fig1",
    "scan-fig2",
    "scan-fig3",
    "predict-t1",
    "find-t1",
    "eff-int",
];

#[test]
fn help_for_every_subcommand() {
    for sub in SUBCOMMANDS {
        let o = rie(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        let text = stdout(&o);
        for flag in ["--config", "--out", "--threads"] {
            assert!(text.contains(flag), "{sub} lacks {flag}");
        }
        assert!(text.contains("Exit codes"), "{sub}");
    }
    let kernels = stdout(&rie(&["kernels", "--help"]));
    for unit in ["kelvin", "nanometres", "metres", "electronvolts", "units of tau", "seconds"] {
        assert!(kernels.contains(unit), "missing {unit}");
    }
    assert!(stdout(&rie(&["scan-fig1", "--help"])).contains("csv, pgm, both"));
}

#[test]
fn distance_anchor() {
    let o = rie(&["predict-t1", "--dipole-um", "1", "--t1-seconds", "4.35e17"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let km = value(&stdout(&o), "separation_km");
    assert!((km / 8.4 - 1.0).abs() < 0.02, "{km}");
}

#[test]
fn bell_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.csv");
    std::fs::write(
        &path,
        "0.5,0,0,0.5\n0,0,0,0\n0,0,0,0\n0.5+0i,0,0,0.5-0i\n",
    )
    .unwrap();
    let o = rie(&["eof", "--state", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!((value(&text, "C") - 1.0).abs() < 1e-12);
    assert!((value(&text, "E") - 1.0).abs() < 1e-12);
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn fig2_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = rie(&["scan-fig2", "--nx", "100", "--ny", "100", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let csv = String::from_utf8(read(&out, "fig2.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("v,phi_minus,eof"));
    let max = lines
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max >= 0.999, "{max}");

    let pgm = read(&out, "fig2.pgm");
    assert!(pgm.starts_with(b"P5\n100 100\n255\n"));
    assert_eq!(pgm.len(), b"P5\n100 100\n255\n".len() + 100 * 100);

    let manifest: serde_json::Value = serde_json::from_slice(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["subcommand"], "scan-fig2");
    assert_eq!(manifest["constants"]["id"], "CODATA-2018");
    assert_eq!(manifest["config"]["grid_nx"], "100");
    for key in ["version", "started_at", "finished_at", "runtime_seconds", "warnings", "strategy_histogram"] {
        assert!(!manifest[key].is_null(), "{key}");
    }
    for name in manifest["outputs"].as_array().unwrap() {
        assert!(out.join(name.as_str().unwrap()).exists(), "{name}");
    }
}

#[test]
fn configuration_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    let o = rie(&[
        "scan-fig1",
        "--nx", "6",
        "--ny", "8",
        "--grid-x-min", "1",
        "--grid-x-max", "3",
        "--format", "csv",
        "--out", first.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let cfg = first.join("run.cfg");
    let o = rie(&["scan-fig1", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read(&first, "fig1.csv"), read(&second, "fig1.csv"));
    assert!(!second.join("fig1.pgm").exists());
}

#[test]
fn minimal_configuration_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("min.cfg");
    std::fs::write(&cfg, "temperature_K = 2.73\ndipole_nm = 10\nt0_over_tau = 100\ny_max = 100\n").unwrap();
    let o = rie(&["kernels", "--config", cfg.to_str().unwrap(), "--t-over-tau", "50"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(value(&text, "t0"), 100.0);
    assert!((value(&text, "y_max") - 100.0).abs() < 1e-9);
}

fn config_error(o: &Output, key: &str) {
    assert_eq!(o.status.code(), Some(2), "{}", stderr(o));
    assert!(stderr(o).contains(&format!("`{key}`")), "{}", stderr(o));
}

#[test]
fn configuration_errors_exit_2() {
    config_error(&rie(&["kernels", "--gamma", "1.5", "--t-over-tau", "1"]), "gamma");
    config_error(&rie(&["kernels", "--cutoff-kind", "power_law", "--t-over-tau", "1"]), "cutoff_p");
    config_error(&rie(&["kernels"]), "t_over_tau");
    config_error(&rie(&["scan-fig2", "--nx", "3"]), "out");

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    config_error(&rie(&["kernels", "--config", cfg.to_str().unwrap()]), "colour");
}

#[test]
fn refused_strategy_exits_3() {
    let o = rie(&["kernels", "--t0-over-tau", "100", "--t-over-tau", "1e8", "--strategy", "quadrature"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("oscillation budget"));
}

#[test]
fn io_failure_exits_1() {
    let o = rie(&["eof", "--state", "/nonexistent/state.csv"]);
    assert_eq!(o.status.code(), Some(1));
    let o = rie(&["kernels", "--config", "/nonexistent/run.cfg", "--t-over-tau", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn evolve_output_feeds_eof() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ev");
    let o = rie(&[
        "evolve",
        "--t0-over-tau", "100",
        "--y-max", "100",
        "--gamma", "0",
        "--t-over-tau", "50",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let e1 = value(&stdout(&o), "E");
    let o = rie(&["eof", "--state", out.join("state.csv").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "E"), e1);
}
