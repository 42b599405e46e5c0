use std::path::Path;
use std::process::{Command, Output};

use wavequbit::signal::read_csv;
use wavequbit::{
    dual_function, encode_qubit, synth_burst, AnalyzingWavelet, BurstSpec, ColumnSpec,
    FrequencyGrid, MapMeta, SampleGrid, ShiftGrid, WaveletKind, WaveletMap,
};

fn wavequbit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavequbit"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn burst_signal(dir: &Path) {
    let out = wavequbit(
        dir,
        &["synth", "--burst", "5,10,0.5,1", "--dt", "0.0048828125", "--samples", "2048"],
    );
    assert!(out.status.success());
}

fn save_qubit(dir: &Path, name: &str, alpha: f64, beta: f64) {
    let map = WaveletMap::new(
        FrequencyGrid::log_spaced(5.0, 10.0, 2).unwrap(),
        ShiftGrid::new(1.0, 0.1, 1).unwrap(),
        vec![alpha, beta],
        MapMeta {
            wavelet: WaveletKind::MexicanHat,
            signal_grid: None,
        },
    )
    .unwrap();
    let dual = dual_function(&AnalyzingWavelet::mexican_hat()).unwrap();
    let q = encode_qubit(&map, (0, 0), (1, 0), &dual).unwrap();
    q.save_json(dir.join(name)).unwrap();
}

#[test]
fn synth_needs_a_burst() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavequbit(dir.path(), &["synth", "--dt", "0.01", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn synth_matches_library_output() {
    let dir = tempfile::tempdir().unwrap();
    burst_signal(dir.path());
    let file = std::fs::read(dir.path().join("signal.csv")).unwrap();
    let grid = SampleGrid::new(0.0, 0.0048828125, 2048).unwrap();
    let expected = synth_burst(&BurstSpec::new(5.0, 10.0, 0.5, 1.0).unwrap(), grid).unwrap();
    let mut buf = Vec::new();
    expected.write_csv(&mut buf).unwrap();
    assert_eq!(file, buf);
    assert!(dir.path().join("run.meta").exists());
}

#[test]
fn transform_then_reconstruct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    burst_signal(dir.path());
    let out = wavequbit(dir.path(), &["transform", "signal.csv", "--pgm", "map.pgm"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("96 frequencies x 513 shifts"));
    assert!(!stdout(&out).contains("warning"));
    assert!(std::fs::read(dir.path().join("map.pgm")).unwrap().starts_with(b"P5"));

    let out = wavequbit(dir.path(), &["reconstruct", "map.csv", "--reference", "signal.csv"]);
    assert!(out.status.success());
    let line = stdout(&out);
    let err: f64 = line
        .lines()
        .find_map(|l| l.strip_prefix("relative L2 error: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err <= 0.05, "{err}");

    let out = wavequbit(
        dir.path(),
        &["reconstruct", "map.csv", "--reference", "signal.csv", "--samples", "100"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_of_band_burst_warns() {
    let dir = tempfile::tempdir().unwrap();
    burst_signal(dir.path());
    let out = wavequbit(
        dir.path(),
        &["transform", "signal.csv", "--omega-min", "30", "--omega-max", "60", "--omega-count", "16"],
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("warning"));
}

#[test]
fn zero_signal_gives_zero_map_and_zero_reconstruction() {
    let dir = tempfile::tempdir().unwrap();
    let values: String = (0..256).map(|_| "0\n").collect();
    std::fs::write(dir.path().join("zero.csv"), values).unwrap();
    let args = ["transform", "zero.csv", "--dt", "0.01", "--omega-count", "16"];
    assert!(wavequbit(dir.path(), &args).status.success());
    let map = WaveletMap::load_csv(dir.path().join("map.csv"), WaveletKind::MexicanHat).unwrap();
    assert!(map.coeffs().iter().all(|&c| c == 0.0));

    let out = wavequbit(dir.path(), &["reconstruct", "map.csv", "--omega-count", "16"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("reconstructed.csv")).unwrap();
    let back = read_csv(text.as_bytes(), ColumnSpec::TimeValue).unwrap();
    assert!(back.samples().iter().all(|&v| v == 0.0));

    let out = wavequbit(dir.path(), &["encode", "map.csv", "--auto", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_reads_map_values() {
    let dir = tempfile::tempdir().unwrap();
    burst_signal(dir.path());
    assert!(wavequbit(dir.path(), &["transform", "signal.csv"]).status.success());
    let out = wavequbit(dir.path(), &["encode", "map.csv", "--point-m", "40,256", "--point-n", "60,200"]);
    assert!(out.status.success());
    let map = WaveletMap::load_csv(dir.path().join("map.csv"), WaveletKind::MexicanHat).unwrap();
    let q = json(&dir.path().join("qubit.json"));
    assert_eq!(q["point_m"]["W"].as_f64().unwrap(), map.get(40, 256));
    assert_eq!(q["point_n"]["W"].as_f64().unwrap(), map.get(60, 200));

    let out = wavequbit(dir.path(), &["encode", "map.csv", "--point-m", "3,3", "--point-n", "3,3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = wavequbit(dir.path(), &["encode", "map.csv", "--auto", "2", "--normalize"]);
    assert!(out.status.success());
    assert_eq!(json(&dir.path().join("qubit.json"))["normalized"], true);
}

#[test]
fn relate_basis_qubits() {
    let dir = tempfile::tempdir().unwrap();
    save_qubit(dir.path(), "a.json", 1.0, 0.0);
    save_qubit(dir.path(), "b.json", 1.0, 0.0);
    assert!(wavequbit(dir.path(), &["relate", "a.json", "b.json"]).status.success());
    let r = json(&dir.path().join("relation.json"));
    let u: Vec<f64> = r["U"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(u, [1.0, 0.0, 0.0, 0.0]);
    assert_eq!(r["separated"], true);
    assert_eq!(r["bell_matched"], serde_json::json!(["C", "D"]));
}

#[test]
fn relate_balanced_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    save_qubit(dir.path(), "a.json", h, h);
    save_qubit(dir.path(), "b.json", h, h);
    assert!(wavequbit(dir.path(), &["relate", "a.json", "b.json"]).status.success());
    let r = json(&dir.path().join("relation.json"));
    for v in r["U"].as_array().unwrap() {
        assert!((v.as_f64().unwrap() - 0.5).abs() <= 1e-15);
    }
    assert_eq!(r["separated"], true);
    assert_eq!(r["bell_matched"], serde_json::json!([]));
}

#[test]
fn malformed_qubit_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    save_qubit(dir.path(), "a.json", 1.0, 0.0);
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let out = wavequbit(dir.path(), &["relate", "a.json", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_and_flags_compose() {
    let dir = tempfile::tempdir().unwrap();
    burst_signal(dir.path());
    std::fs::write(
        dir.path().join("run.toml"),
        "omega_count = 12\nwavelet = \"morlet\"\nout_dir = \"out\"\n",
    )
    .unwrap();
    let out = wavequbit(
        dir.path(),
        &["transform", "signal.csv", "--config", "run.toml", "--omega-count", "20"],
    );
    assert!(out.status.success());
    let meta = std::fs::read_to_string(dir.path().join("out/run.meta")).unwrap();
    assert!(meta.contains("omega_count = 20"));
    assert!(meta.contains("wavelet = \"morlet\""));
    assert!(dir.path().join("out/map.csv").exists());
}

#[test]
fn unknown_option_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(wavequbit(dir.path(), &["transform", "--bogus"]).status.code(), Some(1));
    assert_eq!(wavequbit(dir.path(), &["--help"]).status.code(), Some(0));
}
