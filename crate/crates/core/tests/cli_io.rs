use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;
use tvdepth::io::pgm::{write_pgm_ascii, GrayImage};
use tvdepth::io::{read_long_csv, read_report, read_truth, read_wide_csv, write_wide_csv};
use tvdepth::io::report::read_geometry;
use tvdepth::{detect, DetectionConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tvdepth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SPIKE: &str = "0,1\n0,0\n1,1\n5,5\n";

#[test]
fn detect_flags_the_spike() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("spike.csv");
    fs::write(&input, SPIKE).unwrap();
    let geometry = dir.path().join("geom.json");
    let out = run(&["detect", path_str(&input), "--geometry", path_str(&geometry)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = read_report(out.stdout.as_slice()).unwrap();
    assert_eq!(doc.magnitude_outliers, vec![2]);
    assert!(doc.shape_outliers.is_empty());
    assert_eq!(doc.meta.index_base, 0);
    assert_eq!(doc.tvd.len(), 3);

    let geom = read_geometry(fs::File::open(&geometry).unwrap()).unwrap();
    assert_eq!(geom.magnitude_outliers, vec![2]);
    assert_eq!(geom.median_index, doc.median_index);
    assert_eq!(geom.grid.len(), 2);
}

#[test]
fn simulate_writes_curves_and_truth_sidecar() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("m4.csv");
    let out = run(&["simulate", "--model", "4", "--seed", "9", "--out", path_str(&out_path)]);
    assert!(out.status.success());
    let ds = read_wide_csv(fs::File::open(&out_path).unwrap(), 1).unwrap();
    assert_eq!((ds.n(), ds.m()), (100, 50));
    let truth = read_truth(fs::File::open(dir.path().join("m4.truth.csv")).unwrap()).unwrap();
    assert_eq!(truth.len(), 100);

    let report = detect(&ds, &DetectionConfig::default()).unwrap();
    let flagged = report.all_outliers();
    let expected: Vec<usize> = (0..100).filter(|&j| truth[j]).collect();
    assert_eq!(flagged, expected);
}

#[test]
fn simulate_is_byte_reproducible() {
    let a = run(&["simulate", "--model", "6", "--seed", "3"]);
    let b = run(&["simulate", "--model", "6", "--seed", "3"]);
    let c = run(&["simulate", "--model", "6", "--seed", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn piped_detect_is_byte_reproducible_across_thread_counts() {
    let sim = run(&["simulate", "--model", "3", "--seed", "11"]);
    let one = bin()
        .env("TVDEPTH_THREADS", "1")
        .args(["detect", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(&sim.stdout)?;
            c.wait_with_output()
        })
        .unwrap();
    let many = run_stdin(&["detect", "-"], &sim.stdout);
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn wide_csv_round_trips_through_writer() {
    let sim = run(&["simulate", "--model", "7", "--seed", "1", "--n", "10", "--m", "20"]);
    let ds = read_wide_csv(sim.stdout.as_slice(), 1).unwrap();
    let mut buf = Vec::new();
    write_wide_csv(&ds, &mut buf).unwrap();
    assert_eq!(buf, sim.stdout);
    assert_eq!(read_wide_csv(buf.as_slice(), 1).unwrap(), ds);
}

#[test]
fn long_csv_matches_wide_csv() {
    let dir = TempDir::new().unwrap();
    let long = dir.path().join("long.csv");
    // curves keep first-appearance order; grid points are sorted
    fs::write(
        &long,
        "curve_id,t,value\na,1,0\nb,1,1\na,0,0\nc,1,5\nb,0,1\nc,0,5\n",
    )
    .unwrap();
    let ds = read_long_csv(fs::File::open(&long).unwrap()).unwrap();
    assert_eq!(ds, read_wide_csv(SPIKE.as_bytes(), 1).unwrap());
    let out = run(&["detect", path_str(&long), "--format", "long_csv"]);
    assert!(out.status.success());
    assert_eq!(read_report(out.stdout.as_slice()).unwrap().magnitude_outliers, vec![2]);

    fs::write(&long, "curve_id,t,value\na,0,0\na,1,0\nb,0,1\n").unwrap();
    let out = run(&["detect", path_str(&long), "--format", "long_csv"]);
    assert_eq!(out.status.code(), Some(2));
}

fn write_image(dir: &Path, name: &str, width: usize, height: usize, pixels: Vec<f64>) {
    let img = GrayImage {
        width,
        height,
        maxval: 255,
        pixels,
    };
    fs::write(dir.join(name), write_pgm_ascii(&img)).unwrap();
}

#[test]
fn pgm_directory_becomes_one_curve_per_image() {
    let dir = TempDir::new().unwrap();
    write_image(dir.path(), "b.pgm", 2, 2, vec![4.0, 5.0, 6.0, 7.0]);
    write_image(dir.path(), "a.pgm", 2, 2, vec![0.0, 1.0, 2.0, 3.0]);
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let out = run(&["depth", path_str(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "curve,tvd,msv");
    assert_eq!(lines.len(), 3);

    let ds = tvdepth::io::read_pgm_dir(dir.path(), 1).unwrap();
    assert_eq!((ds.n(), ds.m()), (2, 4));
    assert_eq!(ds.row(0), &[0.0, 1.0, 2.0, 3.0]);
}

#[test]
fn pgm_stride_subsamples_pixels() {
    let dir = TempDir::new().unwrap();
    let (w, h) = (160, 128);
    for k in 0..3 {
        let pixels = (0..w * h).map(|p| ((p * (k + 1)) % 256) as f64).collect();
        write_image(dir.path(), &format!("frame{k}.pgm"), w, h, pixels);
    }
    let ds = tvdepth::io::read_pgm_dir(dir.path(), 16).unwrap();
    assert_eq!((ds.n(), ds.m()), (3, 1280));
    let full = tvdepth::io::read_pgm_dir(dir.path(), 1).unwrap();
    assert_eq!(ds, full.subsample(16).unwrap());
}

#[test]
fn empty_pgm_directory_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&["detect", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn stride_on_csv_matches_subsampled_dataset() {
    let sim = run(&["simulate", "--model", "2", "--seed", "5", "--n", "30"]);
    let strided = run_stdin(&["depth", "-", "--stride", "5"], &sim.stdout);
    assert!(strided.status.success());
    let ds = read_wide_csv(sim.stdout.as_slice(), 1).unwrap().subsample(5).unwrap();
    assert_eq!(ds.m(), 10);
    let mut buf = Vec::new();
    write_wide_csv(&ds, &mut buf).unwrap();
    let direct = run_stdin(&["depth", "-"], &buf);
    assert_eq!(strided.stdout, direct.stdout);
}

#[test]
fn bench_emits_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("bench.json");
    let out = run(&["bench", "--models", "1,6", "--reps", "3", "--seed", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let as_json = run(&[
        "bench", "--models", "1,6", "--reps", "3", "--seed", "2", "--out",
        path_str(&json),
    ]);
    assert!(as_json.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,method,reps,tpr_mean,tpr_sd,tpr_count,fpr_mean,fpr_sd,fpr_count"
    );
    assert_eq!(lines.count(), 4);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&json).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_and_parse_errors_have_distinct_codes() {
    assert_eq!(run(&["detect", "--no-such-flag", "x.csv"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", "--model", "9"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let bad = run_stdin(&["detect", "-"], b"0,1\n0,x\n");
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(run(&["detect", "/nonexistent/file.csv"]).status.code(), Some(2));
}
