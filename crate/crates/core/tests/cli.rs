//! End-to-end checks of the `blockmatch` binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blockmatch"))
}

fn run_ok(args: &[&str]) -> Output {
    let output = bin().args(args).output().unwrap();
    assert!(
        output.status.success(),
        "{args:?}\nstderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn estimate_emits_one_row_per_block() {
    let output = run_ok(&[
        "estimate", "--alg", "dcds", "--synth", "static", "--size", "64x64", "--frames", "2",
    ]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "block_col,block_row,dx,dy,cost,nsp");
    // 4x4 blocks of a 64x64 frame, all at rest.
    assert_eq!(stdout.lines().count(), 1 + 16);
    for line in stdout.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(&cols[2..5], &["0", "0", "0.000000"]);
    }
}

#[test]
fn estimate_rejects_unknown_algorithm() {
    let output = bin()
        .args([
            "estimate", "--alg", "xyz", "--synth", "static", "--size", "32x32",
        ])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown algorithm"), "{stderr}");
}

#[test]
fn estimate_trace_dump_is_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    run_ok(&[
        "estimate",
        "--alg",
        "dcds",
        "--synth",
        "translate:1,0",
        "--size",
        "32x32",
        "--frames",
        "2",
        "--dump-trace",
        trace.to_str().unwrap(),
        "--out",
        dir.path().join("field.csv").to_str().unwrap(),
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&read(&trace)).unwrap();
    let blocks = parsed.as_array().unwrap();
    assert_eq!(blocks.len(), 4);
    assert!(blocks[0]["steps"][0]["pattern"].is_string());
}

#[test]
fn bench_row_count_and_oracle_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    run_ok(&[
        "bench",
        "--synth",
        "translate:1,0",
        "--size",
        "64x64",
        "--frames",
        "4",
        "--alg",
        "dcds,cds",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = read(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "frame,algorithm,mad,mse,nsp,psnr_db,dist,prob");
    // 3 frame pairs x (fs + 2 requested) + 3 average rows.
    assert_eq!(lines.len(), 1 + 3 * 3 + 3);
    // FS is its own oracle: distance 0, probability 1.
    for line in lines.iter().filter(|l| l.contains(",fs,")) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[6], "0.000000");
        assert_eq!(cols[7], "1.000000");
    }
}

#[test]
fn bench_full_suite_is_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    run_ok(&[
        "bench",
        "--synth",
        "static",
        "--size",
        "32x32",
        "--frames",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = read(&out);
    for alg in [
        "fs", "tss", "ntss", "4ss", "bbgds", "ds", "hexbs-h", "hexbs-v", "cds", "dcds", "dcds-s",
    ] {
        assert!(text.contains(&format!("1,{alg},")), "missing {alg}");
    }
    // Lossless compensation on a static sequence.
    assert!(text.contains(",inf,"));
}

#[test]
fn stats_static_sequence_is_a_central_delta() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "stats",
        "--synth",
        "static",
        "--size",
        "64x64",
        "--frames",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let quarter = read(&dir.path().join("quarter.csv"));
    let first_cell = quarter.lines().next().unwrap().split(',').next().unwrap();
    assert_eq!(first_cell, "1.000000");
    let regional = read(&dir.path().join("regional.csv"));
    for line in regional.lines().skip(1) {
        assert!(line.ends_with(",1.000000"), "{line}");
    }
    // Full table and JSON twin both exist.
    assert!(dir.path().join("full.csv").exists());
    let json = read(&dir.path().join("full.json"));
    assert!(json.contains("\"range\":7"));
    assert!(dir.path().join("marginals.csv").exists());
    assert!(dir.path().join("fits.csv").exists());
}

#[test]
fn stats_translation_concentrates_on_the_shift() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "stats",
        "--synth",
        "translate:2,0",
        "--size",
        "64x64",
        "--frames",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let quarter = read(&dir.path().join("quarter.csv"));
    let rows: Vec<Vec<f64>> = quarter
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let argmax = rows
        .iter()
        .enumerate()
        .flat_map(|(dy, row)| row.iter().enumerate().map(move |(dx, v)| ((dx, dy), *v)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    // Interior blocks all vote (2,0); only the seam-column blocks differ.
    assert_eq!(argmax.0, (2, 0));
    assert!(argmax.1 >= 0.75);
}

#[test]
fn stats_prior_conditional_on_translation_is_a_delta() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "stats",
        "--synth",
        "translate:2,0",
        "--size",
        "64x64",
        "--frames",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
        "--conditional",
        "prior",
        "--S",
        "cds-step1",
        "--at",
        "2,0",
    ]);
    let table = read(&dir.path().join("conditional.csv"));
    let rows: Vec<Vec<f64>> = table
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 15);
    // Delta at (dx,dy) = (2,0) -> row 7, column 9.
    for (dy, row) in rows.iter().enumerate() {
        for (dx, v) in row.iter().enumerate() {
            let want = if (dx, dy) == (9, 7) { 1.0 } else { 0.0 };
            assert_eq!(*v, want, "cell ({dx},{dy})");
        }
    }
}

#[test]
fn stats_unattained_condition_warns_and_writes_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_ok(&[
        "stats",
        "--synth",
        "static",
        "--size",
        "64x64",
        "--frames",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
        "--conditional",
        "prior",
        "--at",
        "7,7",
    ]);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("warning"), "{stderr}");
    let table = read(&dir.path().join("conditional.csv"));
    assert!(table.lines().all(|l| l.split(',').all(|c| c == "0.000000")));
}

#[test]
fn ideal_dcds_map_first_row() {
    let output = run_ok(&["ideal", "--alg", "dcds"]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.lines().next().unwrap(), "7,10,11,11,15,15,17,17");
    assert_eq!(stdout.lines().count(), 8);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("matches the reference table exactly"),
        "{stderr}"
    );
}

#[test]
fn ideal_fs_map_is_constant() {
    let output = run_ok(&["ideal", "--alg", "fs"]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout
        .lines()
        .all(|l| l == "225,225,225,225,225,225,225,225"));
}

#[test]
fn ideal_eta_table_on_the_fixture() {
    let output = run_ok(&["ideal", "--eta", "--table", "fixture"]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    let hcsp = stdout.lines().find(|l| l.starts_with("hcsp,")).unwrap();
    let eta: f64 = hcsp.split(',').next_back().unwrap().parse().unwrap();
    assert!((eta - 0.1178).abs() < 1e-4);
}

#[test]
fn ideal_ansp_fixture_weights() {
    let output = run_ok(&["ideal", "--alg", "dcds", "--ansp", "--weights", "fixture"]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    let row = stdout.lines().nth(1).unwrap();
    let v: f64 = row.split(',').next_back().unwrap().parse().unwrap();
    assert!((v - 9.7).abs() < 0.5, "{row}");
}

#[test]
fn ideal_ansp_region_defaults() {
    let output = run_ok(&[
        "ideal",
        "--alg",
        "dcds,cds",
        "--ansp",
        "--regions",
        "default",
    ]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    let vals: Vec<f64> = stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').next_back().unwrap().parse().unwrap())
        .collect();
    // DCDS averages fewer points than CDS under the center-biased masses.
    assert!(vals[0] < vals[1]);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"range": 4}"#).unwrap();

    let output = run_ok(&["ideal", "--alg", "fs", "--config", cfg.to_str().unwrap()]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 5); // quarter rows 0..=4
    assert!(stdout.lines().next().unwrap().starts_with("81,"));

    let output = run_ok(&[
        "ideal",
        "--alg",
        "fs",
        "--config",
        cfg.to_str().unwrap(),
        "--range",
        "2",
    ]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.lines().next().unwrap().starts_with("25,"));
}

#[test]
fn missing_input_is_a_single_line_error() {
    let output = bin().args(["bench"]).output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("error:"));
}

#[test]
fn raw_input_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("seq.yuv");
    // Two 32x32 luma-only frames with a (1,0) shift between them.
    let frames = blockmatch::ingest::synth_sequence(
        blockmatch::ingest::SynthKind::Translate(1, 0),
        32,
        32,
        2,
    );
    let mut bytes = Vec::new();
    for f in &frames {
        bytes.extend_from_slice(f.luma());
    }
    std::fs::write(&raw, bytes).unwrap();

    let output = run_ok(&[
        "estimate",
        "--alg",
        "fs",
        "--raw",
        raw.to_str().unwrap(),
        "--size",
        "32x32",
        "--fmt",
        "y",
    ]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    // Interior block of a 32x32 frame recovers the shift.
    assert!(stdout.lines().any(|l| l.starts_with("0,0,1,0,0.000000")));
}

#[test]
fn stats_accepts_explicit_offset_sets() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "stats",
        "--synth",
        "translate:2,0",
        "--size",
        "64x64",
        "--frames",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
        "--conditional",
        "prior",
        "--S",
        "offsets:0,0;2,0;-2,0",
        "--at",
        "2,0",
    ]);
    let table = read(&dir.path().join("conditional.csv"));
    let row7: Vec<&str> = table.lines().nth(7).unwrap().split(',').collect();
    assert_eq!(row7[9], "1.000000");
}

#[test]
fn ideal_accepts_table_files_written_by_stats() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "stats",
        "--synth",
        "static",
        "--size",
        "64x64",
        "--frames",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let table = dir.path().join("full.json");

    // A static sequence gives a delta distribution at the origin: the
    // 7-point cross covers all of it.
    let output = run_ok(&["ideal", "--eta", "--table", table.to_str().unwrap()]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    let hcsp = stdout.lines().find(|l| l.starts_with("hcsp,")).unwrap();
    assert_eq!(hcsp, "hcsp,7,1.000000,0.142857");

    // Delta weights price every algorithm at its zero-motion count.
    let output = run_ok(&[
        "ideal",
        "--alg",
        "dcds",
        "--ansp",
        "--weights",
        table.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.lines().nth(1).unwrap().ends_with(",7.000000"));
}
