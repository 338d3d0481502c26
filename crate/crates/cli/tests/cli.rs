use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use quatcomp::media::{load_tensor, FrameSequence};
use quatcomp::qtensor::tubal_spectrum;
use quatcomp::TransformSpec;

fn quatcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatcomp"))
        .args(args)
        .env_remove("QUATCOMP_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = quatcomp(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth_smooth(dir: &Path, h: usize, w: usize, f: usize) {
    let (h, w, f) = (h.to_string(), w.to_string(), f.to_string());
    ok(&[
        "synth",
        "--kind",
        "smooth",
        "--height",
        &h,
        "--width",
        &w,
        "--frames",
        &f,
        "--seed",
        "3",
        "--output",
        s(dir),
    ]);
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Rows of a sparsity CSV as (left, right, count, cumulative).
fn histogram(csv: &str) -> Vec<(f64, f64, usize, f64)> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("bin_left,bin_right,count,cumulative_fraction"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn help_lists_every_recover_flag() {
    let out = ok(&["recover", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in [
        "--input",
        "--output",
        "--sr",
        "--mask-file",
        "--variant",
        "--lambda",
        "--beta1",
        "--rho",
        "--beta-max",
        "--rank-trunc",
        "--log-eps",
        "--tol-inner",
        "--tol-outer",
        "--max-inner",
        "--max-outer",
        "--seed",
        "--strict",
        "--timing",
    ] {
        assert!(text.contains(flag), "missing {flag}");
    }
}

#[test]
fn bad_flags_are_rejected_by_name() {
    let out = quatcomp(&["recover", "--input", "a", "--output", "b", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));

    let out = quatcomp(&["recover", "--input", "a", "--output", "b", "--lambda", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--lambda"));

    let out = quatcomp(&["recover", "--input", "a", "--output", "b", "--sr", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--sr"));

    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("in");
    synth_smooth(&frames, 8, 8, 2);
    let out = quatcomp(&[
        "recover",
        "--input",
        s(&frames),
        "--output",
        s(&dir.path().join("o")),
        "--rank-trunc",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--rank-trunc"));
    // Rejected before anything is written.
    assert!(!dir.path().join("o").exists());
}

#[test]
fn missing_or_empty_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = quatcomp(&["sparsity", "--input", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no frames"));
    let out = quatcomp(&["metrics", "--reference", s(&dir.path().join("nope")), "--test", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_quatcomp"))
        .args(["sparsity", "--input", "."])
        .env("QUATCOMP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("QUATCOMP_THREADS"));
}

#[test]
fn lowrank_synth_has_exact_rank_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        ok(&[
            "synth",
            "--kind",
            "lowrank",
            "--height",
            "20",
            "--width",
            "20",
            "--frames",
            "6",
            "--rank",
            "3",
            "--seed",
            "9",
            "--output",
            s(d),
        ]);
    }
    let t = load_tensor(a.join("truth.qten")).unwrap();
    assert_eq!(t.dims(), (20, 20, 6));
    let spectrum = tubal_spectrum(&t, &TransformSpec::dct(6)).unwrap();
    let cut = 1e-10 * spectrum.max();
    for k in 0..6 {
        assert_eq!(spectrum.column(k).iter().filter(|&&v| v > cut).count(), 3, "slice {k}");
    }
    for name in ["truth.qten", "frame_0001.png", "frame_0006.png"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let out = quatcomp(&[
        "synth",
        "--kind",
        "lowrank",
        "--height",
        "4",
        "--width",
        "9",
        "--rank",
        "4",
        "--output",
        s(&a),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--rank"));
}

#[test]
fn smooth_video_is_sparse_under_qtdct() {
    let dir = tempfile::tempdir().unwrap();
    synth_smooth(dir.path(), 32, 32, 6);
    let csv_path = dir.path().join("hist.csv");
    ok(&["sparsity", "--input", s(dir.path()), "--bins", "10", "--output", s(&csv_path)]);
    let rows = histogram(&fs::read_to_string(&csv_path).unwrap());
    assert_eq!(rows.len(), 11);
    let max = rows.last().unwrap().1;
    assert!((rows[0].1 - 1e-3 * max).abs() <= 1e-12 * max);
    assert!(rows[0].3 > 0.5, "near-zero fraction {}", rows[0].3);
    assert_eq!(rows.last().unwrap().3, 1.0);
    assert_eq!(rows.iter().map(|r| r.2).sum::<usize>(), 32 * 32 * 6);
}

#[test]
fn constant_video_has_one_significant_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let pixel = [0.2, 0.6, 0.4];
    let data: Vec<f64> = (0..6 * 5 * 3).flat_map(|_| pixel).collect();
    FrameSequence::from_vec(6, 5, 3, data).unwrap().save_dir(dir.path()).unwrap();
    let out = ok(&["sparsity", "--input", s(dir.path()), "--bins", "4"]);
    let rows = histogram(&String::from_utf8(out.stdout).unwrap());
    let counts: Vec<usize> = rows.iter().map(|r| r.2).collect();
    assert_eq!(counts, vec![89, 0, 0, 0, 1]);
}

#[test]
fn full_observation_round_trips_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in"), dir.path().join("out"));
    synth_smooth(&input, 12, 10, 3);
    ok(&[
        "recover",
        "--input",
        s(&input),
        "--output",
        s(&output),
        "--sr",
        "1.0",
        "--max-outer",
        "1",
        "--max-inner",
        "20",
    ]);
    let m = json(&output.join("metrics.json"));
    assert_eq!(m["psnr"], "inf");
    assert_eq!(m["assim"], 1.0);
    assert_eq!(m["schema"], 1);
    assert!(m["seconds"].is_null());
    for t in 1..=3 {
        let name = format!("frame_{t:04}.png");
        assert_eq!(
            fs::read(input.join(&name)).unwrap(),
            fs::read(output.join("frames").join(&name)).unwrap()
        );
    }
}

#[test]
fn runs_are_byte_reproducible_and_masks_reload() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    synth_smooth(&input, 16, 16, 4);
    let run = |out: &Path, extra: &[&str]| {
        let mut args = vec![
            "recover",
            "--input",
            s(&input),
            "--output",
            s(out),
            "--max-outer",
            "2",
            "--max-inner",
            "40",
        ];
        args.extend_from_slice(extra);
        ok(&args);
    };
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    run(&a, &["--sr", "0.4", "--seed", "5", "--variant", "rnns1"]);
    run(&b, &["--sr", "0.4", "--seed", "5", "--variant", "rnns1"]);
    let mask = a.join("mask.qmsk");
    run(&c, &["--mask-file", s(&mask), "--seed", "5", "--variant", "rnns1"]);
    for name in ["metrics.json", "trace.csv", "mask.qmsk", "frames/frame_0004.png", "observed/frame_0001.png"]
    {
        let first = fs::read(a.join(name)).unwrap();
        assert_eq!(first, fs::read(b.join(name)).unwrap(), "{name}");
        assert_eq!(first, fs::read(c.join(name)).unwrap(), "{name} from mask file");
    }
    let trace = fs::read_to_string(a.join("trace.csv")).unwrap();
    assert!(trace.starts_with("outer,inner,beta,residual_th,residual_sc,step,objective\n"));
    assert_eq!(
        trace.lines().count(),
        1 + json(&a.join("metrics.json"))["iterations"].as_u64().unwrap() as usize
    );

    let out = quatcomp(&[
        "recover",
        "--input",
        s(&input),
        "--output",
        s(&c),
        "--mask-file",
        s(&input.join("truth.qten")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = quatcomp(&[
        "recover",
        "--input",
        s(&input),
        "--output",
        s(&c),
        "--mask-file",
        s(&mask),
        "--sr",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn strict_reports_iteration_cap() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    synth_smooth(&input, 8, 8, 2);
    let out = quatcomp(&[
        "recover",
        "--input",
        s(&input),
        "--output",
        s(&dir.path().join("o")),
        "--max-inner",
        "3",
        "--max-outer",
        "1",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // Outputs are still written.
    assert!(dir.path().join("o/metrics.json").exists());
    ok(&[
        "recover",
        "--input",
        s(&input),
        "--output",
        s(&dir.path().join("p")),
        "--max-inner",
        "3",
        "--max-outer",
        "1",
    ]);
}

#[test]
fn recovery_beats_zero_filling() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in"), dir.path().join("out"));
    synth_smooth(&input, 64, 64, 8);
    // One shortened pass keeps the test quick; the gain is already large.
    ok(&[
        "recover",
        "--input",
        s(&input),
        "--output",
        s(&output),
        "--sr",
        "0.3",
        "--variant",
        "rnns2",
        "--max-outer",
        "1",
        "--max-inner",
        "100",
    ]);
    let got = json(&output.join("metrics.json"))["psnr"].as_f64().unwrap();
    let out = ok(&["metrics", "--reference", s(&input), "--test", s(&output.join("observed"))]);
    let base: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let base = base["psnr"].as_f64().unwrap();
    assert!(got >= base + 5.0, "{got} dB vs zero-filled {base} dB");
}
