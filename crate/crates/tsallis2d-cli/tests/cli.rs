use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tsallis2d::{binarize, read_pgm, write_pgm, GrayImage, PgmVariant};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tsallis2d"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_constant(dir: &Path, name: &str, value: u8) {
    let img = GrayImage::new(16, 16, vec![value; 256]).unwrap();
    fs::write(dir.join(name), write_pgm(&img, PgmVariant::P5)).unwrap();
}

fn gen_disks(dir: &Path, seeds: &[&str]) {
    let mut args = vec!["--gen", "bimodal", "--size", "64x64", "--out", "."];
    for seed in seeds {
        args.push("--seed");
        args.push(seed);
    }
    let out = run(&args, dir);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn single_image_diag_run() {
    let tmp = tempfile::tempdir().unwrap();
    gen_disks(tmp.path(), &["1"]);

    let out = run(
        &[
            "bimodal_s1.pgm",
            "--q",
            "0.1",
            "--mode",
            "diag",
            "--out",
            "results",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    let mut lines = report.lines();
    assert_eq!(
        lines.next().unwrap(),
        "image,q,mode,t_star,s_star,criterion,millis"
    );
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "bimodal_s1.pgm");
    assert_eq!(fields[1], "0.1");
    assert_eq!(fields[2], "diag");
    let t: u8 = fields[3].parse().unwrap();
    assert_eq!(fields[3], fields[4], "diagonal result has t = s");
    assert!(lines.next().is_none());

    // The binarized output re-reads and re-binarizes to itself.
    let out_path = tmp.path().join(format!("results/bimodal_s1.q0.1.t{t}.pgm"));
    let bytes = fs::read(&out_path).unwrap();
    let img = read_pgm(&bytes).unwrap();
    assert!(img.pixels().iter().all(|&p| p == 0 || p == 255));
    assert_eq!(binarize(&img, t).as_gray(), &img);
}

#[test]
fn degenerate_input_reports_and_continues() {
    let tmp = tempfile::tempdir().unwrap();
    gen_disks(tmp.path(), &["1"]);
    write_constant(tmp.path(), "flat.pgm", 100);

    let out = run(
        &["flat.pgm", "bimodal_s1.pgm", "--q", "0.5", "--out", "."],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1), "degenerate input forces exit 1");
    let report = stdout(&out);
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("flat.pgm,0.5,diag,degenerate,,,"));
    assert!(lines[2].starts_with("bimodal_s1.pgm,0.5,diag,"));
    assert!(
        !lines[2].contains("degenerate"),
        "valid image still processed"
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("degenerate histogram"));
}

#[test]
fn unreadable_input_is_diagnosed() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("junk.pgm"), b"not a pgm").unwrap();
    gen_disks(tmp.path(), &["1"]);
    let out = run(&["junk.pgm", "bimodal_s1.pgm", "--out", "."], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let report = stdout(&out);
    assert!(
        !report.contains("junk.pgm"),
        "no report rows for undecodable files"
    );
    assert!(report.contains("bimodal_s1.pgm"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("junk.pgm"));
}

#[test]
fn invalid_arguments_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    // No inputs and no --gen.
    assert_eq!(run(&["--q", "0.5"], tmp.path()).status.code(), Some(2));
    // Nonpositive q.
    gen_disks(tmp.path(), &["1"]);
    assert_eq!(
        run(&["bimodal_s1.pgm", "--q", "-1"], tmp.path())
            .status
            .code(),
        Some(2)
    );
    // Unknown mode is a clap parse error.
    assert_eq!(
        run(&["bimodal_s1.pgm", "--mode", "banana"], tmp.path())
            .status
            .code(),
        Some(2)
    );
    // --gen rejects positional inputs.
    assert_eq!(
        run(&["x.pgm", "--gen", "constant"], tmp.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn q_sweep_shows_stable_fractional_and_displaced_q2() {
    let tmp = tempfile::tempdir().unwrap();
    gen_disks(tmp.path(), &["1", "2", "3"]);

    let out = run(
        &[
            "bimodal_s1.pgm",
            "bimodal_s2.pgm",
            "bimodal_s3.pgm",
            "--q",
            "0.1",
            "--q",
            "0.5",
            "--q",
            "0.9",
            "--q",
            "1",
            "--q",
            "2",
            "--out",
            "sweep",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    let mut fractional = Vec::new();
    let mut at_two = Vec::new();
    for row in report.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        let q: f64 = fields[1].parse().unwrap();
        let t: i32 = fields[3].parse().unwrap();
        if q == 2.0 {
            at_two.push(t);
        } else {
            // q = 1 lands in the valley with the fractional sweep here.
            fractional.push(t);
        }
    }
    assert_eq!(fractional.len(), 12);
    assert_eq!(at_two.len(), 3);
    let f_min = *fractional.iter().min().unwrap();
    let f_max = *fractional.iter().max().unwrap();
    assert!(
        f_max - f_min <= 6,
        "fractional q thresholds stay stable: {fractional:?}"
    );
    for t in &at_two {
        assert!(
            (t - (f_min + f_max) / 2).abs() > 30,
            "q=2 threshold {t} should sit far from the valley {fractional:?}"
        );
    }
}

#[test]
fn dumps_are_written_and_consistent() {
    let tmp = tempfile::tempdir().unwrap();
    gen_disks(tmp.path(), &["4"]);

    let out = run(
        &[
            "bimodal_s4.pgm",
            "--q",
            "0.5",
            "--dump-surface",
            "--dump-histogram",
            "--out",
            "dumps",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    let row = report.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    let reported_t: usize = fields[3].parse().unwrap();
    let reported_criterion: f64 = fields[5].parse().unwrap();

    // Histogram dump: nonzero cells, counts match the probability column.
    let hist_csv = fs::read_to_string(tmp.path().join("dumps/bimodal_s4.hist.csv")).unwrap();
    let mut total_count = 0u64;
    let mut prob_sum = 0.0f64;
    for line in hist_csv.lines() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        let count: u64 = fields[2].parse().unwrap();
        assert!(count > 0);
        total_count += count;
        prob_sum += fields[3].parse::<f64>().unwrap();
    }
    assert_eq!(total_count, 62 * 62, "interior pixels of a 64x64 image");
    assert!((prob_sum - 1.0).abs() < 1e-9);

    // Surface dump: 65536 rows; the diagonal argmax reproduces the report.
    let surface_csv =
        fs::read_to_string(tmp.path().join("dumps/bimodal_s4.q0.5.surface.csv")).unwrap();
    let mut best: Option<(usize, f64)> = None;
    let mut rows = 0usize;
    for line in surface_csv.lines() {
        rows += 1;
        let fields: Vec<&str> = line.split(',').collect();
        let t: usize = fields[0].parse().unwrap();
        let s: usize = fields[1].parse().unwrap();
        if t == s && fields[2] != "-inf" {
            let v: f64 = fields[2].parse().unwrap();
            if v > best.map_or(f64::NEG_INFINITY, |(_, b)| b) {
                best = Some((t, v));
            }
        }
    }
    assert_eq!(rows, 65536);
    let (best_t, best_v) = best.unwrap();
    assert_eq!(best_t, reported_t);
    assert_eq!(best_v, reported_criterion);
}

#[test]
fn one_dimensional_mode_leaves_s_empty() {
    let tmp = tempfile::tempdir().unwrap();
    gen_disks(tmp.path(), &["5"]);
    let out = run(
        &["bimodal_s5.pgm", "--q", "0.5", "--mode", "1d", "--out", "."],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    let row = report.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[2], "1d");
    assert!(!fields[3].is_empty());
    assert!(fields[4].is_empty(), "1d mode reports no s threshold");
}

#[test]
fn text_report_format() {
    let tmp = tempfile::tempdir().unwrap();
    gen_disks(tmp.path(), &["6"]);
    let out = run(
        &[
            "bimodal_s6.pgm",
            "--q",
            "0.5",
            "--report",
            "text",
            "--out",
            ".",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert!(report
        .lines()
        .next()
        .unwrap()
        .trim_start()
        .starts_with("image"));
    assert!(report.contains("bimodal_s6.pgm"));
}

#[test]
fn generated_constant_scene_is_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "--gen", "constant", "--means", "77", "--sigmas", "0", "--seed", "3", "--size", "8x4",
            "--out", ".",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let img = read_pgm(&fs::read(tmp.path().join("constant_s3.pgm")).unwrap()).unwrap();
    assert_eq!((img.width(), img.height()), (8, 4));
    assert!(img.pixels().iter().all(|&p| p == 77));
}

#[test]
fn generator_rejects_bad_params() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &["--gen", "bimodal", "--mix", "1.5", "--out", "."],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_rows_are_deterministic_apart_from_timing() {
    let tmp = tempfile::tempdir().unwrap();
    gen_disks(tmp.path(), &["7", "8"]);
    let args = [
        "bimodal_s7.pgm",
        "bimodal_s8.pgm",
        "--q",
        "0.3",
        "--q",
        "1",
        "--out",
        ".",
    ];
    let strip_millis = |report: &str| -> Vec<String> {
        report
            .lines()
            .map(|l| {
                l.rsplit_once(',')
                    .map(|(head, _)| head.to_string())
                    .unwrap_or_else(|| l.to_string())
            })
            .collect()
    };
    let first = run(&args, tmp.path());
    let second = run(&args, tmp.path());
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(
        strip_millis(&stdout(&first)),
        strip_millis(&stdout(&second))
    );
}
