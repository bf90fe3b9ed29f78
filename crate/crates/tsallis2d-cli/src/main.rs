//! Batch front end: threshold PGM images by 2D Tsallis entropy, sweep q,
//! emit binarized outputs, CSV dumps, and a run report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use tsallis2d::baseline1d::{build_histogram_1d, find_threshold_1d};
use tsallis2d::search::{criterion_surface_from_tables, find_threshold_from_tables};
use tsallis2d::synth::{generate_synthetic, SynthKind, SynthParams};
use tsallis2d::{
    binarize, build_prefix_tables, read_pgm, write_pgm, Error, GrayImage, JointHistogram,
    PgmVariant, PrefixTables, SearchMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Search threshold pairs on the diagonal t = s.
    Diag,
    /// Search the full 256x256 (t, s) grid.
    Full,
    /// Plain 1D entropic threshold over the gray-level histogram.
    #[value(name = "1d")]
    OneD,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Diag => "diag",
            Mode::Full => "full",
            Mode::OneD => "1d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Bimodal,
    Trimodal,
    Constant,
}

#[derive(Parser, Debug)]
#[command(
    name = "tsallis2d",
    about = "Select binarization thresholds by maximizing 2D Tsallis entropy",
    after_help = "Exit codes: 0 success, 1 per-file failures, 2 invalid arguments."
)]
struct Args {
    /// Input PGM images (P2 or P5).
    inputs: Vec<PathBuf>,

    /// Entropic index q; repeat the flag to sweep several values.
    #[arg(long = "q", value_name = "Q")]
    q: Vec<f64>,

    /// Candidate set to search.
    #[arg(long, value_enum, default_value_t = Mode::Diag)]
    mode: Mode,

    /// Output directory for binarized images and dumps.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Dump the criterion surface as <stem>.q<q>.surface.csv (2D modes).
    #[arg(long)]
    dump_surface: bool,

    /// Dump the joint histogram as <stem>.hist.csv.
    #[arg(long)]
    dump_histogram: bool,

    /// Report format written to stdout.
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    report: ReportFormat,

    /// Generate a synthetic corpus instead of thresholding inputs.
    #[arg(long, value_enum, value_name = "KIND")]
    gen: Option<GenKind>,

    /// Class means for --gen, background first (comma separated).
    #[arg(long, value_delimiter = ',', value_name = "M,..")]
    means: Vec<f64>,

    /// Class sigmas for --gen; one shared value or one per class.
    #[arg(long, value_delimiter = ',', value_name = "S,..")]
    sigmas: Vec<f64>,

    /// Object area fraction for --gen disk scenes.
    #[arg(long, default_value_t = 0.25)]
    mix: f64,

    /// Seed for --gen; repeat the flag to emit one image per seed.
    #[arg(long = "seed", value_name = "SEED")]
    seeds: Vec<u64>,

    /// Image size for --gen, as WxH or a single square dimension.
    #[arg(long, default_value = "128x128")]
    size: String,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("tsallis2d: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(args: Args) -> Result<ExitCode, String> {
    let q_values = if args.q.is_empty() {
        vec![0.1]
    } else {
        args.q.clone()
    };
    for &q in &q_values {
        if !q.is_finite() || q <= 0.0 {
            return Err(format!("q must be a positive real, got {q}"));
        }
    }

    if let Some(kind) = args.gen {
        if !args.inputs.is_empty() {
            return Err("--gen does not take input images".into());
        }
        return run_gen(&args, kind);
    }

    if args.inputs.is_empty() {
        return Err("no input images (or use --gen to create a corpus)".into());
    }
    fs::create_dir_all(&args.out)
        .map_err(|e| format!("cannot create output directory {}: {e}", args.out.display()))?;

    let reports: Vec<FileReport> = args
        .inputs
        .par_iter()
        .map(|path| process_file(path, &args, &q_values))
        .collect();

    print_report(&reports, args.report);
    let mut failed = false;
    for report in &reports {
        for diag in &report.diagnostics {
            eprintln!("tsallis2d: {diag}");
        }
        failed |= report.failed;
    }
    Ok(ExitCode::from(if failed { 1 } else { 0 }))
}

struct Row {
    image: String,
    q: f64,
    mode: &'static str,
    /// t*, optional s*, criterion; None marks a degenerate histogram.
    outcome: Option<(u8, Option<u8>, f64)>,
    millis: u128,
}

struct FileReport {
    rows: Vec<Row>,
    diagnostics: Vec<String>,
    failed: bool,
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into())
}

fn name_of(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn process_file(path: &Path, args: &Args, q_values: &[f64]) -> FileReport {
    let mut report = FileReport {
        rows: Vec::new(),
        diagnostics: Vec::new(),
        failed: false,
    };
    let name = name_of(path);
    let stem = stem_of(path);

    let bytes = match fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) => {
            report.diagnostics.push(format!("{}: {e}", path.display()));
            report.failed = true;
            return report;
        }
    };
    let img = match read_pgm(&bytes) {
        Ok(img) => img,
        Err(e) => {
            report.diagnostics.push(format!("{}: {e}", path.display()));
            report.failed = true;
            return report;
        }
    };

    // The joint histogram drives the 2D modes and the histogram dump.
    let hist = match JointHistogram::from_image(&img) {
        Ok(hist) => Some(hist),
        Err(e) => {
            if args.mode != Mode::OneD || args.dump_histogram {
                report.diagnostics.push(format!("{}: {e}", path.display()));
            }
            None
        }
    };
    if hist.is_none() && args.mode != Mode::OneD {
        report.failed = true;
        return report;
    }

    if args.dump_histogram {
        if let Some(hist) = &hist {
            let path = args.out.join(format!("{stem}.hist.csv"));
            if let Err(e) = fs::write(&path, hist.to_csv()) {
                report.diagnostics.push(format!("{}: {e}", path.display()));
                report.failed = true;
            }
        }
    }

    let hist_1d = (args.mode == Mode::OneD).then(|| build_histogram_1d(&img));
    let mut tables: Option<PrefixTables> = None;

    for &q in q_values {
        let started = Instant::now();
        let outcome = match args.mode {
            Mode::OneD => match find_threshold_1d(hist_1d.as_ref().unwrap(), q) {
                Ok(r) => Ok((r.t_star, None, r.criterion)),
                Err(e) => Err(e),
            },
            Mode::Diag | Mode::Full => {
                let hist = hist.as_ref().unwrap();
                let built = match &tables {
                    None => build_prefix_tables(hist, q),
                    Some(prev) => prev.with_new_q(hist, q),
                };
                match built {
                    Ok(t) => {
                        let mode = if args.mode == Mode::Diag {
                            SearchMode::Diagonal
                        } else {
                            SearchMode::Full
                        };
                        let result = find_threshold_from_tables(&t, mode);
                        if args.dump_surface {
                            let surface = criterion_surface_from_tables(&t);
                            let path = args.out.join(format!("{stem}.q{q}.surface.csv"));
                            if let Err(e) = fs::write(&path, surface.to_csv()) {
                                report.diagnostics.push(format!("{}: {e}", path.display()));
                                report.failed = true;
                            }
                        }
                        tables = Some(t);
                        result.map(|r| (r.t_star, Some(r.s_star), r.criterion))
                    }
                    Err(e) => Err(e),
                }
            }
        };

        match outcome {
            Ok((t_star, s_star, criterion)) => {
                let out_path = args.out.join(format!("{stem}.q{q}.t{t_star}.pgm"));
                let binary = binarize(&img, t_star);
                if let Err(e) = fs::write(&out_path, write_pgm(binary.as_gray(), PgmVariant::P5)) {
                    report
                        .diagnostics
                        .push(format!("{}: {e}", out_path.display()));
                    report.failed = true;
                }
                report.rows.push(Row {
                    image: name.clone(),
                    q,
                    mode: args.mode.as_str(),
                    outcome: Some((t_star, s_star, criterion)),
                    millis: started.elapsed().as_millis(),
                });
            }
            Err(Error::DegenerateHistogram) => {
                report.diagnostics.push(format!(
                    "{}: degenerate histogram (q = {q}, mode = {})",
                    path.display(),
                    args.mode.as_str()
                ));
                report.failed = true;
                report.rows.push(Row {
                    image: name.clone(),
                    q,
                    mode: args.mode.as_str(),
                    outcome: None,
                    millis: started.elapsed().as_millis(),
                });
            }
            Err(e) => {
                report.diagnostics.push(format!("{}: {e}", path.display()));
                report.failed = true;
            }
        }
    }

    if args.dump_surface && args.mode == Mode::OneD {
        report.diagnostics.push(format!(
            "{}: --dump-surface applies to 2D modes only, skipped",
            path.display()
        ));
    }

    report
}

fn format_row_csv(row: &Row) -> String {
    match row.outcome {
        Some((t, s, criterion)) => {
            let s = s.map(|s| s.to_string()).unwrap_or_default();
            format!(
                "{},{},{},{},{},{},{}",
                row.image, row.q, row.mode, t, s, criterion, row.millis
            )
        }
        None => format!(
            "{},{},{},degenerate,,,{}",
            row.image, row.q, row.mode, row.millis
        ),
    }
}

fn print_report(reports: &[FileReport], format: ReportFormat) {
    match format {
        ReportFormat::Csv => {
            println!("image,q,mode,t_star,s_star,criterion,millis");
            for report in reports {
                for row in &report.rows {
                    println!("{}", format_row_csv(row));
                }
            }
        }
        ReportFormat::Text => {
            println!(
                "{:<24} {:>6} {:>5} {:>11} {:>6} {:>18} {:>7}",
                "image", "q", "mode", "t_star", "s_star", "criterion", "millis"
            );
            for report in reports {
                for row in &report.rows {
                    let mut line = String::new();
                    match row.outcome {
                        Some((t, s, criterion)) => {
                            let s = s.map(|s| s.to_string()).unwrap_or_default();
                            let _ = write!(
                                line,
                                "{:<24} {:>6} {:>5} {:>11} {:>6} {:>18.12} {:>7}",
                                row.image, row.q, row.mode, t, s, criterion, row.millis
                            );
                        }
                        None => {
                            let _ = write!(
                                line,
                                "{:<24} {:>6} {:>5} {:>11} {:>6} {:>18} {:>7}",
                                row.image, row.q, row.mode, "degenerate", "", "", row.millis
                            );
                        }
                    }
                    println!("{line}");
                }
            }
        }
    }
}

fn parse_size(size: &str) -> Result<(usize, usize), String> {
    let parse = |s: &str| -> Result<usize, String> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid size component {s:?}"))
    };
    match size.split_once(['x', 'X']) {
        Some((w, h)) => Ok((parse(w)?, parse(h)?)),
        None => {
            let n = parse(size)?;
            Ok((n, n))
        }
    }
}

fn run_gen(args: &Args, kind: GenKind) -> Result<ExitCode, String> {
    let (width, height) = parse_size(&args.size)?;
    let (kind, kind_name, default_means) = match kind {
        GenKind::Bimodal => (SynthKind::Bimodal, "bimodal", vec![64.0, 192.0]),
        GenKind::Trimodal => (SynthKind::Trimodal, "trimodal", vec![48.0, 128.0, 208.0]),
        GenKind::Constant => (SynthKind::Constant, "constant", vec![128.0]),
    };
    let means = if args.means.is_empty() {
        default_means
    } else {
        args.means.clone()
    };
    let sigmas = if args.sigmas.is_empty() {
        vec![10.0]
    } else {
        args.sigmas.clone()
    };
    let seeds = if args.seeds.is_empty() {
        vec![1]
    } else {
        args.seeds.clone()
    };

    fs::create_dir_all(&args.out)
        .map_err(|e| format!("cannot create output directory {}: {e}", args.out.display()))?;

    let mut failed = false;
    for &seed in &seeds {
        let params = SynthParams {
            kind,
            means: means.clone(),
            sigmas: sigmas.clone(),
            mix: args.mix,
            seed,
            width,
            height,
        };
        let img: GrayImage = generate_synthetic(&params).map_err(|e| e.to_string())?;
        let path = args.out.join(format!("{kind_name}_s{seed}.pgm"));
        match fs::write(&path, write_pgm(&img, PgmVariant::P5)) {
            Ok(()) => println!("wrote {}", path.display()),
            Err(e) => {
                eprintln!("tsallis2d: {}: {e}", path.display());
                failed = true;
            }
        }
    }
    Ok(ExitCode::from(if failed { 1 } else { 0 }))
}
