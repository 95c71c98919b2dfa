//! Command-line front end: `simulate`, `analyze`, `report`, `selftest`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    analyze, fit_power_law_pooled, AnalysisConfig, ChannelReport, PowerLawRecord, WindowForm,
};
use crate::antenna::AntennaModel;
use crate::dataio::{
    load_scenario_file, read_ctf, write_ctf, write_report, CtfFormat, LoadedScenario, ReportInputs,
};
use crate::plot::{heatmap, line_chart, Series};
use crate::scenario;
use crate::synthesis::{apply_noise_floor, synthesize};
use crate::units::wavelength_m;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "corridor-channel",
    version,
    about = "Sub-THz corridor channel simulator and UWB sounding analytics"
)]
pub struct Cli {
    /// Cap the worker thread count (default: all cores).
    #[arg(long, global = true, env = "CORRIDOR_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a CTF dataset for a corridor scenario.
    Simulate(SimulateArgs),
    /// Estimate large- and small-scale channel descriptors from CTF files.
    Analyze(AnalyzeArgs),
    /// Render SVG figures from an analysis output directory.
    Report(ReportArgs),
    /// Run the built-in oracle suite and print one verdict per check.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FileFormat {
    Binary,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WindowFormArg {
    Derived,
    #[value(name = "literal-eq11")]
    LiteralEq11,
}

impl From<WindowFormArg> for WindowForm {
    fn from(v: WindowFormArg) -> Self {
        match v {
            WindowFormArg::Derived => WindowForm::Derived,
            WindowFormArg::LiteralEq11 => WindowForm::LiteralEq11,
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Built-in scenario preset: `citic` or `cetic`.
    #[arg(long, conflicts_with = "scenario")]
    preset: Option<String>,
    /// Scenario TOML file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output CTF file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FileFormat::Binary)]
    format: FileFormat,
    /// Override the scenario's bounce limit.
    #[arg(long, env = "CORRIDOR_MAX_BOUNCES")]
    max_bounces: Option<u32>,
    /// Add a complex-Gaussian noise floor at this level (dB).
    #[arg(long, env = "CORRIDOR_NOISE_FLOOR_DB")]
    noise_floor_db: Option<f64>,
    /// Seed for the noise generator.
    #[arg(long, default_value_t = 1, env = "CORRIDOR_SEED")]
    seed: u64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Input CTF dataset(s); several inputs pool into one power-law fit.
    #[arg(long = "in", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Output directory for tables and plot grids.
    #[arg(long)]
    out: PathBuf,
    /// Preset whose antenna and analysis settings apply (default horn).
    #[arg(long, conflicts_with = "scenario")]
    preset: Option<String>,
    /// Scenario file whose antenna and analysis settings apply.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Fast-fading window size in wavelengths, 20 to 40.
    #[arg(long, env = "CORRIDOR_LEE_M")]
    lee_m: Option<u32>,
    #[arg(long, value_enum)]
    window_form: Option<WindowFormArg>,
    /// PDP threshold below the peak for delay-spread moments (dB).
    #[arg(long)]
    pdp_threshold_db: Option<f64>,
    /// Normalized FCF level defining the coherence bandwidth.
    #[arg(long)]
    fcf_threshold: Option<f64>,
    /// Write per-dataset fit tables next to the pooled one.
    #[arg(long)]
    per_corridor: bool,
    /// Also render SVG figures into the output directory.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Analysis output directory to render.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Seed for the randomized oracle checks.
    #[arg(long, default_value_t = 1, env = "CORRIDOR_SEED")]
    seed: u64,
}

/// Parses the process arguments and runs; returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let body = || match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Report(args) => report(args),
        Command::Selftest(args) => selftest(args),
    };
    let outcome = match cli.threads {
        Some(threads) => {
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(body),
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return 1;
                }
            }
        }
        None => body(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn load_scenario_source(
    preset: &Option<String>,
    scenario_path: &Option<PathBuf>,
) -> Result<LoadedScenario> {
    match (preset, scenario_path) {
        (Some(name), None) => {
            let (scenario, grid) = scenario::preset(name).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown preset `{name}` (available: citic, cetic)"
                ))
            })?;
            Ok(LoadedScenario { scenario, grid, analysis: AnalysisConfig::default() })
        }
        (None, Some(path)) => load_scenario_file(path),
        (None, None) => Err(Error::InvalidArgument(
            "pass either --preset <name> or --scenario <file>".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with guards this"),
    }
}

fn simulate(args: SimulateArgs) -> Result<i32> {
    let mut loaded = load_scenario_source(&args.preset, &args.scenario)?;
    if let Some(nb) = args.max_bounces {
        loaded.scenario.max_bounces = nb;
    }
    let mut dataset = synthesize(&loaded.scenario, &loaded.grid)?;
    if let Some(floor_db) = args.noise_floor_db.or(loaded.scenario.noise_floor_db) {
        apply_noise_floor(&mut dataset, floor_db, args.seed);
    }
    let format = match args.format {
        FileFormat::Binary => CtfFormat::Binary,
        FileFormat::Text => CtfFormat::Text,
    };
    write_ctf(&args.out, &dataset, format)?;
    println!(
        "wrote {} ({} distances x {} frequencies)",
        args.out.display(),
        dataset.n_distances(),
        dataset.grid().count()
    );
    Ok(0)
}

fn run_analyze(args: AnalyzeArgs) -> Result<i32> {
    // Antenna and analysis defaults come from the scenario source; the
    // default horn preset covers datasets without one.
    let (antenna, mut config) = match (&args.preset, &args.scenario) {
        (None, None) => (AntennaModel::sgh_preset(), AnalysisConfig::default()),
        (preset, scenario_path) => {
            let loaded = load_scenario_source(preset, scenario_path)?;
            (loaded.scenario.antenna, loaded.analysis)
        }
    };
    if let Some(m) = args.lee_m {
        config.lee_m = m;
    }
    if let Some(form) = args.window_form {
        config.window_form = form.into();
    }
    if let Some(thr) = args.pdp_threshold_db {
        config.pdp_threshold_db = thr;
    }
    if let Some(thr) = args.fcf_threshold {
        config.fcf_threshold = thr;
    }
    config.validate()?;

    let mut labeled: Vec<(String, ChannelReport)> = Vec::new();
    for path in &args.inputs {
        let dataset = read_ctf(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into());
        let report = analyze(&dataset, &antenna, &config)?;
        labeled.push((label, report));
    }

    let pooled: Vec<PowerLawRecord> = if labeled.len() == 1 {
        labeled[0].1.fits.clone()
    } else {
        let surfaces: Vec<_> = labeled.iter().map(|(_, r)| &r.path_gain).collect();
        let count = surfaces[0].grid().count();
        use rayon::prelude::*;
        (0..count)
            .into_par_iter()
            .map(|k| fit_power_law_pooled(&surfaces, k))
            .collect::<Result<_>>()?
    };

    let datasets: Vec<(String, &ChannelReport)> =
        labeled.iter().map(|(l, r)| (l.clone(), r)).collect();
    let inputs = ReportInputs {
        fits: &pooled,
        datasets: &datasets,
        per_dataset_fits: args.per_corridor && labeled.len() > 1,
    };
    let paths = write_report(&args.out, &inputs)?;
    for p in &paths {
        println!("wrote {}", p.display());
    }
    if args.svg {
        for p in render_figures(&args.out)? {
            println!("wrote {}", p.display());
        }
    }
    Ok(0)
}

fn report(args: ReportArgs) -> Result<i32> {
    let paths = render_figures(&args.input)?;
    if paths.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no report tables found under {}",
            args.input.display()
        )));
    }
    for p in &paths {
        println!("wrote {}", p.display());
    }
    Ok(0)
}

fn selftest(args: SelftestArgs) -> Result<i32> {
    let report = crate::selftest::run(args.seed);
    for check in &report.checks {
        println!(
            "{} {:22} {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// Figure rendering from report tables
// ---------------------------------------------------------------------------

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::EmptyInput(format!("{} is empty", path.display())))?
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        rows.push(
            line.split(',')
                .map(|cell| cell.parse::<f64>().unwrap_or(f64::NAN))
                .collect::<Vec<f64>>(),
        );
    }
    Ok((header, rows))
}

fn write_svg(dir: &Path, name: &str, content: &str, out: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    out.push(path);
    Ok(())
}

/// Renders SVG figures for every table in an analysis output directory.
pub fn render_figures(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();

    let large = dir.join("large_scale.csv");
    if large.exists() {
        let (_, rows) = read_table(&large)?;
        let freq_ghz = |r: &Vec<f64>| r[0] / 1e9;
        let exponent: Vec<(f64, f64)> = rows.iter().map(|r| (freq_ghz(r), r[1])).collect();
        let reference: Vec<(f64, f64)> = rows.iter().map(|r| (freq_ghz(r), -2.0)).collect();
        let svg = line_chart(
            "Path-gain exponent vs frequency",
            "frequency, GHz",
            "n(f)",
            &[
                Series { label: "fit", points: exponent },
                Series { label: "free space", points: reference },
            ],
        );
        write_svg(dir, "fig_exponent.svg", &svg, &mut written)?;

        let intercept: Vec<(f64, f64)> = rows.iter().map(|r| (freq_ghz(r), r[2])).collect();
        let free: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (freq_ghz(r), crate::units::amplitude_to_db(wavelength_m(r[0]) / (4.0 * std::f64::consts::PI))))
            .collect();
        let svg = line_chart(
            "1-meter intercept vs frequency",
            "frequency, GHz",
            "A(f), dB",
            &[
                Series { label: "fit", points: intercept },
                Series { label: "free space", points: free },
            ],
        );
        write_svg(dir, "fig_intercept.svg", &svg, &mut written)?;

        let sigma: Vec<(f64, f64)> = rows.iter().map(|r| (freq_ghz(r), r[3])).collect();
        let svg = line_chart(
            "Fit deviation vs frequency",
            "frequency, GHz",
            "sigma(f), dB",
            &[Series { label: "fit", points: sigma }],
        );
        write_svg(dir, "fig_sigma.svg", &svg, &mut written)?;
    }

    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .collect();
    names.sort();

    for name in &names {
        if let Some(label) = name.strip_prefix("small_scale_").and_then(|n| n.strip_suffix(".csv"))
        {
            let (_, rows) = read_table(&dir.join(name))?;
            let k: Vec<(f64, f64)> =
                rows.iter().filter(|r| r[1].is_finite()).map(|r| (r[0], r[1])).collect();
            let ds_ns: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[3] * 1e9)).collect();
            let bc_mhz: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[5] / 1e6)).collect();
            let svg = line_chart(
                &format!("K-factor vs distance ({label})"),
                "distance, m",
                "K, dB",
                &[Series { label: "K", points: k }],
            );
            write_svg(dir, &format!("fig_kfactor_{label}.svg"), &svg, &mut written)?;
            let svg = line_chart(
                &format!("RMS delay spread vs distance ({label})"),
                "distance, m",
                "D_s, ns",
                &[Series { label: "D_s", points: ds_ns }],
            );
            write_svg(dir, &format!("fig_delay_spread_{label}.svg"), &svg, &mut written)?;
            let svg = line_chart(
                &format!("Coherence bandwidth vs distance ({label})"),
                "distance, m",
                "B_c, MHz",
                &[Series { label: "B_c", points: bc_mhz }],
            );
            write_svg(dir, &format!("fig_coherence_{label}.svg"), &svg, &mut written)?;
        }

        if let Some(label) = name.strip_prefix("pdp_grid_").and_then(|n| n.strip_suffix(".csv")) {
            let (header, rows) = read_table(&dir.join(name))?;
            let dx = if header.len() > 2 {
                header[2].parse::<f64>().unwrap_or(1.0) - header[1].parse::<f64>().unwrap_or(0.0)
            } else {
                1.0
            };
            let y: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            let matrix: Vec<f64> = rows.iter().flat_map(|r| r[1..].iter().cloned()).collect();
            let svg = heatmap(
                &format!("PDP ({label})"),
                "delay distance, m",
                "Tx-Rx distance, m",
                &matrix,
                &y,
                0.0,
                dx,
                -400.0,
            );
            write_svg(dir, &format!("fig_pdp_{label}.svg"), &svg, &mut written)?;
        }

        if let Some(label) = name.strip_prefix("pg_grid_").and_then(|n| n.strip_suffix(".csv")) {
            let (header, rows) = read_table(&dir.join(name))?;
            let f0 = header.get(1).and_then(|h| h.parse::<f64>().ok()).unwrap_or(0.0);
            let dx = header.get(2).and_then(|h| h.parse::<f64>().ok()).unwrap_or(f0 + 1.0) - f0;
            let y: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            let matrix: Vec<f64> = rows.iter().flat_map(|r| r[1..].iter().cloned()).collect();
            let svg = heatmap(
                &format!("Path gain ({label})"),
                "frequency, Hz",
                "Tx-Rx distance, m",
                &matrix,
                &y,
                f0,
                dx,
                -400.0,
            );
            write_svg(dir, &format!("fig_pg_{label}.svg"), &svg, &mut written)?;
        }
    }
    Ok(written)
}
