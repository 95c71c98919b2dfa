//! End-to-end pipeline on a reduced sweep: scenario file -> synthesis ->
//! CTF files -> analysis -> report tables -> figures.

use std::fs;

use corridor_channel::analysis::{analyze, WindowForm};
use corridor_channel::cli::render_figures;
use corridor_channel::dataio::{
    load_scenario_file, read_ctf, write_ctf, write_report, CtfFormat, ReportInputs,
};
use corridor_channel::synthesis::{apply_noise_floor, synthesize, Provenance};

const SCENARIO: &str = r#"
format_version = 1

[corridor]
width_m = 2.0
height_m = 2.65
tx_offset_w_m = 0.08
tx_height_m = 0.625

[surfaces]
walls = "plasterboard"
floor = "concrete"
ceiling = "ceiling_board"

[antenna]
boresight_gain_db = 20.0
hpbw_h_deg = 16.5
hpbw_e_deg = 16.5
sidelobe_floor_h_db = 11.5
sidelobe_floor_e_db = 32.5

[sweep]
f_start_hz = 250e9
f_step_hz = 40e6
count = 2001

[distances]
start_m = 2.4
step_m = 1.2
count = 10

[simulation]
max_bounces = 6

[analysis]
lee_m = 40
"#;

#[test]
fn scenario_to_figures() {
    let dir = tempfile::tempdir().unwrap();
    let scenario_path = dir.path().join("corridor.toml");
    fs::write(&scenario_path, SCENARIO).unwrap();

    let loaded = load_scenario_file(&scenario_path).unwrap();
    assert_eq!(loaded.analysis.window_form, WindowForm::Derived);
    let dataset = synthesize(&loaded.scenario, &loaded.grid).unwrap();
    assert_eq!(dataset.provenance(), Provenance::Simulated);
    assert_eq!(dataset.n_distances(), 10);

    // Both encodings carry the dataset losslessly.
    let bin_path = dir.path().join("run.ctfb");
    let txt_path = dir.path().join("run.csv");
    write_ctf(&bin_path, &dataset, CtfFormat::Binary).unwrap();
    write_ctf(&txt_path, &dataset, CtfFormat::Text).unwrap();
    let from_bin = read_ctf(&bin_path).unwrap();
    let from_txt = read_ctf(&txt_path).unwrap();
    assert_eq!(from_bin.values(), dataset.values());
    assert_eq!(from_txt.values(), dataset.values());

    let report = analyze(&from_bin, &loaded.scenario.antenna, &loaded.analysis).unwrap();
    assert_eq!(report.fits.len(), 2001);
    assert_eq!(report.small_scale.len(), 10);
    // Ten coarse distances leave per-frequency fits noisy around fades, but
    // the band mean must show the guided corridor: shallower than free space.
    let mean_n = report.fits.iter().map(|f| f.exponent).sum::<f64>() / report.fits.len() as f64;
    assert!(mean_n > -2.0 && mean_n < -1.2, "band mean exponent {mean_n}");
    for fit in &report.fits {
        assert!(fit.exponent.is_finite() && fit.sigma_db.is_finite());
    }

    let out = dir.path().join("report");
    let datasets = [("corridor".to_string(), &report)];
    let paths = write_report(
        &out,
        &ReportInputs { fits: &report.fits, datasets: &datasets, per_dataset_fits: false },
    )
    .unwrap();
    for p in &paths {
        assert!(p.exists());
        assert!(fs::metadata(p).unwrap().len() > 0);
    }

    let figures = render_figures(&out).unwrap();
    let names: Vec<_> = figures
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    for expected in [
        "fig_exponent.svg",
        "fig_intercept.svg",
        "fig_sigma.svg",
        "fig_kfactor_corridor.svg",
        "fig_delay_spread_corridor.svg",
        "fig_coherence_corridor.svg",
        "fig_pdp_corridor.svg",
        "fig_pg_corridor.svg",
    ] {
        assert!(names.iter().any(|n| n == expected), "missing {expected}");
    }
    for p in &figures {
        let svg = fs::read_to_string(p).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>"), "{p:?} malformed");
    }
}

#[test]
fn full_size_ctf_io_stays_within_budget() {
    // A sounder-sized dataset (45 x 8001 complex samples) must round-trip
    // through the binary format well under the 2-second budget.
    let grid = corridor_channel::grid::FrequencyGrid::new(250e9, 10e6, 8001).unwrap();
    let distances: Vec<f64> = (1..=45).map(|i| 0.6 * i as f64).collect();
    let values: Vec<num_complex::Complex64> = (0..45 * 8001)
        .map(|i| {
            let x = i as f64;
            num_complex::Complex64::new((x * 0.37).sin() * 1e-5, (x * 0.11).cos() * 1e-5)
        })
        .collect();
    let dataset = corridor_channel::synthesis::CtfDataset::new(
        grid,
        distances,
        values,
        Provenance::Measured,
        "io budget".into(),
    )
    .unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.ctfb");
    let start = std::time::Instant::now();
    write_ctf(&path, &dataset, CtfFormat::Binary).unwrap();
    let back = read_ctf(&path).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(back.values(), dataset.values());
    assert!(elapsed.as_secs_f64() < 2.0, "round trip took {elapsed:?}");
}

#[test]
fn noise_floor_exercises_thresholding_paths() {
    let dir = tempfile::tempdir().unwrap();
    let scenario_path = dir.path().join("corridor.toml");
    fs::write(
        &scenario_path,
        SCENARIO.replace("max_bounces = 6", "max_bounces = 6\nnoise_floor_db = -111.5"),
    )
    .unwrap();
    let loaded = load_scenario_file(&scenario_path).unwrap();
    assert_eq!(loaded.scenario.noise_floor_db, Some(-111.5));

    let mut dataset = synthesize(&loaded.scenario, &loaded.grid).unwrap();
    apply_noise_floor(&mut dataset, loaded.scenario.noise_floor_db.unwrap(), 7);
    let report = analyze(&dataset, &loaded.scenario.antenna, &loaded.analysis).unwrap();
    // The noise floor sits ~40+ dB under the weakest row here; descriptors
    // must stay sane and defined.
    for rec in &report.small_scale {
        assert!(rec.delay.is_some() && rec.coherence.is_some());
    }
}
