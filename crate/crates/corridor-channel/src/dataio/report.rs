//! Report tables and plot-data grids.
//!
//! One run produces a large-scale fit table (per frequency), one small-scale
//! table per dataset (per distance), and plot-ready grids: the path-gain
//! surface and the alias-unwrapped PDP heatmap, both in dB. Output is
//! deterministic: rerunning on identical inputs yields byte-identical files.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::{ChannelReport, KFactorEstimate, PowerLawRecord};
use crate::units::{amplitude_to_db, power_to_db};
use crate::{Error, Result};

/// Everything the table writer needs for one run.
pub struct ReportInputs<'a> {
    /// Fit records for the headline large-scale table; with several input
    /// datasets this is the pooled fit.
    pub fits: &'a [PowerLawRecord],
    /// `(label, report)` per analyzed dataset.
    pub datasets: &'a [(String, &'a ChannelReport)],
    /// Also write a per-dataset fit table next to the pooled one.
    pub per_dataset_fits: bool,
}

/// Floor for log-scale grid cells so empty bins stay finite.
const GRID_DB_FLOOR: f64 = -400.0;

fn create(dir: &Path, name: &str, paths: &mut Vec<PathBuf>) -> Result<BufWriter<fs::File>> {
    let path = dir.join(name);
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    paths.push(path);
    Ok(BufWriter::new(file))
}

fn write_fit_table<W: Write>(mut w: W, fits: &[PowerLawRecord]) -> std::io::Result<()> {
    writeln!(w, "frequency_hz,exponent,intercept_db,sigma_db")?;
    for f in fits {
        writeln!(w, "{},{},{},{}", f.frequency_hz, f.exponent, f.intercept_db, f.sigma_db)?;
    }
    Ok(())
}

fn write_small_scale<W: Write>(mut w: W, report: &ChannelReport) -> std::io::Result<()> {
    writeln!(
        w,
        "distance_m,k_factor_db,k_flag,delay_spread_s,mean_delay_s,coherence_bw_hz,fcf_crossed"
    )?;
    for rec in &report.small_scale {
        let (k, flag) = match rec.k_factor {
            KFactorEstimate::Db(v) => (format!("{v}"), "ok"),
            KFactorEstimate::Infinite => ("inf".into(), "infinite"),
            KFactorEstimate::SubRayleigh => ("nan".into(), "sub_rayleigh"),
        };
        let (ds, tau) = rec
            .delay
            .map(|d| (format!("{:e}", d.rms_s), format!("{:e}", d.mean_delay_s)))
            .unwrap_or_else(|| ("nan".into(), "nan".into()));
        let (bc, crossed) = rec
            .coherence
            .map(|c| (format!("{}", c.bandwidth_hz), c.crossed.to_string()))
            .unwrap_or_else(|| ("nan".into(), "false".into()));
        writeln!(w, "{},{},{},{},{},{},{}", rec.distance_m, k, flag, ds, tau, bc, crossed)?;
    }
    Ok(())
}

fn write_pg_grid<W: Write>(mut w: W, report: &ChannelReport) -> std::io::Result<()> {
    let surface = &report.path_gain;
    let grid = surface.grid();
    write!(w, "distance_m")?;
    for f in grid.frequencies() {
        write!(w, ",{f}")?;
    }
    writeln!(w)?;
    for (di, d) in surface.distances_m().iter().enumerate() {
        write!(w, "{d}")?;
        for &v in surface.row(di) {
            write!(w, ",{:.4}", amplitude_to_db(v).max(GRID_DB_FLOOR))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

fn write_pdp_grid<W: Write>(mut w: W, report: &ChannelReport) -> std::io::Result<()> {
    let n_dist = report.small_scale.len();
    let bins = report.pdp_unwrapped.len() / n_dist.max(1);
    write!(w, "distance_m")?;
    for b in 0..bins {
        write!(w, ",{:.4}", b as f64 * report.pdp_distance_step_m)?;
    }
    writeln!(w)?;
    for (di, rec) in report.small_scale.iter().enumerate() {
        write!(w, "{}", rec.distance_m)?;
        for &p in &report.pdp_unwrapped[di * bins..(di + 1) * bins] {
            write!(w, ",{:.2}", power_to_db(p).max(GRID_DB_FLOOR))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

fn sanitize_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Writes all report tables into `dir`, returning the created paths.
pub fn write_report(dir: &Path, inputs: &ReportInputs) -> Result<Vec<PathBuf>> {
    if inputs.datasets.is_empty() {
        return Err(Error::EmptyInput("report has no datasets".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();

    let io = |e: std::io::Error| Error::io(dir, e);

    let w = create(dir, "large_scale.csv", &mut paths)?;
    write_fit_table(w, inputs.fits).map_err(io)?;

    for (label, report) in inputs.datasets {
        let label = sanitize_label(label);
        if inputs.per_dataset_fits {
            let w = create(dir, &format!("large_scale_{label}.csv"), &mut paths)?;
            write_fit_table(w, &report.fits).map_err(io)?;
        }
        let w = create(dir, &format!("small_scale_{label}.csv"), &mut paths)?;
        write_small_scale(w, report).map_err(io)?;
        let w = create(dir, &format!("pg_grid_{label}.csv"), &mut paths)?;
        write_pg_grid(w, report).map_err(io)?;
        let w = create(dir, &format!("pdp_grid_{label}.csv"), &mut paths)?;
        write_pdp_grid(w, report).map_err(io)?;
    }
    Ok(paths)
}
