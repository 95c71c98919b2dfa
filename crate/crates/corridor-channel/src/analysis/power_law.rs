//! Per-frequency power-law fit of the path gain over distance:
//! `PG_dB(d) = A + 10·n·log10(d/d0)` with `d0 = 1 m`, by ordinary least
//! squares, with the RMS residual as the shadowing deviation σ.

use crate::units::amplitude_to_db;
use crate::{Error, Result};

use super::path_gain::PathGainSurface;

/// Power-law parameters at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawRecord {
    pub frequency_hz: f64,
    /// Path-gain exponent n(f); -2 in free space.
    pub exponent: f64,
    /// 1-meter intercept A(f), dB.
    pub intercept_db: f64,
    /// RMS fit residual σ(f), dB.
    pub sigma_db: f64,
}

fn ols(points: &[(f64, f64)], frequency_hz: f64) -> Result<PowerLawRecord> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 distances, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::EmptyInput("path gain must be positive and finite".into()));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    if sxx <= 1e-12 {
        return Err(Error::DegenerateFit("all distances coincide".into()));
    }
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = points.iter().map(|(x, y)| (y - (intercept + slope * x)).powi(2)).sum();
    Ok(PowerLawRecord {
        frequency_hz,
        exponent: slope,
        intercept_db: intercept,
        sigma_db: (ssr / n).sqrt(),
    })
}

fn regression_points(surfaces: &[&PathGainSurface], freq_index: usize) -> Vec<(f64, f64)> {
    let mut points = Vec::new();
    for surface in surfaces {
        for (di, &d) in surface.distances_m().iter().enumerate() {
            // Regressor 10·log10(d/d0) makes the slope the exponent directly.
            points.push((10.0 * d.log10(), amplitude_to_db(surface.value(di, freq_index))));
        }
    }
    points
}

/// Fits the power law at one frequency across all distances of a surface.
pub fn fit_power_law(surface: &PathGainSurface, freq_index: usize) -> Result<PowerLawRecord> {
    fit_power_law_pooled(&[surface], freq_index)
}

/// Fits the power law at one frequency pooling the distance samples of
/// several surfaces (e.g. two corridors sounded with the same sweep).
pub fn fit_power_law_pooled(
    surfaces: &[&PathGainSurface],
    freq_index: usize,
) -> Result<PowerLawRecord> {
    let first = surfaces
        .first()
        .ok_or_else(|| Error::EmptyInput("no path gain surfaces to fit".into()))?;
    if surfaces.iter().any(|s| s.grid() != first.grid()) {
        return Err(Error::DimensionMismatch(
            "pooled surfaces must share one frequency grid".into(),
        ));
    }
    let frequency_hz = first.grid().frequency_hz(freq_index);
    ols(&regression_points(surfaces, freq_index), frequency_hz)
}
