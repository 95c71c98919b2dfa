//! Sounding analytics: from a CTF dataset to large-scale fit records and
//! per-distance small-scale descriptors.

pub mod path_gain;
pub mod pdp;
pub mod power_law;
pub mod small_scale;
pub mod window;

pub use path_gain::{estimate_path_gain, PathGainSurface};
pub use pdp::{compute_pdp, hann_window, unwrap_pdp, Pdp, PdpComputer};
pub use power_law::{fit_power_law, fit_power_law_pooled, PowerLawRecord};
pub use small_scale::{
    coherence_bandwidth, delay_spread, k_factor_mom, CoherenceBandwidth, DelaySpread,
    KFactorEstimate,
};
pub use window::{remove_fast_fading, window_size, WindowForm};

use rayon::prelude::*;

use crate::antenna::AntennaModel;
use crate::synthesis::CtfDataset;
use crate::{Error, Result};

/// Estimator settings with the sounding-campaign defaults.
#[derive(Debug, Clone, Copy)]
pub struct AnalysisConfig {
    /// Wavelength count of the fast-fading window, 20 to 40.
    pub lee_m: u32,
    pub window_form: WindowForm,
    /// PDP threshold below the peak for the delay-spread moments, dB.
    /// `f64::INFINITY` disables thresholding.
    pub pdp_threshold_db: f64,
    /// Normalized FCF level defining the coherence bandwidth.
    pub fcf_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            lee_m: 40,
            window_form: WindowForm::Derived,
            pdp_threshold_db: 20.0,
            fcf_threshold: 0.9,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(20..=40).contains(&self.lee_m) {
            return Err(Error::InvalidArgument(format!(
                "averaging constant must be in [20, 40], got {}",
                self.lee_m
            )));
        }
        if !(self.pdp_threshold_db >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "PDP threshold must be non-negative, got {}",
                self.pdp_threshold_db
            )));
        }
        if !(self.fcf_threshold > 0.0 && self.fcf_threshold <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "FCF threshold must be in (0, 1], got {}",
                self.fcf_threshold
            )));
        }
        Ok(())
    }
}

/// Small-scale descriptors of one Tx-Rx distance. Estimators that cannot
/// produce a value on the given row are reported as `None` rather than
/// aborting the run.
#[derive(Debug, Clone, Copy)]
pub struct SmallScaleRecord {
    pub distance_m: f64,
    pub k_factor: KFactorEstimate,
    pub delay: Option<DelaySpread>,
    pub coherence: Option<CoherenceBandwidth>,
}

/// Full analysis output of one dataset.
#[derive(Debug, Clone)]
pub struct ChannelReport {
    /// Power-law fit per sweep frequency; empty when the dataset has fewer
    /// than three distances.
    pub fits: Vec<PowerLawRecord>,
    /// One record per Tx-Rx distance.
    pub small_scale: Vec<SmallScaleRecord>,
    pub path_gain: PathGainSurface,
    /// Alias-unwrapped PDP heatmap, row-major (distance x 2N delay bins).
    pub pdp_unwrapped: Vec<f64>,
    /// Traveled-distance step of the PDP delay axis, m.
    pub pdp_distance_step_m: f64,
}

/// Runs the full estimator pipeline on one dataset.
pub fn analyze(
    ctf: &CtfDataset,
    antenna: &AntennaModel,
    config: &AnalysisConfig,
) -> Result<ChannelReport> {
    config.validate()?;
    let grid = ctf.grid();
    let n = grid.count();
    let n_dist = ctf.n_distances();

    let path_gain = estimate_path_gain(ctf, antenna, config.lee_m, config.window_form)?;

    let fits = if n_dist >= 3 {
        (0..n)
            .into_par_iter()
            .map(|k| fit_power_law(&path_gain, k))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    let computer = PdpComputer::new(grid);
    let d_max = grid.max_observation_distance_m();
    let rows: Vec<(SmallScaleRecord, Vec<f64>)> = (0..n_dist)
        .into_par_iter()
        .map(|di| {
            let d = ctf.distances_m()[di];
            let row = ctf.row(di);
            let pdp = computer.compute(row);
            let delay = delay_spread(&pdp, config.pdp_threshold_db).ok();
            let coherence = coherence_bandwidth(row, grid, config.fcf_threshold).ok();
            let unwrapped = if d < d_max {
                unwrap_pdp(&pdp, d).expect("distance checked against the observation span")
            } else {
                // Past the observation limit the LoS itself aliases; keep
                // the raw profile zero-padded.
                let mut padded = pdp.power().to_vec();
                padded.resize(2 * n, 0.0);
                padded
            };
            let record = SmallScaleRecord {
                distance_m: d,
                k_factor: k_factor_mom(row),
                delay,
                coherence,
            };
            (record, unwrapped)
        })
        .collect();

    let mut small_scale = Vec::with_capacity(n_dist);
    let mut pdp_unwrapped = Vec::with_capacity(n_dist * 2 * n);
    for (record, unwrapped) in rows {
        small_scale.push(record);
        pdp_unwrapped.extend(unwrapped);
    }

    Ok(ChannelReport {
        fits,
        small_scale,
        path_gain,
        pdp_unwrapped,
        pdp_distance_step_m: grid.delay_distance_resolution_m(),
    })
}
