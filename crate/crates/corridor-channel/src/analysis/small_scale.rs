//! Small-scale descriptors of one CTF row: Rician K-factor by the method of
//! moments, thresholded RMS delay spread, and coherence bandwidth from the
//! frequency correlation function.

use num_complex::Complex64;

use crate::grid::FrequencyGrid;
use crate::units::{db_to_power, power_to_db};
use crate::{Error, Result};

use super::pdp::Pdp;

/// Outcome of the method-of-moments K-factor estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KFactorEstimate {
    Db(f64),
    /// Zero variance across the row: pure dominant component.
    Infinite,
    /// Second/fourth-moment combination outside the Rician range
    /// (G_a² < G_v); no finite K explains the sample.
    SubRayleigh,
}

impl KFactorEstimate {
    pub fn db(&self) -> Option<f64> {
        match self {
            KFactorEstimate::Db(v) => Some(*v),
            _ => None,
        }
    }
}

/// Rician K-factor of a CTF row by the method of moments.
///
/// With `G_a` the mean of |H|² and `G_v` the unbiased sample variance of
/// |H|², the estimate is `K = sqrt(G_a² - G_v) / (G_a - sqrt(G_a² - G_v))`,
/// returned in dB.
pub fn k_factor_mom(row: &[Complex64]) -> KFactorEstimate {
    assert!(row.len() >= 2, "K-factor estimation needs at least 2 samples");
    let n = row.len() as f64;
    let g_a = row.iter().map(|h| h.norm_sqr()).sum::<f64>() / n;
    if g_a <= 0.0 {
        return KFactorEstimate::SubRayleigh;
    }
    let fourth: f64 = row.iter().map(|h| h.norm_sqr().powi(2)).sum();
    let g_v = (fourth - n * g_a * g_a) / (n - 1.0);
    if g_v <= 0.0 {
        return KFactorEstimate::Infinite;
    }
    let disc = g_a * g_a - g_v;
    if disc < 0.0 {
        return KFactorEstimate::SubRayleigh;
    }
    let dominant = disc.sqrt();
    let diffuse = g_a - dominant;
    if diffuse <= 0.0 {
        return KFactorEstimate::Infinite;
    }
    KFactorEstimate::Db(power_to_db(dominant / diffuse))
}

/// RMS delay spread and mean delay of a thresholded PDP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelaySpread {
    pub rms_s: f64,
    pub mean_delay_s: f64,
}

/// PDP-weighted delay moments after zeroing every bin more than
/// `threshold_db` below the peak. Pass `f64::INFINITY` to keep all bins.
pub fn delay_spread(pdp: &Pdp, threshold_db: f64) -> Result<DelaySpread> {
    let peak = pdp.power().iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::EmptyInput("PDP has no positive bin".into()));
    }
    let floor = if threshold_db.is_finite() { peak * db_to_power(-threshold_db) } else { 0.0 };
    let mut total = 0.0;
    let mut first = 0.0;
    for (i, &p) in pdp.power().iter().enumerate() {
        if p >= floor {
            total += p;
            first += p * pdp.delay_s(i);
        }
    }
    let mean_delay_s = first / total;
    let mut second = 0.0;
    for (i, &p) in pdp.power().iter().enumerate() {
        if p >= floor {
            second += p * (pdp.delay_s(i) - mean_delay_s).powi(2);
        }
    }
    Ok(DelaySpread { rms_s: (second / total).sqrt(), mean_delay_s })
}

/// Coherence bandwidth result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceBandwidth {
    pub bandwidth_hz: f64,
    /// False when the correlation never dropped below the threshold and the
    /// full measurement bandwidth was returned instead.
    pub crossed: bool,
}

/// Coherence bandwidth: frequency lag at which the normalized frequency
/// correlation function first drops below `threshold`.
///
/// The correlation is the biased (unpadded) lag sum
/// `R_H[Δk] = Σ_k H[k+Δk]·H*[k]` normalized by `R_H[0]`; its magnitude
/// decides the crossing, with linear interpolation between lags. For a flat
/// channel the biased sum alone decays as `1 - Δk/N`, which puts a ceiling
/// of about `0.1·BW` on the result at the default 0.9 threshold.
pub fn coherence_bandwidth(
    row: &[Complex64],
    grid: &FrequencyGrid,
    threshold: f64,
) -> Result<CoherenceBandwidth> {
    assert_eq!(row.len(), grid.count(), "row length must match the sweep");
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "FCF threshold must be in (0, 1], got {threshold}"
        )));
    }
    let r0: f64 = row.iter().map(|h| h.norm_sqr()).sum();
    if r0 <= 0.0 {
        return Err(Error::EmptyInput("all-zero CTF row".into()));
    }
    let n = row.len();
    let mut prev = 1.0;
    for dk in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n - dk {
            acc += row[k + dk] * row[k].conj();
        }
        let mag = acc.norm() / r0;
        if mag < threshold {
            let frac = (prev - threshold) / (prev - mag);
            return Ok(CoherenceBandwidth {
                bandwidth_hz: grid.f_step_hz() * ((dk - 1) as f64 + frac),
                crossed: true,
            });
        }
        prev = mag;
    }
    Ok(CoherenceBandwidth { bandwidth_hz: grid.bandwidth_hz(), crossed: false })
}
