//! N-rays channel transfer function synthesis.
//!
//! The CTF at each (distance, frequency) sample is the line-of-sight Friis
//! term plus one term per enumerated reflected ray:
//!
//! ```text
//! H_LoS = g_tx·g_rx·(λ/4πd)·exp(-j2πd/λ)
//! H_i   = γ_i·g_tx^(i)·g_rx^(i)·(λ/4πr_i)·exp(-j2πr_i/λ)
//! ```
//!
//! Antenna dB gains enter as amplitude factors `10^(dB/20)`. Wall
//! reflections take TE coefficients weighted by the H-plane pattern;
//! floor/ceiling reflections take TM coefficients weighted by the E-plane
//! pattern, with the per-bounce coefficients alternating between the two
//! surfaces along the path. Samples are independent across the grid, so
//! rows are synthesized in parallel over distances.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::antenna::{AntennaModel, PatternPlane};
use crate::geometry::{enumerate_rays, PlaneAxis, RayKind, RayPath};
use crate::grid::FrequencyGrid;
use crate::materials::{reflection_factor, Material, Polarization, SurfaceAssignment};
use crate::scenario::CorridorScenario;
use crate::units::{db_to_power, wavelength_m};
use crate::{Error, Result};

/// Origin of a CTF dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Simulated,
    Measured,
}

/// A complex channel transfer function matrix indexed by (distance, frequency).
#[derive(Debug, Clone, PartialEq)]
pub struct CtfDataset {
    grid: FrequencyGrid,
    distances_m: Vec<f64>,
    /// Row-major: `values[di * grid.count() + k]`.
    values: Vec<Complex64>,
    provenance: Provenance,
    metadata: String,
}

impl CtfDataset {
    pub fn new(
        grid: FrequencyGrid,
        distances_m: Vec<f64>,
        values: Vec<Complex64>,
        provenance: Provenance,
        metadata: String,
    ) -> Result<Self> {
        if distances_m.is_empty() {
            return Err(Error::DimensionMismatch("dataset needs at least one distance".into()));
        }
        if values.len() != distances_m.len() * grid.count() {
            return Err(Error::DimensionMismatch(format!(
                "value matrix has {} entries, expected {} distances x {} frequencies",
                values.len(),
                distances_m.len(),
                grid.count()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(format!("sample index {pos}")));
        }
        if distances_m.iter().any(|d| !d.is_finite() || *d <= 0.0) {
            return Err(Error::DimensionMismatch("distances must be positive and finite".into()));
        }
        Ok(Self { grid, distances_m, values, provenance, metadata })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn distances_m(&self) -> &[f64] {
        &self.distances_m
    }

    pub fn n_distances(&self) -> usize {
        self.distances_m.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    /// All samples, row-major over (distance, frequency).
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// CTF row for the `di`-th distance.
    pub fn row(&self, di: usize) -> &[Complex64] {
        let n = self.grid.count();
        &self.values[di * n..(di + 1) * n]
    }

    pub fn value(&self, di: usize, k: usize) -> Complex64 {
        self.values[di * self.grid.count() + k]
    }
}

/// Line-of-sight CTF component (Friis term) at one frequency and distance.
pub fn los_component(f_hz: f64, d_m: f64, antenna: &AntennaModel) -> Result<Complex64> {
    if !(d_m.is_finite() && d_m > 0.0) {
        return Err(Error::InvalidArgument(format!("distance must be positive, got {d_m}")));
    }
    let lambda = wavelength_m(f_hz);
    let gain = antenna.boresight_gain_amplitude(f_hz)?;
    let amplitude = gain * gain * lambda / (4.0 * std::f64::consts::PI * d_m);
    let phase = -2.0 * std::f64::consts::PI * d_m / lambda;
    Ok(Complex64::from_polar(amplitude, phase))
}

/// Cumulative reflection factor of one ray.
///
/// Wall rays reflect off the same material every bounce, so the factor is
/// the plain n-th power. Floor/ceiling rays alternate surfaces starting at
/// the first-bounce side.
fn ray_reflection_factor(kind: &RayKind, surfaces: &SurfaceAssignment) -> f64 {
    let RayKind::Reflected {
        plane, bounces, reflection_angle_rad, first_bounce_positive_side, ..
    } = kind
    else {
        unreachable!("reflection factor of a LoS ray");
    };
    match plane {
        PlaneAxis::Horizontal => {
            reflection_factor(*reflection_angle_rad, &surfaces.walls, *bounces, Polarization::Te)
        }
        PlaneAxis::Vertical => {
            let (first, second): (&Material, &Material) = if *first_bounce_positive_side {
                (&surfaces.ceiling, &surfaces.floor)
            } else {
                (&surfaces.floor, &surfaces.ceiling)
            };
            let n_first = bounces.div_ceil(2);
            let n_second = bounces / 2;
            let mut gamma =
                reflection_factor(*reflection_angle_rad, first, n_first, Polarization::Tm);
            if n_second > 0 {
                gamma *= reflection_factor(*reflection_angle_rad, second, n_second, Polarization::Tm);
            }
            gamma
        }
    }
}

/// Reflected-ray CTF component at one frequency.
pub fn ray_component(
    f_hz: f64,
    ray: &RayPath,
    surfaces: &SurfaceAssignment,
    antenna: &AntennaModel,
) -> Result<Complex64> {
    let RayKind::Reflected { plane, .. } = &ray.kind else {
        return Err(Error::InvalidArgument(
            "ray_component expects a reflected path; use los_component for the direct ray".into(),
        ));
    };
    let pattern_plane = match plane {
        PlaneAxis::Horizontal => PatternPlane::H,
        PlaneAxis::Vertical => PatternPlane::E,
    };
    let gamma = ray_reflection_factor(&ray.kind, surfaces);
    let lambda = wavelength_m(f_hz);
    let r = ray.path_length_m;
    let bore = antenna.boresight_gain_amplitude(f_hz)?;
    let pattern =
        antenna.pattern_gain_amplitude(ray.departure_offboresight_rad, pattern_plane, f_hz);
    // Identical horns at both ends see the same off-boresight angle.
    let amplitude = bore * bore * pattern * pattern * lambda / (4.0 * std::f64::consts::PI * r);
    let phase = -2.0 * std::f64::consts::PI * r / lambda;
    Ok(Complex64::from_polar(amplitude, phase) * gamma)
}

/// Synthesizes the full CTF matrix for a scenario over a frequency grid.
pub fn synthesize(scenario: &CorridorScenario, grid: &FrequencyGrid) -> Result<CtfDataset> {
    scenario.validate()?;
    let (horizontal, vertical) = scenario.cross_sections()?;
    let n_f = grid.count();

    // The boresight curve is shared by every sample; fail fast if the sweep
    // leaves its domain.
    for f in [grid.f_start_hz(), grid.f_stop_hz()] {
        scenario.antenna.boresight_gain_db(f)?;
    }

    let mut values = vec![Complex64::new(0.0, 0.0); scenario.distances_m.len() * n_f];
    values
        .par_chunks_mut(n_f)
        .zip(scenario.distances_m.par_iter())
        .try_for_each(|(row, &d)| -> Result<()> {
            let rays = enumerate_rays(d, &horizontal, &vertical, scenario.max_bounces)?;
            for (k, slot) in row.iter_mut().enumerate() {
                let f = grid.frequency_hz(k);
                let mut h = los_component(f, d, &scenario.antenna)?;
                for ray in &rays[1..] {
                    h += ray_component(f, ray, &scenario.surfaces, &scenario.antenna)?;
                }
                *slot = h;
            }
            Ok(())
        })?;

    let metadata = format!(
        "n-rays synthesis: w={} h={} dw={} tx_h={} max_bounces={}",
        scenario.width_m,
        scenario.height_m,
        scenario.tx_offset_w_m,
        scenario.tx_height_m,
        scenario.max_bounces
    );
    CtfDataset::new(*grid, scenario.distances_m.clone(), values, Provenance::Simulated, metadata)
}

/// Adds a complex-Gaussian noise floor to every sample, in place.
///
/// `floor_db` is the mean noise power in the dataset's dB scale; the draw
/// order is fixed, so a given seed always produces the same dataset.
pub fn apply_noise_floor(dataset: &mut CtfDataset, floor_db: f64, seed: u64) {
    let sigma = (db_to_power(floor_db) / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss_pair = |rng: &mut ChaCha8Rng| {
        // Box-Muller transform.
        let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        let u2: f64 = rng.random();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    };
    for v in &mut dataset.values {
        let (zr, zi) = gauss_pair(&mut rng);
        *v += Complex64::new(sigma * zr, sigma * zi);
    }
    dataset.metadata.push_str(&format!(" noise_floor_db={floor_db} seed={seed}"));
}

/// Maximum absolute CTF change when raising the bounce limit from `nb_low`
/// to `nb_high`, on a linear scale.
pub fn convergence_check(
    scenario: &CorridorScenario,
    grid: &FrequencyGrid,
    nb_low: u32,
    nb_high: u32,
) -> Result<f64> {
    if nb_low >= nb_high {
        return Err(Error::InvalidArgument(format!(
            "nb_low must be below nb_high, got {nb_low} >= {nb_high}"
        )));
    }
    let mut low = scenario.clone();
    low.max_bounces = nb_low;
    let mut high = scenario.clone();
    high.max_bounces = nb_high;
    let a = synthesize(&low, grid)?;
    let b = synthesize(&high, grid)?;
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}
