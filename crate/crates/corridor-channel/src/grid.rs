//! Uniform frequency sweep definition and its delay-domain counterparts.

use crate::units::SPEED_OF_LIGHT;
use crate::{Error, Result};

/// A uniform frequency sweep: `count` points starting at `f_start_hz`, spaced
/// `f_step_hz` apart.
///
/// The derived quantities follow from the sweep alone: measurement bandwidth
/// `BW = (count - 1) · Δf`, delay resolution `Δτ = 1/BW`, maximum excess delay
/// `τ_max = (count - 1) · Δτ` and maximum observation distance in the delay
/// domain `d_max = c/Δf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    f_start_hz: f64,
    f_step_hz: f64,
    count: usize,
}

impl FrequencyGrid {
    pub fn new(f_start_hz: f64, f_step_hz: f64, count: usize) -> Result<Self> {
        if !(f_start_hz.is_finite() && f_start_hz > 0.0) {
            return Err(Error::Grid(format!("start frequency must be positive, got {f_start_hz}")));
        }
        if !(f_step_hz.is_finite() && f_step_hz > 0.0) {
            return Err(Error::Grid(format!("frequency step must be positive, got {f_step_hz}")));
        }
        if count < 2 {
            return Err(Error::Grid(format!("need at least 2 sweep points, got {count}")));
        }
        Ok(Self { f_start_hz, f_step_hz, count })
    }

    pub fn f_start_hz(&self) -> f64 {
        self.f_start_hz
    }

    pub fn f_step_hz(&self) -> f64 {
        self.f_step_hz
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Frequency of the `k`-th sweep point.
    pub fn frequency_hz(&self, k: usize) -> f64 {
        debug_assert!(k < self.count);
        self.f_start_hz + k as f64 * self.f_step_hz
    }

    /// Iterator over all sweep frequencies.
    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.frequency_hz(k))
    }

    /// Last sweep frequency.
    pub fn f_stop_hz(&self) -> f64 {
        self.frequency_hz(self.count - 1)
    }

    /// Measurement bandwidth `(count - 1) · Δf`.
    pub fn bandwidth_hz(&self) -> f64 {
        (self.count - 1) as f64 * self.f_step_hz
    }

    /// Delay resolution `Δτ = 1/BW`.
    pub fn delay_resolution_s(&self) -> f64 {
        1.0 / self.bandwidth_hz()
    }

    /// Maximum excess delay `(count - 1) · Δτ`.
    pub fn max_excess_delay_s(&self) -> f64 {
        (self.count - 1) as f64 * self.delay_resolution_s()
    }

    /// Maximum observation distance of the delay domain, `d_max = c/Δf`.
    pub fn max_observation_distance_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_step_hz
    }

    /// Distance equivalent of one delay bin, `c · Δτ`.
    pub fn delay_distance_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT * self.delay_resolution_s()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The sweep used by the built-in corridor presets.
    fn hband() -> FrequencyGrid {
        FrequencyGrid::new(250e9, 10e6, 8001).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let g = hband();
        assert_eq!(g.f_stop_hz(), 330e9);
        assert_eq!(g.bandwidth_hz(), 80e9);
        assert!((g.delay_resolution_s() - 12.5e-12).abs() < 1e-24);
        assert!((g.max_excess_delay_s() - 100e-9).abs() < 1e-18);
        // c/Δf, just under 30 m.
        assert!((g.max_observation_distance_m() - 29.9792458).abs() < 1e-9);
        // One delay bin is 3.75 mm of traveled distance.
        assert!((g.delay_distance_resolution_m() - 3.747e-3).abs() < 2e-6);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(FrequencyGrid::new(0.0, 10e6, 100).is_err());
        assert!(FrequencyGrid::new(250e9, 0.0, 100).is_err());
        assert!(FrequencyGrid::new(250e9, -10e6, 100).is_err());
        assert!(FrequencyGrid::new(250e9, 10e6, 1).is_err());
    }
}
