//! Corridor measurement scenarios: geometry, surfaces, antenna and the
//! receiver distance list, plus the two built-in corridor presets.

use crate::antenna::AntennaModel;
use crate::geometry::{CorridorCrossSection, PlaneAxis};
use crate::grid::FrequencyGrid;
use crate::materials::SurfaceAssignment;
use crate::{Error, Result};

/// A corridor sounding scenario.
///
/// Tx and Rx are aligned along the corridor axis at each distance in
/// `distances_m`, sharing the same lateral offset and height. The vertical
/// offset from the central axis is `tx_height_m - height_m/2`.
#[derive(Debug, Clone)]
pub struct CorridorScenario {
    pub width_m: f64,
    pub height_m: f64,
    pub tx_offset_w_m: f64,
    pub tx_height_m: f64,
    pub distances_m: Vec<f64>,
    pub surfaces: SurfaceAssignment,
    pub antenna: AntennaModel,
    pub max_bounces: u32,
    /// Additive complex-Gaussian noise level in dB; `None` disables noise.
    pub noise_floor_db: Option<f64>,
}

impl CorridorScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.width_m > 0.0 && self.height_m > 0.0) {
            return Err(Error::Scenario("corridor width and height must be positive".into()));
        }
        if self.tx_offset_w_m.abs() >= self.width_m / 2.0 {
            return Err(Error::Scenario(format!(
                "lateral offset {} m must satisfy |offset| < width/2 = {} m",
                self.tx_offset_w_m,
                self.width_m / 2.0
            )));
        }
        if self.tx_height_m <= 0.0 || self.tx_height_m >= self.height_m {
            return Err(Error::Scenario(format!(
                "antenna height {} m must lie strictly inside (0, {}) m",
                self.tx_height_m, self.height_m
            )));
        }
        if self.distances_m.is_empty() {
            return Err(Error::Scenario("distance list must not be empty".into()));
        }
        if self.distances_m[0] <= 0.0 {
            return Err(Error::Scenario("distances must be positive".into()));
        }
        if self.distances_m.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Scenario("distances must be strictly increasing".into()));
        }
        if self.max_bounces == 0 {
            return Err(Error::Scenario("max_bounces must be at least 1".into()));
        }
        if let Some(db) = self.noise_floor_db {
            if !db.is_finite() {
                return Err(Error::Scenario("noise floor must be finite".into()));
            }
        }
        // Cross-section construction re-checks the offset invariants.
        self.cross_sections()?;
        Ok(())
    }

    /// Horizontal (wall pair) and vertical (floor/ceiling) cross-sections.
    ///
    /// In the vertical plane the positive direction points at the ceiling,
    /// so a positive offset means the antennas sit above the central axis.
    pub fn cross_sections(&self) -> Result<(CorridorCrossSection, CorridorCrossSection)> {
        let horizontal =
            CorridorCrossSection::new(self.width_m, self.tx_offset_w_m, PlaneAxis::Horizontal)?;
        let vertical = CorridorCrossSection::new(
            self.height_m,
            self.tx_height_m - self.height_m / 2.0,
            PlaneAxis::Vertical,
        )?;
        Ok((horizontal, vertical))
    }
}

/// The 250-330 GHz sweep shared by both presets: 8001 points, 10 MHz step.
pub fn hband_sweep() -> FrequencyGrid {
    FrequencyGrid::new(250e9, 10e6, 8001).expect("preset grid is valid")
}

/// Distance run in integer tenths of a meter, so every grid point equals
/// its decimal literal exactly (0.6·12 in f64 falls just short of 7.2).
fn distance_run_tenths(start: u32, step: u32, count: usize) -> Vec<f64> {
    (0..count).map(|k| (start + k as u32 * step) as f64 / 10.0).collect()
}

/// The 2.00 m wide research-building corridor: antennas at 0.625 m height,
/// 0.08 m off-axis, receiver positions 0.6 m to 16.2 m in 0.6 m steps.
pub fn citic() -> (CorridorScenario, FrequencyGrid) {
    let scenario = CorridorScenario {
        width_m: 2.00,
        height_m: 2.65,
        tx_offset_w_m: 0.08,
        tx_height_m: 0.625,
        distances_m: distance_run_tenths(6, 6, 27),
        surfaces: SurfaceAssignment::indoor_default(),
        antenna: AntennaModel::sgh_preset(),
        max_bounces: 6,
        noise_floor_db: None,
    };
    (scenario, hband_sweep())
}

/// The 1.80 m wide office-building corridor: antennas at 1.16 m height,
/// 0.10 m off-axis, receiver positions 1.2 m to 27.6 m in 0.6 m steps.
pub fn cetic() -> (CorridorScenario, FrequencyGrid) {
    let scenario = CorridorScenario {
        width_m: 1.80,
        height_m: 2.65,
        tx_offset_w_m: 0.10,
        tx_height_m: 1.16,
        distances_m: distance_run_tenths(12, 6, 45),
        surfaces: SurfaceAssignment::indoor_default(),
        antenna: AntennaModel::sgh_preset(),
        max_bounces: 6,
        noise_floor_db: None,
    };
    (scenario, hband_sweep())
}

/// Looks up a scenario preset by name.
pub fn preset(name: &str) -> Option<(CorridorScenario, FrequencyGrid)> {
    match name {
        "citic" => Some(citic()),
        "cetic" => Some(cetic()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_shapes() {
        let (citic, grid) = citic();
        citic.validate().unwrap();
        assert_eq!(citic.width_m, 2.00);
        assert_eq!(citic.distances_m.len(), 27);
        assert!((citic.distances_m[26] - 16.2).abs() < 1e-12);
        assert_eq!(grid.count(), 8001);

        let (cetic, _) = cetic();
        cetic.validate().unwrap();
        assert_eq!(cetic.width_m, 1.80);
        assert_eq!(cetic.tx_height_m, 1.16);
        assert_eq!(cetic.distances_m.len(), 45);
        assert!((cetic.distances_m[44] - 27.6).abs() < 1e-12);
    }

    #[test]
    fn vertical_offset_is_height_minus_half() {
        let (citic, _) = citic();
        let (_, vertical) = citic.cross_sections().unwrap();
        assert!((vertical.offset_m() - (0.625 - 2.65 / 2.0)).abs() < 1e-15);
        assert!(vertical.offset_m() < 0.0, "antennas sit below the central axis");
    }

    #[test]
    fn validation_catches_bad_scenarios() {
        let (mut s, _) = citic();
        s.tx_offset_w_m = 1.0;
        assert!(s.validate().is_err());

        let (mut s, _) = citic();
        s.distances_m = vec![1.0, 1.0];
        assert!(s.validate().is_err());

        let (mut s, _) = citic();
        s.distances_m.clear();
        assert!(s.validate().is_err());

        let (mut s, _) = citic();
        s.tx_height_m = 3.0;
        assert!(s.validate().is_err());

        assert!(preset("unknown").is_none());
    }
}
