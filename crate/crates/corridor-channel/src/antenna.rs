//! Standard-gain-horn model: frequency-dependent boresight gain plus an
//! off-boresight pattern used to attenuate reflected rays.
//!
//! Only the half-power beamwidth and the secondary-lobe levels of the horn
//! are published, so the pattern is a Gaussian main lobe normalized to -3 dB
//! at half the HPBW, hard-clamped at the sidelobe floor of the requested
//! plane. Boresight gain is a piecewise-linear curve over frequency.

use crate::units::db_to_amplitude;
use crate::{Error, Result};

/// Principal pattern plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternPlane {
    H,
    E,
}

/// Horn antenna model.
///
/// `gain_curve` holds `(frequency_hz, gain_db)` knots in strictly increasing
/// frequency order; a single knot means a frequency-independent gain. HPBWs
/// are constant by default, with optional per-frequency curves for bands
/// where the beamwidth drifts.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaModel {
    gain_curve: Vec<(f64, f64)>,
    hpbw_h_rad: f64,
    hpbw_e_rad: f64,
    sidelobe_floor_h_db: f64,
    sidelobe_floor_e_db: f64,
    hpbw_curve_h: Option<Vec<(f64, f64)>>,
    hpbw_curve_e: Option<Vec<(f64, f64)>>,
}

fn validate_curve(curve: &[(f64, f64)], what: &str) -> Result<()> {
    if curve.is_empty() {
        return Err(Error::Antenna(format!("{what} curve needs at least one point")));
    }
    for (f, v) in curve {
        if !f.is_finite() || !v.is_finite() || *f <= 0.0 {
            return Err(Error::Antenna(format!("{what} curve has non-finite or non-positive entry ({f}, {v})")));
        }
    }
    if curve.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::Antenna(format!("{what} curve frequencies must be strictly increasing")));
    }
    Ok(())
}

fn interpolate(curve: &[(f64, f64)], f_hz: f64) -> Result<f64> {
    if curve.len() == 1 {
        return Ok(curve[0].1);
    }
    let (lo, hi) = (curve[0].0, curve[curve.len() - 1].0);
    if f_hz < lo || f_hz > hi {
        return Err(Error::GainOutOfDomain { frequency_hz: f_hz, lo, hi });
    }
    let idx = curve.partition_point(|&(f, _)| f <= f_hz).min(curve.len() - 1);
    let (f0, v0) = curve[idx - 1];
    let (f1, v1) = curve[idx];
    Ok(v0 + (v1 - v0) * (f_hz - f0) / (f1 - f0))
}

impl AntennaModel {
    pub fn new(
        gain_curve: Vec<(f64, f64)>,
        hpbw_h_rad: f64,
        hpbw_e_rad: f64,
        sidelobe_floor_h_db: f64,
        sidelobe_floor_e_db: f64,
    ) -> Result<Self> {
        validate_curve(&gain_curve, "boresight gain")?;
        for (hpbw, plane) in [(hpbw_h_rad, "H"), (hpbw_e_rad, "E")] {
            if !(hpbw > 0.0 && hpbw < std::f64::consts::PI) {
                return Err(Error::Antenna(format!("{plane}-plane HPBW must be in (0, π), got {hpbw} rad")));
            }
        }
        for (floor, plane) in [(sidelobe_floor_h_db, "H"), (sidelobe_floor_e_db, "E")] {
            if !(floor.is_finite() && floor > 0.0) {
                return Err(Error::Antenna(format!("{plane}-plane sidelobe floor must be > 0 dB, got {floor}")));
            }
        }
        Ok(Self {
            gain_curve,
            hpbw_h_rad,
            hpbw_e_rad,
            sidelobe_floor_h_db,
            sidelobe_floor_e_db,
            hpbw_curve_h: None,
            hpbw_curve_e: None,
        })
    }

    /// The H-band standard-gain-horn preset: 20 dB boresight gain at any
    /// frequency, 16.5° HPBW in both planes, secondary lobes 11.5 dB (H) and
    /// 32.5 dB (E) below boresight.
    pub fn sgh_preset() -> Self {
        Self::new(vec![(290e9, 20.0)], 16.5f64.to_radians(), 16.5f64.to_radians(), 11.5, 32.5)
            .unwrap()
    }

    /// Installs a per-frequency HPBW curve (`(frequency_hz, hpbw_rad)`) for
    /// one plane, overriding the constant beamwidth.
    pub fn with_hpbw_curve(mut self, plane: PatternPlane, curve: Vec<(f64, f64)>) -> Result<Self> {
        validate_curve(&curve, "HPBW")?;
        if curve.iter().any(|&(_, w)| w <= 0.0 || w >= std::f64::consts::PI) {
            return Err(Error::Antenna("HPBW curve values must be in (0, π) rad".into()));
        }
        match plane {
            PatternPlane::H => self.hpbw_curve_h = Some(curve),
            PatternPlane::E => self.hpbw_curve_e = Some(curve),
        }
        Ok(self)
    }

    /// Boresight gain in dB at `f_hz`, linearly interpolated on the curve.
    pub fn boresight_gain_db(&self, f_hz: f64) -> Result<f64> {
        interpolate(&self.gain_curve, f_hz)
    }

    /// Boresight gain as an amplitude factor.
    pub fn boresight_gain_amplitude(&self, f_hz: f64) -> Result<f64> {
        Ok(db_to_amplitude(self.boresight_gain_db(f_hz)?))
    }

    /// Whether the pattern depends on frequency beyond the boresight curve.
    pub fn has_hpbw_curve(&self) -> bool {
        self.hpbw_curve_h.is_some() || self.hpbw_curve_e.is_some()
    }

    fn hpbw_rad(&self, plane: PatternPlane, f_hz: f64) -> f64 {
        let (curve, constant) = match plane {
            PatternPlane::H => (&self.hpbw_curve_h, self.hpbw_h_rad),
            PatternPlane::E => (&self.hpbw_curve_e, self.hpbw_e_rad),
        };
        match curve {
            // Clamp to the curve ends; beamwidth drift outside the
            // characterized band is not an error condition.
            Some(c) => {
                let f = f_hz.clamp(c[0].0, c[c.len() - 1].0);
                interpolate(c, f).expect("clamped frequency is inside the curve domain")
            }
            None => constant,
        }
    }

    /// Pattern gain in dB relative to boresight at an off-boresight angle.
    ///
    /// Gaussian main lobe `-12·(angle/HPBW)²`, which puts the -3 dB point at
    /// half the HPBW, clamped below at the plane's sidelobe floor.
    pub fn pattern_gain_db(&self, offboresight_rad: f64, plane: PatternPlane, f_hz: f64) -> f64 {
        debug_assert!((0.0..=std::f64::consts::PI).contains(&offboresight_rad));
        let hpbw = self.hpbw_rad(plane, f_hz);
        let floor = match plane {
            PatternPlane::H => self.sidelobe_floor_h_db,
            PatternPlane::E => self.sidelobe_floor_e_db,
        };
        let main_lobe = -12.0 * (offboresight_rad.abs() / hpbw).powi(2);
        main_lobe.max(-floor)
    }

    /// Pattern gain as an amplitude factor.
    pub fn pattern_gain_amplitude(
        &self,
        offboresight_rad: f64,
        plane: PatternPlane,
        f_hz: f64,
    ) -> f64 {
        db_to_amplitude(self.pattern_gain_db(offboresight_rad, plane, f_hz))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn preset_midband_gain() {
        let horn = AntennaModel::sgh_preset();
        assert_eq!(horn.boresight_gain_db(290e9).unwrap(), 20.0);
        // Single-knot curve is valid at any frequency.
        assert_eq!(horn.boresight_gain_db(1e9).unwrap(), 20.0);
    }

    #[test]
    fn two_point_curve_interpolates() {
        let horn = AntennaModel::new(
            vec![(250e9, 19.0), (330e9, 21.0)],
            0.3,
            0.3,
            11.5,
            32.5,
        )
        .unwrap();
        assert!((horn.boresight_gain_db(290e9).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(horn.boresight_gain_db(250e9).unwrap(), 19.0);
        assert_eq!(horn.boresight_gain_db(330e9).unwrap(), 21.0);
        assert!(matches!(
            horn.boresight_gain_db(240e9),
            Err(Error::GainOutOfDomain { .. })
        ));
        assert!(horn.boresight_gain_db(331e9).is_err());
    }

    #[test]
    fn pattern_pins() {
        let horn = AntennaModel::sgh_preset();
        assert_eq!(horn.pattern_gain_db(0.0, PatternPlane::H, 290e9), 0.0);
        let hpbw = 16.5f64.to_radians();
        let half_power = horn.pattern_gain_db(hpbw / 2.0, PatternPlane::H, 290e9);
        assert!((half_power + 3.0).abs() < 1e-9);
        // Far off boresight the clamp takes over.
        assert_eq!(horn.pattern_gain_db(FRAC_PI_2, PatternPlane::H, 290e9), -11.5);
        assert_eq!(horn.pattern_gain_db(FRAC_PI_2, PatternPlane::E, 290e9), -32.5);
    }

    #[test]
    fn hpbw_curve_moves_the_half_power_point() {
        let wide = 20f64.to_radians();
        let narrow = 15f64.to_radians();
        let horn = AntennaModel::sgh_preset()
            .with_hpbw_curve(PatternPlane::H, vec![(250e9, wide), (330e9, narrow)])
            .unwrap();
        assert!((horn.pattern_gain_db(wide / 2.0, PatternPlane::H, 250e9) + 3.0).abs() < 1e-9);
        assert!((horn.pattern_gain_db(narrow / 2.0, PatternPlane::H, 330e9) + 3.0).abs() < 1e-9);
        // E-plane keeps the constant width.
        let hpbw_e = 16.5f64.to_radians();
        assert!((horn.pattern_gain_db(hpbw_e / 2.0, PatternPlane::E, 250e9) + 3.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_models() {
        assert!(AntennaModel::new(vec![], 0.3, 0.3, 11.5, 32.5).is_err());
        assert!(AntennaModel::new(vec![(250e9, 20.0)], 0.0, 0.3, 11.5, 32.5).is_err());
        assert!(AntennaModel::new(vec![(250e9, 20.0)], 0.3, 0.3, 0.0, 32.5).is_err());
        assert!(AntennaModel::new(vec![(250e9, 20.0)], 0.3, 0.3, -1.0, 32.5).is_err());
        assert!(AntennaModel::new(vec![(250e9, 20.0), (250e9, 21.0)], 0.3, 0.3, 11.5, 32.5)
            .is_err());
        assert!(AntennaModel::new(vec![(250e9, f64::NAN)], 0.3, 0.3, 11.5, 32.5).is_err());
    }

    proptest! {
        /// Even in the angle, maximal at boresight, non-increasing out to π,
        /// never below the floor.
        #[test]
        fn pattern_shape(hpbw_deg in 1.0f64..90.0, floor in 0.5f64..40.0) {
            let horn = AntennaModel::new(
                vec![(290e9, 20.0)],
                hpbw_deg.to_radians(),
                hpbw_deg.to_radians(),
                floor,
                floor,
            ).unwrap();
            let mut prev = 0.0f64;
            for i in 0..=180 {
                let angle = i as f64 / 180.0 * std::f64::consts::PI;
                let g = horn.pattern_gain_db(angle, PatternPlane::H, 290e9);
                prop_assert!(g <= 0.0 && g >= -floor);
                prop_assert!(g <= prev + 1e-12);
                prev = g;
            }
            let half = horn.pattern_gain_db(hpbw_deg.to_radians() / 2.0, PatternPlane::H, 290e9);
            prop_assert!((half - (-3.0f64).max(-floor)).abs() < 1e-9);
        }
    }
}
