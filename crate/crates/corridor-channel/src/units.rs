//! Unit conventions and conversions.
//!
//! Every decibel value in this crate is a power ratio: dB = 10·log10(power) =
//! 20·log10(amplitude). The helpers here are the single owner of that rule;
//! call them instead of open-coding powers of ten.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts a dB value to the equivalent amplitude factor.
pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Converts an amplitude factor to dB.
pub fn amplitude_to_db(amplitude: f64) -> f64 {
    20.0 * amplitude.log10()
}

/// Converts a dB value to the equivalent power ratio.
pub fn db_to_power(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a power ratio to dB.
pub fn power_to_db(power: f64) -> f64 {
    10.0 * power.log10()
}

/// Wavelength in meters at frequency `f_hz`.
pub fn wavelength_m(f_hz: f64) -> f64 {
    SPEED_OF_LIGHT / f_hz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_and_power_scales_agree() {
        // 6.02 dB doubles amplitude, quadruples power.
        assert!((db_to_amplitude(20.0) - 10.0).abs() < 1e-12);
        assert!((db_to_power(20.0) - 100.0).abs() < 1e-12);
        assert!((amplitude_to_db(2.0) - power_to_db(4.0)).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        for db in [-111.5, -3.0, 0.0, 11.5, 32.5] {
            assert!((amplitude_to_db(db_to_amplitude(db)) - db).abs() < 1e-12);
            assert!((power_to_db(db_to_power(db)) - db).abs() < 1e-12);
        }
    }
}
